import os
from dataclasses import dataclass, replace
from typing import Optional

from ..config.config import DEFAULT_PROFILE, load_config
from ..errors import ParseError

ENV_PROFILE = "COMBPOL_PROFILE"
ENV_BUDGET = "COMBPOL_BUDGET"
ENV_SEED = "COMBPOL_SEED"
ENV_SAMPLES = "COMBPOL_SAMPLES"


@dataclass(frozen=True)
class Settings:
    profile: str
    table_budget: int
    homogeneity_budget: int
    linearity_budget: int
    sample_count: int
    seed: int
    expansion_budget: int
    chain_limit: int
    field_table_limit: int


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"environment variable {name} must be an integer, got {raw!r}")


def resolve_settings(profile: Optional[str] = None, budget: Optional[int] = None,
                     seed: Optional[int] = None, samples: Optional[int] = None) -> Settings:
    """Resolve budgets and sampling parameters.

    Precedence: flag > env > config profile > built-in defaults. ``budget``
    overrides the table and linearity budgets together.
    """
    profile = profile or os.getenv(ENV_PROFILE) or DEFAULT_PROFILE
    settings = Settings(profile=profile, **load_config(profile))

    budget = budget if budget is not None else _env_int(ENV_BUDGET)
    if budget is not None:
        if budget < 1:
            raise ParseError(f"budget must be positive, got {budget}")
        settings = replace(settings, table_budget=budget, linearity_budget=budget)

    seed = seed if seed is not None else _env_int(ENV_SEED)
    if seed is not None:
        settings = replace(settings, seed=seed)

    samples = samples if samples is not None else _env_int(ENV_SAMPLES)
    if samples is not None:
        if samples < 1:
            raise ParseError(f"sample count must be positive, got {samples}")
        settings = replace(settings, sample_count=samples)
    return settings
