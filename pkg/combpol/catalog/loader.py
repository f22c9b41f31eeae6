# combpol/catalog/loader.py
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml

from ..classify import ClassificationReport, classify
from ..errors import ParseError
from ..field import parse_field
from ..poly import SparsePolynomial, parse_poly, reduce_poly

REQUIRED_KEYS = ("name", "field", "n", "poly", "expect")


@dataclass
class CatalogResult:
    name: str
    report: ClassificationReport
    mismatches: List[Tuple[str, Any, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


class CatalogLoader:
    """Worked examples stored as YAML: a polynomial, its arity and the expected verdict"""

    def __init__(self, entries_dir: Optional[Path] = None):
        self.entries_dir = entries_dir or Path(__file__).parent / "entries"
        self._cache: Dict[str, Dict[str, Any]] = {}

    def list_entries(self) -> List[str]:
        return sorted(path.stem for path in self.entries_dir.glob("*.yml"))

    def load_entry(self, name: str) -> Dict[str, Any]:
        if name in self._cache:
            return self._cache[name]

        entry_file = self.entries_dir / f"{name}.yml"
        if not entry_file.exists():
            raise ParseError(f"Catalog entry '{name}' not found")

        try:
            with open(entry_file, "r", encoding="utf-8") as f:
                entry = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ParseError(f"Invalid YAML in catalog entry '{name}': {e}")

        if not isinstance(entry, dict):
            raise ParseError(f"Catalog entry '{name}' must be a mapping")
        missing = [key for key in REQUIRED_KEYS if key not in entry]
        if missing:
            raise ParseError(f"Catalog entry '{name}' lacks {', '.join(missing)}")

        self._cache[name] = entry
        return entry

    def polynomial(self, name: str) -> SparsePolynomial:
        """The entry's polynomial, reduced"""
        entry = self.load_entry(name)
        spec = parse_field(str(entry["field"]))
        return reduce_poly(parse_poly(str(entry["poly"]), spec, entry.get("dim")))

    def check(self, name: str, **classify_kwargs) -> CatalogResult:
        """Classify the entry and compare every expected field"""
        entry = self.load_entry(name)
        semantic = bool(entry.get("semantic", False))
        report = classify(self.polynomial(name), int(entry["n"]), semantic=semantic, **classify_kwargs)
        actual = report.to_json()
        result = CatalogResult(name, report)
        for key, expected in entry["expect"].items():
            if key not in actual:
                raise ParseError(f"Catalog entry '{name}' expects unknown field '{key}'")
            if actual[key] != expected:
                result.mismatches.append((key, expected, actual[key]))
        if semantic and report.agreement is False:
            result.mismatches.append(("agreement", True, False))
        return result


catalog_loader = CatalogLoader()
