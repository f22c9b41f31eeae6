from setuptools import setup, find_packages

setup(
    name="combpol",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"combpol": ["config/config.toml", "catalog/entries/*.yml"]},
    install_requires=[
        "typer[all]>=0.9.0",
        "rich>=13.0.0",
        "PyYAML>=6.0",
        "sympy>=1.12",
        "tomli>=2.0; python_version < '3.11'",
    ],
    extras_require={"test": ["pytest>=7.0", "hypothesis>=6.0"]},
    entry_points={"console_scripts": ["combpol=combpol.cli.main:app"]},
    python_requires=">=3.8",
    author="Combpol Team",
    description="Combinatorial polarization, combinatorial degree and n-applications over finite fields and Q",
)
