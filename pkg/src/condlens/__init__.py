"""condlens: bio-psycho-social condition profiles from patient posts and
prescription data, served over HTTP for layered narrative visualization."""

from importlib import resources
from pathlib import Path

__version__ = "0.1.0"


def data_path(name: str) -> Path:
    """Path to a bundled data file (terminology.tsv, conditions.json,
    emolex.tsv, body.tsv)."""
    return Path(resources.files("condlens").joinpath("data", name))  # type: ignore[arg-type]
