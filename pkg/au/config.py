import os
from pathlib import Path

AU__RNG_ALGORITHM = "PCG64"

REPORT_SCHEMA_VERSION = 1


def report_dir() -> Path | None:
    """Directory that overrides the report output path, if configured.

    Read on every call so a `.env` loaded by the CLI takes effect.
    """
    raw = os.environ.get("AU_REPORT_DIR")
    if not raw:
        return None
    return Path(raw).expanduser().resolve()
