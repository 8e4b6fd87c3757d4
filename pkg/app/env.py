import os
from pathlib import Path

from dotenv import load_dotenv

_loaded = False


def load_env_once(env_file: str | os.PathLike | None = None) -> bool:
    """Load engine settings from the project .env exactly once.

    Values already present in the environment win. Returns True when a file
    was read on this call.
    """
    global _loaded
    if _loaded:
        return False
    _loaded = True
    path = Path(env_file or os.getenv("SYMPAIR_ENV_FILE") or Path(__file__).parent.parent / ".env")
    if not path.exists():
        return False
    return load_dotenv(path, override=False)


def reset_env_flag() -> None:
    """Allow a second load (tests only)."""
    global _loaded
    _loaded = False
