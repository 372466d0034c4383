import contextlib
import os
import tempfile
from pathlib import Path
from typing import Iterator, TextIO

from .typing import PathType


def env_parse_bool(env_var, default_value=False):
    if env_var in os.environ:
        env_value = os.environ[env_var].lower()
        return env_value == "true" or env_value == "1"
    else:
        return default_value


@contextlib.contextmanager
def atomic_write(path: PathType, mode: str = "w") -> Iterator[TextIO]:
    """Write to a temporary sibling of ``path`` and rename it into place on success.

    Readers never observe a partially written file.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    tmp_path = Path(tmp_name)
    try:
        with os.fdopen(fd, mode) as f:
            yield f
        tmp_path.replace(path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            tmp_path.unlink()
        raise
