"""Atomic file output: write to a temporary sibling, then rename over the target."""

import os
import tempfile
from contextlib import contextmanager
from typing import IO, Iterator

def ensure_parent(path: str) -> None:
    """Create the directory holding `path` if it does not exist."""
    parent = os.path.dirname(os.path.abspath(path))
    os.makedirs(parent, exist_ok=True)

@contextmanager
def atomic_open(path: str, mode: str = "w") -> Iterator[IO]:
    """
    Open a temporary file next to `path`; on clean exit it replaces `path`.

    On error the temporary file is removed and `path` is left untouched.

    :param path: Final destination.
    :param mode: "w" for text (UTF-8, LF newlines) or "wb" for bytes.
    """
    if mode not in ("w", "wb"):
        raise ValueError(f"Unsupported mode for atomic writes: {mode}")

    ensure_parent(path)
    fd, temp_path = tempfile.mkstemp(prefix=".tmp-", dir=os.path.dirname(os.path.abspath(path)))
    try:
        if mode == "w":
            handle = os.fdopen(fd, mode, encoding="utf-8", newline="")
        else:
            handle = os.fdopen(fd, mode)
        with handle:
            yield handle
        os.replace(temp_path, path)
    except BaseException:
        if os.path.exists(temp_path):
            os.remove(temp_path)
        raise

def atomic_write_bytes(path: str, data: bytes) -> None:
    """Write bytes to `path` atomically."""
    with atomic_open(path, "wb") as f:
        f.write(data)

def atomic_write_text(path: str, text: str) -> None:
    """Write UTF-8 text to `path` atomically."""
    with atomic_open(path, "w") as f:
        f.write(text)
