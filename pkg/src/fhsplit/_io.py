from __future__ import annotations

import io
import os
import tempfile


def write_text_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file + rename; no partial file on failure."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def emit(destination, text: str) -> None:
    """Send ``text`` to a path (atomically) or to a writable text stream."""
    if isinstance(destination, io.TextIOBase) or hasattr(destination, "write"):
        destination.write(text)
    else:
        write_text_atomic(destination, text)
