"""Text output helpers: fixed number formatting and atomic file writes."""
import os
import tempfile
from pathlib import Path
from typing import Iterable, Mapping, Sequence

# 12 significant digits: round-trips every value we emit closely enough to
# reproduce outputs byte for byte across runs
_NUM_FMT = ".12g"


def fmt(x) -> str:
    return format(float(x), _NUM_FMT)


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory + rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def write_csv(path, header: Sequence[str], columns: Iterable[Sequence]) -> None:
    """Write equal-length numeric columns as CSV with a header row."""
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    atomic_write(path, "\n".join(lines) + "\n")


def format_key_values(items: Mapping[str, object]) -> str:
    """``key = value`` lines in insertion order."""
    out = []
    for key, val in items.items():
        if isinstance(val, float):
            val = fmt(val)
        out.append(f"{key} = {val}")
    return "\n".join(out) + "\n"


def write_key_values(path, items: Mapping[str, object]) -> None:
    atomic_write(path, format_key_values(items))
