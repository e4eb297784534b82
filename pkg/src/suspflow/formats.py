"""SFT definition files, CSV tables and JSON records.

An SFT file is JSON with ``alphabet_size`` and exactly one of ``matrix``
(list of 0/1 rows) or ``forbidden_words`` (list of symbol lists)::

    {"alphabet_size": 2, "forbidden_words": [[1, 1]]}
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .roof import BLOCK_CONVENTION, RoofSpec
from .sft import Sft, SftError


class SftFileError(SftError):
    """Unreadable or malformed SFT definition file."""


def _key_line(text: str, key: str) -> int | None:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if f'"{key}"' in line:
            return lineno
    return None


def parse_sft(text: str, source: str = "<string>") -> Sft:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SftFileError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None

    def fail(key, msg):
        line = _key_line(text, key) or 1
        raise SftFileError(f"{source}:{line}: {msg}")

    if not isinstance(data, dict):
        raise SftFileError(f"{source}:1: top level must be an object")
    d = data.get("alphabet_size")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        fail("alphabet_size", "alphabet_size must be a positive integer")
    has_m, has_f = "matrix" in data, "forbidden_words" in data
    if has_m == has_f:
        raise SftFileError(f"{source}:1: give exactly one of 'matrix' or 'forbidden_words'")
    try:
        if has_m:
            A = data["matrix"]
            if (not isinstance(A, list) or len(A) != d
                    or any(not isinstance(row, list) or len(row) != d for row in A)):
                fail("matrix", f"matrix must be a {d}x{d} list of rows")
            return Sft.from_matrix(A)
        words = data["forbidden_words"]
        if not isinstance(words, list) or any(not isinstance(w, list) for w in words):
            fail("forbidden_words", "forbidden_words must be a list of symbol lists")
        if any(not isinstance(s, int) or isinstance(s, bool) for w in words for s in w):
            fail("forbidden_words", "symbols must be integers")
        return Sft.from_forbidden_words(d, words)
    except SftFileError:
        raise
    except SftError as exc:
        fail("matrix" if has_m else "forbidden_words", str(exc))


def load_sft(path) -> Sft:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise SftFileError(f"{path}: {exc.strerror}") from None
    return parse_sft(text, str(path))


def sft_to_dict(sft: Sft) -> dict:
    return {
        "alphabet_size": sft.alphabet_size,
        "forbidden_words": [list(w) for w in sorted(sft.forbidden)],
    }


def fmt(x) -> str:
    """Full-precision text for CSV cells."""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header, rows) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(x) for x in row])
    _atomic_write(Path(path), buf.getvalue())


def write_json(path, obj) -> None:
    _atomic_write(Path(path), json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_text(path, text: str) -> None:
    _atomic_write(Path(path), text)


def roofspec_to_dict(spec: RoofSpec) -> dict:
    """Reproducibility record of a roof: inputs, constants and the essential target."""
    out = {
        "c": spec.c,
        "alpha": spec.alpha,
        "block_convention": BLOCK_CONVENTION,
        "n_blocks": spec.aj.n_blocks,
        "h_y": spec.h_y,
        "ambient_size": spec.size,
        "essential_target": spec.target.astype(int).tolist(),
        "beta": {str(k): v for k, v in sorted(spec.beta.items())},
    }
    if spec.sft is not None:
        out["sft"] = sft_to_dict(spec.sft)
        out["step"] = spec.sft.step
    if spec.recoding is not None:
        out["blocks"] = [list(b) for b in spec.recoding.blocks]
    return out
