"""Built-in matrices and the plain-text matrix file formats.

Matrix file::

    # comment
    l k
    a11 a12 ... a1k
    ...

Catalogue file: one or more ``[name]`` headers, each followed by a matrix
in the format above.
"""
from __future__ import annotations

from functools import lru_cache
from pathlib import Path

from .errors import InputError
from .linalg import IntMatrix
from .rado import RadoProfile, analyse, block_diagonal


def ap_matrix(length: int) -> IntMatrix:
    """(length-2) x length matrix whose solutions are length-term progressions."""
    if length < 3:
        raise InputError("progressions need length >= 3")
    rows = []
    for i in range(length - 2):
        r = [0] * length
        r[i], r[i + 1], r[i + 2] = 1, -2, 1
        rows.append(r)
    return IntMatrix.from_rows(rows)


SCHUR = IntMatrix.from_rows([[1, 1, -1]])

BUILTIN: dict[str, IntMatrix] = {
    "schur": SCHUR,
    "ap3": ap_matrix(3),
    "ap4": ap_matrix(4),
    "ap5": ap_matrix(5),
    "ap6": ap_matrix(6),
    "schur2": block_diagonal([SCHUR, SCHUR]),
    "schur_ap3": block_diagonal([SCHUR, ap_matrix(3)]),
    "ap3x2": block_diagonal([ap_matrix(3), ap_matrix(3)]),
}

BASIC = ("schur", "ap3", "ap4", "ap5", "ap6")


def _strip(lines):
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _parse_matrix(items, source) -> IntMatrix:
    try:
        lineno, header = next(items)
    except StopIteration:
        raise InputError("%s: empty matrix" % source) from None
    parts = header.split()
    try:
        l, k = int(parts[0]), int(parts[1])
        if len(parts) != 2:
            raise ValueError
    except (ValueError, IndexError):
        raise InputError("%s:%d: expected header 'l k', got %r" % (source, lineno, header)) from None
    if l < 1 or k < 1:
        raise InputError("%s:%d: dimensions must be positive" % (source, lineno))
    rows = []
    for _ in range(l):
        try:
            lineno, line = next(items)
        except StopIteration:
            raise InputError("%s: expected %d rows, got %d" % (source, l, len(rows))) from None
        try:
            row = [int(v) for v in line.split()]
        except ValueError:
            raise InputError("%s:%d: non-integer entry in %r" % (source, lineno, line)) from None
        if len(row) != k:
            raise InputError("%s:%d: expected %d entries, got %d" % (source, lineno, k, len(row)))
        rows.append(row)
    return IntMatrix.from_rows(rows)


def parse_matrix(text: str, source: str = "<string>") -> IntMatrix:
    items = _strip(text.splitlines())
    M = _parse_matrix(items, source)
    extra = next(items, None)
    if extra is not None:
        raise InputError("%s:%d: trailing content %r" % (source, extra[0], extra[1]))
    return M


def format_matrix(M: IntMatrix) -> str:
    return "%d %d\n%s\n" % (len(M.rows), M.cols, M)


def parse_catalogue(text: str, source: str = "<string>") -> dict[str, IntMatrix]:
    out: dict[str, IntMatrix] = {}
    lines = list(_strip(text.splitlines()))
    i = 0
    while i < len(lines):
        lineno, line = lines[i]
        if not (line.startswith("[") and line.endswith("]")):
            raise InputError("%s:%d: expected [name] header" % (source, lineno))
        name = line[1:-1].strip()
        j = i + 1
        while j < len(lines) and not lines[j][1].startswith("["):
            j += 1
        out[name] = _parse_matrix(iter(lines[i + 1:j]), source)
        if j != i + 2 + len(out[name].rows):
            raise InputError("%s:%d: trailing content in entry %r" % (source, lineno, name))
        i = j
    return out


@lru_cache(maxsize=None)
def builtin_profile(name: str) -> RadoProfile:
    return analyse(BUILTIN[name], name=name)


def resolve(arg: str) -> RadoProfile:
    """A catalogue name or a path to a matrix file."""
    if arg in BUILTIN:
        return builtin_profile(arg)
    path = Path(arg)
    if not path.is_file():
        raise InputError("unknown matrix %r: not a catalogue name (%s) or a file"
                         % (arg, ", ".join(BUILTIN)))
    M = parse_matrix(path.read_text(), str(path))
    return analyse(M, name=path.stem)
