"""CSV readers and writers for complex matrices and vectors.

Convention: a complex column named <name> occupies two adjacent CSV columns
re_<name>, im_<name>.  Matrices are written one data-matrix row per CSV
row, with data-matrix columns named c0, c1, ...; vectors are written one
entry per CSV row.  Floats are rendered with repr, which round-trips
exactly, so rewriting a parsed file is byte-identical.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "write_complex_matrix_csv",
    "read_complex_matrix_csv",
    "write_complex_vector_csv",
    "read_complex_vector_csv",
]


def _fmt(x: float) -> str:
    return repr(float(x))


def write_complex_matrix_csv(path, M: np.ndarray, prefix: str = "c") -> None:
    M = np.atleast_2d(np.asarray(M, dtype=np.complex128))
    header = ",".join("re_%s%d,im_%s%d" % (prefix, j, prefix, j)
                      for j in range(M.shape[1]))
    lines = [header]
    for row in M:
        lines.append(",".join("%s,%s" % (_fmt(z.real), _fmt(z.imag))
                              for z in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def _parse_pair_header(tokens):
    if len(tokens) < 2 or len(tokens) % 2 != 0:
        raise ValueError("header must hold re_/im_ column pairs")
    for a, b in zip(tokens[::2], tokens[1::2]):
        if not (a.startswith("re_") and b.startswith("im_")
                and a[3:] == b[3:]):
            raise ValueError("header pair %r,%r is not re_<name>,im_<name>"
                             % (a, b))
    return len(tokens) // 2


def read_complex_matrix_csv(path) -> np.ndarray:
    with open(path) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty CSV file %s" % (path,))
    ncols = _parse_pair_header(lines[0].split(","))
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != 2 * ncols:
            raise ValueError("row with %d fields, expected %d"
                             % (len(cells), 2 * ncols))
        try:
            vals = [float(c) for c in cells]
        except ValueError:
            raise ValueError("non-numeric field in %s" % (path,)) from None
        rows.append([complex(vals[2 * j], vals[2 * j + 1])
                     for j in range(ncols)])
    if not rows:
        raise ValueError("CSV %s has a header but no data rows" % (path,))
    return np.array(rows, dtype=np.complex128)


def write_complex_vector_csv(path, v: np.ndarray, name: str = "y") -> None:
    v = np.asarray(v, dtype=np.complex128).ravel()
    lines = ["re_%s,im_%s" % (name, name)]
    for z in v:
        lines.append("%s,%s" % (_fmt(z.real), _fmt(z.imag)))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_complex_vector_csv(path) -> np.ndarray:
    M = read_complex_matrix_csv(path)
    if M.shape[1] != 1:
        raise ValueError("expected a single complex column in %s" % (path,))
    return M[:, 0]
