"""CSV ingestion and seeded synthetic scenarios.

Scenarios (all in the plane):

* ``s1``: coordinates i.i.d. uniform on ``[-1, 1]``
* ``s2``: i.i.d. standard normal pairs
* ``s3``: ``(Y**2 + Z, Z**2 + Y)`` with ``Y, Z`` i.i.d. standard normal

Random numbers come from the raw 64-bit output of numpy's PCG64 (seeded
through ``SeedSequence``), mapped to doubles as ``(u >> 11) * 2**-53``;
normal variates use Marsaglia's polar method on consecutive pairs. Only
the raw stream is taken from numpy, so the mapping does not depend on
numpy's distribution code.
"""

import csv
import io
import os
from dataclasses import dataclass
from importlib import resources

import numpy as np

from .depths import DataCloud
from .exceptions import ParseError, SingularCovariance

SCENARIOS = ("s1", "s2", "s3")
_BATCH = 4096


class Stream:
    """Deterministic double stream on top of PCG64."""

    def __init__(self, seed):
        self._bits = np.random.PCG64(int(seed) & (2**64 - 1))

    def uniform(self, size):
        """Doubles in ``[0, 1)`` with 53 random bits each."""
        raw = self._bits.random_raw(size)
        return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)

    def normal_pairs(self, count):
        """``(count, 2)`` standard normals from the polar method."""
        out = np.empty((count, 2))
        filled = 0
        while filled < count:
            u = 2.0 * self.uniform(2 * _BATCH).reshape(-1, 2) - 1.0
            s = np.einsum("ij,ij->i", u, u)
            ok = (s > 0.0) & (s < 1.0)
            u, s = u[ok], s[ok]
            factor = np.sqrt(-2.0 * np.log(s) / s)
            z = u * factor[:, None]
            take = min(count - filled, z.shape[0])
            out[filled:filled + take] = z[:take]
            filled += take
        return out


@dataclass(frozen=True)
class ScenarioSpec:
    kind: str
    n: int
    seed: int = 0

    def __post_init__(self):
        kind = self.kind.lower()
        if kind not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.kind!r}; expected one of {SCENARIOS}")
        object.__setattr__(self, "kind", kind)
        if int(self.n) < 3:
            raise ValueError(f"scenario needs n >= 3, got {self.n}")
        object.__setattr__(self, "n", int(self.n))


def generate_points(spec):
    """Raw ``(n, 2)`` array for a scenario."""
    stream = Stream(spec.seed)
    if spec.kind == "s1":
        return 2.0 * stream.uniform(2 * spec.n).reshape(spec.n, 2) - 1.0
    z = stream.normal_pairs(spec.n)
    if spec.kind == "s2":
        return z
    y, zz = z[:, 0], z[:, 1]
    return np.column_stack([y**2 + zz, zz**2 + y])


def generate(spec):
    """Scenario cloud; identical for identical specs."""
    return DataCloud(generate_points(spec))


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


def _open_text(source):
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"))
    if isinstance(source, (str, os.PathLike)):
        return open(source, newline="", encoding="utf-8")
    if isinstance(source, io.TextIOBase):
        return source
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return io.StringIO(data)


def read_points(source, *, log=False):
    """Parse comma-separated numbers into an ``(n, d)`` array.

    A first row that is not entirely numeric is treated as a header. Blank
    lines are skipped. ``log=True`` takes natural logs of every entry.
    """
    handle = _open_text(source)
    try:
        rows = list(csv.reader(handle))
    finally:
        if handle is not source:
            handle.close()
    data, width = [], None
    for lineno, row in enumerate(rows, start=1):
        cells = [c.strip() for c in row]
        if not cells or all(c == "" for c in cells):
            continue
        if lineno == 1 and not all(_is_number(c) for c in cells):
            width = len(cells)
            continue
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(f"expected {width} columns, found {len(cells)}", row=lineno)
        try:
            values = [float(c) for c in cells]
        except ValueError:
            bad = next(c for c in cells if not _is_number(c))
            raise ParseError(f"non-numeric cell {bad!r}", row=lineno) from None
        if not all(np.isfinite(values)):
            raise ParseError("non-finite value", row=lineno)
        if log:
            if min(values) <= 0:
                raise ParseError("cannot take the log of a non-positive value", row=lineno)
            values = list(np.log(values))
        data.append(values)
    if not data:
        raise ParseError("no data rows")
    return np.asarray(data, dtype=float)


def load_csv(source, *, log=False):
    """Read a CSV file (path, bytes or stream) into a :class:`DataCloud`."""
    pts = read_points(source, log=log)
    n, d = pts.shape
    if n < d + 1:
        raise ParseError(f"{n} data rows cannot support {d} columns (need at least {d + 1})")
    try:
        return DataCloud(pts)
    except SingularCovariance as exc:
        raise ParseError(f"degenerate data: {exc}") from exc


def format_number(v):
    """Shortest repr that round-trips, so CSV output is deterministic."""
    return repr(float(v))


def write_csv(points, handle, header=None):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if header is None:
        header = ["x"] if pts.shape[1] == 1 else [f"x{j + 1}" for j in range(pts.shape[1])]
    handle.write(",".join(header) + "\n")
    for row in pts:
        handle.write(",".join(format_number(v) for v in row) + "\n")


def bundled_path(name="animals.csv"):
    """Path of a CSV shipped inside the package (see ``datasets/README.md``)."""
    return str(resources.files("lqdepth") / "datasets" / name)


def load_animals(*, log=True):
    """The 28-species body/brain weight data, log-transformed by default."""
    return load_csv(bundled_path("animals.csv"), log=log)
