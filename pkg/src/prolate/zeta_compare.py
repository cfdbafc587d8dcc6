"""Riemann zeta zero tables and counting comparisons with the Dirac spectrum."""

from __future__ import annotations

import csv
import hashlib
import json
import math
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .darboux import DiracSpectrum
from .errors import DomainError, FormatError, RangeError
from .semiclassical import predicted_dirac_count

BUNDLED_ZEROS = Path(__file__).with_name("data") / "zeta_zeros_100.txt"
BUNDLED_SHA256 = "e7a3618bbbd4eb108dc2a28a3ff53ac10a07b26a649c5e39f3d15a46477fc58d"
ZEROS_ENV = "PROLATE_ZEROS"
REPORT_COLUMNS = ("E", "dirac_count", "zero_count", "predicted_count", "delta")


@dataclass(frozen=True)
class ZetaZerosTable:
    """Ordinates ``gamma`` of nontrivial zeros, strictly increasing."""

    ordinates: np.ndarray
    source_id: str
    checksum: str

    def __post_init__(self):
        g = np.asarray(self.ordinates, dtype=float)
        if g.size == 0 or g[0] <= 0 or np.any(np.diff(g) <= 0):
            raise FormatError("ordinates must be positive and strictly increasing")
        if not 14.0 < g[0] < 15.0:
            raise FormatError(f"first ordinate {g[0]} fails the sanity bound 14 < gamma_1 < 15")
        object.__setattr__(self, "ordinates", g)

    @property
    def ceiling(self) -> float:
        return float(self.ordinates[-1])


def default_zeros_path() -> Path:
    """Bundled table unless ``PROLATE_ZEROS`` names another file."""
    env = os.environ.get(ZEROS_ENV)
    return Path(env) if env else BUNDLED_ZEROS


def load_zeros(path=None) -> ZetaZerosTable:
    """Parse a zeros file: one decimal ordinate per line, ``#`` comments allowed.

    Raises
    ------
    FormatError
        On an unparsable, non-positive or non-increasing entry (the error
        carries the 1-based line number) and on a file without data.
    """
    path = Path(path) if path is not None else default_zeros_path()
    raw = path.read_bytes()
    values = []
    last = 0.0
    for lineno, line in enumerate(raw.decode("utf-8").splitlines(), start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        try:
            g = float(text)
        except ValueError:
            raise FormatError(f"{path}: not a number: {text!r}", line=lineno) from None
        if not math.isfinite(g) or g <= last:
            what = "not positive" if g <= 0 else "not strictly increasing"
            raise FormatError(f"{path}: ordinate {text} is {what}", line=lineno)
        values.append(g)
        last = g
    if not values:
        raise FormatError(f"{path}: no ordinates found")
    return ZetaZerosTable(np.array(values), str(path), hashlib.sha256(raw).hexdigest())


def smooth_zero_count(E: float) -> float:
    """``(E/2 pi)(log(E/2 pi) - 1) + 7/8``."""
    e = E / (2 * math.pi)
    return e * (math.log(e) - 1.0) + 7.0 / 8.0


def zero_count(table: ZetaZerosTable, E: float) -> int:
    """``#{gamma <= E}``; raises :class:`RangeError` beyond the last ordinate."""
    if E > table.ceiling:
        raise RangeError(f"E={E} exceeds the table ceiling {table.ceiling}")
    return int(np.searchsorted(table.ordinates, E, side="right"))


@dataclass(frozen=True)
class Pair:
    eigenvalue: float | None
    zero: float | None
    deviation: float | None

    @property
    def matched(self) -> bool:
        return self.deviation is not None


def _rank_pairs(eigs, zeros):
    pairs = [Pair(float(a), float(b), float(b - a)) for a, b in zip(eigs, zeros)]
    n = min(len(eigs), len(zeros))
    pairs += [Pair(float(a), None, None) for a in eigs[n:]]
    pairs += [Pair(None, float(b), None) for b in zeros[n:]]
    return pairs


def pair_nearest(dirac: DiracSpectrum, table: ZetaZerosTable, window) -> list[Pair]:
    """Order-preserving pairing of ``Im xi`` and ``gamma`` inside ``window = (lo, hi]``.

    The k-th eigenvalue in the window is paired with the k-th zero; surplus
    entries of the longer sequence come back unmatched (``deviation=None``).
    """
    lo, hi = map(float, window)
    if hi > dirac.ceiling or hi > table.ceiling:
        raise RangeError(f"window end {hi} beyond coverage (spectrum {dirac.ceiling}, zeros {table.ceiling})")
    im = dirac.imaginary_parts()
    g = table.ordinates
    return _rank_pairs(im[(im > lo) & (im <= hi)], g[(g > lo) & (g <= hi)])


@dataclass
class ComparisonReport:
    """Counting functions on an ``E`` grid plus rank pairs inside ``window``."""

    E_grid: list
    dirac_count: list
    zero_count: list
    predicted_count: list
    pairs: list = field(default_factory=list)
    window: tuple = (0.0, 0.0)
    lambda_: float = math.sqrt(2.0)

    def __post_init__(self):
        for name in ("dirac_count", "zero_count"):
            seq = getattr(self, name)
            if any(b < a for a, b in zip(seq, seq[1:])):
                raise ValueError(f"{name} is not nondecreasing along the grid")
        if any(p.deviation is not None and not math.isfinite(p.deviation) for p in self.pairs):
            raise ValueError("non-finite pairing deviation")

    @property
    def delta(self) -> list:
        return [d - z for d, z in zip(self.dirac_count, self.zero_count)]

    @property
    def max_abs_delta(self) -> float:
        return float(max(map(abs, self.delta), default=0.0))

    @property
    def mean_abs_delta(self) -> float:
        return float(np.mean(np.abs(self.delta))) if self.E_grid else 0.0

    @property
    def max_abs_predicted_delta(self) -> float:
        return float(max((abs(d - p) for d, p in zip(self.dirac_count, self.predicted_count)), default=0.0))

    @property
    def mean_abs_deviation(self) -> float:
        dev = [abs(p.deviation) for p in self.pairs if p.matched]
        return float(np.mean(dev)) if dev else 0.0

    def summary(self) -> dict:
        return {
            "max_abs_delta": self.max_abs_delta,
            "mean_abs_delta": self.mean_abs_delta,
            "max_abs_predicted_delta": self.max_abs_predicted_delta,
            "mean_abs_pair_deviation": self.mean_abs_deviation,
            "pair_window": list(self.window),
            "unmatched": sum(not p.matched for p in self.pairs),
        }

    def to_dict(self) -> dict:
        return {
            "lambda": self.lambda_,
            "E_grid": list(self.E_grid),
            "dirac_count": list(self.dirac_count),
            "zero_count": list(self.zero_count),
            "predicted_count": list(self.predicted_count),
            "delta": self.delta,
            "pairs": [asdict(p) for p in self.pairs],
            "summary": self.summary(),
        }


def compare_counts(dirac: DiracSpectrum, table: ZetaZerosTable, E_grid, window=None) -> ComparisonReport:
    """Dirac, zeta and predicted counts at each ``E`` of ``E_grid``.

    ``window`` (default: the grid range) selects the rank pairs included in
    the report.
    """
    grid = [float(E) for E in E_grid]
    if not grid:
        return ComparisonReport([], [], [], [], [], (0.0, 0.0), dirac.lambda_)
    top = max(grid)
    if top > dirac.ceiling:
        raise RangeError(f"spectrum covers Im xi only up to {dirac.ceiling}, grid needs {top}")
    if top > table.ceiling:
        raise RangeError(f"zeros table covers only up to {table.ceiling}, grid needs {top}")
    window = tuple(window) if window is not None else (min(grid), top)
    return ComparisonReport(
        grid,
        [dirac.count(E) for E in grid],
        [zero_count(table, E) for E in grid],
        [predicted_dirac_count(E) for E in grid],
        pair_nearest(dirac, table, window),
        (float(window[0]), float(window[1])),
        dirac.lambda_,
    )


def _g17(v):
    return format(v, ".17g")


def export_report(report: ComparisonReport, fmt: str, path) -> None:
    """Write ``report`` as ``csv`` (grid columns) or ``json`` (full record), 17 significant digits."""
    path = Path(path)
    if fmt == "csv":
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(REPORT_COLUMNS)
            for row in zip(report.E_grid, report.dirac_count, report.zero_count,
                           report.predicted_count, report.delta):
                w.writerow([_g17(row[0]), row[1], row[2], _g17(row[3]), row[4]])
    elif fmt == "json":
        # Python's float repr is the shortest string that round-trips, never more than 17 digits
        path.write_text(json.dumps(report.to_dict(), indent=2) + "\n")
    else:
        raise DomainError(f"unknown report format {fmt!r}; expected 'csv' or 'json'")


def read_report_csv(path) -> dict:
    """Columns of a CSV written by :func:`export_report`."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return {
        "E": [float(r["E"]) for r in rows],
        "dirac_count": [int(r["dirac_count"]) for r in rows],
        "zero_count": [int(r["zero_count"]) for r in rows],
        "predicted_count": [float(r["predicted_count"]) for r in rows],
        "delta": [int(r["delta"]) for r in rows],
    }
