"""Ext-distance series, entropy and polynomial-entropy estimates, closed forms.

The generator is the algebra itself as a stalk complex, so
Hom(Lambda, shift^a M) is the degree-a cohomology of M and the Ext-distance
of an object is a weighted sum of its cohomology dimensions.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .homotopy import ProjComplex, cohomology_dims
from .presentation import AlgebraData, ParameterError, build_lambda
from .twist import FunctorEngine, FunctorWord, parse_word, validate_word


class SeriesBlowup(RuntimeError):
    """The iterated object grew faster than linearly."""


class DegenerateSeries(ValueError):
    pass


def ext_distance(v: dict, t: float) -> float:
    """sum_a v[a] * exp(-a t), added from the smallest term up."""
    terms = sorted(d * math.exp(-a * t) for a, d in v.items() if d)
    return math.fsum(terms)


def log_ext_distance(v: dict, t: float) -> float:
    """log of :func:`ext_distance` without overflow for large supports."""
    if not v:
        raise DegenerateSeries("zero object has no Ext-distance")
    xs = np.array([math.log(d) - a * t for a, d in v.items() if d])
    m = xs.max()
    return float(m + math.log(math.fsum(np.exp(xs - m))))


@dataclass
class EntropySeries:
    signature: tuple[int, int, int]
    word: FunctorWord
    samples: list = field(default_factory=list)  # (n, {degree: dim})

    @property
    def n_max(self) -> int:
        return self.samples[-1][0]

    def log_distances(self, t: float) -> np.ndarray:
        return np.array([log_ext_distance(v, t) for _, v in self.samples])

    def ns(self) -> np.ndarray:
        return np.array([n for n, _ in self.samples], dtype=float)

    def period(self) -> int:
        """Period in n of the support pattern of the word's iterates."""
        p, q, r = self.signature
        k, l, _ = self.word.signature
        per = 1
        if k:
            per = math.lcm(per, q + r if r < p else p + q)
        if l:
            per = math.lcm(per, p - r)
        return per

    def max_dim(self) -> int:
        return max((max(v.values()) for _, v in self.samples if v), default=0)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "degree", "dim"])
        for n, v in self.samples:
            for a in sorted(v):
                w.writerow([n, a, v[a]])
        return buf.getvalue()


def iterate_series(alg: AlgebraData, word: FunctorWord | str, n_max: int, growth_bound: int | None = None,
                   start: ProjComplex | None = None) -> EntropySeries:
    """Cohomology vectors of F^n(Lambda) for n = 0..n_max.

    ``growth_bound`` caps the summand count at ``growth_bound * (n + 1)``;
    the default scales with the number of vertices.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    if isinstance(word, str):
        word = parse_word(word)
    validate_word(word, alg)
    eng = FunctorEngine(alg)
    c = start if start is not None else ProjComplex.regular(alg)
    if growth_bound is None:
        growth_bound = 4 * len(alg.vertices) * max(1, sum(e for g, e in word.letters if g != "SHIFT"))
    series = EntropySeries(alg.signature, word, [(0, cohomology_dims(c))])
    for n in range(1, n_max + 1):
        c = eng.apply(word, c)
        if c.num_summands > growth_bound * (n + 1):
            raise SeriesBlowup(f"{c.num_summands} summands after {n} steps")
        series.samples.append((n, cohomology_dims(c)))
    return series


def _tail(series: EntropySeries, tail_fraction: float) -> slice:
    m = len(series.samples)
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    start = min(m - 2, int(math.floor(m * (1 - tail_fraction))))
    return slice(max(start, 0), m)


def estimate_entropy(series: EntropySeries, t: float, tail_fraction: float = 0.5) -> tuple[float, float]:
    """Least-squares slope of log delta'(t) against n over the tail; (slope, rms residual)."""
    if len(series.samples) < 8:
        raise DegenerateSeries("need at least 8 samples")
    sl = _tail(series, tail_fraction)
    x = series.ns()[sl]
    y = series.log_distances(t)[sl]
    coef, *_ = np.linalg.lstsq(np.vstack([x, np.ones_like(x)]).T, y, rcond=None)
    resid = y - (coef[0] * x + coef[1])
    return float(coef[0]), float(math.sqrt(np.mean(resid**2)))


def estimate_entropy_support(series: EntropySeries, t: float) -> float:
    """(1/n) max(-a t) over the cohomology support at the last sample."""
    n, v = series.samples[-1]
    if not v or n == 0:
        raise DegenerateSeries("empty last sample")
    return max(-a * t for a in v) / n


def estimate_poly_entropy(series: EntropySeries, t: float, h: float, tail_fraction: float = 0.5,
                          method: str = "regression") -> float:
    """Polynomial entropy at t given the entropy h.

    ``method="ratio"`` averages (log delta'_n - n h) / log n over the tail.
    ``method="regression"`` (default) instead fits
    log delta'_n - n h = c + h_poly log n over the tail samples lying in the
    residue class of n_max modulo the period of the word, which removes both
    the constant offset and the periodic wobble that dominate the plain
    ratio at desk-scale n.
    """
    if series.n_max < 10:
        raise DegenerateSeries("n_max < 10 is too short for a polynomial estimate")
    sl = _tail(series, tail_fraction)
    ns = series.ns()[sl]
    y = series.log_distances(t)[sl] - ns * h
    if method == "ratio":
        return float(np.mean(y / np.log(ns)))
    if method != "regression":
        raise ValueError(f"unknown method {method!r}")
    per = series.period()
    keep = (series.n_max - ns) % per == 0
    if keep.sum() < 2:
        keep = np.ones_like(keep)
    x = np.log(ns[keep])
    coef, *_ = np.linalg.lstsq(np.vstack([x, np.ones_like(x)]).T, y[keep], rcond=None)
    return float(coef[0])


# ---------------------------------------------------------------------------
# closed forms


def _check_signature(p, q, r, l):
    if p < 1 or q < 0 or not 1 <= r <= p:
        raise ParameterError(f"need p >= 1, q >= 0 and 1 <= r <= p, got ({p}, {q}, {r})")
    if r == p and l:
        raise ParameterError("l must be 0 when r = p")


def closed_form_entropy(p, q, r, k, l, s, t) -> float:
    _check_signature(p, q, r, l)
    if r == p:
        return s * t + float(Fraction(k * p, p + q)) * t + 0.0
    a = float(Fraction(l * r, r - p)) * t
    b = float(Fraction(k * r, r + q)) * t
    return s * t + max(a, b) + 0.0


def closed_form_poly_entropy(p, q, r, k, l, s, t) -> float:
    """0 when F^(r+q) is a pure shift, that is l(r+q) = k(r-p); else 1 at t = 0 only."""
    _check_signature(p, q, r, l)
    if r == p or l * (r + q) == k * (r - p):
        return 0.0
    return 1.0 if t == 0 else 0.0


# ---------------------------------------------------------------------------
# reports


@dataclass
class EntropyReport:
    t: float
    fitted_h: float
    closed_h: float
    fitted_poly: float | None
    closed_poly: float
    residual: float
    support_h: float
    tail: tuple[int, int]
    passed: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        d["tail"] = list(self.tail)
        return d


def compare_report(alg: AlgebraData, word: FunctorWord | str, t_grid, n_max: int, tol: float = 0.05,
                   poly_tol: float | None = None, tail_fraction: float = 0.5,
                   series: EntropySeries | None = None) -> list[EntropyReport]:
    """One report per t; ``poly_tol=None`` skips the polynomial estimate."""
    if isinstance(word, str):
        word = parse_word(word, alg)
    if series is None:
        series = iterate_series(alg, word, n_max)
    p, q, r = alg.signature
    k, l, s = word.signature
    sl = _tail(series, tail_fraction)
    tail = (series.samples[sl.start][0], series.n_max)
    out = []
    for t in t_grid:
        t = float(t)
        h, res = estimate_entropy(series, t, tail_fraction)
        ch = closed_form_entropy(p, q, r, k, l, s, t)
        cp = closed_form_poly_entropy(p, q, r, k, l, s, t)
        ok = abs(h - ch) <= tol
        hp = None
        if poly_tol is not None:
            hp = estimate_poly_entropy(series, t, ch, tail_fraction)
            ok = ok and abs(hp - cp) <= poly_tol
        out.append(EntropyReport(t, h, ch, hp, cp, res, estimate_entropy_support(series, t), tail, ok))
    return out


def reports_json(reports: list[EntropyReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True)


def series_for(p: int, q: int, r: int, word: str, n_max: int) -> EntropySeries:
    alg = build_lambda(p, q, r)
    return iterate_series(alg, parse_word(word, alg), n_max)
