"""Exceptional cycles X and Y, their twist functors, and functor words."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .homotopy import (
    ChainMap,
    HomComplex,
    ProjComplex,
    cone,
    direct_sum,
    join_maps,
    minimize,
    module_complex,
    reindex_from_shifted_source,
    reindex_to_degree_zero,
    shift,
    stack_maps,
)
from .presentation import AlgebraData, ParameterError


class WordError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ExceptionalCycle:
    objects: tuple[ProjComplex, ...]
    k_values: tuple[int, ...]
    label: str

    def __len__(self) -> int:
        return len(self.objects)

    def __getitem__(self, i: int) -> ProjComplex:
        """1-based access, cyclic: ``cycle[0]`` is the last object."""
        n = len(self.objects)
        return self.objects[(i - 1) % n]

    def k(self, i: int) -> int:
        return self.k_values[(i - 1) % len(self.k_values)]

    @property
    def alg(self) -> AlgebraData:
        return self.objects[0].alg


def build_X(alg: AlgebraData) -> ExceptionalCycle:
    p, q, r = alg.signature
    objs = [shift(module_complex(alg, "P", p - r + j), r - j) for j in range(1, r)]
    objs += [module_complex(alg, "Q", i) for i in range(0, -q, -1)]
    objs.append(module_complex(alg, "P", -q))
    k = (1,) * (len(objs) - 1) + (-r + 1,)
    return ExceptionalCycle(tuple(objs), k, "X")


def build_Y(alg: AlgebraData) -> ExceptionalCycle:
    p, q, r = alg.signature
    if r == p:
        raise ParameterError("the cycle Y only exists when r < p")
    objs = [module_complex(alg, "S", i) for i in range(p - r, 0, -1)]
    k = (1,) * (len(objs) - 1) + (r + 1,)
    return ExceptionalCycle(tuple(objs), k, "Y")


def build_cycle(alg: AlgebraData, label: str) -> ExceptionalCycle:
    label = label.upper()
    if label == "X":
        return build_X(alg)
    if label == "Y":
        return build_Y(alg)
    raise ParameterError(f"unknown cycle {label!r}")


@dataclass
class CycleReport:
    label: str
    ok: bool = True
    failures: list[str] = field(default_factory=list)
    graded_homs: dict = field(default_factory=dict)
    serre_degrees: list = field(default_factory=list)

    def fail(self, msg: str) -> None:
        self.ok = False
        self.failures.append(msg)


def serre_degree(cycle: ExceptionalCycle, i: int, homs: dict | None = None) -> int | None:
    """The degree m with Hom(E_i, shift^m E_{i+1}) != 0, when it is unique.

    By Serre duality this is the integer k_i of the cycle.
    """
    n = len(cycle)
    j = i % n + 1
    dims = homs[(i, j)] if homs else HomComplex(cycle[i], cycle[j]).dims()
    if n == 1:
        dims = {m: d - (m == 0) for m, d in dims.items() if d - (m == 0)}
    if len(dims) == 1 and next(iter(dims.values())) == 1:
        return next(iter(dims))
    return None


def verify_exceptional(cycle: ExceptionalCycle) -> CycleReport:
    """Check the Hom conditions of an exceptional cycle.

    Every graded endomorphism space must be spanned by the identity,
    graded Homs between distinct objects must vanish unless the target is the
    next object, and the Hom to the next object must be one-dimensional in a
    single degree equal to the declared k-value. For a 1-cycle the extra
    endomorphism in degree k_1 is expected.
    """
    n = len(cycle)
    rep = CycleReport(cycle.label)
    homs = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            homs[(i, j)] = HomComplex(cycle[i], cycle[j]).dims()
    rep.graded_homs = {f"{i},{j}": d for (i, j), d in homs.items()}
    for i in range(1, n + 1):
        endo = dict(homs[(i, i)])
        if n == 1:
            k1 = cycle.k(1)
            expected = {0: 2} if k1 == 0 else {0: 1, k1: 1}
            if endo != expected:
                rep.fail(f"graded End(E_1) = {endo}, expected {expected}")
        elif endo != {0: 1}:
            rep.fail(f"graded End(E_{i}) = {endo}, expected identity only")
        for j in range(1, n + 1):
            if j == i or j == i % n + 1:
                continue
            if homs[(i, j)]:
                rep.fail(f"graded Hom(E_{i}, E_{j}) = {homs[(i, j)]} should vanish")
        m = serre_degree(cycle, i, homs)
        rep.serre_degrees.append(m)
        if m != cycle.k(i):
            rep.fail(f"Hom(E_{i}, E_{i % n + 1}) sits in degree {m}, declared k_{i} = {cycle.k(i)}")
    return rep


# ---------------------------------------------------------------------------
# twist functors


def big_F(cycle: ExceptionalCycle, c: ProjComplex) -> tuple[ProjComplex, ChainMap]:
    """``F_E(c)`` as a sum of shifted cycle objects with its evaluation map.

    One copy of ``shift^k E_i`` per basis element of Hom(shift^k E_i, c),
    ordered by i and then by k.
    """
    maps: list[ChainMap] = []
    for e in cycle.objects:
        hom = HomComplex(e, c)
        for m in sorted(hom.range, reverse=True):
            for f in hom.basis_maps(m):
                maps.append(reindex_from_shifted_source(f))
    if not maps:
        zero = ProjComplex.zero(c.alg)
        return zero, ChainMap.zero(zero, c)
    ev = join_maps(maps, c)
    return ev.source, ev


def big_F_dual(cycle: ExceptionalCycle, c: ProjComplex) -> tuple[ProjComplex, ChainMap]:
    """``F'_E(c)`` with the coevaluation map ``c -> F'_E(c)``."""
    maps: list[ChainMap] = []
    for e in cycle.objects:
        hom = HomComplex(c, e)
        for m in sorted(hom.range):
            for f in hom.basis_maps(m):
                maps.append(reindex_to_degree_zero(f))
    if not maps:
        zero = ProjComplex.zero(c.alg)
        return zero, ChainMap.zero(c, zero)
    coev = stack_maps(c, maps)
    return coev.target, coev


def twist(cycle: ExceptionalCycle, c: ProjComplex) -> ProjComplex:
    """T_E(c): minimal model of the cone of the evaluation map."""
    _, ev = big_F(cycle, c)
    if ev.source.is_zero():
        return c
    return minimize(cone(ev, check=False))


def inverse_twist(cycle: ExceptionalCycle, c: ProjComplex) -> ProjComplex:
    """Quasi-inverse of T_E: the shifted cone of the coevaluation map."""
    _, coev = big_F_dual(cycle, c)
    if coev.target.is_zero():
        return c
    return minimize(shift(cone(coev, check=False), -1))


# ---------------------------------------------------------------------------
# functor words

GENERATORS = ("TX", "TY", "TXinv", "TYinv", "SHIFT")


@dataclass(frozen=True)
class FunctorWord:
    """Generators applied in the order written.

    Exponents of the twist generators are positive (inverse powers use the
    ``inv`` generators); ``SHIFT`` carries a signed exponent.
    """

    letters: tuple[tuple[str, int], ...] = ()

    @property
    def signature(self) -> tuple[int, int, int]:
        k = l = s = 0
        for gen, e in self.letters:
            if gen == "TX":
                k += e
            elif gen == "TXinv":
                k -= e
            elif gen == "TY":
                l += e
            elif gen == "TYinv":
                l -= e
            else:
                s += e
        return k, l, s

    def uses_Y(self) -> bool:
        return any(gen in ("TY", "TYinv") for gen, _ in self.letters)

    def __str__(self) -> str:
        out = []
        for gen, e in self.letters:
            base = {"TX": "X", "TXinv": "X", "TY": "Y", "TYinv": "Y", "SHIFT": "S"}[gen]
            exp = -e if gen.endswith("inv") else e
            out.append(f"{base}^{exp}")
        return " ".join(out)


_TOKEN = re.compile(r"^([XYSxys])(?:\^([+-]?\d+))?$")


def parse_word(text: str, alg: AlgebraData | None = None) -> FunctorWord:
    """Parse ``"X^3 Y^-2 S^1"``; zero exponents are dropped."""
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"bad word token {tok!r}")
        base = m.group(1).upper()
        exp = int(m.group(2)) if m.group(2) is not None else 1
        if exp == 0:
            continue
        if base == "S":
            letters.append(("SHIFT", exp))
        else:
            gen = "T" + base + ("inv" if exp < 0 else "")
            letters.append((gen, abs(exp)))
    word = FunctorWord(tuple(letters))
    if alg is not None:
        validate_word(word, alg)
    return word


def validate_word(word: FunctorWord, alg: AlgebraData) -> None:
    p, q, r = alg.signature
    for gen, e in word.letters:
        if gen not in GENERATORS:
            raise WordError(f"unknown generator {gen!r}")
        if gen != "SHIFT" and e <= 0:
            raise WordError("twist exponents must be positive")
    if r == p and word.uses_Y():
        raise WordError("the twist T_Y does not exist when r = p")


class FunctorEngine:
    """Applies words for one algebra, caching the two cycles."""

    def __init__(self, alg: AlgebraData):
        self.alg = alg
        p, q, r = alg.signature
        self.X = build_X(alg)
        self.Y = build_Y(alg) if r < p else None

    def step(self, gen: str, c: ProjComplex) -> ProjComplex:
        if gen == "TX":
            return twist(self.X, c)
        if gen == "TXinv":
            return inverse_twist(self.X, c)
        if gen in ("TY", "TYinv"):
            if self.Y is None:
                raise WordError("the twist T_Y does not exist when r = p")
            return twist(self.Y, c) if gen == "TY" else inverse_twist(self.Y, c)
        raise WordError(f"unknown generator {gen!r}")

    def apply(self, word: FunctorWord, c: ProjComplex) -> ProjComplex:
        validate_word(word, self.alg)
        for gen, e in word.letters:
            if gen == "SHIFT":
                c = shift(c, e)
                continue
            for _ in range(e):
                c = self.step(gen, c)
        return c


def apply_word(word: FunctorWord | str, c: ProjComplex) -> ProjComplex:
    if isinstance(word, str):
        word = parse_word(word, c.alg)
    return FunctorEngine(c.alg).apply(word, c)
