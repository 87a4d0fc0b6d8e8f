"""Bounded complexes of indecomposable projectives (the homotopy category).

A :class:`ProjComplex` stores, per degree, the list of vertices of its
projective summands and, per degree ``i``, the differential ``d^i`` from term
``i`` to term ``i+1`` as a :class:`LambdaMatrix`. Matrix entries are algebra
elements: dicts from basis-path index to a rational coefficient (``int`` or
``Fraction``). Entry ``(j, k)`` of a map between sums of projectives lies in
``Hom(P_cols[k], P_rows[j])``, i.e. it is a combination of paths from
``rows[j]`` to ``cols[k]``.

Sign conventions: ``shift(c, k)`` reindexes by ``-k`` and multiplies the
differentials by ``(-1)**k``; the cone of ``f: A -> B`` has terms
``A^{i+1} + B^i`` and differential ``[[-d_A, 0], [f, d_B]]``.
"""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

from . import exactla
from .presentation import AlgebraData, ParameterError

Elem = dict  # basis path index -> coefficient


class ComplexError(ValueError):
    pass


def _clean(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


def elem_mul(alg: AlgebraData, x: Elem, y: Elem) -> Elem:
    """Product ``x`` then ``y`` (as composed homomorphisms: y after... x)."""
    mult = alg.mult
    out: Elem = {}
    for a, ca in x.items():
        row = mult[a]
        for b, cb in y.items():
            s = row[b]
            if s >= 0:
                s = int(s)
                v = out.get(s, 0) + ca * cb
                if v:
                    out[s] = _clean(v)
                else:
                    out.pop(s, None)
    return out


def elem_axpy(target: Elem, x: Elem, scale=1) -> None:
    for a, c in x.items():
        v = target.get(a, 0) + scale * c
        if v:
            target[a] = _clean(v)
        else:
            target.pop(a, None)


def elem_scale(x: Elem, c) -> Elem:
    if not c:
        return {}
    return {a: _clean(v * c) for a, v in x.items()}


# ---------------------------------------------------------------------------
# matrices over the algebra


@dataclass(frozen=True, eq=False)
class LambdaMatrix:
    """A map ``sum P_cols -> sum P_rows`` with algebra-element entries."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    entries: dict  # (row, col) -> Elem, nonzero entries only

    @classmethod
    def zero(cls, rows, cols) -> "LambdaMatrix":
        return cls(tuple(rows), tuple(cols), {})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LambdaMatrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.entries == other.entries

    def is_zero(self) -> bool:
        return not self.entries

    def scaled(self, c) -> "LambdaMatrix":
        if c == 1:
            return self
        return LambdaMatrix(self.rows, self.cols, {ij: elem_scale(e, c) for ij, e in self.entries.items()})

    def compose(self, alg: AlgebraData, other: "LambdaMatrix") -> "LambdaMatrix":
        """``self`` after ``other``."""
        if self.cols != other.rows:
            raise ComplexError("matrix shapes do not compose")
        by_row: dict[int, list] = {}
        for (j, k), e in other.entries.items():
            by_row.setdefault(j, []).append((k, e))
        out: dict = {}
        for (i, j), e in self.entries.items():
            for k, f in by_row.get(j, ()):
                prod = elem_mul(alg, e, f)
                if prod:
                    cur = out.setdefault((i, k), {})
                    elem_axpy(cur, prod)
                    if not cur:
                        del out[(i, k)]
        return LambdaMatrix(self.rows, other.cols, out)

    def plus(self, other: "LambdaMatrix", scale=1) -> "LambdaMatrix":
        out = {ij: dict(e) for ij, e in self.entries.items()}
        for ij, e in other.entries.items():
            cur = out.setdefault(ij, {})
            elem_axpy(cur, e, scale)
            if not cur:
                del out[ij]
        return LambdaMatrix(self.rows, self.cols, out)

    def kmatrix(self, alg: AlgebraData):
        """The K-linear matrix in the path bases of the projectives."""
        pdim = alg.proj_dim
        roff = np.cumsum([0] + [pdim[v] for v in self.rows])
        coff = np.cumsum([0] + [pdim[v] for v in self.cols])
        integral = all(isinstance(c, int) for e in self.entries.values() for c in e.values())
        if integral:
            out = np.zeros((int(roff[-1]), int(coff[-1])), dtype=np.int64)
        else:
            out = [[0] * int(coff[-1]) for _ in range(int(roff[-1]))]
        action = alg.action
        for (j, k), e in self.entries.items():
            r0, c0 = int(roff[j]), int(coff[k])
            for g, c in e.items():
                for src, dst in action[g]:
                    if integral:
                        out[r0 + dst, c0 + src] += c
                    else:
                        out[r0 + dst][c0 + src] += c
        return out


def block(alg_rows, alg_cols, blocks) -> LambdaMatrix:
    """Assemble a block matrix; ``blocks[(bi, bj)]`` is a LambdaMatrix."""
    rows = tuple(v for part in alg_rows for v in part)
    cols = tuple(v for part in alg_cols for v in part)
    roff = np.cumsum([0] + [len(p) for p in alg_rows])
    coff = np.cumsum([0] + [len(p) for p in alg_cols])
    entries = {}
    for (bi, bj), m in blocks.items():
        for (j, k), e in m.entries.items():
            entries[(int(roff[bi]) + j, int(coff[bj]) + k)] = dict(e)
    return LambdaMatrix(rows, cols, entries)


# ---------------------------------------------------------------------------
# complexes


class ProjComplex:
    """Immutable bounded complex of indecomposable projectives."""

    def __init__(self, alg: AlgebraData, terms: dict, diffs: dict | None = None, check: bool = True):
        self.alg = alg
        self.terms = {int(d): tuple(vs) for d, vs in terms.items() if vs}
        diffs = diffs or {}
        self.diffs = {}
        for d in self.terms:
            if d + 1 in self.terms:
                m = diffs.get(d)
                if m is None:
                    m = LambdaMatrix.zero(self.terms[d + 1], self.terms[d])
                if m.rows != self.terms[d + 1] or m.cols != self.terms[d]:
                    raise ComplexError(f"differential at degree {d} has the wrong shape")
                self.diffs[d] = m
        for d, m in diffs.items():
            if m.entries and d not in self.diffs:
                raise ComplexError(f"nonzero differential at degree {d} between missing terms")
        if check:
            self.check()

    # construction helpers
    @classmethod
    def zero(cls, alg: AlgebraData) -> "ProjComplex":
        return cls(alg, {}, {}, check=False)

    @classmethod
    def stalk(cls, alg: AlgebraData, vertices, degree: int = 0) -> "ProjComplex":
        if isinstance(vertices, int):
            vertices = (vertices,)
        return cls(alg, {degree: tuple(vertices)}, {}, check=False)

    @classmethod
    def regular(cls, alg: AlgebraData) -> "ProjComplex":
        """The algebra itself as a stalk complex in degree 0."""
        return cls.stalk(alg, alg.vertices, 0)

    def check(self) -> None:
        for d, m in self.diffs.items():
            if d + 1 in self.diffs:
                if not self.diffs[d + 1].compose(self.alg, m).is_zero():
                    raise ComplexError(f"d∘d != 0 at degree {d}")
        for d, m in self.diffs.items():
            for (j, k), e in m.entries.items():
                a, b = m.cols[k], m.rows[j]
                allowed = set(self.alg.hom_indices(a, b))
                if not set(e) <= allowed:
                    raise ComplexError(f"entry ({j}, {k}) of d^{d} is not a map P_{a} -> P_{b}")

    # basic data
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def term(self, d: int) -> tuple[int, ...]:
        return self.terms.get(d, ())

    def diff(self, d: int) -> LambdaMatrix:
        m = self.diffs.get(d)
        if m is None:
            return LambdaMatrix.zero(self.term(d + 1), self.term(d))
        return m

    @property
    def num_summands(self) -> int:
        return sum(len(v) for v in self.terms.values())

    def multisets(self) -> dict[int, Counter]:
        return {d: Counter(vs) for d, vs in self.terms.items()}

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProjComplex):
            return NotImplemented
        if self.terms != other.terms:
            return False
        for d in self.diffs:
            if self.diffs[d] != other.diffs.get(d):
                return False
        return True

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        parts = [f"{d}:{list(self.terms[d])}" for d in self.degrees]
        return f"ProjComplex({', '.join(parts) or '0'})"

    # serialization
    def to_dict(self) -> dict:
        names = self.alg.basis
        diffs = {}
        for d in self.degrees:
            if d not in self.diffs:
                continue
            m = self.diffs[d]
            grid = [[{} for _ in m.cols] for _ in m.rows]
            for (j, k), e in sorted(m.entries.items()):
                grid[j][k] = {names[g].name: str(c) for g, c in sorted(e.items())}
            diffs[str(d)] = grid
        return {"terms": {str(d): list(self.terms[d]) for d in self.degrees}, "diffs": diffs}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, alg: AlgebraData, data: dict) -> "ProjComplex":
        terms = {int(d): tuple(vs) for d, vs in data["terms"].items()}
        diffs = {}
        for d, grid in data.get("diffs", {}).items():
            d = int(d)
            entries = {}
            for j, row in enumerate(grid):
                for k, cell in enumerate(row):
                    if cell:
                        entries[(j, k)] = {alg.path_by_name(n): _clean(Fraction(c)) for n, c in cell.items()}
            diffs[d] = LambdaMatrix(terms.get(d + 1, ()), terms.get(d, ()), entries)
        return cls(alg, terms, diffs)


# ---------------------------------------------------------------------------
# chain maps


class ChainMap:
    """Degree-``n`` map: components ``f^i: source^i -> target^{i+n}``."""

    def __init__(self, source: ProjComplex, target: ProjComplex, degree: int, components: dict, check: bool = True):
        self.source = source
        self.target = target
        self.degree = degree
        self.components = {}
        for i in source.terms:
            if i + degree in target.terms:
                m = components.get(i)
                if m is None:
                    m = LambdaMatrix.zero(target.term(i + degree), source.term(i))
                self.components[i] = m
        for i, m in components.items():
            if i not in self.components and not m.is_zero():
                raise ComplexError(f"nonzero component in degree {i} has no source or target term")
        if check and not self.is_chain_map():
            raise ComplexError("components do not commute with the differentials")

    def component(self, i: int) -> LambdaMatrix:
        m = self.components.get(i)
        if m is None:
            return LambdaMatrix.zero(self.target.term(i + self.degree), self.source.term(i))
        return m

    def is_chain_map(self) -> bool:
        alg = self.source.alg
        n = self.degree
        sign = -1 if n % 2 else 1
        degs = set(self.source.terms) | {d - 1 for d in self.source.terms}
        for i in degs:
            # (d_B f - (-1)^n f d_A) on source^i -> target^{i+n+1}
            lhs = self.target.diff(i + n).compose(alg, self.component(i))
            rhs = self.component(i + 1).compose(alg, self.source.diff(i))
            if not lhs.plus(rhs, -sign).is_zero():
                return False
        return True

    @classmethod
    def identity(cls, c: ProjComplex) -> "ChainMap":
        comps = {}
        for d, vs in c.terms.items():
            comps[d] = LambdaMatrix(vs, vs, {(k, k): {c.alg.trivial[v]: 1} for k, v in enumerate(vs)})
        return cls(c, c, 0, comps, check=False)

    @classmethod
    def zero(cls, a: ProjComplex, b: ProjComplex, degree: int = 0) -> "ChainMap":
        return cls(a, b, degree, {}, check=False)


# ---------------------------------------------------------------------------
# functorial operations


def shift(c: ProjComplex, k: int) -> ProjComplex:
    """Apply the k-th power of the shift functor."""
    if k == 0:
        return c
    sign = -1 if k % 2 else 1
    terms = {d - k: vs for d, vs in c.terms.items()}
    diffs = {d - k: m.scaled(sign) for d, m in c.diffs.items()}
    return ProjComplex(c.alg, terms, diffs, check=False)


def direct_sum(*cs: ProjComplex) -> ProjComplex:
    if not cs:
        raise ComplexError("direct_sum needs at least one complex")
    alg = cs[0].alg
    degs = sorted(set().union(*(c.terms for c in cs)))
    terms = {d: tuple(v for c in cs for v in c.term(d)) for d in degs}
    diffs = {}
    for d in degs:
        if d + 1 not in terms:
            continue
        diffs[d] = block(
            [c.term(d + 1) for c in cs],
            [c.term(d) for c in cs],
            {(x, x): c.diff(d) for x, c in enumerate(cs)},
        )
    return ProjComplex(alg, terms, diffs, check=False)


def cone(f: ChainMap, check: bool = True) -> ProjComplex:
    """Mapping cone of a degree-0 chain map."""
    if f.degree != 0:
        raise ComplexError("cone needs a degree-0 chain map")
    if check and not f.is_chain_map():
        raise ComplexError("cone of a map that is not a chain map")
    a, b = f.source, f.target
    degs = sorted({d - 1 for d in a.terms} | set(b.terms))
    terms = {d: a.term(d + 1) + b.term(d) for d in degs}
    diffs = {}
    for d in degs:
        if d + 1 not in terms:
            continue
        diffs[d] = block(
            [a.term(d + 2), b.term(d + 1)],
            [a.term(d + 1), b.term(d)],
            {(0, 0): a.diff(d + 1).scaled(-1), (1, 0): f.component(d + 1), (1, 1): b.diff(d)},
        )
    return ProjComplex(a.alg, terms, diffs, check=False)


def stack_maps(source: ProjComplex, maps: list[ChainMap], target: ProjComplex | None = None) -> ChainMap:
    """The map ``source -> sum of targets`` with the given components."""
    if target is None:
        target = direct_sum(*[m.target for m in maps]) if maps else ProjComplex.zero(source.alg)
    comps = {}
    for i in source.terms:
        if i in target.terms:
            comps[i] = block(
                [m.target.term(i) for m in maps],
                [source.term(i)],
                {(x, 0): m.component(i) for x, m in enumerate(maps)},
            )
    return ChainMap(source, target, 0, comps, check=False)


def join_maps(maps: list[ChainMap], target: ProjComplex, source: ProjComplex | None = None) -> ChainMap:
    """The map ``sum of sources -> target`` with the given components."""
    if source is None:
        source = direct_sum(*[m.source for m in maps]) if maps else ProjComplex.zero(target.alg)
    comps = {}
    for i in source.terms:
        if i in target.terms:
            comps[i] = block(
                [target.term(i)],
                [m.source.term(i) for m in maps],
                {(0, x): m.component(i) for x, m in enumerate(maps)},
            )
    return ChainMap(source, target, 0, comps, check=False)


# ---------------------------------------------------------------------------
# minimal models


def _elem_inverse(alg: AlgebraData, x: Elem, v: int) -> Elem:
    """Inverse of a unit ``c e_v + radical`` in End(P_v)."""
    e = alg.trivial[v]
    c = x[e]
    cinv = Fraction(1) / c
    nil = {g: _clean(-cv * cinv) for g, cv in x.items() if g != e}
    out = {e: _clean(cinv)}
    power = {e: 1}
    while True:
        power = elem_mul(alg, power, nil)
        if not power:
            break
        elem_axpy(out, elem_scale(power, cinv))
    return out


def minimize(c: ProjComplex) -> ProjComplex:
    """Cancel every invertible differential entry (Gaussian elimination).

    The result is homotopy equivalent to ``c`` and all differential entries
    lie in the radical. Units are taken in a fixed scan order (lowest degree,
    then row-major), so the output is canonical for a given input.
    """
    alg = c.alg
    triv = alg.trivial
    # working copy with stable summand ids
    ids = {}
    nxt = 0
    terms: dict[int, list[int]] = {}
    vert: dict[int, int] = {}
    for d in c.degrees:
        terms[d] = []
        for v in c.terms[d]:
            terms[d].append(nxt)
            vert[nxt] = v
            nxt += 1
    # d[deg][(row_id, col_id)] -> elem
    d: dict[int, dict] = {}
    for deg, m in c.diffs.items():
        rows, cols = terms[deg + 1], terms[deg]
        d[deg] = {(rows[j], cols[k]): dict(e) for (j, k), e in m.entries.items()}

    def find_unit(deg):
        ent = d.get(deg)
        if not ent:
            return None
        cand = None
        for (rid, cid), e in ent.items():
            if vert[rid] == vert[cid] and e.get(triv[vert[rid]]):
                key = (pos[rid], pos[cid])
                if cand is None or key < cand[0]:
                    cand = (key, rid, cid)
        return cand

    degs = sorted(terms)
    pos = {}
    for deg in degs:
        for k, sid in enumerate(terms[deg]):
            pos[sid] = k
    i = 0
    while i < len(degs):
        deg = degs[i]
        hit = find_unit(deg)
        if hit is None:
            i += 1
            continue
        _, rid, cid = hit
        ent = d[deg]
        phi_inv = _elem_inverse(alg, ent[(rid, cid)], vert[rid])
        gamma = {r: e for (r, k), e in ent.items() if k == cid and r != rid}
        beta = {k: e for (r, k), e in ent.items() if r == rid and k != cid}
        for key in [key for key in ent if key[0] == rid or key[1] == cid]:
            del ent[key]
        for r, g in gamma.items():
            g_phi = elem_mul(alg, g, phi_inv)
            if not g_phi:
                continue
            for k, b in beta.items():
                upd = elem_mul(alg, g_phi, b)
                if upd:
                    cur = ent.setdefault((r, k), {})
                    elem_axpy(cur, upd, -1)
                    if not cur:
                        del ent[(r, k)]
        if deg - 1 in d:
            prev = d[deg - 1]
            for key in [key for key in prev if key[0] == cid]:
                del prev[key]
        if deg + 1 in d:
            nx = d[deg + 1]
            for key in [key for key in nx if key[1] == rid]:
                del nx[key]
        terms[deg].remove(cid)
        terms[deg + 1].remove(rid)
        for dd in (deg, deg + 1):
            for k, sid in enumerate(terms[dd]):
                pos[sid] = k
    out_terms = {deg: tuple(vert[s] for s in sids) for deg, sids in terms.items() if sids}
    out_diffs = {}
    for deg, ent in d.items():
        if deg not in out_terms or deg + 1 not in out_terms:
            continue
        rows, cols = terms[deg + 1], terms[deg]
        rpos = {s: j for j, s in enumerate(rows)}
        cpos = {s: k for k, s in enumerate(cols)}
        out_diffs[deg] = LambdaMatrix(
            out_terms[deg + 1], out_terms[deg], {(rpos[r], cpos[k]): e for (r, k), e in ent.items()}
        )
    return ProjComplex(alg, out_terms, out_diffs, check=False)


def is_minimal(c: ProjComplex) -> bool:
    triv = c.alg.trivial
    for m in c.diffs.values():
        for (j, k), e in m.entries.items():
            if m.rows[j] == m.cols[k] and e.get(triv[m.rows[j]]):
                return False
    return True


# ---------------------------------------------------------------------------
# cohomology


def cohomology_dims(c: ProjComplex) -> dict[int, int]:
    """``{a: dim_K H^a(c)}`` over the degrees with nonzero cohomology."""
    alg = c.alg
    pdim = alg.proj_dim
    ranks = {}
    for deg, m in c.diffs.items():
        ranks[deg] = exactla.rank(m.kmatrix(alg)) if m.entries else 0
    out = {}
    for deg in c.degrees:
        dim = sum(pdim[v] for v in c.terms[deg])
        h = dim - ranks.get(deg, 0) - ranks.get(deg - 1, 0)
        if h:
            out[deg] = h
    return out


def support(c: ProjComplex) -> tuple[int, int] | None:
    h = cohomology_dims(c)
    if not h:
        return None
    return min(h), max(h)


# ---------------------------------------------------------------------------
# Hom complexes


class HomComplex:
    """The total complex ``Hom^*(a, b)`` with degree-n piece prod_i Hom(a^i, b^{i+n}).

    The differential is ``f -> d_b f - (-1)^n f d_a``; its degree-n
    cohomology is ``Hom(a, shift^n b)`` in the homotopy category.
    """

    def __init__(self, a: ProjComplex, b: ProjComplex):
        if a.alg is not b.alg:
            raise ComplexError("complexes over different algebras")
        self.a = a
        self.b = b
        self.alg = a.alg
        if a.is_zero() or b.is_zero():
            self.range = range(0)
        else:
            self.range = range(min(b.terms) - max(a.terms), max(b.terms) - min(a.terms) + 1)
        self._coords: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        self._diff: dict[int, np.ndarray] = {}
        self._rank: dict[int, int] = {}

    def coords(self, n: int) -> list:
        """Basis of the degree-n piece: tuples (i, j, k, path index)."""
        if n not in self._coords:
            out = []
            a, b = self.a, self.b
            for i in sorted(a.terms):
                tb = b.term(i + n)
                if not tb:
                    continue
                for k, u in enumerate(a.terms[i]):
                    for j, w in enumerate(tb):
                        for g in self.alg.hom_indices(u, w):
                            out.append((i, j, k, g))
            self._coords[n] = out
            self._index[n] = {x: t for t, x in enumerate(out)}
        return self._coords[n]

    def differential(self, n: int):
        """Matrix of D^n: Hom^n -> Hom^{n+1} (rows index degree n+1)."""
        if n in self._diff:
            return self._diff[n]
        src = self.coords(n)
        self.coords(n + 1)
        tgt = self._index[n + 1]
        mult = self.alg.mult
        sign = -1 if n % 2 else 1
        a, b = self.a, self.b
        cells: dict = {}
        integral = True
        # d_b f: entry (j2, j) of d_b^{i+n}, path eta, composite eta then gamma
        bcol: dict = {}
        for deg, m in b.diffs.items():
            for (j2, j), e in m.entries.items():
                bcol.setdefault((deg, j), []).append((j2, e))
        arow: dict = {}
        for deg, m in a.diffs.items():
            for (k, k2), e in m.entries.items():
                arow.setdefault((deg, k), []).append((k2, e))
        for col, (i, j, k, g) in enumerate(src):
            for j2, e in bcol.get((i + n, j), ()):
                for eta, c in e.items():
                    s = mult[eta, g]
                    if s >= 0:
                        key = (tgt[(i, j2, k, int(s))], col)
                        cells[key] = cells.get(key, 0) + c
            # f d_a: (d_a^{i-1})_{k, k2} maps a^{i-1}[k2] -> a^i[k]
            for k2, e in arow.get((i - 1, k), ()):
                for theta, c in e.items():
                    s = mult[g, theta]
                    if s >= 0:
                        key = (tgt[(i - 1, j, k2, int(s))], col)
                        cells[key] = cells.get(key, 0) - sign * c
        for v in cells.values():
            if not isinstance(v, int):
                integral = False
                break
        nrows, ncols = len(self._coords[n + 1]), len(src)
        if integral:
            mat = np.zeros((nrows, ncols), dtype=np.int64)
            for (r, cc), v in cells.items():
                mat[r, cc] = v
        else:
            mat = [[0] * ncols for _ in range(nrows)]
            for (r, cc), v in cells.items():
                mat[r][cc] = v
        self._diff[n] = mat
        return mat

    def _shape(self, mat):
        if isinstance(mat, np.ndarray):
            return mat.shape
        return len(mat), (len(mat[0]) if mat else 0)

    def rank(self, n: int) -> int:
        if n not in self._rank:
            if not self.coords(n) or not self.coords(n + 1):
                self._rank[n] = 0
            else:
                self._rank[n] = exactla.rank(self.differential(n))
        return self._rank[n]

    def dim(self, n: int) -> int:
        """dim Hom(a, shift^n b)."""
        size = len(self.coords(n))
        if not size:
            return 0
        return size - self.rank(n) - self.rank(n - 1)

    def dims(self) -> dict[int, int]:
        out = {}
        for n in self.range:
            h = self.dim(n)
            if h:
                out[n] = h
        return out

    def basis_maps(self, n: int) -> list[ChainMap]:
        """Degree-n chain maps a -> b representing a basis of H^n."""
        size = len(self.coords(n))
        if not size or not self.dim(n):
            return []
        if self.coords(n + 1):
            kernel = exactla.nullspace(self.differential(n))
        else:
            kernel = [tuple(int(t == s) for t in range(size)) for s in range(size)]
        image_cols = []
        if self.coords(n - 1) and self.rank(n - 1):
            prev = self.differential(n - 1)
            rows = prev.tolist() if isinstance(prev, np.ndarray) else prev
            image_cols = [list(col) for col in zip(*rows)]
        # greedy: kernel vectors independent modulo the image
        vectors = image_cols + [list(v) for v in kernel]
        as_rows = [list(x) for x in zip(*vectors)]
        _, r, pivcols, _ = exactla._reduce(as_rows)
        chosen = [kernel[c - len(image_cols)] for c in pivcols if c >= len(image_cols)]
        return [self._to_map(vec, n) for vec in chosen]

    def _to_map(self, vec, n: int) -> ChainMap:
        comps: dict[int, dict] = {}
        for (i, j, k, g), c in zip(self.coords(n), vec):
            if c:
                ent = comps.setdefault(i, {})
                ent.setdefault((j, k), {})[g] = _clean(c)
        mats = {
            i: LambdaMatrix(self.b.term(i + n), self.a.term(i), ent) for i, ent in comps.items()
        }
        return ChainMap(self.a, self.b, n, mats, check=False)

    def cycles(self, n: int) -> list[ChainMap]:
        """Basis of all degree-n chain maps (not modulo homotopy)."""
        size = len(self.coords(n))
        if not size:
            return []
        if self.coords(n + 1):
            kernel = exactla.nullspace(self.differential(n))
        else:
            kernel = [tuple(int(t == s) for t in range(size)) for s in range(size)]
        return [self._to_map(v, n) for v in kernel]


def hom_dim(a: ProjComplex, b: ProjComplex, n: int = 0) -> int:
    """dim Hom(a, shift^n b) in the homotopy category."""
    return HomComplex(a, b).dim(n)


def hom_basis_maps(a: ProjComplex, b: ProjComplex, n: int = 0) -> list[ChainMap]:
    return HomComplex(a, b).basis_maps(n)


def graded_hom_dims(a: ProjComplex, b: ProjComplex) -> dict[int, int]:
    """``{n: dim Hom(a, shift^n b)}`` over all n with a nonzero space."""
    return HomComplex(a, b).dims()


def reindex_to_degree_zero(f: ChainMap) -> ChainMap:
    """View a degree-n map ``a -> b`` as a degree-0 map ``a -> shift^n b``.

    With the sign convention of :func:`shift` the components carry over
    unchanged.
    """
    n = f.degree
    tgt = shift(f.target, n)
    return ChainMap(f.source, tgt, 0, dict(f.components), check=False)


def reindex_from_shifted_source(f: ChainMap) -> ChainMap:
    """View a degree-n map ``a -> b`` as a degree-0 map ``shift^(-n) a -> b``."""
    n = f.degree
    src = shift(f.source, -n)
    comps = {i + n: m for i, m in f.components.items()}
    return ChainMap(src, f.target, 0, comps, check=False)


# ---------------------------------------------------------------------------
# isomorphism test


def _scalar_part(alg: AlgebraData, m: LambdaMatrix) -> list[list[Fraction]]:
    triv = alg.trivial
    out = [[Fraction(0)] * len(m.cols) for _ in m.rows]
    for (j, k), e in m.entries.items():
        if m.rows[j] == m.cols[k]:
            c = e.get(triv[m.rows[j]], 0)
            if c:
                out[j][k] = Fraction(c)
    return out


def is_isomorphic(a: ProjComplex, b: ProjComplex, seed: int = 0, tries: int = 4) -> bool:
    """Decide a ≅ b in the homotopy category.

    Both sides are minimized; then the per-degree multisets of projectives
    must agree, and a random combination of degree-0 chain maps must have an
    invertible scalar part in every degree. Coefficients are drawn from a
    range of size 2**20, so each try misses an existing isomorphism with
    probability at most (total summands) / 2**20; ``tries`` repeats push the
    false-negative rate far below 1e-6.
    """
    if a.alg is not b.alg:
        return False
    a = a if is_minimal(a) else minimize(a)
    b = b if is_minimal(b) else minimize(b)
    if a.multisets() != b.multisets():
        return False
    if a.is_zero():
        return True
    if cohomology_dims(a) != cohomology_dims(b):
        return False
    hom = HomComplex(a, b)
    maps = hom.cycles(0)
    if not maps:
        return False
    rng = random.Random(seed)
    alg = a.alg
    scal = [{d: _scalar_part(alg, f.component(d)) for d in a.terms} for f in maps]
    for _ in range(tries):
        coeffs = [rng.randrange(-(2**19), 2**19) for _ in maps]
        ok = True
        for d in a.terms:
            size = len(a.terms[d])
            mat = [[Fraction(0)] * size for _ in range(size)]
            for c, s in zip(coeffs, scal):
                if not c:
                    continue
                sd = s[d]
                for j in range(size):
                    row = sd[j]
                    for k in range(size):
                        if row[k]:
                            mat[j][k] += c * row[k]
            if exactla.rank(mat) < size:
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# modules as complexes


def module_complex(alg: AlgebraData, kind: str, i: int) -> ProjComplex:
    """Projective resolution placed with its cohomology in degree 0.

    ``kind`` is ``"P"`` (the projective P_i), ``"S"`` (the simple S_i for
    ``1 <= i <= p-r``) or ``"Q"`` (the quotient P_i/P_{i-1} for
    ``-q+1 <= i <= 0``).
    """
    p, q, r = alg.signature
    if kind == "P":
        if i not in alg.vertices:
            raise ParameterError(f"no vertex {i}")
        return ProjComplex.stalk(alg, i)
    if kind == "Q":
        if not -q + 1 <= i <= 0:
            raise ParameterError(f"P_{i}/P_{i-1} needs -q+1 <= i <= 0")
        return _chain(alg, [i - 1, i])
    if kind == "S":
        if not 1 <= i <= p - r:
            raise ParameterError(f"S_{i} is only resolved here for 1 <= i <= p-r")
        if i >= 2:
            return _chain(alg, [i - 1, i])
        chain = [p - r + j for j in range(r)] + [0, 1]
        return _chain(alg, chain)
    raise ParameterError(f"unknown module kind {kind!r}")


def _chain(alg: AlgebraData, vertices: list[int]) -> ProjComplex:
    """P_{v0} -> P_{v1} -> ... -> P_{vm} ending in degree 0, each map an arrow."""
    pres = alg.presentation
    m = len(vertices) - 1
    terms = {j - m: (v,) for j, v in enumerate(vertices)}
    diffs = {}
    for j in range(m):
        u, w = vertices[j], vertices[j + 1]
        # the map P_u -> P_w is the arrow w -> u, whose index is u
        arrow = pres.arrow(u % pres.p if u >= 0 else u)
        if arrow.source != w or arrow.target != u:
            raise ParameterError(f"no arrow {w} -> {u}")
        path = next(x for x in alg.hom_basis(u, w) if x.arrows == (arrow.index,))
        diffs[j - m] = LambdaMatrix((w,), (u,), {(0, 0): {alg.index[path]: 1}})
    return ProjComplex(alg, terms, diffs)
