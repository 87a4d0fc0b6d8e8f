import json
import random

import pytest

from derdisc.homotopy import (
    ChainMap,
    ComplexError,
    HomComplex,
    LambdaMatrix,
    ProjComplex,
    cohomology_dims,
    cone,
    direct_sum,
    hom_basis_maps,
    hom_dim,
    is_isomorphic,
    is_minimal,
    minimize,
    module_complex,
    shift,
    support,
)
from derdisc.twist import build_X, build_Y, twist

from conftest import lam


def path_map(alg, src, dst, name, coef=1):
    """Stalk-level map P_src -> P_dst given by one named path."""
    return LambdaMatrix((dst,), (src,), {(0, 0): {alg.path_by_name(name): coef}})


def probes(alg):
    out = [ProjComplex.regular(alg)] + [ProjComplex.stalk(alg, v) for v in alg.vertices]
    X = build_X(alg)
    out += [X[i] for i in range(1, len(X) + 1)]
    out += [twist(X, ProjComplex.stalk(alg, v)) for v in alg.vertices]
    return out


def random_chain_map(alg, rng):
    """A random degree-0 chain map between two probe objects, possibly zero."""
    objs = probes(alg)
    while True:
        a, b = rng.choice(objs), rng.choice(objs)
        k = rng.randint(-1, 1)
        b = shift(b, k)
        cyc = HomComplex(a, b).cycles(0)
        if cyc:
            break
    coeffs = [rng.randint(-2, 2) for _ in cyc]
    comps = {}
    for c, f in zip(coeffs, cyc):
        for i, m in f.components.items():
            comps[i] = comps[i].plus(m, c) if i in comps else m.scaled(c)
    return ChainMap(a, b, 0, comps)


def test_shift_examples(alg312):
    c = module_complex(alg312, "S", 1)
    assert shift(c, 0) == c
    assert shift(shift(c, 1), -1) == c
    assert shift(ProjComplex.stalk(alg312, 2), 3).terms == {-3: (2,)}
    # odd shifts negate the differential
    d = shift(c, 1).diff(-4)
    assert d == c.diff(-3).scaled(-1)


@pytest.mark.parametrize("k", [-3, -1, 2, 5])
def test_shift_moves_cohomology(alg312, k):
    c = twist(build_X(alg312), ProjComplex.regular(alg312))
    h = cohomology_dims(c)
    assert cohomology_dims(shift(c, k)) == {a - k: d for a, d in h.items()}


def test_cone_of_identity_is_contractible(alg312):
    c = module_complex(alg312, "S", 1)
    cid = cone(ChainMap.identity(c))
    assert cohomology_dims(cid) == {}
    assert minimize(cid).is_zero()
    assert minimize(cone(ChainMap.identity(ProjComplex.stalk(alg312, 0)))).is_zero()


def test_cone_of_zero_map(alg312):
    a = module_complex(alg312, "Q", 0)
    b = module_complex(alg312, "S", 1)
    c = cone(ChainMap.zero(a, b))
    ha, hb = cohomology_dims(a), cohomology_dims(b)
    want = {}
    for i in set(ha) | set(hb):
        want[i - 1] = want.get(i - 1, 0) + ha.get(i, 0)
    for i, d in hb.items():
        want[i] = want.get(i, 0) + d
    want = {i: d for i, d in want.items() if d}
    assert cohomology_dims(c) == want


def test_cone_of_arrow_gives_simple_top(alg312):
    # alpha_0 induces P_0 -> P_1; its cokernel is S_1
    f = ChainMap(ProjComplex.stalk(alg312, 0), ProjComplex.stalk(alg312, 1), 0, {0: path_map(alg312, 0, 1, "a0")})
    h = cohomology_dims(cone(f))
    assert h[0] == 1
    assert h == {-1: 1, 0: 1}


def test_direct_sum_examples(alg312):
    a = module_complex(alg312, "S", 1)
    assert direct_sum(a, ProjComplex.zero(alg312)) == a
    b = module_complex(alg312, "Q", 0)
    s = direct_sum(a, b)
    ha, hb = cohomology_dims(a), cohomology_dims(b)
    assert cohomology_dims(s) == {k: ha.get(k, 0) + hb.get(k, 0) for k in set(ha) | set(hb)}
    assert cohomology_dims(direct_sum(a, a, a)) == {0: 3}


def test_minimize_example_twist_moves_projective():
    # with p - r = 2 the simple S_2 sits in Y and T_Y(P_1) = P_2
    alg = lam(4, 1, 2)
    Y = build_Y(alg)
    assert twist(Y, ProjComplex.stalk(alg, 1)) == ProjComplex.stalk(alg, 2)


def test_minimal_complex_is_fixed(alg312):
    c = module_complex(alg312, "S", 1)
    assert is_minimal(c)
    assert minimize(c) == c


@pytest.mark.parametrize("seed", range(12))
def test_minimize_properties_on_random_cones(seed):
    rng = random.Random(seed)
    alg = lam(*rng.choice([(3, 1, 2), (2, 1, 1), (2, 2, 2)]))
    f = random_chain_map(alg, rng)
    c = cone(f)
    m = minimize(c)
    m.check()
    assert is_minimal(m)
    assert minimize(m) == m
    assert cohomology_dims(m) == cohomology_dims(c)
    for probe in [ProjComplex.stalk(alg, v) for v in alg.vertices]:
        for n in range(-3, 4):
            assert hom_dim(probe, m, n) == hom_dim(probe, c, n)
    # long exact sequence bound
    hs, ht, hc = cohomology_dims(f.source), cohomology_dims(f.target), cohomology_dims(c)
    for i, d in hc.items():
        assert d <= hs.get(i + 1, 0) + ht.get(i, 0)


@pytest.mark.parametrize("seed", range(6))
def test_hom_dim_shift_invariance(seed):
    rng = random.Random(100 + seed)
    alg = lam(3, 1, 2)
    objs = probes(alg)
    a, b = rng.choice(objs), rng.choice(objs)
    j, k = rng.randint(-3, 3), rng.randint(-3, 3)
    for n in range(-4, 5):
        # Hom(S^j a, S^n S^k b) = Hom(a, S^(n+k-j) b)
        assert hom_dim(shift(a, j), shift(b, k), n) == hom_dim(a, b, n + k - j)


def test_hom_between_stalks_counts_paths(alg312):
    for a in alg312.vertices:
        for b in alg312.vertices:
            pa, pb = ProjComplex.stalk(alg312, a), ProjComplex.stalk(alg312, b)
            assert hom_dim(pa, pb, 0) == len(alg312.hom_basis(a, b))
            assert HomComplex(pa, pb).dims() == ({0: len(alg312.hom_basis(a, b))} if alg312.hom_basis(a, b) else {})


def test_hom_basis_maps_are_independent_chain_maps(alg312):
    X = build_X(alg312)
    lamc = ProjComplex.regular(alg312)
    for i in range(1, 4):
        hom = HomComplex(X[i], lamc)
        for n in hom.range:
            maps = hom_basis_maps(X[i], lamc, n)
            assert len(maps) == hom.dim(n)
            assert all(f.is_chain_map() for f in maps)


def test_support_and_cohomology_of_regular(alg312):
    lamc = ProjComplex.regular(alg312)
    assert cohomology_dims(lamc) == {0: alg312.dim}
    assert support(lamc) == (0, 0)
    assert support(ProjComplex.zero(alg312)) is None


def test_validation_errors(alg312):
    p0, p1 = ProjComplex.stalk(alg312, 0), ProjComplex.stalk(alg312, 1)
    bad = path_map(alg312, 0, 1, "a0")
    # P_0 -> P_1 -> P_2 via a0 and a1: the composite a1.a0 survives, so d o d != 0
    with pytest.raises(ComplexError):
        ProjComplex(alg312, {0: (0,), 1: (1,), 2: (2,)}, {0: bad, 1: path_map(alg312, 1, 2, "a1")})
    # an entry that is not a map P_1 -> P_0
    with pytest.raises(ComplexError):
        ProjComplex(alg312, {0: (1,), 1: (0,)}, {0: path_map(alg312, 0, 1, "a0")})
    # a degree-0 map between two-term complexes that does not commute
    s1 = module_complex(alg312, "Q", 0)
    with pytest.raises(ComplexError):
        ChainMap(s1, shift(p1, 1), 0, {-1: path_map(alg312, 0, 1, "a0")})
    with pytest.raises(ComplexError):
        cone(ChainMap(p0, p1, 1, {}))


def test_json_round_trip(alg312):
    c = twist(build_X(alg312), ProjComplex.regular(alg312))
    doc = json.loads(c.to_json())
    assert set(doc) == {"terms", "diffs"}
    assert ProjComplex.from_dict(alg312, doc) == c


def test_is_isomorphic_basics(alg312):
    p0, p1 = ProjComplex.stalk(alg312, 0), ProjComplex.stalk(alg312, 1)
    assert is_isomorphic(p0, p0)
    assert not is_isomorphic(p0, p1)
    assert not is_isomorphic(p0, shift(p0, 1))
    s1 = module_complex(alg312, "S", 1)
    padded = direct_sum(s1, cone(ChainMap.identity(p0)))
    assert is_isomorphic(padded, s1)
