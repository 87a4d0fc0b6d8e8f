import itertools
import json

import pytest

from derdisc.homotopy import cohomology_dims, module_complex
from derdisc.presentation import ParameterError, Path, build_lambda, compose, hom_basis, presentation

from conftest import lam

PRESETS = [(2, 1, 1), (3, 1, 2), (4, 1, 3), (3, 0, 2), (4, 2, 1), (2, 2, 2), (1, 0, 1)]


def brute_force_paths(pres, max_len):
    """Every arrow word up to max_len that composes and avoids relation pairs."""
    rel = set(pres.relations)
    arrows = {a.index: a for a in pres.arrows}
    found = [(v, v, ()) for v in pres.vertices]
    for n in range(1, max_len + 1):
        for word in itertools.product(arrows, repeat=n):
            ok = all(arrows[x].target == arrows[y].source for x, y in zip(word, word[1:]))
            ok = ok and not any((x, y) in rel for x, y in zip(word, word[1:]))
            if ok:
                found.append((arrows[word[0]].source, arrows[word[-1]].target, word))
    return found


@pytest.mark.parametrize("sig", PRESETS)
def test_dimension_matches_brute_force(sig):
    alg = lam(*sig)
    p, q, r = sig
    longest = max(x.length for x in alg.basis)
    oracle = brute_force_paths(alg.presentation, min(longest + 1, 7))
    assert longest < 7
    assert alg.dim == len(oracle)
    assert {(x.source, x.target, x.arrows) for x in alg.basis} == set(oracle)


@pytest.mark.parametrize("sig, dim", [((2, 1, 1), 9), ((3, 1, 2), 11), ((2, 2, 2), 11)])
def test_build_examples(sig, dim):
    alg = build_lambda(*sig)
    pres = alg.presentation
    p, q, r = sig
    assert len(pres.vertices) == p + q
    assert len(pres.arrows) == p + q
    assert len(pres.relations) == r
    assert alg.dim == dim
    assert pres.is_gentle()


def test_relation_reading_order():
    pres = presentation(3, 1, 2)
    # "a_{p-1} a_0" means a0 first, then a2
    assert (0, 2) in pres.relations
    assert (2, 1) in pres.relations


@pytest.mark.parametrize("bad", [(0, 1, 1), (2, -1, 1), (2, 1, 0), (2, 1, 3)])
def test_parameter_domain(bad):
    with pytest.raises(ParameterError):
        build_lambda(*bad)


def test_compose_examples():
    pres = presentation(2, 1, 1)
    a0 = Path(1, 0, (0,))
    a1 = Path(0, 1, (1,))
    e1 = Path(1, 1)
    assert compose(pres, e1, a0) == a0
    assert compose(pres, a0, a1) is None
    assert compose(pres, a1, a0) == Path(0, 0, (1, 0))
    assert compose(pres, a1, a1) is None  # endpoints do not meet


def test_hom_basis_examples():
    alg = lam(2, 1, 1)
    assert [x.name for x in hom_basis(alg, -1, 1)] == ["a0.a-1"]
    assert hom_basis(alg, 1, -1) == []
    alg = lam(3, 1, 2)
    assert hom_basis(alg, 2, 1) == []
    assert [x.name for x in hom_basis(alg, 1, 2)] == ["a1"]


@pytest.mark.parametrize("sig", PRESETS)
def test_hom_bases_partition_the_basis(sig):
    alg = lam(*sig)
    total = sum(len(alg.hom_basis(a, b)) for a in alg.vertices for b in alg.vertices)
    assert total == alg.dim == sum(alg.proj_dim.values())
    for v in alg.vertices:
        assert Path(v, v) in alg.hom_basis(v, v)
    rel = set(alg.presentation.relations)
    for x in alg.basis:
        assert not any(pair in rel for pair in zip(x.arrows, x.arrows[1:]))


def test_multiplication_table_is_associative(alg312):
    m = alg312.mult
    n = alg312.dim
    for i in range(n):
        for j in range(n):
            if m[i, j] < 0:
                continue
            for k in range(n):
                left = m[m[i, j], k]
                right = m[i, m[j, k]] if m[j, k] >= 0 else -1
                assert left == right


def test_module_complex_examples(alg312):
    assert module_complex(alg312, "P", 2).terms == {0: (2,)}
    s1 = module_complex(alg312, "S", 1)
    # P_{p-r} -> ... -> P_0 -> P_1 has r + 2 terms
    assert s1.terms == {-3: (1,), -2: (2,), -1: (0,), 0: (1,)}
    assert cohomology_dims(s1) == {0: 1}
    quo = module_complex(alg312, "Q", 0)
    assert quo.terms == {-1: (-1,), 0: (0,)}
    assert cohomology_dims(quo) == {0: alg312.proj_dim[0] - alg312.proj_dim[-1]}


@pytest.mark.parametrize("sig", PRESETS)
def test_module_complexes_resolve_their_modules(sig):
    alg = lam(*sig)
    p, q, r = sig
    for i in range(1, p - r + 1):
        assert cohomology_dims(module_complex(alg, "S", i)) == {0: 1}
    for i in range(-q + 1, 1):
        want = alg.proj_dim[i] - alg.proj_dim[i - 1]
        assert cohomology_dims(module_complex(alg, "Q", i)) == {0: want}


def test_module_complex_range_errors(alg312):
    with pytest.raises(ParameterError):
        module_complex(alg312, "S", 2)
    with pytest.raises(ParameterError):
        module_complex(alg312, "Q", 1)
    with pytest.raises(ParameterError):
        module_complex(alg312, "P", 5)
    with pytest.raises(ParameterError):
        module_complex(alg312, "T", 0)


def test_json_round_trip():
    alg = lam(2, 1, 2)
    doc = json.loads(alg.to_json())
    assert doc["gldim"] == "infinite"
    assert doc["dim"] == alg.dim
    assert len(doc["vertices"]) == 3
    assert doc["relations"] == [["a0", "a1"], ["a1", "a0"]]
