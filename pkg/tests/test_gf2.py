import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabtest.gf2 import (
    DimensionError,
    PauliVector,
    Subspace,
    classify,
    enumerate_lagrangians,
    enumerate_subspaces,
    extend_to_lagrangian,
    full_space,
    intersection,
    is_isotropic,
    is_lagrangian,
    is_symplectic,
    isotropic_cover,
    lagrangian_count,
    random_lagrangian,
    random_subspace,
    sp_matrix,
    span,
    symplectic_complement,
    symplectic_gram_schmidt,
    symplectic_product,
    zero_subspace,
)

from oracles import lagrangians_bruteforce, symp


def pv(text):
    return PauliVector.from_text(text)


# ---------- PauliVector and the symplectic product

def test_text_round_trip():
    x = pv("x:10,z:01")
    assert (x.a, x.b) == (0b10, 0b01)
    assert x.word == 0b1001
    assert x.to_text() == "x:10,z:01"
    assert PauliVector.from_parts(2, 2, 1) == x


@pytest.mark.parametrize("text", ["x:1,z:01", "x:12,z:00", "10,01", "x:,z:"])
def test_bad_text_rejected(text):
    with pytest.raises(ValueError):
        pv(text)


@pytest.mark.parametrize("x, y, expected", [
    ("x:1,z:0", "x:0,z:1", 1),
    ("x:10,z:01", "x:01,z:01", 1),
    ("x:11,z:11", "x:11,z:11", 0),
    ("x:10,z:00", "x:01,z:00", 0),
])
def test_symplectic_product_examples(x, y, expected):
    assert symplectic_product(pv(x), pv(y)) == expected


def test_mixed_dimensions_rejected():
    with pytest.raises(DimensionError):
        symplectic_product(pv("x:1,z:0"), pv("x:10,z:00"))


@given(st.integers(1, 4), st.data())
def test_product_matches_oracle_and_is_bilinear(n, data):
    word = st.integers(0, 4**n - 1)
    x, y, z = (data.draw(word) for _ in range(3))
    X, Y, Zv = (PauliVector(n, w) for w in (x, y, z))
    assert symplectic_product(X, Y) == symp(n, x, y)
    assert symplectic_product(X, X) == 0
    assert symplectic_product(X + Y, Zv) == symplectic_product(X, Zv) ^ symplectic_product(Y, Zv)


def test_sp_matrix_matches_pairwise():
    n = 2
    w = np.arange(16)
    M = sp_matrix(n, w, w)
    assert all(M[i, j] == symp(n, i, j) for i in range(16) for j in range(16))


# ---------- span, complement, classification

def test_span_examples():
    assert span([pv("x:0,z:1")]).dim == 1
    assert sorted(span([pv("x:0,z:1")]).elements()) == [0b00, 0b01]
    assert span([pv("x:0,z:1"), pv("x:0,z:1")]).dim == 1
    assert span([pv("x:10,z:00"), pv("x:01,z:00"), pv("x:11,z:00")]).dim == 2
    assert span([], n=2) == zero_subspace(2)


def test_span_is_canonical():
    a = span([pv("x:10,z:01"), pv("x:01,z:10")])
    b = span([pv("x:11,z:11"), pv("x:10,z:01")])
    assert a == b and hash(a) == hash(b)


def test_complement_examples():
    assert symplectic_complement(zero_subspace(2)) == full_space(2)
    Z1 = span([pv("x:0,z:1")])
    assert symplectic_complement(Z1) == Z1


@pytest.mark.parametrize("n", [1, 2])
def test_complement_exhaustive(n):
    words = range(4**n)
    for A in enumerate_subspaces(n):
        Ap = symplectic_complement(A)
        assert A.dim + Ap.dim == 2 * n
        assert symplectic_complement(Ap) == A
        brute = {y for y in words if all(symp(n, x, y) == 0 for x in A.elements())}
        assert set(Ap.elements().tolist()) == brute


def test_subspace_counts():
    # Gaussian binomials [4 choose k]_2 = 1, 15, 35, 15, 1
    counts = [len(enumerate_subspaces(2, d)) for d in range(5)]
    assert counts == [1, 15, 35, 15, 1]


@pytest.mark.parametrize("gens, expected", [
    (["x:0,z:1"], "lagrangian"),
    (["x:1,z:0", "x:0,z:1"], "symplectic"),
    (["x:00,z:01", "x:00,z:10"], "lagrangian"),
    (["x:00,z:01"], "isotropic"),
    (["x:10,z:00", "x:00,z:10"], "symplectic"),
    (["x:10,z:00", "x:00,z:10", "x:01,z:00"], "generic"),
])
def test_classify_examples(gens, expected):
    assert classify(span([pv(g) for g in gens])) == expected


def test_classify_extremes():
    assert classify(zero_subspace(2)) == "isotropic"
    assert classify(full_space(2)) == "symplectic"


@pytest.mark.parametrize("n", [1, 2])
def test_classification_definitions(n):
    for A in enumerate_subspaces(n):
        meet = intersection(A, symplectic_complement(A))
        assert is_isotropic(A) == (A <= symplectic_complement(A))
        assert is_lagrangian(A) == (A == symplectic_complement(A))
        assert is_symplectic(A) == (meet.dim == 0)


# ---------- Lagrangians

@pytest.mark.parametrize("n, count", [(1, 3), (2, 15), (3, 135)])
def test_lagrangian_counts(n, count):
    Ls = enumerate_lagrangians(n)
    assert len(Ls) == lagrangian_count(n) == count
    assert len(set(Ls)) == count
    assert all(is_lagrangian(L) for L in Ls)


@pytest.mark.parametrize("n", [1, 2])
def test_lagrangians_match_bruteforce(n):
    ours = {frozenset(L.elements().tolist()) for L in enumerate_lagrangians(n)}
    assert ours == lagrangians_bruteforce(n)


@pytest.mark.parametrize("n", [1, 3, 5])
def test_random_lagrangian(n):
    rng = np.random.default_rng(n)
    for _ in range(10):
        assert is_lagrangian(random_lagrangian(n, rng))


def test_extend_to_lagrangian_examples():
    T = span([pv("x:00,z:01")])
    L = extend_to_lagrangian(T)
    assert is_lagrangian(L) and T <= L
    Z1 = span([pv("x:0,z:1")])
    assert extend_to_lagrangian(Z1) == Z1
    assert extend_to_lagrangian(zero_subspace(1)) in enumerate_lagrangians(1)
    with pytest.raises(ValueError):
        extend_to_lagrangian(full_space(1))


@pytest.mark.parametrize("n", [1, 2])
def test_extend_every_isotropic(n):
    for T in enumerate_subspaces(n):
        if is_isotropic(T):
            L = extend_to_lagrangian(T)
            assert is_lagrangian(L) and T <= L


# ---------- Gram-Schmidt

def _relations_hold(gs):
    n = gs.n
    xs = [x for x, _ in gs.hyperbolic_pairs]
    zs = [z for _, z in gs.hyperbolic_pairs]
    cs = list(gs.central)
    for (i, x), (j, z) in itertools.product(enumerate(xs), enumerate(zs)):
        if symp(n, x, z) != (i == j):
            return False
    others = list(itertools.combinations(xs, 2)) + list(itertools.combinations(zs, 2))
    others += [(c, v) for c in cs for v in xs + zs + cs]
    return all(symp(n, u, v) == 0 for u, v in others)


def test_gram_schmidt_examples():
    gs = symplectic_gram_schmidt(full_space(1))
    assert gs.k == 1 and gs.central == ()
    assert symp(1, *gs.hyperbolic_pairs[0]) == 1

    L = enumerate_lagrangians(2)[4]
    gs = symplectic_gram_schmidt(L)
    assert gs.k == 0 and span(gs.central, n=2) == L

    gs = symplectic_gram_schmidt(full_space(2))
    assert gs.k == 2 and _relations_hold(gs)


@pytest.mark.parametrize("n", [1, 2])
def test_gram_schmidt_exhaustive(n):
    for V in enumerate_subspaces(n):
        gs = symplectic_gram_schmidt(V)
        assert _relations_hold(gs)
        assert span(gs.generators(), n=n) == V
        assert span(gs.central, n=n) == intersection(V, symplectic_complement(V))


@settings(max_examples=40)
@given(st.integers(3, 6), st.integers(0, 2**32 - 1))
def test_gram_schmidt_random(n, seed):
    rng = np.random.default_rng(seed)
    V = random_subspace(n, int(rng.integers(0, 2 * n + 1)), rng)
    gs = symplectic_gram_schmidt(V)
    assert _relations_hold(gs)
    assert 2 * gs.k + len(gs.central) == V.dim


# ---------- isotropic cover

def _check_cover(S, cover):
    k = S.dim // 2
    assert len(cover) == 2**k + 1
    for T in cover:
        assert T.dim == k and is_isotropic(T) and T <= S
    for T, U in itertools.combinations(cover, 2):
        assert intersection(T, U).dim == 0
    union = set().union(*(T.elements().tolist() for T in cover))
    assert union == set(S.elements().tolist())


def test_cover_single_qubit():
    cover = isotropic_cover(full_space(1))
    assert {tuple(T.elements().tolist()) for T in cover} == {(0, 1), (0, 2), (0, 3)}


@pytest.mark.parametrize("n", [1, 2])
def test_cover_all_symplectic(n):
    for S in enumerate_subspaces(n):
        if S.dim and is_symplectic(S):
            _check_cover(S, isotropic_cover(S))


def test_cover_k3():
    _check_cover(full_space(3), isotropic_cover(full_space(3)))


def test_cover_rejects_non_symplectic():
    with pytest.raises(ValueError):
        isotropic_cover(span([pv("x:0,z:1")]))


def test_subspace_json():
    S = span([pv("x:10,z:01"), pv("x:00,z:10")])
    assert span([pv(t) for t in S.to_json()]) == S
    assert isinstance(S, Subspace)
