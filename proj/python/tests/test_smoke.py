import itertools
import math

import pytest

import birsym


def brute_dim(N, n, k, flavor, p=1000003):
    """dim of the (B) or (M) system with a-block size k, written out over all
    ordered tuples, by elimination mod a large prime."""
    syms = sorted({tuple(sorted(t)) for t in itertools.product(range(N), repeat=n) if math.gcd(N, *t) == 1})
    col = {s: i for i, s in enumerate(syms)}

    def key(t):
        return col[tuple(sorted(x % N for x in t))]

    pivots = {}
    rank = 0
    for t in itertools.product(range(N), repeat=n):
        if math.gcd(N, *t) != 1:
            continue
        a, b = t[:k], t[k:]
        row = {key(t): 1}
        for i in range(k):
            if flavor == "B" and a[i] in a[:i]:
                continue
            u = [a[j] - a[i] for j in range(k)]
            u[i] = a[i]
            c = key(tuple(u) + b)
            row[c] = row.get(c, 0) - 1
        v = {c: x % p for c, x in row.items() if x % p}
        while v:
            c = min(v)
            if c not in pivots:
                inv = pow(v[c], p - 2, p)
                pivots[c] = {cc: x * inv % p for cc, x in v.items()}
                rank += 1
                break
            f = v[c]
            for cc, x in pivots[c].items():
                v[cc] = (v.get(cc, 0) - f * x) % p
                if v[cc] == 0:
                    del v[cc]
    return len(syms) - rank


def test_symbols_and_canonical_forms():
    assert len(birsym.symbols(5, 2, "M")) == 14
    assert birsym.canonicalize(5, (4, 1), "M") == ((1, 4), 1)
    assert birsym.canonicalize(5, (1, 4), "Mminus") == ((1, 1), -1)
    assert birsym.canonicalize(2, (1,), "Mminus")[1] == 0
    assert birsym.symbols([2, 4], 1, "M") == []


@pytest.mark.parametrize(
    "N,n,flavor,want",
    [(11, 2, "B", 6), (13, 2, "M", 8), (9, 3, "B", 1), (15, 3, "M", 5), (27, 4, "B", 1)],
)
def test_dimensions_over_q(N, n, flavor, want):
    r = birsym.dimension(N, n, flavor)
    assert r["dim"] == want
    assert r["agree"]


def test_dimension_over_f2():
    assert birsym.dimension(5, 2, "M", field="Fp", p=2)["dim"] == 5
    assert birsym.dimension(7, 3, "B", field="Fp", p=2)["dim"] == 1


@pytest.mark.parametrize(
    "flavor,n,k,N", [("B", 3, 3, 2), ("B", 3, 3, 5), ("M", 3, 3, 7), ("M", 4, 4, 3), ("B", 4, 3, 5), ("M", 3, 2, 6)]
)
def test_partial_systems_against_brute_force(flavor, n, k, N):
    assert birsym.dimension(N, n, flavor, k=[k])["dim"] == brute_dim(N, n, k, flavor)


def test_relation_matrix_matches_dimension():
    sympy = pytest.importorskip("sympy")
    rows, cols, triplets = birsym.relation_matrix(7, 2, "M")
    m = sympy.zeros(rows, cols)
    for r, c, v in triplets:
        m[r, c] = v
    assert cols - m.rank() == birsym.dimension(7, 2, "M")["dim"]


def test_torsion_and_orders():
    free, divisors = birsym.torsion(37, 2, "B")
    assert free == birsym.dimension(37, 2, "B")["dim"]
    assert any(d % 3 == 0 for d in divisors) and any(d % 19 == 0 for d in divisors)
    assert birsym.element_order(7, 3, (0, 0, 1)) == 2
    assert birsym.element_order(11, 3, (0, 0, 1)) == 5
    assert birsym.element_order(8, 3, (0, 0, 1)) == 1


def test_structure_maps():
    assert birsym.mu_cokernel(5, 2) == [2, 2, 2, 2]
    assert birsym.primitive_dim(11, 2) == 1
    assert birsym.primitive_dim(17, 2) == 5
    r = birsym.modsym(11)
    assert (r["dim"], r["dim_minus"], r["C"], r["genus"]) == (11, 1, 10, 1)


def test_hecke_charpoly_has_the_right_degree():
    dim = birsym.dimension(7, 2, "M")["dim"]
    poly = birsym.hecke_charpoly(7, 2, 2)
    assert len(poly) == dim + 1
    assert poly[-1] == 1


def test_blowup_certificate():
    # point blowup of a fixed point of Z/3 acting on P^2
    comps = [(1, 2), (2, 1), (1, 2)]
    assert birsym.certify_blowup(3, comps, "I", (0, 0, 0, 2), a=(1, 2), kappa=(1, 1))
    assert birsym.certify_blowup(3, comps, "I", (0, 0, 0, 2), a=(1, 2), kappa=(1, 1), span="Z")


def test_errors_are_value_errors():
    with pytest.raises(ValueError):
        birsym.dimension(6, 2, "X")
    with pytest.raises(birsym.BirsymError):
        birsym.canonicalize(12, (4, 6), "M")
    with pytest.raises(ValueError):
        birsym.certify_blowup(6, [(2, 4)], "I", (0, 0, 0, 2), a=(2, 4), kappa=(1, 1))
