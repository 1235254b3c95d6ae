"""Exact computations in the symbol groups B_n(G), M_n(G) and their variants.

Groups are given as an int N (for Z/N) or a sequence of moduli. Over a cyclic
group, characters can be plain ints; in general each character is a sequence
of residues, one per factor.
"""

from . import _core
from ._core import BirsymError, hecke_charpoly, modsym, primitive_dim

__all__ = [
    "BirsymError",
    "canonicalize",
    "certify_blowup",
    "dimension",
    "element_order",
    "hecke_charpoly",
    "modsym",
    "mu_cokernel",
    "primitive_dim",
    "relation_matrix",
    "symbols",
    "torsion",
]


def _moduli(group):
    if isinstance(group, int):
        return [group]
    return [int(m) for m in group]


def _entries(moduli, entries):
    if len(moduli) == 1:
        return [[int(e)] if isinstance(e, int) else list(e) for e in entries]
    return [list(e) for e in entries]


def _simplify(moduli, entries):
    if len(moduli) == 1:
        return tuple(e[0] for e in entries)
    return tuple(tuple(e) for e in entries)


def canonicalize(group, entries, flavor="M"):
    """Canonical representative and coefficient (+1, -1, or 0 for a vanishing M- symbol)."""
    m = _moduli(group)
    key, coef = _core.canonicalize(m, _entries(m, entries), flavor)
    return _simplify(m, key), coef


def symbols(group, n, flavor="M"):
    m = _moduli(group)
    return [_simplify(m, s) for s in _core.symbols(m, n, flavor)]


def relation_matrix(group, n, flavor="M", k=None):
    """(rows, cols, [(row, col, value), ...]) with columns ordered as symbols()."""
    return _core.relation_matrix(_moduli(group), n, flavor, k)


def dimension(group, n, flavor="B", k=None, field="Q", p=None):
    """Dimension over Q (field="Q") or over F_p (field="Fp", p given).

    Returns a dict with dim, symbols, relations and, over Q, the per-prime ranks.
    """
    primes = [p] if p is not None else None
    return _core.dimension(_moduli(group), n, flavor, k, field, primes)


def torsion(group, n, flavor="B"):
    """(free rank, invariant factors greater than one)."""
    return _core.torsion(_moduli(group), n, flavor)


def element_order(group, n, entries, flavor="B"):
    """Order of one symbol; None for infinite order."""
    m = _moduli(group)
    return _core.element_order(m, n, flavor, _entries(m, entries))


def mu_cokernel(group, n):
    return _core.mu_cokernel(_moduli(group), n)


def certify_blowup(N, components, kind, dims, b=(), a=(), kappa=(), span="Q"):
    """True iff the blowup leaves beta of the fixed-locus data unchanged."""
    return _core.certify_blowup(N, [list(c) for c in components], kind, list(dims), list(b), list(a),
                                list(kappa), span)
