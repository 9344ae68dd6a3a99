"""
Buchberger's algorithm on sympy sparse polynomials over QQ.

Pairs are chosen by the normal selection strategy (smallest lcm of leading monomials)
and pruned with the Gebauer-Moeller criteria, which contain both the product and the
chain criterion. The result is minimalized, interreduced, made monic and sorted by
leading monomial in decreasing order, so it depends only on the ideal and the order.

Functions:
    spoly(f, g): S-polynomial of two monic polynomials.
    groebner_basis(gens, order): Reduced Groebner basis.
    normal_form(p, basis): Remainder of p modulo a Groebner basis.
    ideal_contains(p, basis): Membership test by normal form.
"""

import logging
from typing import Sequence

from sympy.polys.rings import PolyElement

logger = logging.getLogger(__name__)


def spoly(f: PolyElement, g: PolyElement, lmf=None, lmg=None) -> PolyElement:
    """Return the s-polynomial of monic polynomials f and g."""
    lmf = f.LM if lmf is None else lmf
    lmg = g.LM if lmg is None else lmg
    R = f.ring
    lcm = R.monomial_lcm(lmf, lmg)
    s1 = f.mul_monom(R.monomial_div(lcm, lmf))
    s2 = g.mul_monom(R.monomial_div(lcm, lmg))
    return s1 - s2


def select(G: list[PolyElement], P: set[tuple[int, int]]) -> tuple[int, int]:
    """Select the pair whose leading monomial lcm is smallest; ties go to the oldest pair."""
    R = G[0].ring

    def key(p):
        lcm = R.monomial_lcm(G[p[0]].LM, G[p[1]].LM)
        return R.order(lcm), p[1], p[0]

    return min(P, key=key)


def update(
    G: list[PolyElement], P: set[tuple[int, int]], f: PolyElement
) -> tuple[list[PolyElement], set[tuple[int, int]]]:
    """Return the new basis and pair set after adding f, pruned by Gebauer-Moeller."""
    lmf = f.LM
    lmG = [g.LM for g in G]
    R = f.ring
    lcm = R.monomial_lcm
    mul = R.monomial_mul
    div = R.monomial_div

    P = {
        p
        for p in P
        if (
            not div(lcm(lmG[p[0]], lmG[p[1]]), lmf)
            or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[0]], lmf)
            or lcm(lmG[p[0]], lmG[p[1]]) == lcm(lmG[p[1]], lmf)
        )
    }

    lcm_dict: dict[tuple, list[int]] = {}
    for i in range(len(G)):
        lcm_dict.setdefault(lcm(lmG[i], lmf), []).append(i)
    minimalized_lcms = []
    for L in sorted(lcm_dict.keys(), key=R.order):
        if all(not div(L, L_) for L_ in minimalized_lcms):
            minimalized_lcms.append(L)
    P_ = set()
    for L in minimalized_lcms:
        # product criterion: coprime leading monomials reduce to zero
        if not any(lcm(lmG[i], lmf) == mul(lmG[i], lmf) for i in lcm_dict[L]):
            P_.add((min(lcm_dict[L]), len(G)))
    return G + [f], P | P_


def minimalize(G: list[PolyElement]) -> list[PolyElement]:
    """Return a minimal Groebner basis from an arbitrary Groebner basis G."""
    if not G:
        return []
    R = G[0].ring
    Gmin: list[PolyElement] = []
    for f in sorted(G, key=lambda h: R.order(h.LM)):
        if all(not R.monomial_div(f.LM, g.LM) for g in Gmin):
            Gmin.append(f)
    return Gmin


def interreduce(G: list[PolyElement]) -> list[PolyElement]:
    """Return the reduced Groebner basis from a minimal Groebner basis G."""
    Gred = []
    for i in range(len(G)):
        g = G[i].rem(G[:i] + G[i + 1 :])
        Gred.append(g.monic())
    return Gred


def groebner_basis(gens: Sequence[PolyElement], order=None) -> list[PolyElement]:
    """
    Computes the reduced Groebner basis of the ideal generated by gens.

    Args:
        gens (Sequence[PolyElement]): Generators, all in the same ring. Zero generators
            are ignored; an empty (or all-zero) list gives the empty basis.
        order: Optional monomial order ("lex", "grlex", "grevlex" or a sympy order). When
            given, the basis lives in a copy of the ring with that order.

    Returns:
        list[PolyElement]: Monic basis sorted by leading monomial, largest first.
            The unit ideal gives [1].
    """
    F = [f for f in gens if f]
    if not F:
        return []
    R = F[0].ring
    if any(f.ring != R for f in F):
        raise ValueError("polynomials must be in the same ring")
    if order is not None:
        R = R.clone(order=order)
        F = [f.set_ring(R) for f in F]

    G: list[PolyElement] = []
    P: set[tuple[int, int]] = set()
    for f in F:
        G, P = update(G, P, f.monic())
    reductions = 0
    while P:
        i, j = select(G, P)
        P.remove((i, j))
        r = spoly(G[i], G[j]).rem(G)
        reductions += 1
        if r:
            G, P = update(G, P, r.monic())
    basis = sorted(interreduce(minimalize(G)), key=lambda g: R.order(g.LM), reverse=True)
    logger.debug(
        "Groebner basis of %d generators: %d elements after %d reductions",
        len(F),
        len(basis),
        reductions,
    )
    return basis


def normal_form(p: PolyElement, basis: Sequence[PolyElement]) -> PolyElement:
    """
    Remainder of p on division by a Groebner basis, in p's ring.

    Zero exactly when p lies in the ideal; the remainder is computed under the basis'
    monomial order.
    """
    if not p or not basis:
        return p
    ring = basis[0].ring
    r = p.set_ring(ring).rem(list(basis))
    return r.set_ring(p.ring)


def ideal_contains(p: PolyElement, basis: Sequence[PolyElement]) -> bool:
    """Whether p lies in the ideal with Groebner basis basis."""
    return not normal_form(p, basis)
