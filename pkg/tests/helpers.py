"""Independent oracles shared by the unit and acceptance tests."""

from itertools import combinations, product

from sdepthlab import Monomial, MonomialIdeal, minimalize


def brute_force_sdepth(poset) -> int:
    """Maximum over all interval partitions of the minimum rho, by enumeration.

    Enumerates every partition of the poset into intervals [a, b] (arbitrary
    elements a <= b whose whole box lies in the poset), using no level
    parameter, no canonical-top restriction, and no pruning.  Each partition
    is generated exactly once: the first uncovered element in the linear
    extension is the bottom of exactly one interval of any partition.
    """
    size = len(poset)
    exps = poset.exps
    rho = poset.rho
    best = -1

    def cells_of(ei, bi):
        a, b = exps[ei], exps[bi]
        if any(x > y for x, y in zip(a, b)):
            return None
        idxs = []
        for point in product(*(range(a[j], b[j] + 1) for j in range(poset.n))):
            ci = poset.index.get(poset.encode(point))
            if ci is None:
                return None
            idxs.append(ci)
        return idxs

    def rec(covered, current_min):
        nonlocal best
        first = next((i for i in range(size) if not covered >> i & 1), None)
        if first is None:
            best = max(best, current_min)
            return
        for bi in range(size):
            if covered >> bi & 1:
                continue
            idxs = cells_of(first, bi)
            if idxs is None or any(covered >> ci & 1 for ci in idxs):
                continue
            mask = covered
            for ci in idxs:
                mask |= 1 << ci
            rec(mask, min(current_min, rho[bi]))

    rec(0, poset.n + 1)
    return best


def enumerate_small_ideals(n: int, max_gens: int = 3, max_exp: int = 2):
    """All distinct nonzero proper monomial ideals with at most ``max_gens``
    minimal generators and exponents at most ``max_exp``, canonically ordered."""
    monomials = [
        Monomial(exps)
        for exps in product(range(max_exp + 1), repeat=n)
        if any(exps)
    ]
    seen: dict[MonomialIdeal, None] = {}
    for count in range(1, max_gens + 1):
        for gens in combinations(monomials, count):
            ideal = minimalize(gens, n)
            if ideal not in seen:
                seen[ideal] = None
    return sorted(seen, key=lambda ideal: (len(ideal.gens), tuple(g.sort_key() for g in ideal.gens)))
