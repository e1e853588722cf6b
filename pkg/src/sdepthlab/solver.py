"""Characteristic posets and the exact interval-partition search.

A quotient presentation numerator/denominator is turned into the finite poset
of multidegrees a <= g whose monomials lie in the numerator but not in the
denominator, where g is the coordinatewise maximum of all generator exponents.
Partitions of this poset into intervals [a, b] encode the free decompositions
of the module; the invariant being maximized is the minimum over intervals of
rho(b), the number of coordinates of b that meet the bound g.

The decision search is a complete backtracking over interval partitions.  It
processes elements in a fixed linear extension (total degree, then numeric
code).  The first uncovered element must be the bottom of its interval in any
partition that extends the current one: a smaller bottom would itself be
uncovered and earlier in the extension.  Branching over the possible tops of
that element is therefore exhaustive.  Tops are restricted to the canonical
form b_j in {e_j, g_j}; any interval splits into canonical ones with no smaller
rho values, so the restriction loses no partitions worth finding.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass
from itertools import combinations
from math import prod

from .errors import (
    InputError,
    InvalidPresentationError,
    PosetCapExceededError,
    TimeLimitExceededError,
)
from .ideals import Monomial, QuotientPresentation, parse_monomial

DEFAULT_POSET_CAP = 2_000_000
DEFAULT_TIME_LIMIT_S = 300.0


@dataclass(frozen=True)
class CharacteristicPoset:
    """The finite multidegree poset of a quotient presentation.

    Elements are stored as mixed-radix integer codes (radix g_j + 1 per
    coordinate), listed ascending by (total degree, code); that listing is the
    linear extension used everywhere.  ``rho[i]`` counts the coordinates of
    element i that equal the bound g.
    """

    n: int
    g: tuple[int, ...]
    weights: tuple[int, ...]
    codes: tuple[int, ...]
    exps: tuple[tuple[int, ...], ...]
    rho: tuple[int, ...]
    index: dict[int, int]
    squarefree: bool
    ring_quotient_proper: bool

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def max_rho(self) -> int:
        return max(self.rho)

    def encode(self, exps: tuple[int, ...]) -> int:
        return sum(e * w for e, w in zip(exps, self.weights))

    def decode(self, code: int) -> tuple[int, ...]:
        out = []
        for gj in self.g:
            code, e = divmod(code, gj + 1)
            out.append(e)
        return tuple(out)

    def rho_of_exps(self, exps: tuple[int, ...]) -> int:
        return sum(1 for e, gj in zip(exps, self.g) if e == gj)

    def contains_exps(self, exps: tuple[int, ...]) -> bool:
        if any(e > gj for e, gj in zip(exps, self.g)):
            return False
        return self.encode(exps) in self.index


def build_poset(
    pair: QuotientPresentation,
    *,
    cap: int = DEFAULT_POSET_CAP,
    g_override: tuple[int, ...] | None = None,
) -> CharacteristicPoset:
    """Enumerate the multidegree poset of a presentation.

    ``g_override`` replaces the default bound with any coordinatewise larger
    one; the computed invariant does not depend on that choice, which the test
    suite exercises.
    """
    n = pair.ambient
    g = [0] * n
    for ideal in (pair.numerator, pair.denominator):
        for mono in ideal.gens:
            for j, e in enumerate(mono.exponents):
                if e > g[j]:
                    g[j] = e
    if g_override is not None:
        if len(g_override) != n or any(o < gj for o, gj in zip(g_override, g)):
            raise InputError("g_override must dominate the generator exponents")
        g = list(g_override)

    box = prod(gj + 1 for gj in g)
    if box > cap:
        raise PosetCapExceededError(f"multidegree box has {box} cells, cap is {cap}")

    weights = []
    w = 1
    for gj in g:
        weights.append(w)
        w *= gj + 1

    num_gens = [m.exponents for m in pair.numerator.gens]
    den_gens = [m.exponents for m in pair.denominator.gens]
    squarefree = all(gj <= 1 for gj in g)

    elements: list[tuple[int, int, tuple[int, ...]]] = []  # (degree, code, exps)
    if squarefree:
        ones = [j for j in range(n) if g[j] == 1]
        bit_of = {j: 1 << i for i, j in enumerate(ones)}
        num_masks = [sum(bit_of[j] for j in range(n) if e[j]) for e in num_gens]
        den_masks = [sum(bit_of[j] for j in range(n) if e[j]) for e in den_gens]
        for mask in range(box):
            if not any(mask & gm == gm for gm in num_masks):
                continue
            if any(mask & dm == dm for dm in den_masks):
                continue
            exps = tuple(1 if j in bit_of and mask & bit_of[j] else 0 for j in range(n))
            elements.append((mask.bit_count(), mask, exps))
    else:
        from itertools import product

        for point in product(*(range(gj + 1) for gj in g)):
            if not any(all(ge <= pe for ge, pe in zip(gen, point)) for gen in num_gens):
                continue
            if any(all(ge <= pe for ge, pe in zip(gen, point)) for gen in den_gens):
                continue
            code = sum(e * w for e, w in zip(point, weights))
            elements.append((sum(point), code, point))

    if not elements:
        raise InvalidPresentationError("the presentation has an empty poset")

    elements.sort(key=lambda t: (t[0], t[1]))
    codes = tuple(code for _, code, _ in elements)
    exps = tuple(e for _, _, e in elements)
    gt = tuple(g)
    rho = tuple(sum(1 for ej, gj in zip(e, gt) if ej == gj) for e in exps)
    index = {code: i for i, code in enumerate(codes)}

    poset = CharacteristicPoset(
        n=n,
        g=gt,
        weights=tuple(weights),
        codes=codes,
        exps=exps,
        rho=rho,
        index=index,
        squarefree=squarefree,
        ring_quotient_proper=pair.numerator.is_unit() and not pair.denominator.is_zero(),
    )
    if __debug__:
        _assert_box_convex_sample(poset)
    return poset


def _assert_box_convex_sample(poset: CharacteristicPoset, limit: int = 12) -> None:
    # The element set must be box-convex; spot-check a deterministic sample.
    sample = poset.exps[: limit]
    for a in sample:
        for b in sample:
            if a is b or any(x > y for x, y in zip(a, b)):
                continue
            mid = tuple((x + y) // 2 for x, y in zip(a, b))
            assert poset.contains_exps(mid), "element set is not box-convex"


@dataclass(frozen=True)
class StanleyDecomposition:
    """A list of (bottom multidegree, variable set) interval descriptions.

    The interval of a pair (a, Z) runs from a to the top that has coordinate
    g_j for every x_j in Z and a's coordinate elsewhere.  ``g`` is carried when
    the decomposition was produced against a known poset; parsed certificates
    leave it None and are interpreted against the poset they are verified on.
    """

    n: int
    intervals: tuple[tuple[Monomial, frozenset[int]], ...]
    g: tuple[int, ...] | None = None

    def value(self) -> int:
        """min over intervals of rho(top); requires the bound g."""
        if self.g is None:
            raise InputError("decomposition has no bound attached; verify it against a poset")
        return min(_rho_of_top(bottom, zvars, self.g) for bottom, zvars in self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)


def _top_exps(bottom: Monomial, zvars: frozenset[int], g: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(
        g[j] if (j + 1) in zvars else e for j, e in enumerate(bottom.exponents)
    )


def _rho_of_top(bottom: Monomial, zvars: frozenset[int], g: tuple[int, ...]) -> int:
    top = _top_exps(bottom, zvars, g)
    return sum(1 for e, gj in zip(top, g) if e == gj)


def singleton_decomposition(poset: CharacteristicPoset) -> StanleyDecomposition:
    """Every element as its own interval; always a valid partition."""
    intervals = []
    for e in poset.exps:
        zvars = frozenset(j + 1 for j in range(poset.n) if e[j] == poset.g[j])
        intervals.append((Monomial(e), zvars))
    return StanleyDecomposition(poset.n, tuple(intervals), poset.g)


def exists_partition(
    poset: CharacteristicPoset,
    k: int,
    *,
    time_limit_s: float | None = None,
    prune: bool = True,
    memo: bool = False,
) -> StanleyDecomposition | None:
    """Complete search for an interval partition with min rho(top) >= k.

    Returns a partition when one exists and None when none exists; raises
    TimeLimitExceededError when the budget runs out, which is a distinct
    outcome from infeasibility.
    """
    if not 0 <= k <= poset.n:
        raise InputError(f"k must be in 0..{poset.n}, got {k}")
    if k == 0:
        return singleton_decomposition(poset)
    if k > poset.max_rho:
        return None
    deadline = None if time_limit_s is None else time.monotonic() + time_limit_s
    intervals = _search(poset, k, deadline, prune, memo)
    if intervals is None:
        return None
    out = []
    for ei, bcode in intervals:
        bottom = Monomial(poset.exps[ei])
        top = poset.decode(bcode)
        zvars = frozenset(j + 1 for j in range(poset.n) if top[j] == poset.g[j])
        out.append((bottom, zvars))
    return StanleyDecomposition(poset.n, tuple(out), poset.g)


def _search(poset, k, deadline, prune, memo):
    n = poset.n
    g = poset.g
    codes = poset.codes
    exps = poset.exps
    rho = poset.rho
    index = poset.index
    weights = poset.weights
    squarefree = poset.squarefree
    size = len(codes)

    covered = bytearray(size)
    remaining = size
    intervals: list[tuple[int, int]] = []

    # Elements that cannot top their own interval; only these can get stranded.
    lows = [i for i in range(size) if rho[i] < k]
    tops_desc = [i for i in range(size - 1, -1, -1) if rho[i] >= k]
    witness = [-1] * size

    # Degree-moment account.  For squarefree bounds rho is degree plus the
    # count z of coordinates pinned at zero.  When the poset's maximal degree
    # equals kappa = k - z, every interval top must sit at degree kappa
    # exactly, and an interval whose bottom lies s levels below the top covers
    # C(s, j) cells at degree kappa - j.  The number of intervals of each
    # height s is then forced level by level from the uncovered degree counts;
    # a negative forced count refutes the whole uncovered state at once.
    degs = [sum(e) for e in exps]
    max_deg = max(degs)
    z = sum(1 for gj in g if gj == 0)
    kappa = k - z
    moments_apply = squarefree and max_deg == kappa
    per_degree = [0] * (max_deg + 1)
    for d in degs:
        per_degree[d] += 1
    binom = [[0] * (kappa + 1) for _ in range(kappa + 1)] if moments_apply else None
    if moments_apply:
        for s in range(kappa + 1):
            binom[s][0] = 1
            for j in range(1, s + 1):
                binom[s][j] = binom[s - 1][j - 1] + binom[s - 1][j]

    def moments_ok():
        # Height-s intervals are forced by the degree-(kappa - s) count once
        # all taller heights are known; the profile must stay nonnegative.
        heights = [0] * (kappa + 1)
        for s in range(kappa, -1, -1):
            forced = per_degree[kappa - s]
            for t in range(s + 1, kappa + 1):
                forced -= heights[t] * binom[t][s]
            if forced < 0:
                return False
            heights[s] = forced
        return True

    use_memo = memo and size <= 64
    failed_states: set[bytes] | None = set() if use_memo else None

    if squarefree:
        def dominates(t, u):
            cu = codes[u]
            return codes[t] & cu == cu
    else:
        def dominates(t, u):
            eu = exps[u]
            et = exps[t]
            return all(a <= b for a, b in zip(eu, et))

    def candidates(ei):
        e = exps[ei]
        ecode = codes[ei]
        free = [j for j in range(n) if e[j] < g[j]]
        base = n - len(free)
        need = k - base
        if need < 0:
            need = 0
        if need > len(free):
            return []
        cands = []
        for csize in range(need, len(free) + 1):
            for combo in combinations(free, csize):
                bcode = ecode
                box = 1
                for j in combo:
                    span = g[j] - e[j]
                    bcode += span * weights[j]
                    box *= span + 1
                if bcode in index:
                    cands.append((box, bcode, combo))
        cands.sort(key=lambda t: (t[0], t[1]))
        return cands

    def box_cells(ei, combo):
        e = exps[ei]
        cells = [codes[ei]]
        for j in combo:
            w = weights[j]
            cells = [c + t * w for t in range(g[j] - e[j] + 1) for c in cells]
        return cells

    def prune_ok():
        for u in lows:
            if covered[u]:
                continue
            w = witness[u]
            if w >= 0 and not covered[w]:
                continue
            for t in tops_desc:
                if not covered[t] and dominates(t, u):
                    witness[u] = t
                    break
            else:
                return False
        return True

    if prune and moments_apply and not moments_ok():
        return None

    # Frame layout: [element index, candidate list, next position, cells placed
    # by the parent choice that opened this frame (None at the root)].
    frames = [[0, candidates(0), 0, None]]
    node = 0

    def place(cell_idx):
        nonlocal remaining
        for ci in cell_idx:
            covered[ci] = 1
            if moments_apply:
                per_degree[degs[ci]] -= 1
        remaining -= len(cell_idx)

    def unplace(cell_idx):
        nonlocal remaining
        for ci in cell_idx:
            covered[ci] = 0
            if moments_apply:
                per_degree[degs[ci]] += 1
        remaining += len(cell_idx)

    while frames:
        node += 1
        if deadline is not None and node % 512 == 0 and time.monotonic() > deadline:
            raise TimeLimitExceededError(f"partition search at level {k} hit the time limit")
        frame = frames[-1]
        ei, cands, pos, placed = frame
        if pos >= len(cands):
            if failed_states is not None:
                failed_states.add(bytes(covered))
            frames.pop()
            if placed is not None:
                unplace(placed)
                intervals.pop()
            continue
        frame[2] += 1
        _, bcode, combo = cands[pos]

        cell_idx = []
        ok = True
        for c in box_cells(ei, combo):
            ci = index.get(c)
            if ci is None or covered[ci]:
                ok = False
                break
            cell_idx.append(ci)
        if not ok:
            continue

        place(cell_idx)
        intervals.append((ei, bcode))

        if remaining == 0:
            return list(intervals)

        if (
            (prune and moments_apply and not moments_ok())
            or (prune and not prune_ok())
            or (failed_states is not None and bytes(covered) in failed_states)
        ):
            unplace(cell_idx)
            intervals.pop()
            continue

        nxt = ei + 1
        while covered[nxt]:
            nxt += 1
        frames.append([nxt, candidates(nxt), 0, cell_idx])

    return None


@dataclass(frozen=True)
class SdepthResult:
    """Computed invariant with its certificate and the poset it lives on."""

    value: int
    certificate: StanleyDecomposition
    poset: CharacteristicPoset
    infeasible_at: int | None


def sdepth_of_poset(
    poset: CharacteristicPoset,
    *,
    time_limit_s: float | None = DEFAULT_TIME_LIMIT_S,
    memo: bool = False,
) -> SdepthResult:
    """Largest k admitting a partition, by binary search over feasibility.

    Feasibility is monotone decreasing in k, level 0 is always feasible, and
    the result ships both a verified certificate at the optimum and a failed
    search one level higher (trivially so when the optimum is the ambient
    size, which no interval top can exceed).
    """
    n = poset.n
    hi = n - 1 if poset.ring_quotient_proper else n
    hi = min(hi, poset.max_rho)
    lo = 0
    certificate = singleton_decomposition(poset)
    infeasible_at = None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        found = exists_partition(poset, mid, time_limit_s=time_limit_s, memo=memo)
        if found is None:
            hi = mid - 1
            infeasible_at = mid if infeasible_at is None else min(infeasible_at, mid)
        else:
            lo = mid
            certificate = found
    value = lo
    if infeasible_at != value + 1 and value + 1 <= n:
        refute = exists_partition(poset, value + 1, time_limit_s=time_limit_s, memo=memo)
        assert refute is None, "binary search upper bound was wrong"
        infeasible_at = value + 1

    report = verify_decomposition(poset, certificate, value)
    assert report.ok, f"internal certificate failed verification: {report.failures}"
    return SdepthResult(value, certificate, poset, infeasible_at)


def sdepth_of_pair(
    pair: QuotientPresentation,
    *,
    time_limit_s: float | None = DEFAULT_TIME_LIMIT_S,
    max_poset: int = DEFAULT_POSET_CAP,
    memo: bool = False,
) -> SdepthResult:
    """Build the poset of the presentation and compute its invariant."""
    poset = build_poset(pair, cap=max_poset)
    return sdepth_of_poset(poset, time_limit_s=time_limit_s, memo=memo)


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    failures: tuple[str, ...]
    min_rho: int | None

    @property
    def first_failure(self) -> str | None:
        return self.failures[0] if self.failures else None


def verify_decomposition(
    poset: CharacteristicPoset,
    decomposition: StanleyDecomposition,
    k: int,
) -> VerificationReport:
    """Independent validity check of a decomposition against a poset.

    Confirms that every interval lies inside the poset, that the intervals are
    pairwise disjoint, that they cover every element, and that every interval
    top has rho at least k.  Failures are reported, never raised.
    """
    failures: list[str] = []
    seen: dict[int, int] = {}
    min_rho: int | None = None

    if decomposition.n != poset.n:
        return VerificationReport(False, (f"ambient mismatch: {decomposition.n} vs {poset.n}",), None)

    for i, (bottom, zvars) in enumerate(decomposition.intervals):
        label = f"interval {i + 1} [{bottom} ; {{{', '.join(f'x{v}' for v in sorted(zvars))}}}]"
        if bottom.ambient != poset.n:
            failures.append(f"{label}: bottom ambient mismatch")
            continue
        if any(not 1 <= v <= poset.n for v in zvars):
            failures.append(f"{label}: variable index out of range")
            continue
        if any(e > gj for e, gj in zip(bottom.exponents, poset.g)):
            failures.append(f"{label}: bottom {bottom} exceeds the bound")
            continue
        top = _top_exps(bottom, zvars, poset.g)
        r = sum(1 for e, gj in zip(top, poset.g) if e == gj)
        min_rho = r if min_rho is None else min(min_rho, r)
        if r < k:
            failures.append(f"{label}: top has rho {r} < {k}")
        spans = [
            (j, bottom.exponents[j], top[j]) for j in range(poset.n) if top[j] > bottom.exponents[j]
        ]
        cells = [poset.encode(bottom.exponents)]
        for j, lo_e, hi_e in spans:
            w = poset.weights[j]
            cells = [c + t * w for t in range(hi_e - lo_e + 1) for c in cells]
        for c in cells:
            if c not in poset.index:
                failures.append(f"{label}: cell {Monomial(poset.decode(c))} is outside the poset")
                continue
            if c in seen:
                failures.append(
                    f"double cover of {Monomial(poset.decode(c))} by intervals "
                    f"{seen[c] + 1} and {i + 1}"
                )
            else:
                seen[c] = i

    for code in poset.codes:
        if code not in seen:
            failures.append(f"uncovered element {Monomial(poset.decode(code))}")
            break

    return VerificationReport(not failures, tuple(failures), min_rho)


def principal_decomposition(u: Monomial) -> StanleyDecomposition:
    """The staircase decomposition of the quotient ring by one monomial.

    Writing u as an ordered product of variables (ascending index, repeats
    adjacent), the i-th interval starts at the product of the first i-1
    factors and spans every variable except the i-th factor's.  Each interval
    top then meets the bound in all but one coordinate, so the value is the
    ambient size minus one.
    """
    if u.is_constant():
        raise InputError("the principal generator must not be constant")
    n = u.ambient
    g = u.exponents
    allvars = frozenset(range(1, n + 1))
    intervals = []
    prefix = [0] * n
    for j in range(1, n + 1):
        for _ in range(u.exponents[j - 1]):
            intervals.append((Monomial(tuple(prefix)), allvars - {j}))
            prefix[j - 1] += 1
    return StanleyDecomposition(n, tuple(intervals), g)


# ---------------------------------------------------------------------------
# Certificate files: one interval per line, "bottom ; {x_i, x_j, ...}", with
# "1" standing for the constant bottom and "{}" for the empty variable set.
# ---------------------------------------------------------------------------

_VAR_RE = re.compile(r"^x(\d+)$")


def format_certificate(decomposition: StanleyDecomposition) -> str:
    lines = []
    for bottom, zvars in decomposition.intervals:
        vars_text = ", ".join(f"x{v}" for v in sorted(zvars))
        lines.append(f"{bottom} ; {{{vars_text}}}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str, n: int) -> StanleyDecomposition:
    intervals = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if ";" not in line:
            raise InputError(f"certificate line {lineno}: missing ';' separator")
        left, right = line.split(";", 1)
        bottom = parse_monomial(left.strip(), n)
        right = right.strip()
        if not (right.startswith("{") and right.endswith("}")):
            raise InputError(f"certificate line {lineno}: variable set must be braced")
        inner = right[1:-1].strip()
        zvars: set[int] = set()
        if inner:
            for token in inner.split(","):
                match = _VAR_RE.match(token.strip())
                if not match:
                    raise InputError(f"certificate line {lineno}: bad variable {token.strip()!r}")
                v = int(match.group(1))
                if not 1 <= v <= n:
                    raise InputError(f"certificate line {lineno}: variable x{v} out of range")
                zvars.add(v)
        intervals.append((bottom, frozenset(zvars)))
    return StanleyDecomposition(n, tuple(intervals), None)
