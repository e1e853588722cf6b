"""Verification scans over the ideal families, with deterministic emitters.

Each scan row records a single (n, m) instance of one configured check.  A row
may only carry status ``violation`` when every quantity in the violated claim
was computed exactly; searches that run out of budget become ``unknown``.
Row outputs are merged in (n, m, check) order, so the emitted tables do not
depend on how many worker processes computed them.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict

from .errors import InputError, PosetCapExceededError, TimeLimitExceededError
from .families import (
    cycle_path_ideal,
    formula_table,
    is_equality_case,
    line_path_ideal,
    proof_tower,
)
from .homology import depth_squarefree
from .ideals import (
    MonomialIdeal,
    QuotientPresentation,
    add_generators,
    colon,
    minimalize,
    monomial,
    relabel,
    ring_quotient,
    variable,
)
from .solver import (
    DEFAULT_POSET_CAP,
    DEFAULT_TIME_LIMIT_S,
    format_certificate,
    sdepth_of_pair,
    verify_decomposition,
)

CHECKS = ("thm14", "cor15", "prop16", "conjecture", "formulas")

STRUCTURE_N_MAX = 12


@dataclass(frozen=True)
class ScanRow:
    n: int
    m: int
    check: str
    psi: int | None
    phi: int | None
    sdepth: int | None
    depth: int | None
    bound_lo: int | None
    bound_hi: int | None
    status: str  # ok | violation | unknown | skipped
    ms: int


def default_n_max(check: str) -> int:
    return 12 if check == "formulas" else 10


def _instances(check: str, n_max: int, m_min: int, m_max: int | None) -> list[tuple[int, int]]:
    out = []
    for n in range(3, n_max + 1):
        top = n - 1 if m_max is None else min(m_max, n - 1)
        for m in range(max(2, m_min), top + 1):
            if check == "conjecture" and n < 3 * (m + 1) + 1:
                continue
            out.append((n, m))
    return out


def _certified_sdepth(pair, time_limit_s, max_poset, cert_path=None):
    """Solve, re-verify the certificate independently, optionally store it."""
    result = sdepth_of_pair(pair, time_limit_s=time_limit_s, max_poset=max_poset)
    report = verify_decomposition(result.poset, result.certificate, result.value)
    if not report.ok:
        raise AssertionError(f"certificate rejected: {report.first_failure}")
    if cert_path is not None:
        with open(cert_path, "w", encoding="utf-8") as handle:
            handle.write(format_certificate(result.certificate))
    return result.value


def _cert_path(cert_dir, check, n, m):
    if cert_dir is None:
        return None
    return os.path.join(cert_dir, f"{check}-n{n}-m{m}.cert")


def _compute_rows(args: tuple) -> list[ScanRow]:
    check, n, m, time_limit_s, max_poset, cert_dir = args
    started = time.monotonic()
    rec = formula_table(n, m)

    def finish(**kw) -> ScanRow:
        ms = int((time.monotonic() - started) * 1000)
        base = dict(
            n=n, m=m, check=check, psi=rec.psi, phi=rec.phi,
            sdepth=None, depth=None, bound_lo=None, bound_hi=None,
            status="ok", ms=ms,
        )
        base.update(kw)
        return ScanRow(**base)

    if check == "thm14":
        cycle = cycle_path_ideal(n, m)
        depth = depth_squarefree(cycle)
        sdepth = None
        try:
            sdepth = _certified_sdepth(
                ring_quotient(cycle), time_limit_s, max_poset, _cert_path(cert_dir, check, n, m)
            )
        except (TimeLimitExceededError, PosetCapExceededError):
            pass
        violated = depth != rec.psi or (
            sdepth is not None and not rec.psi <= sdepth <= rec.phi
        )
        status = "violation" if violated else ("unknown" if sdepth is None else "ok")
        return [finish(sdepth=sdepth, depth=depth, bound_lo=rec.psi, bound_hi=rec.phi,
                       status=status)]

    if check == "cor15":
        cycle = cycle_path_ideal(n, m)
        depth = depth_squarefree(cycle) if n <= STRUCTURE_N_MAX else None
        if is_equality_case(n, m):
            sdepth = None
            try:
                sdepth = _certified_sdepth(
                    ring_quotient(cycle), time_limit_s, max_poset,
                    _cert_path(cert_dir, check, n, m),
                )
            except (TimeLimitExceededError, PosetCapExceededError):
                pass
            violated = (depth is not None and depth != rec.phi) or (
                sdepth is not None and sdepth != rec.phi
            )
            status = "violation" if violated else ("unknown" if sdepth is None else "ok")
            return [finish(sdepth=sdepth, depth=depth, bound_lo=rec.phi, bound_hi=rec.phi,
                           status=status)]
        # Bracket conditions as printed select exactly the non-equality
        # instances, where the formulas force depth = psi < phi; reported as
        # informational rows rather than asserted.
        return [finish(check="cor15-printed-cond", depth=depth, bound_lo=rec.psi,
                       bound_hi=rec.phi, status="ok")]

    if check == "prop16":
        pair = QuotientPresentation(cycle_path_ideal(n, m), line_path_ideal(n, m))
        bound = rec.psi + m - 1
        sdepth = None
        try:
            sdepth = _certified_sdepth(
                pair, time_limit_s, max_poset, _cert_path(cert_dir, check, n, m)
            )
        except (TimeLimitExceededError, PosetCapExceededError):
            pass
        derived = None
        structure_ok = None
        if n <= STRUCTURE_N_MAX:
            report = prop16_structure_check(n, m)
            derived = report.derived_depth
            structure_ok = report.ok
        violated = structure_ok is False or (sdepth is not None and sdepth < bound)
        status = "violation" if violated else ("unknown" if sdepth is None else "ok")
        return [finish(sdepth=sdepth, depth=derived, bound_lo=bound, status=status)]

    if check == "conjecture":
        cycle = cycle_path_ideal(n, m)
        sdepth = None
        try:
            sdepth = _certified_sdepth(
                ring_quotient(cycle), time_limit_s, max_poset, _cert_path(cert_dir, check, n, m)
            )
        except (TimeLimitExceededError, PosetCapExceededError):
            pass
        # Open statement: agreement with phi is recorded, never asserted.
        status = "unknown" if sdepth is None else "ok"
        return [finish(sdepth=sdepth, bound_lo=rec.phi, bound_hi=rec.phi, status=status)]

    if check == "formulas":
        depth_line = depth_squarefree(line_path_ideal(n, m))
        row_line = finish(check="formulas-line", depth=depth_line, bound_lo=rec.phi,
                          bound_hi=rec.phi,
                          status="ok" if depth_line == rec.phi else "violation")
        started_cycle = time.monotonic()
        depth_cycle = depth_squarefree(cycle_path_ideal(n, m))
        ms_cycle = int((time.monotonic() - started_cycle) * 1000)
        row_cycle = ScanRow(
            n=n, m=m, check="formulas-cycle", psi=rec.psi, phi=rec.phi, sdepth=None,
            depth=depth_cycle, bound_lo=rec.psi, bound_hi=rec.psi,
            status="ok" if depth_cycle == rec.psi else "violation", ms=ms_cycle,
        )
        return [row_line, row_cycle]

    raise InputError(f"unknown check {check!r}")


def run_scan(
    check: str,
    n_max: int | None = None,
    m_min: int = 2,
    m_max: int | None = None,
    *,
    time_limit_s: float = DEFAULT_TIME_LIMIT_S,
    max_poset: int = DEFAULT_POSET_CAP,
    jobs: int = 1,
    cert_dir: str | None = None,
) -> list[ScanRow]:
    """Run one check over the (n, m) grid and return rows in canonical order."""
    if check not in CHECKS:
        raise InputError(f"check must be one of {', '.join(CHECKS)}; got {check!r}")
    if n_max is None:
        n_max = default_n_max(check)
    if cert_dir is not None:
        os.makedirs(cert_dir, exist_ok=True)
    work = [
        (check, n, m, time_limit_s, max_poset, cert_dir)
        for n, m in _instances(check, n_max, m_min, m_max)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_compute_rows, work))
    else:
        chunks = [_compute_rows(w) for w in work]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r.n, r.m, r.check))
    return rows


# ---------------------------------------------------------------------------
# Emitters.  Timings default to 0 in every format so that repeated runs with
# identical flags produce byte-identical output; pass timings=True to see the
# measured milliseconds.
# ---------------------------------------------------------------------------

CSV_HEADER = "n,m,check,psi,phi,sdepth,depth,bound_lo,bound_hi,status,ms"
_COLUMNS = CSV_HEADER.split(",")


def _row_cells(row: ScanRow, timings: bool) -> list:
    data = asdict(row)
    data["ms"] = data["ms"] if timings else 0
    return [data[c] for c in _COLUMNS]


def emit_csv(rows: list[ScanRow], *, timings: bool = False) -> str:
    lines = [CSV_HEADER]
    for row in rows:
        lines.append(",".join("" if c is None else str(c) for c in _row_cells(row, timings)))
    return "\n".join(lines) + "\n"


def emit_json(rows: list[ScanRow], *, timings: bool = False) -> str:
    payload = []
    for row in rows:
        data = asdict(row)
        data["ms"] = data["ms"] if timings else 0
        payload.append(data)
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def emit_md(rows: list[ScanRow], *, timings: bool = False) -> str:
    header = "| " + " | ".join(_COLUMNS) + " |"
    rule = "|" + "|".join(" --- " for _ in _COLUMNS) + "|"
    lines = [header, rule]
    for row in rows:
        cells = ["" if c is None else str(c) for c in _row_cells(row, timings)]
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Structure check for the cycle-modulo-line quotient module.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComponentReport:
    t: int
    wrap_window: tuple[int, ...]
    forced_var: int
    residual_count: int
    minimal_nonfaces: tuple[tuple[int, ...], ...]
    predicted_nonfaces: tuple[tuple[int, ...], ...]
    residual_depth: int
    component_depth: int


@dataclass(frozen=True)
class Prop16Report:
    n: int
    m: int
    ok: bool
    problems: tuple[str, ...]
    components: tuple[ComponentReport, ...]
    derived_depth: int | None
    claimed_depth: int
    derived_equals_claimed: bool | None


def _wrap_window(n: int, m: int, t: int) -> frozenset[int]:
    return frozenset(range(n - m + t + 1, n + 1)) | frozenset(range(1, t + 1))


def prop16_structure_check(n: int, m: int) -> Prop16Report:
    """Decompose the cycle/line quotient into wrap-window components.

    Every squarefree multidegree of the module must contain one of the m-1
    windows that cross the n-to-1 seam and no non-crossing window; it is
    assigned to the smallest crossing window it contains.  Per component the
    residual sets (window removed) must form a downward-closed family over the
    variables strictly between the window and its forced excluded variable,
    with minimal non-faces that are consecutive runs: one truncated run at the
    left edge plus full-length runs, whenever those fit inside the ambient.
    The derived depth is the minimum over components of the residual quotient
    depth plus the window size, reported next to psi + m - 1 for comparison.
    """
    if not (2 <= m < n <= STRUCTURE_N_MAX):
        raise InputError(f"need 2 <= m < n <= {STRUCTURE_N_MAX}, got (n, m) = ({n}, {m})")
    rec = formula_table(n, m)
    claimed = rec.psi + m - 1

    line_windows = [frozenset(range(i, i + m)) for i in range(1, n - m + 2)]
    cyclic_windows = [
        frozenset(((i + d - 1) % n) + 1 for d in range(m)) for i in range(1, n + 1)
    ]
    wraps = {t: _wrap_window(n, m, t) for t in range(1, m)}

    problems: list[str] = []
    residuals: dict[int, set[frozenset[int]]] = {t: set() for t in range(1, m)}
    for mask in range(1 << n):
        fset = frozenset(j + 1 for j in range(n) if mask >> j & 1)
        in_cycle = any(w <= fset for w in cyclic_windows)
        in_line = any(w <= fset for w in line_windows)
        if not in_cycle or in_line:
            continue
        assigned = next((t for t in range(1, m) if wraps[t] <= fset), None)
        if assigned is None:
            problems.append(f"non-assignable multidegree {sorted(fset)}")
            continue
        residuals[assigned].add(fset - wraps[assigned])

    components = []
    for t in range(1, m):
        forced = n - m + t
        ambient_vars = tuple(range(t + 1, n - m + t))  # excludes the forced variable
        ambient_set = frozenset(ambient_vars)
        family = residuals[t]
        if not family:
            problems.append(f"component {t} is empty")
            continue
        for gset in family:
            if forced in gset:
                problems.append(f"component {t}: residual {sorted(gset)} uses x{forced}")
            if not gset <= ambient_set:
                problems.append(f"component {t}: residual {sorted(gset)} leaves the ambient")
            for v in gset:
                if gset - {v} not in family:
                    problems.append(f"component {t} is not downward closed at {sorted(gset)}")
                    break

        subsets = []
        for smask in range(1 << len(ambient_vars)):
            subsets.append(frozenset(v for i, v in enumerate(ambient_vars) if smask >> i & 1))
        nonfaces = []
        for s in subsets:
            if s in family:
                continue
            if all((s - {v}) in family for v in s):
                nonfaces.append(tuple(sorted(s)))
        nonfaces.sort()

        predicted = []
        if m <= n - m + t - 1:
            predicted.append(tuple(range(t + 1, m + 1)))
        for i in range(t + 2, n - 2 * m + t + 1):
            predicted.append(tuple(range(i, i + m)))
        predicted.sort()
        if nonfaces != predicted:
            problems.append(
                f"component {t}: minimal non-faces {nonfaces} differ from expected {predicted}"
            )

        if not ambient_vars:
            residual_depth = 0
        elif not nonfaces:
            residual_depth = len(ambient_vars)
        else:
            position = {v: i + 1 for i, v in enumerate(ambient_vars)}
            gens = [monomial(len(ambient_vars), [position[v] for v in nf]) for nf in nonfaces]
            residual_depth = depth_squarefree(minimalize(gens, len(ambient_vars)))
        components.append(
            ComponentReport(
                t=t,
                wrap_window=tuple(sorted(wraps[t])),
                forced_var=forced,
                residual_count=len(family),
                minimal_nonfaces=tuple(nonfaces),
                predicted_nonfaces=tuple(predicted),
                residual_depth=residual_depth,
                component_depth=residual_depth + m,
            )
        )

    derived = min((c.component_depth for c in components), default=None)
    return Prop16Report(
        n=n,
        m=m,
        ok=not problems,
        problems=tuple(problems),
        components=tuple(components),
        derived_depth=derived,
        claimed_depth=claimed,
        derived_equals_claimed=None if derived is None else derived == claimed,
    )


# ---------------------------------------------------------------------------
# Exact-sequence checks along the colon/extension tower.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SequenceStep:
    k: int
    sdepth_sub: int | None
    sdepth_mid: int | None
    sdepth_quot: int | None
    depth_sub: int
    depth_mid: int
    depth_quot: int
    sdepth_ok: bool | None
    depth_ok: bool


@dataclass(frozen=True)
class SequenceReport:
    n: int
    m: int
    steps: tuple[SequenceStep, ...]
    final_ok: bool | None
    relabel_ok: bool | None
    ok: bool
    unknown: bool


def sequence_check(
    n: int,
    m: int,
    *,
    time_limit_s: float = DEFAULT_TIME_LIMIT_S,
) -> SequenceReport:
    """Instance checks of the short exact sequences 0 -> S/(L:x) -> S/L -> S/(L,x) -> 0.

    Along the tower, both computed invariants of the middle term must dominate
    the minimum of the outer terms' values.  For n = m + 1 the single colon
    step must also reproduce the one-smaller cycle family after renaming.
    """
    if not 2 <= m < n:
        raise InputError(f"need 2 <= m < n, got (n, m) = ({n}, {m})")

    sdepth_cache: dict[MonomialIdeal, int | None] = {}

    def sdepth_ring(ideal):
        if ideal not in sdepth_cache:
            try:
                sdepth_cache[ideal] = _certified_sdepth(
                    ring_quotient(ideal), time_limit_s, DEFAULT_POSET_CAP
                )
            except TimeLimitExceededError:
                sdepth_cache[ideal] = None
        return sdepth_cache[ideal]

    steps = []
    relabel_ok = None
    cycle = cycle_path_ideal(n, m)

    if n == m + 1:
        xn = variable(n, n)
        sub = colon(cycle, xn)
        quot = add_generators(cycle, [xn])
        identity = {j: j for j in range(1, n)}
        relabel_ok = relabel(sub, identity, n - 1) == cycle_path_ideal(n - 1, n - 2)
        triples = [(0, sub, cycle, quot)]
        final_pair = None
    else:
        tower = proof_tower(n, m)
        triples = [
            (k, tower[k + 1][0], tower[k][0], tower[k][1]) for k in range(m - 1)
        ]
        final_pair = (tower[m - 1][0], cycle)

    for k, sub, mid, quot in triples:
        d_sub, d_mid, d_quot = (depth_squarefree(i) for i in (sub, mid, quot))
        s_sub, s_mid, s_quot = (sdepth_ring(i) for i in (sub, mid, quot))
        sdepth_ok = None
        if None not in (s_sub, s_mid, s_quot):
            sdepth_ok = s_mid >= min(s_sub, s_quot)
        steps.append(
            SequenceStep(
                k=k,
                sdepth_sub=s_sub,
                sdepth_mid=s_mid,
                sdepth_quot=s_quot,
                depth_sub=d_sub,
                depth_mid=d_mid,
                depth_quot=d_quot,
                sdepth_ok=sdepth_ok,
                depth_ok=d_mid >= min(d_sub, d_quot),
            )
        )

    final_ok = None
    if final_pair is not None:
        s_top = sdepth_ring(final_pair[0])
        s_cycle = sdepth_ring(final_pair[1])
        if None not in (s_top, s_cycle):
            final_ok = s_top >= s_cycle

    unknown = any(step.sdepth_ok is None for step in steps) or (
        final_pair is not None and final_ok is None
    )
    ok = (
        all(step.depth_ok for step in steps)
        and all(step.sdepth_ok is not False for step in steps)
        and final_ok is not False
        and relabel_ok is not False
    )
    return SequenceReport(
        n=n,
        m=m,
        steps=tuple(steps),
        final_ok=final_ok,
        relabel_ok=relabel_ok,
        ok=ok,
        unknown=unknown,
    )
