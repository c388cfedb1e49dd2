"""Self-verification: engine values against oracles and axioms.

Every check returns a :class:`CheckResult`; :func:`run` collects them into
a JSON-friendly report. ``fast`` skips the degree-3 quintic run.
"""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .algebra import Geometry
from .ambient import evaluate_ambient, wdvv_residual
from .cache import CacheConflict, CacheStore, loads, merge
from .keys import (
    Insertion,
    InvariantKey,
    Kind,
    ambient_key,
    hyp_key,
    is_trivially_zero,
    rel_key,
)
from .oracles import (
    invert_multiple_covers,
    kontsevich_p2,
    quintic_mirror,
    schubert_lines,
)
from .relative import (
    Engine,
    dterm_value,
    enumerate_dterms,
    enumerate_dterms_multiset,
    extract_hypersurface,
)

__all__ = ["CheckResult", "CHECKS", "run", "run_check", "sweep_keys", "cy_table"]


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    detail: str
    seconds: float


def sweep_keys(kind: Kind, N: int, l: int | None, d: int, nmax: int, psi=True, m=None, gate=True):
    """All dimension-matching keys with at most ``nmax`` points.

    Exponents range over all classes; a psi power is allowed at slot 1
    when ``psi`` is true. ``gate=False`` keeps relative keys beyond the
    contact budget.
    """
    top = N - 1 if kind is Kind.HYPERSURFACE else N
    seen = {}
    for n in range(nmax + 1):
        if n == 0:
            cands = [()]
        else:
            cands = []
            for tail in combinations_with_replacement(range(top, -1, -1), n - 1):
                for first in range(top + 1):
                    for k in range(0, (d * (N + 1) + N + n) if psi else 1):
                        cands.append(((first, k), *((e, 0) for e in tail)))
        for ins in cands:
            if kind is Kind.HYPERSURFACE:
                key = hyp_key(N, l, d, ins)
            elif kind is Kind.RELATIVE:
                if m and not ins:
                    continue
                key = rel_key(N, l, d, m, ins)
            else:
                key = ambient_key(N, d, ins)
            if not is_trivially_zero(key, gate) and key not in seen:
                seen[key] = None
    return list(seen)


def cy_table(engine: Engine, N: int, l: int, dmax: int):
    """Rows (d, I_d, n_d) for a Calabi-Yau threefold hypersurface."""
    geom = Geometry(N, l)
    if not geom.is_calabi_yau or N != 4:
        raise ValueError(
            f"(N={N}, l={l}) is not a Calabi-Yau threefold hypersurface; "
            "use the 'invariant' command for individual invariants"
        )
    I = {d: engine.evaluate(hyp_key(N, l, d, [])) for d in range(1, dmax + 1)}
    n = invert_multiple_covers(I)
    return [(d, I[d], n[d]) for d in range(1, dmax + 1)]


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


def _budget(ok, detail, seconds, limit):
    if seconds > limit:
        return False, f"{detail}; took {seconds:.1f}s > {limit}s"
    return ok, detail


# -- criteria -----------------------------------------------------------------

QUINTIC_D1 = hyp_key(4, 5, 1, [(1, 0)])
CUBIC_LINES = hyp_key(3, 3, 1, [(1, 0)])
TANGENT_CONICS = rel_key(2, 1, 2, 2, [(0, 0)] + [(2, 0)] * 4)


def check_quintic_lines(engine=None):
    engine = engine or Engine()

    def body():
        v = engine.evaluate(QUINTIC_D1)
        ref = schubert_lines(4, 5)
        return v == ref, f"engine {v}, Schubert {ref}"

    ok, detail, s = _timed(body)
    return CheckResult(1, "quintic-degree-1", *_budget(ok, detail, s, 30), s)


def _quintic_degree(criterion, d, limit, engine=None):
    engine = engine or Engine()

    def body():
        rows = cy_table(engine, 4, 5, d)
        I_ref, n_ref = quintic_mirror(d)
        _, I_d, n_d = rows[-1]
        ok = (
            I_d == I_ref[-1]
            and n_d.denominator == 1
            and n_d == n_ref[-1]
            and [r[2] for r in rows] == n_ref
        )
        return ok, f"I_{d} = {I_d} (mirror {I_ref[-1]}), n_{d} = {n_d} (mirror {n_ref[-1]})"

    ok, detail, s = _timed(body)
    return CheckResult(criterion, f"quintic-degree-{d}", *_budget(ok, detail, s, limit), s)


def check_quintic_d2(engine=None):
    return _quintic_degree(2, 2, 600, engine)


def check_quintic_d3(engine=None):
    return _quintic_degree(3, 3, 3600, engine)


def check_p2_kontsevich(engine=None):
    engine = engine or Engine()

    def body():
        got = [
            engine.evaluate(ambient_key(2, d, [(2, 0)] * (3 * d - 1)))
            for d in range(1, 5)
        ]
        ref = kontsevich_p2(4)
        return got == ref, f"engine {[str(x) for x in got]}, Kontsevich {ref}"

    ok, detail, s = _timed(body)
    return CheckResult(4, "p2-kontsevich", *_budget(ok, detail, s, 10), s)


def l1_sweep_pairs():
    for N in (2, 3, 4):
        for d in (0, 1, 2):
            for key in sweep_keys(Kind.HYPERSURFACE, N, 1, d, 4):
                yield key, InvariantKey(Kind.AMBIENT, N - 1, d, key.insertions)


def check_l1_sweep(engine=None):
    engine = engine or Engine()

    def body():
        count, bad = 0, []
        for yk, ak in l1_sweep_pairs():
            count += 1
            if engine.evaluate(yk) != engine.evaluate(ak):
                bad.append(str(yk))
        return not bad, f"{count} keys, {len(bad)} mismatches {bad[:3]}"

    ok, detail, s = _timed(body)
    return CheckResult(5, "hyperplane-consistency", *_budget(ok, detail, s, 300), s)


def check_cubic_lines(engine=None):
    engine = engine or Engine()

    def body():
        v = engine.evaluate(CUBIC_LINES)
        ref = schubert_lines(3, 3)
        return v == ref, f"engine {v}, Schubert {ref}"

    ok, detail, s = _timed(body)
    return CheckResult(6, "cubic-surface-lines", *_budget(ok, detail, s, 10), s)


def elliptic_keys():
    return [k for d in (1, 2) for k in sweep_keys(Kind.HYPERSURFACE, 2, 3, d, 3)]


def check_elliptic(engine=None):
    engine = engine or Engine()

    def body():
        keys = elliptic_keys()
        bad = [str(k) for k in keys if engine.evaluate(k) != 0]
        return bool(keys) and not bad, f"{len(keys)} keys, nonzero: {bad[:3]}"

    ok, detail, s = _timed(body)
    return CheckResult(7, "elliptic-vanishing", ok, detail, s)


def check_tangent_conics(engine=None):
    engine = engine or Engine()

    def body():
        v = engine.evaluate(TANGENT_CONICS)
        return v == 2, f"engine {v}, expected 2"

    ok, detail, s = _timed(body)
    return CheckResult(8, "tangent-conics", ok, detail, s)


def wdvv_instances(limit=None):
    """Distinct (N, d, A, B, C, D, rest) with total codimension vdim - 1."""
    out = {}
    for N in (2, 3):
        for d in (1, 2, 3):
            for n in range(4, 3 * d + 3):
                target = d * (N + 1) + N - 3 + n - 1
                for exps in combinations_with_replacement(range(N, 0, -1), n):
                    if sum(exps) != target:
                        continue
                    for head in (exps[:4], exps[-4:]):
                        rest = list(exps)
                        for x in head:
                            rest.remove(x)
                        a, b, c, e = head
                        for A, B, C, D in ((a, b, c, e), (a, c, b, e), (a, e, b, c)):
                            out[(N, d, A, B, C, D, tuple(rest))] = None
    inst = [(*i[:6], list(i[6])) for i in out]
    return inst[:limit] if limit else inst


def check_wdvv(engine=None):
    engine = engine or Engine()

    def body():
        inst = wdvv_instances()
        bad = [i for i in inst if wdvv_residual(*i, engine) != 0]
        return len(inst) >= 100 and not bad, f"{len(inst)} instances, {len(bad)} nonzero"

    ok, detail, s = _timed(body)
    return CheckResult(9, "wdvv-residual", ok, detail, s)


def _axiom_keys():
    ambient = [k for N in (2, 3) for d in (1, 2) for k in sweep_keys(Kind.AMBIENT, N, None, d, 3)]
    hyp = [yk for yk, _ in l1_sweep_pairs() if yk.n <= 3]
    hyp += [k for k in elliptic_keys()]
    hyp += [k for d in (1, 2) for k in sweep_keys(Kind.HYPERSURFACE, 3, 2, d, 2)]
    hyp += [k for k in sweep_keys(Kind.HYPERSURFACE, 4, 5, 1, 2)]
    return ambient, hyp


def _with(key, extra):
    ins = [*key.insertions, extra]
    if key.kind is Kind.HYPERSURFACE:
        return hyp_key(key.N, key.l, key.d, ins)
    return ambient_key(key.N, key.d, ins)


def _lowered(key, dexp):
    g1 = key.insertions[0]
    ins = [(g1.exp + dexp, g1.psi - 1), *key.insertions[1:]]
    if key.kind is Kind.HYPERSURFACE:
        return hyp_key(key.N, key.l, key.d, ins)
    return ambient_key(key.N, key.d, ins)


def axiom_failures(engine, keys):
    """Divisor and string equations on every key with d > 0."""
    bad = []
    for key in keys:
        if key.d == 0:
            continue
        v = engine.evaluate(key)
        div = key.d * v
        string = Fraction(0)
        if key.psi:
            div += engine.evaluate(_lowered(key, 1))
            string = engine.evaluate(_lowered(key, 0))
        if engine.evaluate(_with(key, (1, 0))) != div:
            bad.append(f"divisor {key}")
        if engine.evaluate(_with(key, (0, 0))) != string:
            bad.append(f"string {key}")
    return bad


def permutation_failures(engine, keys):
    """Re-run the top-level step with every distinct rotation of primary keys."""
    bad = []
    for key in keys:
        if key.psi or key.n < 2 or key.d == 0:
            continue
        ref = engine.evaluate(key)
        ins = key.insertions
        for i in range(1, key.n):
            if ins[i] == ins[0]:
                continue
            rot = ins[i:] + ins[:i]
            raw = InvariantKey(key.kind, key.N, key.d, rot, l=key.l)
            if key.kind is Kind.HYPERSURFACE:
                got = extract_hypersurface(raw, engine)
            else:
                got = evaluate_ambient(raw, engine)
            if got != ref:
                bad.append(f"{key} rotated by {i}")
    return bad


def check_axioms(engine=None):
    engine = engine or Engine()

    def body():
        ambient, hyp = _axiom_keys()
        bad = axiom_failures(engine, ambient + hyp)
        bad += permutation_failures(engine, ambient + hyp)
        for key in ambient:
            rel = InvariantKey(Kind.RELATIVE, key.N, key.d, key.insertions, l=1, m=0)
            if key.N >= 2 and engine.evaluate(rel) != engine.evaluate(key):
                bad.append(f"m=0 {key}")
        ungated = Engine(contact_gate=False)
        over = 0
        for N, l, d in ((2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1), (3, 2, 1)):
            for m in (l * d + 1, l * d + 2):
                for rk in sweep_keys(Kind.RELATIVE, N, l, d, 3, m=m, gate=False):
                    over += 1
                    if engine.evaluate(rk) != 0 or ungated.evaluate(rk) != 0:
                        bad.append(f"overflow {rk}")
        n = len(ambient) + len(hyp)
        return not bad and over > 0, f"{n} base keys, {over} overflow keys, failures {bad[:3]}"

    ok, detail, s = _timed(body)
    return CheckResult(10, "axioms", ok, detail, s)


def acceptance_keys(level="fast"):
    keys = [QUINTIC_D1, CUBIC_LINES, TANGENT_CONICS]
    keys += [ambient_key(2, d, [(2, 0)] * (3 * d - 1)) for d in range(1, 5)]
    keys += [hyp_key(4, 5, d, []) for d in range(1, 3 if level == "fast" else 4)]
    keys += elliptic_keys()
    return keys


def check_cache_determinism(engine=None):
    def body():
        keys = acceptance_keys()
        cold = Engine()
        v_cold = [cold.evaluate(k) for k in keys]
        text = cold.store.dumps()

        warm = Engine(loads(text))
        v_warm = [warm.evaluate(k) for k in keys]
        text_warm = warm.store.dumps()

        items = cold.store.items()
        half_a = CacheStore(dict(items[::2]))
        half_b = CacheStore(dict(items[1::2]))
        merged = Engine(merge(half_a, half_b))
        v_merged = [merged.evaluate(k) for k in keys]
        text_merged = merged.store.dumps()

        ok = (
            v_cold == v_warm == v_merged
            and text == text_warm == text_merged
            and warm.cache_hits > 0
        )
        return ok, f"{len(keys)} keys, {len(items)} cache entries, warm hits {warm.cache_hits}"

    ok, detail, s = _timed(body)
    return CheckResult(11, "cache-determinism", ok, detail, s)


def check_enumerators(engine=None, level="fast"):
    def body():
        rec = Engine(record_dterms=True)
        for key in acceptance_keys(level):
            rec.evaluate(key)
        for yk, _ in l1_sweep_pairs():
            rec.evaluate(yk)
        bad = 0
        for geom, d, m_red, ins, skip_full in sorted(rec.dterm_log, key=repr):
            sums = []
            for enum in (enumerate_dterms, enumerate_dterms_multiset):
                total = Fraction(0)
                for comp in enum(geom, d, m_red, ins):
                    if skip_full and comp.r == 0:
                        continue
                    total += dterm_value(geom, comp, ins, rec)
                sums.append(total)
            bad += sums[0] != sums[1]
        n = len(rec.dterm_log)
        return n > 0 and not bad, f"{n} reductions, {bad} disagreements"

    ok, detail, s = _timed(body)
    return CheckResult(12, "enumerator-equivalence", ok, detail, s)


CHECKS = {
    1: check_quintic_lines,
    2: check_quintic_d2,
    3: check_quintic_d3,
    4: check_p2_kontsevich,
    5: check_l1_sweep,
    6: check_cubic_lines,
    7: check_elliptic,
    8: check_tangent_conics,
    9: check_wdvv,
    10: check_axioms,
    11: check_cache_determinism,
    12: check_enumerators,
}

FAST_SKIP = {3}


def run_check(criterion: int, level: str = "full") -> CheckResult:
    fn = CHECKS[criterion]
    if criterion == 12:
        return fn(level=level)
    return fn()


def check_against_store(store: CacheStore, level="fast") -> CheckResult:
    """Recompute the acceptance keys cold and merge into ``store``."""
    def body():
        fresh = Engine()
        for key in acceptance_keys(level):
            fresh.evaluate(key)
        try:
            merge(store, fresh.store)
        except CacheConflict as exc:
            return False, f"cache conflict: {exc}"
        return True, f"{len(store)} stored entries agree with a cold run"

    ok, detail, s = _timed(body)
    return CheckResult(0, "cache-consistency", ok, detail, s)


def run(level: str = "fast", store: CacheStore | None = None) -> dict:
    if level not in ("fast", "full"):
        raise ValueError(f"unknown level {level!r}")
    results = []
    for criterion in sorted(CHECKS):
        if level == "fast" and criterion in FAST_SKIP:
            continue
        results.append(run_check(criterion, level))
    if store is not None:
        results.append(check_against_store(store, level))
    return {
        "level": level,
        "ok": all(r.passed for r in results),
        "checks": [
            {**asdict(r), "status": "pass" if r.passed else "fail", "seconds": round(r.seconds, 3)}
            for r in results
        ],
    }
