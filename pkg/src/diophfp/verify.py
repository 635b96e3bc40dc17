"""Named cross-checks of every counting identity, grouped into suites.

A suite sweeps a range of primes; each prime's work is independent and runs
in a worker process when ``jobs > 1``. Results are merged in prime order, so
a report's content depends only on its configuration.
"""

from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import ceil, gcd
from typing import Callable, Iterable

from . import __version__
from .dioph import (
    asymptotic_within,
    build_graph,
    construct_tuple,
    count_tuples,
    extension_count,
    is_diophantine,
    iter_cliques,
    n2_formula,
    n3_formula,
    n4_formula,
    reduce_seed_tuple,
    SEED_TUPLES,
    theorem_bound,
    weil_extension_bound,
)
from .ec_fibers import (
    Fiber,
    UnclassifiedCase,
    admissible_triple,
    dt_points,
    dt_to_et,
    et_to_dt,
    ec_mul,
    fiber_table,
    group_points,
    involution,
    multiples_of_R,
    quadruple_to_triple,
    t_sets,
    t_sets_parametric,
    w1,
    w1_bruteforce,
    w_bruteforce,
    w_table_from_fibers,
)
from .ff_core import odd_primes, prime_context, quad_char_sum
from .fiber_identities import (
    COVERS,
    aggregate_24w,
    conductor32_point_count,
    cover_degree_relations,
    cover_trace,
    cover_trace_prediction,
    point_sums,
    t1_sums,
    t2_sums,
    t3_sums,
    t5_t4_counts,
)
from .modforms import (
    CM_FORMS,
    WEIGHTS,
    cm_coeff,
    coeff_bundle,
    default_cache,
    ExpansionCache,
    hecke_trace_s3,
)

SUITES = ("tuples", "forms", "fibers", "tsets")


@dataclass(frozen=True)
class Failure:
    p: int
    expected: object
    actual: object
    context: dict = field(default_factory=dict)


@dataclass
class CheckResult:
    name: str
    p_range: tuple[int, int]
    failures: list[Failure] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "fail" if self.failures else "pass"

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "p_range": list(self.p_range),
            "status": self.status,
            "failures": [asdict(f) for f in self.failures],
        }


@dataclass(frozen=True)
class VerifyConfig:
    pmax_pairs: int = 499
    pmax_quads: int = 199
    pmax_fibers: int = 199
    w_brute_max: int = 61
    pmax_forms: int = 10_000
    pmax_existence: int = 9973
    jobs: int = 1

    @classmethod
    def capped(cls, pmax: int | None, jobs: int = 1) -> "VerifyConfig":
        """Defaults, each bound lowered to ``pmax`` when given."""
        base = cls(jobs=jobs)
        if pmax is None:
            return base
        kw = {k: min(v, pmax) for k, v in asdict(base).items() if k != "jobs"}
        return cls(jobs=jobs, **kw)


@dataclass
class VerificationReport:
    config: dict
    results: list[CheckResult]
    wall_time: dict[str, float] = field(default_factory=dict)
    version: str = __version__

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.results)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "results": [r.to_dict() for r in self.results],
            "wall_time": self.wall_time,
        }


# sweep machinery ---------------------------------------------------------------

# A per-prime worker returns {check name: list of (expected, actual, context)}
# for every check it applied at that prime (an empty list means pass).
PrimeRows = dict[str, list[tuple[object, object, dict]]]


def _sweep(worker: Callable[..., PrimeRows], primes: Iterable[int], jobs: int, *args) -> list[CheckResult]:
    primes = list(primes)
    if jobs > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outs = list(ex.map(worker, primes, *[[a] * len(primes) for a in args]))
    else:
        outs = [worker(p, *args) for p in primes]
    results: dict[str, CheckResult] = {}
    for p, rows in zip(primes, outs):
        for name, fails in rows.items():
            res = results.get(name)
            if res is None:
                res = results[name] = CheckResult(name, (p, p))
            res.p_range = (min(res.p_range[0], p), max(res.p_range[1], p))
            res.failures.extend(Failure(p, e, a, ctx) for e, a, ctx in fails)
    return list(results.values())


def _cmp(expected, actual, **context) -> list[tuple[object, object, dict]]:
    return [] if expected == actual else [(expected, actual, context)]


# tuples ------------------------------------------------------------------------

def _tuples_at(p: int, cfg: VerifyConfig) -> PrimeRows:
    rows: PrimeRows = {}
    ctx = prime_context(p)
    if p <= cfg.pmax_pairs:
        g = build_graph(ctx)
        rows["pair_count_formula"] = _cmp(n2_formula(p), count_tuples(g, 2).count, m=2)
        rows["triple_count_formula"] = _cmp(n3_formula(p), count_tuples(g, 3).count, m=3)
        if p <= cfg.pmax_quads:
            bundle = coeff_bundle(p)
            rows["quadruple_count_modular_formula"] = _cmp(
                n4_formula(p, bundle.q), count_tuples(g, 4).count, m=4, q=bundle.q
            )
            rows["quadratic_character_sum"] = _char_sum_rows(p)
    if 11 <= p <= cfg.pmax_existence:
        rows["seed_quadruple_reduction"] = _seed_rows(p)
    if 101 <= p <= cfg.pmax_existence:
        rows["asymptotic_density"] = _asymptotic_rows(p)
    return rows


def _char_sum_rows(p: int) -> list:
    ctx = prime_context(p)
    rng = random.Random(p)
    out = []
    done = 0
    while done < 100:
        al, be, ga = rng.randrange(1, p), rng.randrange(p), rng.randrange(p)
        if (be * be - 4 * al * ga) % p == 0:
            continue
        done += 1
        out += _cmp(-ctx.legendre(al), quad_char_sum(al, be, ga, ctx), alpha=al, beta=be, gamma=ga)
    return out


def _seed_rows(p: int) -> list:
    ctx = prime_context(p)
    for seed in SEED_TUPLES[4]:
        red = reduce_seed_tuple(seed, ctx)
        if red is not None and is_diophantine(red, ctx):
            return []
    return [("some seed reduces to a quadruple", None, {})]


def _asymptotic_rows(p: int) -> list:
    bundle = coeff_bundle(p)
    out = []
    for m, n in ((2, n2_formula(p)), (3, n3_formula(p)), (4, n4_formula(p, bundle.q))):
        if not asymptotic_within(p, m, n):
            out.append(("|m! 2^C(m,2) N - p^m| <= 40 p^(m-1/2)", n, {"m": m}))
    return out


def existence_primes(pmax: int) -> list[tuple[int, int]]:
    """(m, p) for m = 2..5 and the three smallest primes above the bound."""
    out = []
    for m in range(2, 6):
        ps = odd_primes(theorem_bound(m) + 200, theorem_bound(m) + 1)[:3]
        out += [(m, p) for p in ps if p <= pmax]
    return out


def _existence_checks(cfg: VerifyConfig) -> list[CheckResult]:
    cons = CheckResult("greedy_existence_construction", (0, 0))
    ext = CheckResult("extension_count_lower_bound", (0, 0))
    pairs = existence_primes(cfg.pmax_existence)
    if not pairs:
        return []
    lo, hi = min(p for _, p in pairs), max(p for _, p in pairs)
    cons.p_range = ext.p_range = (lo, hi)
    for m, p in pairs:
        ctx = prime_context(p)
        tup = construct_tuple(ctx, m)
        if tup is None or len(tup) != m or not is_diophantine(tup, ctx):
            cons.failures.append(Failure(p, f"Diophantine {m}-tuple", tup, {"m": m}))
            continue
        # every prefix is itself a Diophantine tuple; check the count bound on each
        for k in range(2, m + 1):
            bound = ceil(weil_extension_bound(p, k))
            got = extension_count(tup[:k], ctx)
            if got < bound:
                ext.failures.append(Failure(p, f">= {bound}", got, {"tuple": list(tup[:k])}))
    return [cons, ext]


def suite_tuples(cfg: VerifyConfig) -> list[CheckResult]:
    hi = max(cfg.pmax_pairs, cfg.pmax_existence)
    results = _sweep(_tuples_at, odd_primes(hi), cfg.jobs, cfg)
    return results + _existence_checks(cfg)


# forms -------------------------------------------------------------------------

def suite_forms(cfg: VerifyConfig, cache: ExpansionCache | None = None) -> list[CheckResult]:
    n_max = max(cfg.pmax_forms, 97 * 97, 10_000)
    cache = cache or default_cache(n_max)
    primes = odd_primes(cfg.pmax_forms)
    if not primes:
        return []
    rng = (primes[0], primes[-1])
    leading = CheckResult("leading_coefficient_one", (1, 1))
    cm = CheckResult("cm_closed_forms_vs_eta", rng)
    vanish = CheckResult("cm_vanishing_classes", rng)
    deligne = CheckResult("deligne_bounds", rng)
    x48 = CheckResult("conductor32_point_count", rng)
    qcons = CheckResult("q_value_eta_vs_cm", rng)
    for f in CM_FORMS + ("f4",):
        if cache.coeff(f, 1) != 1:
            leading.failures.append(Failure(1, 1, cache.coeff(f, 1), {"form": f}))
    zero_classes = {"f1": (3, 7), "f2": (5, 7), "f3": (3, 7), "f5": (3, 7)}
    for p in primes:
        for f in CM_FORMS:
            c = cache.coeff(f, p)
            want = cm_coeff(f, p)
            if c != want:
                cm.failures.append(Failure(p, c, want, {"form": f}))
            if p % 8 in zero_classes[f] and c != 0:
                vanish.failures.append(Failure(p, 0, c, {"form": f}))
        b = coeff_bundle(p, cache=cache)
        ok = (
            b.a * b.a <= 4 * p
            and abs(b.b) <= 2 * p
            and abs(b.c) <= 2 * p
            and b.d * b.d <= 4 * p**3
            and abs(b.e) <= 2 * p * p
        )
        if not ok:
            deligne.failures.append(Failure(p, "within bounds", [b.a, b.b, b.c, b.d, b.e]))
        n_c = conductor32_point_count(p)
        if n_c != p + 1 - b.a:
            x48.failures.append(Failure(p, p + 1 - b.a, n_c))
        q_cm = coeff_bundle(p, "cm", cache).q
        if q_cm != b.q:
            qcons.failures.append(Failure(p, b.q, q_cm))
    return [leading, cm, vanish, deligne, x48, qcons] + _hecke_checks(cfg, cache)


def _hecke_checks(cfg: VerifyConfig, cache: ExpansionCache) -> list[CheckResult]:
    out = []
    hp = odd_primes(min(97, cfg.pmax_forms))
    if hp:
        rec = CheckResult("hecke_prime_square_recursion", (hp[0], hp[-1]))
        for p in hp:
            for f in ("f1", "f4"):
                c = cache.coeff(f, p)
                want = c * c - p ** (WEIGHTS[f] - 1)
                got = cache.coeff(f, p * p)
                if got != want:
                    rec.failures.append(Failure(p, want, got, {"form": f}))
        out.append(rec)
    top = min(100, max(cfg.pmax_forms, 2))
    mult = CheckResult("hecke_multiplicativity", (1, top))
    for f in CM_FORMS + ("f4",):
        for m in range(2, top + 1):
            for n in range(m + 1, top + 1):
                if gcd(m, n) == 1 and m * n <= cache.n_max:
                    got = cache.coeff(f, m * n)
                    want = cache.coeff(f, m) * cache.coeff(f, n)
                    if got != want:
                        mult.failures.append(Failure(m * n, want, got, {"form": f, "m": m, "n": n}))
    out.append(mult)
    return out


# fibers and T-sets ------------------------------------------------------------

def _table(ctx) -> list:
    try:
        return fiber_table(ctx)
    except UnclassifiedCase:
        # a flag pattern without a closed form: take W(t) from brute force
        return fiber_table(ctx, w_bruteforce(ctx).w_values)


def _fibers_at(p: int, cfg: VerifyConfig) -> PrimeRows:
    ctx = prime_context(p)
    table = _table(ctx)
    bundle = coeff_bundle(p)
    P = {r.t: r.P for r in table}
    rows: PrimeRows = {}

    bad = [(r.t, r.P) for r in table if r.P % 4 or (p + 1 - r.P) ** 2 > 4 * p]
    rows["hasse_bound_and_4_divides_order"] = [("4 | P and Hasse", bad, {})] if bad else []

    observed = (sum(P.values()), sum(v * v for v in P.values()), sum(v**3 for v in P.values()))
    rows["fiber_point_power_sums"] = _cmp(list(point_sums(p, bundle.e)), list(observed), e=bundle.e)

    rows["fiber_case_dispatch"] = [
        ("a closed-form case", "unclassified", asdict(r)) for r in table if r.case == "unclassified"
    ]
    odd = [r.t for r in table if r.halvable and not r.xR_square]
    rows["halvable_implies_xR_square"] = [("none", odd, {})] if odd else []

    fib = w_table_from_fibers(ctx, table).total()
    if p <= cfg.pmax_quads:
        brute = count_tuples(build_graph(ctx), 4).count
        rows["fiber_route_quadruple_count"] = _cmp(brute, fib, formula=n4_formula(p, bundle.q))
        rows["singular_fiber_w1"] = _cmp(w1(p), w1_bruteforce(ctx))
    rows["aggregate_w_identity"] = _cmp(24 * sum(r.W for r in table), aggregate_24w(p, table))

    if p <= cfg.w_brute_max:
        wt = w_bruteforce(ctx)
        ft = w_table_from_fibers(ctx, table)
        diffs = [
            (t, wt.w_values.get(t, 0), ft.w_values.get(t, 0))
            for t in range(2, p)
            if wt.w_values.get(t, 0) != ft.w_values.get(t, 0)
        ]
        rows["per_fiber_w_vs_buckets"] = [("equal buckets", diffs, {})] if diffs else []
        rows["curve_correspondence"] = _correspondence_rows(ctx, P)
        rows["admissible_triples_from_quadruples"] = _admissible_rows(ctx)

    if p % 4 == 3:
        full4 = [t for t in P if _has_full_4_torsion(Fiber(ctx, t))]
        rows["no_full_4_torsion_p3"] = [("none", full4, {})] if full4 else []

    for cover in COVERS:
        rows[f"cover_trace_{cover}"] = _cmp(
            cover_trace_prediction(cover, bundle.b, bundle.c), cover_trace(p, cover, P)
        )
    rows["weight3_hecke_trace"] = _cmp(hecke_trace_s3(p), cover_trace(p, "X(2,8)", P))
    return rows


def _has_full_4_torsion(f: Fiber) -> bool:
    pts = group_points(f)
    return sum(1 for Q in pts if ec_mul(f, 4, Q) is None) == 16


def _correspondence_rows(ctx, P: dict[int, int]) -> list:
    p = ctx.p
    out = []
    for t in range(2, p):
        f = Fiber(ctx, t)
        pts = dt_points(p, t)
        if len(pts) != P[t] - 4:
            out.append((P[t] - 4, len(pts), {"t": t, "what": "#D_t"}))
        excluded = multiples_of_R(f)
        images = set()
        for xy in pts:
            Q = dt_to_et(p, t, xy)
            if not f.contains(Q) or Q in excluded or et_to_dt(f, Q) != xy:
                out.append((list(xy), Q, {"t": t, "what": "round trip"}))
            images.add(Q)
        if len(images) != len(pts):
            out.append((len(pts), len(images), {"t": t, "what": "injective"}))
    return out


def _admissible_rows(ctx) -> list:
    p = ctx.p
    out = []
    for quad in iter_cliques(build_graph(ctx), 4):
        t = quad[0] * quad[1] * quad[2] * quad[3] % p
        if t == 1:
            continue
        f, Q1, Q2, Q3 = quadruple_to_triple(p, quad)
        if not admissible_triple(f, Q1, Q2, Q3):
            out.append((True, False, {"quadruple": list(quad)}))
    return out


def _tsets_at(p: int, cfg: VerifyConfig) -> PrimeRows:
    ctx = prime_context(p)
    table = _table(ctx)
    ts = t_sets(ctx, table)
    bundle = coeff_bundle(p)
    P = {r.t: r.P for r in table}

    def psum(s, k=1):
        return sum(P[t] ** k for t in s)

    rows: PrimeRows = {
        "t1_count_and_sums": _cmp(list(t1_sums(p, bundle.d)), [len(ts.T1), psum(ts.T1), psum(ts.T1, 2)]),
        "t2_count_and_sum": _cmp(list(t2_sums(p, bundle.b, bundle.c)), [len(ts.T2), psum(ts.T2)]),
        "t3_count_and_sum": _cmp(list(t3_sums(p, bundle.b, bundle.c)), [len(ts.T3), psum(ts.T3)]),
        "t5_t4_counts": _cmp(list(t5_t4_counts(p, bundle.a)), [len(ts.T5), len(ts.T4)], a=bundle.a),
    }
    par = t_sets_parametric(ctx)
    rows["tset_parametric_vs_intrinsic"] = [
        (sorted(par[i]), sorted(s), {"set": name})
        for i, (name, s) in enumerate((("T1", ts.T1), ("T2", ts.T2), ("T3", ts.T3)))
        if par[i] != s
    ]
    lattice = (
        ts.T2 == ts.T1 & ts.T3 and ts.T4 <= ts.T3 and ts.T5 == ts.T4 & ts.T1 and ts.T0 <= ts.T1
    )
    rows["tset_containments"] = [] if lattice else [("lattice", "violated", {})]
    rows["cusp_cover_degrees"] = [
        (lhs, rhs, {"curve": k}) for k, (lhs, rhs) in cover_degree_relations(p, bundle.a, ts).items() if lhs != rhs
    ]
    inv = []
    for t in ts.T1:
        t2 = involution(t, p)
        if t2 not in ts.T1 or involution(t2, p) != t or P[t2] != P[t]:
            inv.append(t)
    rows["t1_involution"] = [("involution on T1", inv, {})] if inv else []
    if p % 4 == 3:
        rows["t0_half_of_t1_p3"] = _cmp([len(ts.T1), psum(ts.T1)], [2 * len(ts.T0), 2 * psum(ts.T0)])
        rows["t2_equals_t5_p3"] = _cmp(sorted(ts.T2), sorted(ts.T5))
    return rows


def suite_fibers(cfg: VerifyConfig) -> list[CheckResult]:
    return _sweep(_fibers_at, odd_primes(cfg.pmax_fibers), cfg.jobs, cfg)


def suite_tsets(cfg: VerifyConfig) -> list[CheckResult]:
    return _sweep(_tsets_at, odd_primes(cfg.pmax_fibers), cfg.jobs, cfg)


_SUITE_FUNCS = {
    "tuples": suite_tuples,
    "forms": suite_forms,
    "fibers": suite_fibers,
    "tsets": suite_tsets,
}


def run_suites(cfg: VerifyConfig, suites: Iterable[str] = SUITES, pmax: int | None = None) -> VerificationReport:
    results: list[CheckResult] = []
    timings: dict[str, float] = {}
    names = list(suites)
    for s in names:
        if s not in _SUITE_FUNCS:
            raise ValueError(f"unknown suite {s!r}")
        t0 = time.perf_counter()
        results += _SUITE_FUNCS[s](cfg)
        timings[s] = round(time.perf_counter() - t0, 3)
    config = {"pmax": pmax, "suite": names[0] if len(names) == 1 else "all", "jobs": cfg.jobs}
    config["bounds"] = {k: v for k, v in asdict(cfg).items() if k != "jobs"}
    return VerificationReport(config, results, timings)


def suite_all(pmax: int | None = None, workers: int = 1) -> VerificationReport:
    return run_suites(VerifyConfig.capped(pmax, workers), SUITES, pmax)


# serialization -----------------------------------------------------------------

_SAFE_INT = 2**53


def json_safe(obj):
    """Plain JSON types only; integers beyond 2^53 become decimal strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, float)):
        return obj
    if isinstance(obj, int):
        return obj if -_SAFE_INT < obj < _SAFE_INT else str(obj)
    if isinstance(obj, dict):
        return {str(k): json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [json_safe(v) for v in items]
    return str(obj)  # Fraction and anything exotic


def report_json(report: VerificationReport, indent: int | None = 2) -> str:
    return json.dumps(json_safe(report.to_dict()), indent=indent)
