"""Per-discriminant verification of the cubic theta series construction.

For a positive fundamental discriminant ``d`` the pipeline enumerates the
cubic fields of discriminant ``d``, builds their trace forms and theta
series, and checks injectivity, linear independence and the field count.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .arith import NotFundamental, is_fundamental, is_prime, kronecker, three_reflection
from .cache import Cache
from .cubic import (
    CubicForm,
    IntegralityViolation,
    NotPositive,
    enumerate_cubic_fields,
    ring_of,
    trace_form,
    trace_zero,
)
from .qform import class_group, reduce_gl2, three_rank
from .realquad import real_three_rank
from .theta import InsufficientPrecision, f_K, fingerprint, first_two_nonzero, linearly_independent

__all__ = [
    "SCHEMA_VERSION",
    "InvalidRange",
    "VerificationReport",
    "verify_discriminant",
    "verify_range",
    "summarize",
    "reports_to_json",
    "reports_to_csv",
    "CSV_COLUMNS",
]

SCHEMA_VERSION = 1

log = logging.getLogger("cubictheta")


class InvalidRange(ValueError):
    pass


@dataclass
class VerificationReport:
    d: int
    d3: int
    fields: list
    trace_forms: list
    class_number: int
    r3: int  # 3-rank of the form class group of d3
    r3_real: int  # 3-rank of the class group of Q(sqrt(d))
    expected_count: int
    precision: int
    injective: dict
    independent: dict
    checks: dict
    failures: list = field(default_factory=list)
    millis: int | None = None

    @property
    def count(self):
        return len(self.fields)

    @property
    def passed(self):
        return not self.failures

    @property
    def verdict(self):
        return "PASS" if self.passed else "FAIL"

    def to_dict(self):
        out = {
            "schema_version": SCHEMA_VERSION,
            "d": self.d,
            "d3": self.d3,
            "count": self.count,
            "fields": [list(F) for F in self.fields],
            "trace_forms": [list(t) for t in self.trace_forms],
            "class_number": self.class_number,
            "r3": self.r3,
            "r3_real": self.r3_real,
            "expected_count": self.expected_count,
            "dim_lower_bound": self.count,
            "precision": self.precision,
            "injective": self.injective,
            "independent": self.independent,
            "checks": self.checks,
            "verdict": self.verdict,
            "failures": self.failures,
        }
        if self.millis is not None:
            out["millis"] = self.millis
        return out


def _distinct(items):
    return len(set(map(tuple, items))) == len(items)


def verify_discriminant(d, precision=1000, fields=None, class_forms=None, timings=False):
    """Build the verification report for the positive fundamental discriminant ``d``.

    ``fields`` and ``class_forms`` may be passed in from a cache.  Failed
    checks are recorded in the report, never raised.
    """
    if d <= 0:
        raise NotPositive(f"{d} is not positive")
    if not is_fundamental(d):
        raise NotFundamental(f"{d} is not a fundamental discriminant")
    start = time.perf_counter()
    N = precision
    d3 = three_reflection(d)
    failures = []
    checks = {}

    if fields is None:
        fields = enumerate_cubic_fields(d)
    fields = [CubicForm(*F) for F in fields]
    G = class_group(d3, class_forms)
    h = len(G)
    r3 = three_rank(G)
    r3_real = real_three_rank(d) if d > 1 else 0
    expected = (3 ** r3_real - 1) // 2

    # trace forms: integral, primitive, definite, discriminant d3
    forms = []
    prop1 = True
    for F in fields:
        try:
            R = ring_of(F)
            L = trace_zero(R)
            t = trace_form(R, d, L)
        except (IntegralityViolation, ArithmeticError, ValueError) as exc:
            prop1 = False
            failures.append(f"trace form of {list(F)}: {exc}")
            continue
        (g11, g12), (_, g22) = L.gram
        t0_disc = 4 * g12 * g12 - 4 * g11 * g22
        ok = (
            L.minors_gcd() == 1
            and t.is_primitive
            and t.is_positive_definite
            and t.disc == d3
            and t0_disc == -12 * d
        )
        if not ok:
            prop1 = False
            failures.append(f"trace form {list(t)} of {list(F)} violates integrality/primitivity/discriminant")
        forms.append(t)
    checks["trace_forms"] = prop1
    reduced = [reduce_gl2(t) for t in forms]

    series = [f_K(t, N) for t in forms]

    # injectivity, two routes
    prints = []
    for t, s in zip(forms, series):
        try:
            prints.append(first_two_nonzero(s))
        except InsufficientPrecision:
            prints.append(fingerprint(t))
    by_forms = _distinct(reduced)
    by_theta = len(set(prints)) == len(prints)
    injective = {
        "reduced_forms_distinct": by_forms,
        "fingerprints_distinct": by_theta,
        "fingerprints": [[list(x) for x in p] for p in prints],
    }
    checks["injective"] = by_forms and by_theta
    if not by_forms:
        failures.append("two fields share a GL2-reduced trace form")
    if not by_theta:
        failures.append("two fields share a theta fingerprint")

    # linear independence with per-form witness primes
    res = linearly_independent(series)
    witnesses = list(res.witnesses)
    wseries = series
    if not res.witnesses_complete:
        log.warning("d=%d: witness prime missing at precision %d, retrying at %d", d, N, 10 * N)
        wseries = [f_K(t, 10 * N) for t in forms]
        witnesses = linearly_independent(wseries).witnesses
    witness_precision = wseries[0].precision if wseries else N
    sound = True
    for i, p in enumerate(witnesses):
        if p is None or not is_prime(p) or wseries[i][p] == 0:
            sound = False
        elif any(wseries[j][p] for j in range(len(wseries)) if j != i):
            sound = False
    independent = {
        "rank": res.rank,
        "witness_primes": witnesses,
        "witness_precision": witness_precision,
    }
    checks["independent"] = res.independent
    checks["witnesses"] = sound
    if not res.independent:
        failures.append(f"rank {res.rank} < {len(series)}")
    if not sound:
        failures.append("witness prime missing or unsound")

    # Hasse count and the Scholz relation between the two 3-ranks
    checks["count"] = len(fields) == expected
    if not checks["count"]:
        failures.append(f"found {len(fields)} fields, Hasse count {expected}")
    checks["scholz"] = r3_real <= r3 <= r3_real + 1
    if not checks["scholz"]:
        failures.append(f"3-ranks {r3_real} (real) and {r3} (imaginary) violate Scholz")

    # nebentypus shadow: represented primes prime to d3 have (d3/p) = 1
    char_ok = True
    for s in series:
        for p in range(2, N + 1):
            if s[p] and d3 % p and is_prime(p) and kronecker(d3, p) != 1:
                char_ok = False
                failures.append(f"prime {p} represented by {list(s.form)} but ({d3}/{p}) != 1")
                break
    checks["character"] = char_ok

    millis = round(1000 * (time.perf_counter() - start)) if timings else None
    return VerificationReport(
        d=d,
        d3=d3,
        fields=fields,
        trace_forms=reduced,
        class_number=h,
        r3=r3,
        r3_real=r3_real,
        expected_count=expected,
        precision=N,
        injective=injective,
        independent=independent,
        checks=checks,
        failures=failures,
        millis=millis,
    )


def _work(args):
    d, precision, fields, class_forms, timings = args
    if fields is None:
        fields = enumerate_cubic_fields(d)
    if class_forms is None:
        class_forms = list(class_group(three_reflection(d)).elements)
    report = verify_discriminant(d, precision, fields, class_forms, timings)
    return report, [list(F) for F in fields], [list(f) for f in class_forms]


def _cached(cache, kind, key):
    if cache is None:
        return None
    try:
        return cache.get(kind, key)
    except Exception:
        log.warning("corrupt %s cache entry for %d; recomputing", kind, key)
        return None


def verify_range(d_min, d_max, precision=1000, jobs=1, cache=None, timings=False):
    """Reports for every fundamental ``d`` in ``[d_min, d_max]`` in increasing order, plus a summary."""
    if d_min > d_max or d_min < 1:
        raise InvalidRange(f"invalid range [{d_min}, {d_max}]")
    if isinstance(cache, (str, bytes)) or hasattr(cache, "__fspath__"):
        cache = Cache(cache)
    ds = [d for d in range(d_min, d_max + 1) if is_fundamental(d)]
    tasks = []
    for d in ds:
        fields = _cached(cache, "cubic", d)
        class_forms = _cached(cache, "classgroup", three_reflection(d))
        tasks.append((d, precision, fields, class_forms, timings))

    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_work, tasks, chunksize=max(1, len(tasks) // (8 * jobs))))
    else:
        results = [_work(t) for t in tasks]

    reports = []
    new_fields, new_groups = [], []
    for task, (report, fields, class_forms) in zip(tasks, results):
        d = task[0]
        log.info("d=%d count=%d %s", d, report.count, report.verdict)
        reports.append(report)
        if task[2] is None:
            new_fields.append((d, fields))
        if task[3] is None:
            new_groups.append((report.d3, class_forms))
    if cache is not None:
        cache.put_many("cubic", new_fields)
        cache.put_many("classgroup", new_groups)
    return reports, summarize(reports, d_min, d_max, precision)


def summarize(reports, d_min, d_max, precision):
    hist = Counter(r.count for r in reports)
    multi = next((r.d for r in reports if r.count >= 2), None)
    return {
        "schema_version": SCHEMA_VERSION,
        "d_min": d_min,
        "d_max": d_max,
        "precision": precision,
        "discriminants": len(reports),
        "fields_found": sum(r.count for r in reports),
        "all_pass": all(r.passed for r in reports),
        "histogram": {str(k): hist[k] for k in sorted(hist)},
        "first_multi_class_d": multi,
        "failed": [r.d for r in reports if not r.passed],
    }


def reports_to_json(reports):
    return json.dumps([r.to_dict() for r in reports], separators=(",", ":"))


CSV_COLUMNS = ["d", "d3", "count", "h", "r3", "injective", "independent", "witness_primes", "millis", "r3_real"]


def reports_to_csv(reports):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        w.writerow([
            r.d,
            r.d3,
            r.count,
            r.class_number,
            r.r3,
            r.checks["injective"],
            r.checks["independent"] and r.checks["witnesses"],
            " ".join(str(p) for p in r.independent["witness_primes"]),
            "" if r.millis is None else r.millis,
            r.r3_real,
        ])
    return buf.getvalue()
