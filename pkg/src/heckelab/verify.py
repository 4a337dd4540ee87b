"""Named verification suites with deterministic, machine-readable reports.

Each suite re-runs one family of identities, oracle comparisons, or
counts from the computational modules and records a CheckResult per
parameter tuple.  Checks never abort the suite: a failed comparison
stores its witness (the nonzero discrepancy or the mismatched values),
and a computation that exceeds an enumeration budget is recorded as
skipped with the violated bound.  For a fixed suite name, range mapping,
and seed the report is reproducible byte for byte; wall time is only
recorded on request because it would break that reproducibility.
"""

import hashlib
import json
import random
import time
from fractions import Fraction

from .charring import character, character_bruteforce, check_lambda_identity
from .chow import check_bridge_identity, check_excess_integral
from .errors import DomainError, InvariantError, ResourceError
from .finitegeom import (
    WindowLattice,
    census,
    count_bullet_between,
    count_max_isotropic,
    mixed_counts,
)
from .hecke import (
    EvalContext,
    HeckeElement,
    SatakeMatrix,
    named_operator,
    random_inert_param,
    satake_transform,
    verify_satake_identity,
)
from .qcalc import BASE_Q2, LaurentPoly, check_q_identity, q_binomial

SUITE_NAMES = (
    "characters",
    "chow",
    "evalprops",
    "geometry",
    "lattice",
    "qidentities",
    "satake",
)

# Built-in parameter ranges, chosen so that a bare run of every suite
# finishes in well under a minute; callers widen them explicitly.
DEFAULT_RANGES = {
    "characters": {"n_max": 6, "r_max": 3},
    "chow": {"r_max": 8, "d_max": 8},
    "evalprops": {"n_max": 7, "samples": 20},
    "geometry": {"q_max": 3, "n_max": 4},
    "lattice": {"q_max": 3, "n_max": 3},
    "qidentities": {"k_max": 8},
    "satake": {"r_max": 3, "n_max": 8},
}

_RANGE_KEYS = frozenset({"k_max", "n_max", "r_max", "q_max", "d_max", "samples"})
_EVAL_PRIME = 10007
_CHOW_PRIMES = (2, 3, 5, 7)
_LATTICE_QS = (2, 3, 5, 7)
_GEOMETRY_QS = (2, 3, 4, 5, 7, 8, 9)


class CheckResult:
    """Outcome of a single parametrized check inside a suite."""

    __slots__ = ("suite", "id", "params", "status", "witness")

    def __init__(self, suite, check_id, params, status, witness):
        object.__setattr__(self, "suite", suite)
        object.__setattr__(self, "id", check_id)
        object.__setattr__(self, "params", dict(params))
        object.__setattr__(self, "status", status)
        object.__setattr__(self, "witness", witness)

    def __setattr__(self, name, value):
        raise AttributeError("CheckResult is immutable")

    def params_key(self):
        """Parameter tuple in declaration order, used for sorting."""
        return tuple(self.params.values())

    def __repr__(self):
        return f"CheckResult({self.id}, {self.params}, {self.status})"


class SuiteReport:
    """Ordered collection of check results for one suite run."""

    __slots__ = ("suite", "seed", "checks", "elapsed_ms")

    def __init__(self, suite, seed, checks, elapsed_ms=None):
        object.__setattr__(self, "suite", suite)
        object.__setattr__(self, "seed", seed)
        object.__setattr__(self, "checks", tuple(checks))
        object.__setattr__(self, "elapsed_ms", elapsed_ms)

    def __setattr__(self, name, value):
        raise AttributeError("SuiteReport is immutable")

    @property
    def overall_pass(self):
        """True when no check failed; budget skips do not count against."""
        return all(c.status != "fail" for c in self.checks)

    def to_json_dict(self):
        return {
            "suite": self.suite,
            "seed": self.seed,
            "checks": [
                {
                    "id": c.id,
                    "params": c.params,
                    "status": c.status,
                    "witness": c.witness,
                }
                for c in self.checks
            ],
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self):
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"

    def __repr__(self):
        return (
            f"SuiteReport({self.suite}, seed={self.seed}, "
            f"{len(self.checks)} checks, pass={self.overall_pass})"
        )


def _run_check(suite, check_id, params, body):
    """Run one check body, translating exceptions into statuses.

    The body returns an empty string on success and a witness on
    failure; budget violations become skips, and any other library
    error is itself recorded as the witness of a failure.
    """
    try:
        witness = body()
    except ResourceError as exc:
        return CheckResult(suite, check_id, params, "skipped", str(exc))
    except (DomainError, InvariantError) as exc:
        witness = f"{type(exc).__name__}: {exc}"
        return CheckResult(suite, check_id, params, "fail", witness)
    status = "pass" if not witness else "fail"
    return CheckResult(suite, check_id, params, status, witness)


# ---------------------------------------------------------------------
# Closed-form evaluation products


def _qv_pair(ctx):
    if ctx.p is None:
        qv = Fraction(ctx.q_value)
        if qv == 0:
            raise DomainError("q-value must be invertible")
        return qv, 1 / qv
    qv = int(ctx.q_value) % ctx.p
    if qv == 0:
        raise DomainError("q-value must be invertible")
    return qv, pow(qv, -1, ctx.p)


def _m_values(alpha):
    r = alpha.rank // 2
    if alpha.p is None:
        return [alpha.entries[i] + 1 / alpha.entries[i] for i in range(r)]
    p = alpha.p
    return [(alpha.entries[i] + pow(int(alpha.entries[i]), -1, p)) % p for i in range(r)]


def _product_value(ms, shift_exp, offset, ctx):
    """shift * prod(m_i + offset) in the field selected by ctx."""
    qv, _ = _qv_pair(ctx)
    if ctx.p is None:
        total = qv**shift_exp
        for m in ms:
            total *= m + offset
        return total
    total = pow(int(qv), shift_exp, ctx.p)
    for m in ms:
        total = total * (int(m) + offset) % ctx.p
    return total % ctx.p


def closed_form_eval(name, N, alpha, ctx):
    """Closed-form value of a named operator at an inert parameter, or
    None when the operator has no closed product formula.

    The operator name and parity are validated exactly as in
    named_operator, so a mismatched rank raises before any arithmetic.
    """
    named_operator(name, N)
    if alpha.kind != "inert" or alpha.rank != N:
        raise DomainError("closed forms need an inert parameter of rank N")
    if alpha.p != ctx.p:
        raise DomainError("parameter and context fields differ")
    r = N // 2
    ms = _m_values(alpha)
    qv, qinv = _qv_pair(ctx)
    if name == "Icirc" and N % 2 == 0:
        return _product_value(ms, r * r, 2, ctx)
    if name == "Icirc":
        offset = qv + qinv
        if ctx.p is not None:
            offset = int(offset) % ctx.p
        return _product_value(ms, r * r + r, offset, ctx)
    if name == "Tstar":
        return _product_value(ms, r * r + r, -2, ctx)
    return None


# ---------------------------------------------------------------------
# Suite implementations


def _diff_witness(diff):
    """Compact witness for a nonzero symbolic difference."""
    text = str(diff)
    if len(text) > 160:
        text = text[:157] + "..."
    return f"nonzero difference {text}"


def _suite_qidentities(ranges, rng):
    checks = []
    for which in ("gauss", "odd_chain", "signed", "weighted"):
        for k in range(1, ranges["k_max"] + 1):

            def body(which=which, k=k):
                diff = check_q_identity(which, k)
                return "" if diff == LaurentPoly(0) else _diff_witness(diff)

            checks.append(
                _run_check("qidentities", "qidentity", {"which": which, "k": k}, body)
            )
    return checks


def _suite_characters(ranges, rng):
    checks = []
    for N in range(1, ranges["n_max"] + 1):
        for delta in range(N // 2 + 1):

            def body(N=N, delta=delta):
                diff = character(N, delta) - character_bruteforce(N, delta)
                return "" if not diff else _diff_witness(diff)

            checks.append(
                _run_check(
                    "characters",
                    "char_closed_vs_bruteforce",
                    {"N": N, "delta": delta},
                    body,
                )
            )
    for r in range(1, ranges["r_max"] + 1):
        cases = (
            ("even_derivative", 2 * r),
            ("even_sum", 2 * r),
            ("odd", 2 * r + 1),
            ("odd_binomial", r),
        )
        for which, n in cases:

            def body(which=which, n=n):
                diff = check_lambda_identity(n, which)
                return "" if not diff else _diff_witness(diff)

            checks.append(
                _run_check(
                    "characters", "lambda_identity", {"which": which, "n": n}, body
                )
            )
    return checks


def _suite_satake(ranges, rng):
    checks = []
    for N in range(1, ranges["n_max"] + 1):
        for delta in range(N // 2 + 1):

            def body(N=N, delta=delta):
                mat = SatakeMatrix(N)
                lhs = None
                for i in range(delta + 1):
                    term = mat.entry(delta, i) * satake_transform(
                        HeckeElement.basis(N, i)
                    )
                    lhs = term if lhs is None else lhs + term
                rhs = LaurentPoly({delta * (N - delta): 1}) * character(N, delta)
                diff = lhs - rhs
                return "" if not diff else _diff_witness(diff)

            checks.append(
                _run_check("satake", "satake_forward", {"N": N, "delta": delta}, body)
            )
    for which in ("even1", "even2", "even4", "odd1", "odd2"):
        for r in range(1, ranges["r_max"] + 1):

            def body(which=which, r=r):
                diff = verify_satake_identity(which, r)
                return "" if not diff else _diff_witness(diff)

            checks.append(
                _run_check("satake", "satake_symbolic", {"which": which, "r": r}, body)
            )
    return checks


def _even_prop_elements(N):
    q = LaurentPoly.gen()
    icirc = named_operator("Icirc", N)
    rcirc = named_operator("Rcirc", N)
    tcirc = named_operator("TcircEven", N)
    return {
        "even1": icirc,
        "even2": (q + 1) * rcirc - icirc,
        "even4": rcirc + (q + 1) * tcirc,
    }


def _even_prop_value(which, ms, qv, p, r):
    qinv = pow(qv, -1, p)
    if which == "even1":
        total = pow(qv, r * r, p)
        for m in ms:
            total = total * (m + 2) % p
        return total
    if which == "even2":
        total = pow(qv, r * r, p)
        for m in ms:
            total = total * (m - qv - qinv) % p
        return -total % p
    scale = (pow(qv, r * r + 1, p) - pow(qv, max(r * r - 1, 0), p)) % p
    acc = 0
    for j in range(r):
        prod = 1
        for i in range(r):
            if i != j:
                prod = prod * (ms[i] - qv - qinv) % p
        acc = (acc + prod) % p
    return -scale * acc % p


def _odd_prop_value(which, ms, qv, p, r):
    qinv = pow(qv, -1, p)
    total = pow(qv, r * r + r, p)
    offset = (qv + qinv) % p if which == "odd1" else -2
    for m in ms:
        total = total * (m + offset) % p
    return total


def _suite_evalprops(ranges, rng):
    p = _EVAL_PRIME
    checks = []
    for parity in ("even", "odd"):
        start = 2 if parity == "even" else 3
        for N in range(start, ranges["n_max"] + 1, 2):
            r = N // 2
            samples = []
            for _ in range(ranges["samples"]):
                alpha = random_inert_param(N, p, rng)
                qv = rng.randrange(2, p - 1)
                samples.append((alpha, qv))
            digest = hashlib.sha256(
                repr([(a.entries, qv) for a, qv in samples]).encode()
            ).hexdigest()[:12]
            if parity == "even":
                elements = _even_prop_elements(N)
            else:
                elements = {
                    "odd1": named_operator("Icirc", N),
                    "odd2": named_operator("Tstar", N),
                }
            for which, element in sorted(elements.items()):

                def body(which=which, element=element, samples=samples, r=r):
                    sat = satake_transform(element)
                    for idx, (alpha, qv) in enumerate(samples):
                        ms = _m_values(alpha)
                        got = sat.eval_mod(ms, p, q_value=qv)
                        if which.startswith("even"):
                            want = _even_prop_value(which, ms, qv, p, r)
                        else:
                            want = _odd_prop_value(which, ms, qv, p, r)
                        if got != want:
                            return (
                                f"sample {idx}: value {got} != product {want} "
                                f"at alpha {tuple(alpha.entries)}, q {qv}"
                            )
                    return ""

                checks.append(
                    _run_check(
                        "evalprops",
                        "eval_prop",
                        {
                            "which": which,
                            "N": N,
                            "samples": ranges["samples"],
                            "digest": digest,
                        },
                        body,
                    )
                )
    return checks


def _suite_lattice(ranges, rng):
    checks = []
    qs = [q for q in _LATTICE_QS if q <= ranges["q_max"]]
    for q in qs:
        for n in range(2, ranges["n_max"] + 1):
            for delta in range(n // 2 + 1):

                def body(q=q, n=n, delta=delta):
                    center = WindowLattice.standard_circ(q, n)
                    other = WindowLattice.standard_disc(q, n, delta)
                    got = count_bullet_between(center, other)
                    closed = named_operator("Icirc", n).coeffs[delta].eval_at(
                        Fraction(q)
                    )
                    if Fraction(got) != closed:
                        return f"count {got} != closed form {closed}"
                    return ""

                checks.append(
                    _run_check(
                        "lattice",
                        "bullet_between",
                        {"q": q, "N": n, "delta": delta},
                        body,
                    )
                )
        if ranges["n_max"] >= 3:
            for delta in (0, 1):
                for gamma in (0, 1):

                    def body(q=q, delta=delta, gamma=gamma):
                        got = mixed_counts(q, 3, delta, gamma)
                        if gamma > delta:
                            want = (0, 0)
                        else:
                            d, g = delta, gamma
                            binom = q_binomial(1 - g, d - g, BASE_Q2).eval_at(
                                Fraction(q)
                            )
                            want = (
                                q ** ((d - g) * (d - g + 2)) * binom,
                                q ** ((d - g) ** 2) * binom,
                            )
                        if tuple(Fraction(x) for x in got) != tuple(
                            Fraction(x) for x in want
                        ):
                            return f"counts {got} != closed forms {want}"
                        return ""

                    checks.append(
                        _run_check(
                            "lattice",
                            "mixed_counts",
                            {"q": q, "N": 3, "delta": delta, "gamma": gamma},
                            body,
                        )
                    )
    return checks


def _census_witness(rows):
    bad = [r for r in rows if r["match"] is False]
    if not bad:
        return ""
    first = bad[0]
    return (
        f"{first['parameter']}: count {first['count']} != "
        f"closed form {first['closed_form']}"
    )


def _suite_geometry(ranges, rng):
    checks = []
    qs = [q for q in _GEOMETRY_QS if q <= ranges["q_max"]]
    for q in qs:
        for n in range(2, ranges["n_max"] + 1):

            def iso_body(q=q, n=n):
                return _census_witness(census("isotropic", q, n))

            def meet_body(q=q, n=n):
                return _census_witness(census("meeting", q, n))

            def partition_body(q=q, n=n):
                rows = census("meeting", q, n)
                total = sum(row["count"] for row in rows)
                want = count_max_isotropic(q, n)
                if total != want:
                    return f"sum over coranks {total} != total count {want}"
                return ""

            params = {"q": q, "N": n}
            checks.append(_run_check("geometry", "isotropic_closed", params, iso_body))
            checks.append(_run_check("geometry", "meeting_closed", params, meet_body))
            checks.append(
                _run_check("geometry", "meeting_partition", params, partition_body)
            )
    return checks


def _suite_chow(ranges, rng):
    checks = []
    for r in range(ranges["r_max"] + 1):

        def body(r=r):
            diff = check_bridge_identity(r)
            return "" if diff == LaurentPoly(0) else _diff_witness(diff)

        checks.append(_run_check("chow", "bridge_identity", {"r": r}, body))
    for which in ("I1", "I2", "I3"):
        if which == "I3":
            values = range(ranges["d_max"] + 1)
        else:
            values = range(1, ranges["r_max"] + 1)
        for n in values:
            for p in _CHOW_PRIMES:

                def body(which=which, n=n, p=p):
                    computed, expected = check_excess_integral(which, n, p)
                    if computed != expected:
                        return f"computed {computed} != expected {expected}"
                    return ""

                checks.append(
                    _run_check(
                        "chow",
                        "excess_integral",
                        {"which": which, "n": n, "p": p},
                        body,
                    )
                )
    return checks


_SUITE_FUNCTIONS = {
    "characters": _suite_characters,
    "chow": _suite_chow,
    "evalprops": _suite_evalprops,
    "geometry": _suite_geometry,
    "lattice": _suite_lattice,
    "qidentities": _suite_qidentities,
    "satake": _suite_satake,
}


def _merged_ranges(suite, ranges):
    merged = dict(DEFAULT_RANGES[suite])
    for key, value in (ranges or {}).items():
        if key not in _RANGE_KEYS:
            raise DomainError(f"unknown range key {key!r}")
        if not isinstance(value, int) or value < 0:
            raise DomainError(f"range {key} must be a nonnegative integer")
        if key in merged:
            merged[key] = value
    return merged


def run_suite(name, ranges=None, seed=0, timed=False):
    """Run one named suite (or 'all') and return its SuiteReport.

    ranges is a flat mapping over k_max/n_max/r_max/q_max/d_max/samples;
    keys a suite does not use are ignored so one mapping can drive every
    suite.  All sampling flows from the seed, and each sub-suite of
    'all' reseeds independently, so its checks match a standalone run.
    """
    if name != "all" and name not in _SUITE_FUNCTIONS:
        raise DomainError(f"unknown suite {name!r}")
    if not isinstance(seed, int):
        raise DomainError("seed must be an integer")
    start = time.perf_counter()
    suites = SUITE_NAMES if name == "all" else (name,)
    checks = []
    for suite in suites:
        merged = _merged_ranges(suite, ranges)
        checks.extend(_SUITE_FUNCTIONS[suite](merged, random.Random(seed)))
    checks.sort(key=lambda c: (c.suite, c.id, c.params_key()))
    elapsed = int((time.perf_counter() - start) * 1000) if timed else None
    return SuiteReport(name, seed, checks, elapsed)
