"""Verification suites shared by the command line and the acceptance tests.

Each suite returns (ok, report) where report is JSON-serializable; ok is
False exactly when a counterexample was found.
"""

from __future__ import annotations

from .coeffring import ALPHA, PoleError
from .ideals import (alpha_kr, cochain_check, harness_clustering,
                     harness_I_eq_F, prescribed_vanish_check, stability_suite,
                     vanish_check)
from .jack import (duality_check, jack_at, jack_poly, norm_gram, norm_hook,
                   pieri_check, PIERI_KINDS)
from .ops import (check_algebra_table, check_virasoro_relations,
                  sekiguchi_S, sekiguchi_S_tilde, ulist_equals_scalar_multiple)
from .spart import (almost_admissible_variants, enumerate_all_m,
                    enumerate_sparts, epsilon_u, is_admissible, star_pair)
from .superpoly import monomial_msym


def _labels(nmax: int, N: int, mmax: int | None = None):
    for n in range(nmax + 1):
        for L in enumerate_all_m(n, N):
            if mmax is not None and L.m > mmax:
                continue
            yield L


def suite_sekiguchi(nmax: int, N: int, mmax: int = 2) -> tuple[bool, dict]:
    """Both generating-series eigenrelations as identities in u."""
    failures = []
    count = 0
    for L in _labels(nmax, N, mmax):
        count += 1
        P = jack_poly(L, N)
        circ, star = star_pair(L, N)
        if not ulist_equals_scalar_multiple(
                sekiguchi_S(P, ALPHA), epsilon_u(star, N, ALPHA), P):
            failures.append(("S", str(L), N))
        if not ulist_equals_scalar_multiple(
                sekiguchi_S_tilde(P, ALPHA), epsilon_u(circ, N, ALPHA), P):
            failures.append(("S_tilde", str(L), N))
    return not failures, {"checked": count, "failures": failures}


def suite_norm(nmax: int) -> tuple[bool, dict]:
    failures = []
    count = 0
    for n in range(nmax + 1):
        m = 0
        while m * (m - 1) // 2 <= n:
            for L in enumerate_sparts(n, m, n + m if n + m else 1):
                count += 1
                if norm_hook(L) != norm_gram(L, max(n + m, 1)):
                    failures.append(str(L))
            m += 1
    return not failures, {"checked": count, "failures": failures}


def suite_duality(nmax: int) -> tuple[bool, dict]:
    failures = []
    count = 0
    for n in range(nmax + 1):
        m = 0
        while m * (m - 1) // 2 <= n:
            for L in enumerate_sparts(n, m, n + m if n + m else 1):
                count += 1
                if not duality_check(L, max(n + m, 1)):
                    failures.append(str(L))
            m += 1
    return not failures, {"checked": count, "failures": failures}


def suite_pieri(nmax: int, N: int, mmax: int = 2) -> tuple[bool, dict]:
    failures = []
    count = 0
    for L in _labels(nmax, N, mmax):
        for kind in PIERI_KINDS:
            count += 1
            if not pieri_check(kind, L, N):
                failures.append((kind, str(L)))
    return not failures, {"checked": count, "failures": failures}


def suite_stability(k: int, r: int, N: int, nmax: int,
                    allow_noncoprime: bool = False) -> tuple[bool, dict]:
    rep = stability_suite(k, r, N, nmax, allow_noncoprime=allow_noncoprime)
    return not rep["violations"], rep


def suite_vanishing(k: int, r: int, N: int, nmax: int) -> tuple[bool, dict]:
    if N < k + 1:
        return True, {"checked": 0, "failures": [], "skipped": "N < k+1"}
    failures = []
    count = 0
    for n in range(nmax + 1):
        for L in enumerate_all_m(n, N):
            if not is_admissible(L, k, r, N):
                continue
            count += 1
            if not vanish_check(L, k, r, N):
                failures.append(("full", str(L)))
            if r > L.m and not prescribed_vanish_check(L, k, r, N):
                failures.append(("prescribed", str(L)))
    return not failures, {"checked": count, "failures": failures}


def suite_regularity(k: int, r: int, N: int, nmax: int,
                     allow_noncoprime: bool = False,
                     include_almost: bool = True) -> tuple[bool, dict]:
    """Pole-freeness of admissible (and optionally almost-admissible) labels."""
    a0 = alpha_kr(k, r)
    poles = []
    seen = set()
    count = 0
    for n in range(nmax + 1):
        for L in enumerate_all_m(n, N):
            if not is_admissible(L, k, r, N, allow_noncoprime=allow_noncoprime):
                continue
            todo = [L]
            if include_almost:
                todo += almost_admissible_variants(
                    L, k, r, N, allow_noncoprime=allow_noncoprime)
            for V in todo:
                if V in seen:
                    continue
                seen.add(V)
                count += 1
                try:
                    jack_at(V, N, a0)
                except PoleError:
                    poles.append(str(V))
    return not poles, {"checked": count, "poles": poles}


def suite_cochain(k: int, r: int, N: int, nmax: int, d: str = "q") -> tuple[bool, dict]:
    rep = cochain_check(k, r, N, nmax, d)
    ok = not rep["failures"] and all(e["exact"] for e in rep["exactness"])
    return ok, rep


def suite_conjecture_IF(k: int, N: int, nmax: int) -> tuple[bool, dict]:
    rep = harness_I_eq_F(k, N, nmax)
    rep = dict(rep)
    rep["char_I"] = rep["char_I"].series_str()
    rep["char_F"] = rep["char_F"].series_str()
    return rep["equal"], rep


def suite_conjecture_rma(k: int, r: int, N: int, nmax: int) -> tuple[bool, dict]:
    rep = harness_clustering(k, r, N, nmax)
    divisibility_ok = all(row.get("divides", True) for row in rep["rows"]
                          if not row.get("zero"))
    ok = divisibility_ok and not rep["exceptions_in_bounds"]
    rep["divisibility_ok"] = divisibility_ok
    return ok, rep


def suite_algebra(N: int = 2) -> tuple[bool, dict]:
    """Operator algebra tables on a deterministic family of polynomials."""
    from .spart import parse_spart
    tests = [
        monomial_msym(parse_spart("1;1"), N),
        monomial_msym(parse_spart(";2"), N) + monomial_msym(parse_spart("0;1"), N),
        monomial_msym(parse_spart("1,0;"), N),
    ]
    fails = check_algebra_table(ALPHA, tests)
    fails += check_virasoro_relations(ALPHA, tests)
    return not fails, {"failures": fails}


SUITES = {
    "sekiguchi": (suite_sekiguchi, ("nmax", "N", "mmax")),
    "norm": (suite_norm, ("nmax",)),
    "duality": (suite_duality, ("nmax",)),
    "pieri": (suite_pieri, ("nmax", "N", "mmax")),
    "stability": (suite_stability, ("k", "r", "N", "nmax", "allow_noncoprime")),
    "vanishing": (suite_vanishing, ("k", "r", "N", "nmax")),
    "regularity": (suite_regularity,
                   ("k", "r", "N", "nmax", "allow_noncoprime")),
    "cochain": (suite_cochain, ("k", "r", "N", "nmax", "d")),
    "conjecture-IF": (suite_conjecture_IF, ("k", "N", "nmax")),
    "conjecture-rma": (suite_conjecture_rma, ("k", "r", "N", "nmax")),
    "algebra": (suite_algebra, ("N",)),
}
