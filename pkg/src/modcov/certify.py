"""Certify that candidates freely generate K_n over the hsop algebra.

The certificate is a graded Nakayama argument: in every degree d up to the top
candidate degree, the candidates must lie in M_d, be independent modulo
(A_+ M)_d and fill out M_d / (A_+ M)_d exactly.  The count and degree sum
are then compared with the rank and s-invariant read off the Hilbert series.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .action import delta_pow
from .cases import CaseData, CaseKind, CaseSpec, build_case
from .hilbert import (
    HilbertNumerator,
    NotPolynomialError,
    RankS,
    SsubalgReport,
    TruncatedSeries,
    numerator,
    rank_s,
    ssubalg_report,
)
from .poly import GREVLEX, MonomialOrder, format_poly
from .slices import (
    SubspaceSlice,
    _memo,
    kernel_slice,
    monomial_basis,
    module_product_slice,
    rref,
)

MAX_DEGREE_ENV = "MODCOV_MAX_DEGREE"


def degree_cap() -> int | None:
    raw = os.environ.get(MAX_DEGREE_ENV)
    return int(raw) if raw else None


def truncation_bound(top: int, hsop_degrees) -> int:
    bound = top + max(hsop_degrees)
    cap = degree_cap()
    return bound if cap is None else min(bound, cap)


def kernel_series(case: CaseData, n: int, bound: int) -> TruncatedSeries:
    a = case.action
    return TruncatedSeries(tuple(kernel_slice(a, n, d).rank for d in range(bound + 1)))


def kernel_numerator(case: CaseData, n: int, top: int) -> HilbertNumerator:
    degrees = case.hsop_degrees
    return numerator(kernel_series(case, n, truncation_bound(top, degrees)), degrees, top)


def aplus_slice(case: CaseData, n: int, d: int) -> SubspaceSlice:
    """(A_+ K_n)_d, memoised on the action."""
    a = case.action
    key = ("aplus", n, d, tuple(case.hsop))
    return _memo(
        a,
        key,
        lambda: module_product_slice(
            a, case.hsop, lambda e: kernel_slice(a, n, e), d, positive_only=True, is_module=True
        ),
    )


def secondary_expected(case: CaseData) -> RankS:
    """Rank and s-invariant of k[V]^G over the hsop algebra."""
    p = case.spec.p
    kind = case.spec.kind
    if kind is CaseKind.V2:
        return RankS(1, 0)
    if kind is CaseKind.V3:
        return RankS(2, p)
    if kind is CaseKind.V2V2:
        return RankS(p, p * (p - 1))
    return RankS(2, 3)


@dataclass
class DegreeRecord:
    d: int
    dim_Md: int
    dim_AplusMd: int
    candidates_at_d: int
    residual_rank: int
    ok: bool


@dataclass
class FreetestRecord:
    expected_r: int
    expected_s: int
    r: int | None
    s: int | None
    count: int
    degree_sum: int
    independent: bool
    numerator: tuple = ()
    error: str = ""

    @property
    def ok(self) -> bool:
        return (
            not self.error
            and self.count == self.r == self.expected_r
            and self.degree_sum == self.s == self.expected_s
            and self.independent
        )


@dataclass
class Certificate:
    case: CaseData
    n: int
    candidates: list
    per_degree: list = field(default_factory=list)
    freetest: FreetestRecord | None = None
    reason: str = ""

    @property
    def verified(self) -> bool:
        return not self.reason

    @property
    def verdict(self) -> str:
        return "verified" if self.verified else f"failed: {self.reason}"

    def to_json(self, order: MonomialOrder = GREVLEX) -> dict:
        spec = self.case.spec
        prime = spec.prime
        ft = self.freetest
        return {
            "case": {"kind": spec.kind.value, "p": prime.p, "k": prime.k, "q": prime.q, "n": self.n},
            "hsop": [format_poly(g, order) for g in self.case.hsop],
            "secondary": [format_poly(g, order) for g in self.case.secondary],
            "candidates": [format_poly(g, order) for g in self.candidates],
            "per_degree": [
                {
                    "d": r.d,
                    "dim_Md": r.dim_Md,
                    "dim_AplusMd": r.dim_AplusMd,
                    "n_cands": r.candidates_at_d,
                    "residual_rank": r.residual_rank,
                    "ok": r.ok,
                }
                for r in self.per_degree
            ],
            "freetest": None
            if ft is None
            else {
                "r": ft.r,
                "count": ft.count,
                "s": ft.s,
                "degree_sum": ft.degree_sum,
                "expected_r": ft.expected_r,
                "expected_s": ft.expected_s,
                "independent": ft.independent,
                "numerator": list(ft.numerator),
            },
            "verdict": "verified" if self.verified else "failed",
            "reason": self.reason,
        }


def _check_homogeneous(candidates):
    for g in candidates:
        if g.is_zero() or not g.is_homogeneous():
            raise ValueError(f"candidate {g} is not a nonzero homogeneous polynomial")


def _reference_top(case: CaseData, n: int) -> int:
    """Top generator degree of the case's own generating set for K_n."""
    if n == 1:
        gens = case.secondary
    elif n == case.spec.n:
        gens = case.candidates
    else:
        gens = build_case(CaseSpec(case.spec.kind, case.spec.p, n)).candidates
    return max(g.degree for g in gens)


def freetest_check(
    case: CaseData,
    candidates: list,
    n: int | None = None,
    expected: RankS | None = None,
    independent: bool = True,
) -> FreetestRecord:
    """Compare count and degree sum with (r, s) read off the Hilbert series of K_n."""
    n = case.spec.n if n is None else n
    expected = case.expected if expected is None else expected
    count = len(candidates)
    degree_sum = sum(g.degree for g in candidates)
    top = max([g.degree for g in candidates] + [_reference_top(case, n)])
    rec = FreetestRecord(expected.r, expected.s, None, None, count, degree_sum, independent)
    try:
        f = kernel_numerator(case, n, top)
    except (NotPolynomialError, ValueError) as exc:
        rec.error = str(exc)
        return rec
    coeffs = list(f.coeffs)
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    rs = rank_s(f)
    rec.r, rec.s, rec.numerator = rs.r, rs.s, tuple(coeffs)
    return rec


def nakayama_certify(
    case: CaseData,
    candidates: list | None = None,
    n: int | None = None,
    expected: RankS | None = None,
) -> Certificate:
    """Certify that ``candidates`` freely generate K_n over the hsop algebra.

    Degrees are scanned up to the larger of the top candidate degree and the
    degree of the Hilbert numerator of K_n, so a missing generator is reported
    in the degree where it is missing.
    """
    n = case.spec.n if n is None else n
    candidates = list(case.candidates if candidates is None else candidates)
    _check_homogeneous(candidates)
    a = case.action
    cert = Certificate(case, n, candidates)
    for g in candidates:
        if not delta_pow(a, n, g).is_zero():
            cert.reason = f"candidate {format_poly(g)} is not in ker(Delta^{n})"
            return cert

    ft = freetest_check(case, candidates, n, expected)
    failures = []
    top = max([g.degree for g in candidates] + [len(ft.numerator) - 1])
    for d in range(top + 1):
        md = kernel_slice(a, n, d)
        am = aplus_slice(case, n, d)
        here = [g for g in candidates if g.degree == d]
        basis = monomial_basis(a.nvars, d)
        vecs = np.array([basis.vector(g) for g in here], dtype=np.int64).reshape(-1, basis.dim)
        in_module = all(md.contains(v) for v in vecs)
        stacked = np.vstack([am.rows, vecs])
        residual = rref(stacked, a.p)[0].shape[0] - am.rank
        needed = md.rank - am.rank
        ok = in_module and residual == len(here) and len(here) == needed
        cert.per_degree.append(DegreeRecord(d, md.rank, am.rank, len(here), residual, ok))
        if not ok:
            if residual < len(here):
                failures.append(f"degree {d}: candidates dependent modulo A_+M")
            else:
                failures.append(f"degree {d}: {len(here)} candidates but {needed} needed")

    ft.independent = not failures
    cert.freetest = ft
    if failures:
        cert.reason = "; ".join(failures)
    elif ft.error:
        cert.reason = ft.error
    elif not ft.ok:
        cert.reason = (
            f"freetest mismatch: count {ft.count} vs r {ft.r} (expected {ft.expected_r}), "
            f"degree sum {ft.degree_sum} vs s {ft.s} (expected {ft.expected_s})"
        )
    return cert


def secondary_certify(case: CaseData) -> Certificate:
    """Certify the secondary invariants as free generators of k[V]^G over A."""
    return nakayama_certify(case, case.secondary, n=1, expected=secondary_expected(case))


def generated_series(case: CaseData, candidates: list, n: int, bound: int) -> TruncatedSeries:
    """Dimensions of (A * span(candidates))_d for d <= bound."""
    a = case.action
    by_degree: dict = {}
    for g in candidates:
        by_degree.setdefault(g.degree, []).append(g)
    slices = {
        d: SubspaceSlice.from_polys(monomial_basis(a.nvars, d), gs, a.p) for d, gs in by_degree.items()
    }
    return TruncatedSeries(
        tuple(module_product_slice(a, case.hsop, slices, d).rank for d in range(bound + 1))
    )


@dataclass
class SsubalgCheck:
    report: SsubalgReport
    module_numerator: HilbertNumerator
    algebra_numerator: HilbertNumerator

    @property
    def ok(self) -> bool:
        return self.report.ok


def verify_ssubalg(case: CaseData, n: int | None = None) -> SsubalgCheck:
    """Rank and s of K_n over B (hsop algebra) directly and through A = k[V]^G."""
    spec = case.spec if n is None else CaseSpec(case.spec.kind, case.spec.p, n)
    mcase = build_case(spec)
    f = kernel_numerator(mcase, spec.n, max(g.degree for g in mcase.candidates))
    g = kernel_numerator(mcase, 1, max(h.degree for h in mcase.secondary))
    return SsubalgCheck(ssubalg_report(f, g), f, g)
