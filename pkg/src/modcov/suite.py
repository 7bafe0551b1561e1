"""Randomised operator identities and the batch of checks run by ``modcov suite``."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .action import CyclicAction, Subgroup, act, delta, transfer, weight
from .arith import binom_mod, is_prime
from .cases import (
    LEMMAS,
    CaseKind,
    CaseSpec,
    build_case,
    covariant_from_row,
    covariant_slice,
    is_covariant,
    lead_term_lemma_check,
    make_action,
    xi,
    xi_slice_matrix,
)
from .certify import nakayama_certify, secondary_certify, secondary_expected, verify_ssubalg
from .poly import Polynomial
from .slices import kernel_slice, rref, transfer_kernel_slice

GROUPS = ("certificates", "secondary", "ssubalg", "xi", "properties", "lemmas", "mutation", "transfer")

# V2+V2 slices grow as C(d+3, 3); p = 7 needs degree 19 and is left out of batch runs.
V2V2_MAX_P = 5


def primes_upto(n: int) -> list:
    return [p for p in range(2, n + 1) if is_prime(p)]


def acceptance_specs(max_p: int = 7) -> list:
    specs = []
    for p in primes_upto(max_p):
        specs += [CaseSpec(CaseKind.V2, p, n) for n in range(1, p + 1)]
    for p in primes_upto(max_p):
        if p > 2:
            specs += [CaseSpec(CaseKind.V3, p, n) for n in range(1, p + 1)]
    for p in primes_upto(min(max_p, V2V2_MAX_P)):
        specs += [CaseSpec(CaseKind.V2V2, p, n) for n in range(1, p + 1)]
    if max_p >= 2:
        specs += [CaseSpec(CaseKind.V3C4, 2, n) for n in range(1, 5)]
    return specs


def property_actions(max_p: int = 7) -> list:
    out = []
    for p in primes_upto(max_p):
        out.append(make_action(CaseKind.V2, p))
        if p > 2:
            out.append(make_action(CaseKind.V3, p))
        out.append(make_action(CaseKind.V2V2, p))
    if max_p >= 2:
        out.append(make_action(CaseKind.V3C4, 2))
    return out


# -- random operator identities ------------------------------------------------


def random_poly(a: CyclicAction, rng: random.Random, max_deg: int = 3, max_terms: int = 4) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        d = rng.randint(0, max_deg)
        mono = [0] * a.nvars
        for _ in range(d):
            mono[rng.randrange(a.nvars)] += 1
        terms[tuple(mono)] = rng.randrange(1, a.p)
    return Polynomial(terms, a.nvars, a.p)


def random_monomial(a: CyclicAction, rng: random.Random, max_deg: int = 3) -> Polynomial:
    return random_poly(a, rng, max_deg, 1).mul_monomial((0,) * a.nvars, 1)


def _powers(a, f, upto):
    out = [f]
    for _ in range(upto):
        out.append(delta(a, out[-1]))
    return out


def check_twisted_derivation(a, f, g) -> bool:
    return delta(a, f * g) == f * delta(a, g) + delta(a, f) * act(a, 1, g)


def check_leibniz(a, f, g) -> bool:
    q = a.q
    df, dg, dfg = _powers(a, f, q), _powers(a, g, q), _powers(a, f * g, q)
    for k in range(q + 1):
        rhs = a.zero()
        for i in range(k + 1):
            c = binom_mod(k, i, a.p)
            if c:
                rhs = rhs + (df[i] * act(a, i, dg[k - i])).scale(c)
        if rhs != dfg[k]:
            return False
    return True


def check_power_rule(a, f, k) -> bool:
    sf = act(a, 1, f)
    total = a.zero()
    for i in range(k):
        total = total + f**i * sf ** (k - 1 - i)
    return delta(a, f**k) == delta(a, f) * total


def check_commutation(a, f) -> bool:
    return act(a, 1, delta(a, f)) == delta(a, act(a, 1, f))


def check_nilpotent(a, f) -> bool:
    return _powers(a, f, a.q)[-1].is_zero()


def check_trace(a, f) -> bool:
    return _powers(a, f, a.q - 1)[-1] == transfer(a, Subgroup(a.prime.k), f)


def check_kernel_characterisation(a, f) -> bool:
    invariant = delta(a, f).is_zero()
    fixed = all(act(a, i, f) == f for i in range(a.q))
    return invariant == fixed


def _random_invariant(a, rng):
    case = build_case(CaseSpec(CaseKind(a.name), 2 if a.name == "v3c4" else a.p, 1))
    gens = case.hsop + case.secondary
    f = a.zero()
    for _ in range(rng.randint(1, 3)):
        term = a.one()
        for _ in range(rng.randint(0, 2)):
            term = term * rng.choice(gens[:2] + case.secondary[1:2])
        f = f + term.scale(rng.randrange(1, a.p))
    return f


PROPERTIES = (
    "twisted-derivation",
    "leibniz",
    "power-rule",
    "commutation",
    "nilpotent",
    "trace",
    "weight-product",
    "kernel-characterisation",
)


def property_failures(a: CyclicAction, samples: int = 500, seed: int = 0) -> dict:
    """Failure counts of each operator identity over ``samples`` random inputs."""
    rng = random.Random(f"{a.name}-{a.p}-{seed}")
    fails = dict.fromkeys(PROPERTIES, 0)
    for _ in range(samples):
        f, g = random_poly(a, rng), random_poly(a, rng)
        fails["twisted-derivation"] += not check_twisted_derivation(a, f, g)
        fails["leibniz"] += not check_leibniz(a, random_poly(a, rng, 2, 3), random_poly(a, rng, 2, 3))
        fails["power-rule"] += not check_power_rule(a, random_poly(a, rng, 2, 3), rng.randint(1, 4))
        fails["commutation"] += not check_commutation(a, f)
        fails["nilpotent"] += not check_nilpotent(a, f)
        fails["trace"] += not check_trace(a, g)
        h = _random_invariant(a, rng) if rng.random() < 0.5 else f
        fails["kernel-characterisation"] += not check_kernel_characterisation(a, h)
        for _ in range(100):
            m1, m2 = random_monomial(a, rng), random_monomial(a, rng)
            w1, w2 = weight(a, m1), weight(a, m2)
            if w1 + w2 - 1 <= a.p:
                fails["weight-product"] += weight(a, m1 * m2) != w1 + w2 - 1
                break
        else:
            fails["weight-product"] += 1
    return fails


# -- batch checks ------------------------------------------------------------------


@dataclass
class CheckResult:
    group: str
    label: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"group": self.group, "label": self.label, "ok": self.ok, "detail": self.detail}


def run_certificate(spec: CaseSpec) -> CheckResult:
    cert = nakayama_certify(build_case(spec))
    ft = cert.freetest
    detail = {"verdict": cert.verdict}
    if ft is not None:
        detail.update(count=ft.count, r=ft.r, degree_sum=ft.degree_sum, s=ft.s)
    return CheckResult("certificates", spec.label(), cert.verified, detail)


def run_secondary(kind: CaseKind, p: int) -> CheckResult:
    case = build_case(CaseSpec(kind, p, 1))
    cert = secondary_certify(case)
    exp = secondary_expected(case)
    ft = cert.freetest
    ok = cert.verified and ft.s == exp.s and ft.r == exp.r
    label = kind.value if kind is CaseKind.V3C4 else f"{kind.value} p={p}"
    return CheckResult("secondary", label, ok, {"verdict": cert.verdict, "r": ft.r, "s": ft.s})


def run_ssubalg(spec: CaseSpec) -> CheckResult:
    case = build_case(spec)
    chk = verify_ssubalg(case)
    rep = chk.report
    ok = chk.ok and (rep.r_MB, rep.s_MB) == (case.expected.r, case.expected.s)
    if spec.kind in (CaseKind.V3, CaseKind.V2V2):
        ok = ok and rep.s_MA == 0
    return CheckResult("ssubalg", spec.label(), ok, vars(rep).copy())


def run_xi(spec: CaseSpec, samples: int = 5, seed: int = 0) -> CheckResult:
    """Dimension match, full-rank xi images inside the covariants, and polynomial-level invariance."""
    case = build_case(spec)
    a, p = case.action, case.action.p
    top = max(g.degree for g in case.candidates)
    rng = random.Random(seed)
    bad = []
    for d in range(top + 1):
        ker = kernel_slice(a, spec.n, d)
        cov = covariant_slice(spec, d)
        images = xi_slice_matrix(spec, d)
        img_rank = rref(images, p)[0].shape[0]
        joint = rref(np.vstack([cov, images]), p)[0].shape[0]
        if not (cov.shape[0] == ker.rank == img_rank and joint == cov.shape[0]):
            bad.append(d)
            continue
        for _ in range(min(samples, ker.rank)):
            coeffs = np.array([rng.randrange(p) for _ in range(ker.rank)], dtype=np.int64)
            f = ker.basis.polynomial((coeffs @ ker.rows) % p, p)
            if f and not is_covariant(spec, xi(spec, f)):
                bad.append(d)
                break
        if cov.shape[0] and not is_covariant(spec, covariant_from_row(spec, cov[0], d)):
            bad.append(d)
    for g in case.candidates:
        if not is_covariant(spec, xi(spec, g)):
            bad.append(f"candidate {g}")
    return CheckResult("xi", spec.label(), not bad, {"bad_degrees": [str(b) for b in bad], "top": top})


def run_properties(a: CyclicAction, samples: int) -> CheckResult:
    fails = property_failures(a, samples)
    return CheckResult("properties", f"{a.name} p={a.p}", not any(fails.values()), fails)


def run_lemma(lemma: str, p: int, samples: int = 200) -> CheckResult:
    rep = lead_term_lemma_check(lemma, p, samples)
    return CheckResult(
        "lemmas",
        f"{lemma} p={p}",
        rep.ok,
        {"order": rep.order.value, "checked": rep.checked, "failures": [str(f) for f in rep.failures[:5]],
         "notes": rep.notes},
    )


def lemma_plan(max_p: int = 7) -> list:
    plan = []
    for p in primes_upto(max_p):
        if p in (3, 5, 7):
            plan += [("x1-powers", p), ("x1-powers-x2", p), ("obs", p)]
        if p in (3, 5):
            plan.append(("v2v2-lead", p))
    return plan


def mutants(case) -> list:
    """Candidate lists with one element removed or multiplied by an hsop element."""
    g = min(case.hsop, key=lambda h: h.degree)
    out = []
    for i in range(len(case.candidates)):
        out.append((f"drop {i}", case.candidates[:i] + case.candidates[i + 1:]))
        scaled = list(case.candidates)
        scaled[i] = scaled[i] * g
        out.append((f"multiply {i}", scaled))
    return out


def run_mutation(spec: CaseSpec) -> CheckResult:
    case = build_case(spec)
    survived = [name for name, cands in mutants(case) if nakayama_certify(case, cands).verified]
    return CheckResult("mutation", spec.label(), not survived, {"survivors": survived})


def run_transfer(max_degree: int = 12) -> CheckResult:
    a = make_action(CaseKind.V3C4, 2)
    pairs = [
        (transfer_kernel_slice(a, Subgroup(1), d).rank, kernel_slice(a, 1, d).rank)
        for d in range(max_degree + 1)
    ]
    return CheckResult("transfer", "v3c4 H=<sigma^2>", all(x == y for x, y in pairs), {"ranks": pairs})


def run_suite(max_p: int = 7, groups=GROUPS, samples: int = 500) -> list:
    specs = acceptance_specs(max_p)
    results = []
    groups = set(groups)
    if "certificates" in groups:
        results += [run_certificate(s) for s in specs]
    if "secondary" in groups:
        seen = []
        for s in specs:
            if (s.kind, s.p) not in seen and s.kind is not CaseKind.V2:
                seen.append((s.kind, s.p))
        results += [run_secondary(k, p) for k, p in seen]
    if "ssubalg" in groups:
        results += [run_ssubalg(s) for s in specs]
    if "xi" in groups:
        results += [run_xi(s) for s in specs]
    if "properties" in groups:
        results += [run_properties(a, samples) for a in property_actions(max_p)]
    if "lemmas" in groups:
        results += [run_lemma(lemma, p) for lemma, p in lemma_plan(max_p)]
    if "mutation" in groups:
        results += [run_mutation(s) for s in specs]
    if "transfer" in groups and max_p >= 2:
        results.append(run_transfer())
    return results


assert set(LEMMAS) >= {name for name, _ in lemma_plan()}
