from modcov.cases import CaseKind, CaseSpec, build_case


def case(kind, p, n):
    return build_case(CaseSpec(CaseKind(kind), p, n))
