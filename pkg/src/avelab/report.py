"""One-call classification of a matrix against every implemented class."""

import numpy as np

from ._validation import check_matrix
from . import classify as C
from . import reform as R
from .core import DEFAULT_ENUM_LIMIT


def _unique_solvability(A, regularity, enum_limit):
    for key in ("sigma_min", "rho_abs_inverse", "symmetric_signature"):
        v = regularity[key]
        if v.is_true:
            return C.Verdict(True, v.method, v.certificate, {"via": key})
    sig = regularity["symmetric_signature"]
    if sig.is_false:
        return C.Verdict(False, sig.method, sig.certificate, {"via": "symmetric_signature"})
    return C.unique_solvability_oracle(A, enum_limit)


def classify_all(A, enum_limit=DEFAULT_ENUM_LIMIT, convexity_limit=C.DEFAULT_CONVEXITY_LIMIT):
    """Every predicate and sufficient condition for ``A``, keyed by name.

    Sufficient tests come first where they can settle a question cheaply;
    enumeration-based predicates respect ``enum_limit`` and the quartic-cost
    ones (convexity, auxiliary-LP exactness) respect ``convexity_limit``.
    """
    A = check_matrix(A, name="A")
    n = A.shape[0]
    rep = C.ClassificationReport()

    reg = C.regularity_sufficient(A)
    rep["unique_solvability"] = _unique_solvability(A, reg, enum_limit)
    rep["unique_solvability_oracle"] = C.unique_solvability_oracle(A, enum_limit)
    for k, v in reg.items():
        rep[f"regularity.{k}"] = v

    rep["nonneg_unique_solvability"] = C.nonneg_unique_solvability(A)
    rep["orthant_solvability"] = C.orthant_solvability_search(A, enum_limit)
    rep["rho_sign_condition"] = C.rho_sign_condition(A)
    I = np.eye(n)
    regular = rep["unique_solvability"]
    rep["inverse_nonneg_interval"] = C.inverse_nonneg_interval(C.IntervalMatrix(A - I, A + I))
    rep["inverse_nonneg_interval_via_regularity"] = C.inverse_nonneg_interval(
        C.IntervalMatrix(A - I, A + I), regular=regular)
    rep["interval_m_matrix"] = C.interval_m_matrix(C.IntervalMatrix(A - I, A + I))

    rep["finiteness_all_b"] = C.finiteness_all_b(A, enum_limit)
    for k, v in C.finiteness_sufficient(A).items():
        rep[f"finiteness.{k}"] = v
    rep["boundedness_all_b"] = C.boundedness_all_b(A, enum_limit)
    rep["convexity_all_b"] = C.convexity_all_b(A, convexity_limit)

    rep["feasible_for_all_b"] = R.feasible_for_all_b(A)
    rep["kkt16_feasible"] = R.kkt16_feasible(A, enum_limit)
    rep["condition17"] = R.condition17_check(A, convexity_limit)
    for k, v in R.condition17_sufficient(A, enum_limit).items():
        rep[f"condition17.{k}"] = v
    return rep
