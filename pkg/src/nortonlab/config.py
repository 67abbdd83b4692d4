"""Centralized numeric tolerances.

Every threshold used by a verdict lives here so that reports can state the
exact regime a result was decided under.  Three bundles are provided:
``strict``, ``default`` and ``large-n`` (selected by the CLI flag
``--tolerance-profile``).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace


@dataclass(frozen=True)
class ToleranceProfile:
    name: str
    # entrywise tolerance for matrix identities (sum E_i = I, E_i E_j = d E_i)
    matrix_identity: float = 1e-9
    # Krein parameters may dip this far below zero before it is an error
    krein_negative: float = 1e-7
    # zero test in the Q-polynomial ordering search, relative to max Krein entry
    qpoly_zero: float = 1e-7
    # per-pair spread allowed when reading dual eigenvalues off an idempotent
    dual_eigen_spread: float = 1e-8
    # residual bound for exact vector identities (Norton formula, dependencies)
    identity_residual: float = 1e-8
    # Gram-based linear dependence: smallest singular value of normalized Gram
    gram_dependent: float = 1e-7
    # snap floats to integers when this close
    snap_round: float = 1e-6
    # common-root matching for the DC check, after coefficient normalization
    dc_root: float = 1e-6
    # relative bound for the vanishing 3x3 minors of the (u, v, w) matrix
    det3_minor: float = 1e-6
    # kite recurrence |z_i - z_2 a_i - a_1 b_i|
    kite_recurrence: float = 1e-8
    # parameter-pipeline consistency (beta/gamma* constancy, closed forms)
    param_consistency: float = 1e-8
    # relative tolerance for golden spectral data comparisons
    spectral_golden: float = 1e-9
    # Cauchy-Schwarz gaps must be >= -gap_floor
    gap_floor: float = 1e-8


DEFAULT = ToleranceProfile(name="default")
STRICT = replace(
    DEFAULT,
    name="strict",
    matrix_identity=1e-10,
    dual_eigen_spread=1e-9,
    identity_residual=1e-9,
)
LARGE_N = replace(
    DEFAULT,
    name="large-n",
    matrix_identity=1e-7,
    dual_eigen_spread=1e-7,
    identity_residual=1e-7,
)

PROFILES = {p.name: p for p in (STRICT, DEFAULT, LARGE_N)}


def profile(name: str) -> ToleranceProfile:
    try:
        return PROFILES[name]
    except KeyError:
        raise KeyError(f"unknown tolerance profile {name!r}; choose from {sorted(PROFILES)}")


def as_dict(p: ToleranceProfile) -> dict:
    return asdict(p)
