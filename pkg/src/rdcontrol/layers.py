"""Closed-form solvers for the three decomposed control subproblems.

The compression layer picks (alpha, beta) against the rate-distortion
price mu, the congestion layer picks the compressed rate c against the
price difference lambda - mu, and the scheduling layer is handled by the
region's ``max_weight``.  The utility catalog is deliberately closed so
every subproblem has a checkable closed form:

* ``LogLinear(K)``:  V(alpha, beta) = ln(alpha) + K * beta
* ``LinearEntropyPenalty(delta)``:  V(D) = -delta * H(D)  (distortion
  program only, see :mod:`rdcontrol.mac`)
* ``LogRate(w)``:  U(c) = w * ln(c)
* ``Zero``:  U(c) = 0

Subproblems that are unbounded at degenerate prices (mu = 0, or
lambda <= mu) are regularized by :class:`SolverCaps`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .errors import DomainError, InfeasibleOffsetError, UnsupportedCombinationError
from .sources import SignFlags, binary_entropy, inverse_binary_entropy


@dataclass(frozen=True)
class LogLinear:
    """V(alpha, beta) = ln(alpha) + K*beta: proportional fairness in the
    entropy rate with a linear penalty on the distortion offset."""

    K: float

    def __post_init__(self) -> None:
        if not self.K > 0:
            raise DomainError(f"LogLinear: K must be > 0, got {self.K}")

    def value(self, alpha: float, beta: float) -> float:
        if not alpha > 0:
            raise DomainError(f"LogLinear undefined at alpha={alpha} (needs alpha > 0)")
        return math.log(alpha) + self.K * beta


@dataclass(frozen=True)
class LinearEntropyPenalty:
    """V(D) = -delta * H(D): utility linear in the entropy of the distortion."""

    delta: float

    def __post_init__(self) -> None:
        if not self.delta > 0:
            raise DomainError(f"LinearEntropyPenalty: delta must be > 0, got {self.delta}")

    def value(self, D: float) -> float:
        return -self.delta * binary_entropy(D)


UtilityV = Union[LogLinear, LinearEntropyPenalty]


@dataclass(frozen=True)
class LogRate:
    """U(c) = w * ln(c)."""

    w: float

    def __post_init__(self) -> None:
        if not self.w > 0:
            raise DomainError(f"LogRate: w must be > 0, got {self.w}")

    def value(self, c: float) -> float:
        if not c > 0:
            raise DomainError(f"LogRate undefined at c={c} (needs c > 0)")
        return self.w * math.log(c)


@dataclass(frozen=True)
class Zero:
    """U(c) = 0: the rate utility absorbed into V."""

    def value(self, c: float) -> float:
        return 0.0


UtilityU = Union[LogRate, Zero]


@dataclass(frozen=True)
class SolverCaps:
    """Box regularizers keeping price-driven subproblems bounded."""

    alpha_max: float = 1e6
    c_max: float = 1e6
    c_min: float = 1e-9

    def __post_init__(self) -> None:
        for name in ("alpha_max", "c_max", "c_min"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (math.isfinite(self.alpha_max) and self.alpha_max > 0):
            raise DomainError(f"alpha_max must be finite and > 0, got {self.alpha_max}")
        if self.c_min < 0:
            raise DomainError(f"c_min must be >= 0, got {self.c_min}")
        if not self.c_min < self.c_max:
            raise DomainError(f"need c_min < c_max, got [{self.c_min}, {self.c_max}]")


def compression_subproblem(
    V: UtilityV, mu: float, flags: SignFlags, caps: SolverCaps
) -> tuple[float, float]:
    """Maximize V(alpha, beta) - mu*(alpha + beta) under the sign constraints.

    Constraints: a*alpha >= 0, b*beta <= 0, alpha + beta >= 0, plus the
    alpha <= alpha_max regularizer.  Closed form for LogLinear with binary
    flags (a=b=1):

    * mu = 0:      (alpha_max, 0) — the cap binds.
    * 0 < mu <= K: beta = 0, alpha = min(1/mu, alpha_max).
    * mu > K:      the beta coefficient turns negative, the constraint
      alpha + beta >= 0 activates, and the point is (1/K, -1/K) (capped).
    """
    if mu < 0:
        raise DomainError(f"compression_subproblem: mu must be >= 0, got {mu}")
    if not isinstance(V, LogLinear):
        raise UnsupportedCombinationError(
            f"compression_subproblem has no closed form for {type(V).__name__}"
        )
    if (flags.a, flags.b) != (1, 1):
        raise UnsupportedCombinationError(
            f"LogLinear compression control needs sign flags (1,1), got "
            f"({flags.a},{flags.b}); free-signed sources are not in the catalog"
        )
    if mu == 0.0:
        return caps.alpha_max, 0.0
    if mu <= V.K:
        return min(1.0 / mu, caps.alpha_max), 0.0
    a = min(1.0 / V.K, caps.alpha_max)
    return a, -a


def congestion_subproblem(U: UtilityU, lam: float, mu: float, caps: SolverCaps) -> float:
    """Maximize U(c) - (lambda - mu)*c over [c_min, c_max]."""
    if lam < 0 or mu < 0:
        raise DomainError(f"congestion_subproblem: duals must be >= 0, got ({lam}, {mu})")
    if isinstance(U, LogRate):
        if lam > mu:
            return min(max(U.w / (lam - mu), caps.c_min), caps.c_max)
        return caps.c_max
    if isinstance(U, Zero):
        return caps.c_min if lam > mu else caps.c_max
    raise UnsupportedCombinationError(
        f"congestion_subproblem has no closed form for {type(U).__name__}"
    )


def compression_given_rate(K: float, c: float) -> float:
    """Optimal entropy rate for max ln(alpha) + K*(c - alpha) s.t. alpha >= c.

    The unconstrained maximizer is 1/K; the constraint alpha >= c (i.e.
    beta = c - alpha <= 0) clips it to c when the compressed rate is high.
    """
    if not K > 0:
        raise DomainError(f"compression_given_rate: K must be > 0, got {K}")
    if not c > 0:
        raise DomainError(f"compression_given_rate: c must be > 0, got {c}")
    inv_k = 1.0 / K
    return inv_k if inv_k >= c else float(c)


def operating_point(p: float, K: float, c: float) -> tuple[float, float]:
    """Decode the compression rule into (symbol rate, Hamming distortion).

    At low compressed rates (c <= 1/K) the source runs at the free symbol
    rate 1/(K*H(p)) and accepts distortion with H(D) = H(p)*(1 - c*K);
    at high rates it codes losslessly at symbol rate c/H(p).
    """
    if not 0.0 < p < 1.0:
        raise DomainError(f"operating_point: p must be in (0,1), got {p}")
    if not K > 0:
        raise DomainError(f"operating_point: K must be > 0, got {K}")
    if not c > 0:
        raise DomainError(f"operating_point: c must be > 0, got {c}")
    hp = binary_entropy(p)
    if 1.0 / K >= c:
        y = hp * (1.0 - c * K)
        if not 0.0 <= y <= 1.0:
            raise InfeasibleOffsetError(
                f"operating_point: H(D) = {y} falls outside [0,1]"
            )
        return 1.0 / (K * hp), inverse_binary_entropy(y)
    return c / hp, 0.0
