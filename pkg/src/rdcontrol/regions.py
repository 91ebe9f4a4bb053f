"""Convex link-rate regions with membership tests and max-weight optimization.

Three concrete families:

* :class:`BoxRegion` — decoupled per-link capacity caps.
* :class:`GaussianMacRegion` — the Gaussian multiple-access polymatroid:
  every user subset S must satisfy ``sum_{i in S} r_i <= C(sum_{i in S} P_i)``
  with ``C(P) = (1/2)*log2(1 + P/N)``.
* :class:`VertexRegion` — the convex hull of an explicit vertex list
  (time sharing between operating points).

``max_weight(lam)`` maximizes ``lam . r`` over the region with a
deterministic tie-break (descending weight, then ascending user index),
so repeated solves of the same instance are bit-identical.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.optimize import linprog

from .errors import DomainError

MAX_MAC_USERS = 16  # membership enumerates all 2^n - 1 subsets


def capacity_C(P: float, N: float) -> float:
    """AWGN capacity (1/2)*log2(1 + P/N) in bits per channel use."""
    if not N > 0:
        raise DomainError(f"capacity_C: noise must be > 0, got {N}")
    if P < 0:
        raise DomainError(f"capacity_C: power must be >= 0, got {P}")
    return 0.5 * math.log2(1.0 + P / N)


def _as_rate_vector(r: Sequence[float], dim: int, what: str) -> np.ndarray:
    arr = np.asarray(r, dtype=float)
    if arr.shape != (dim,):
        raise DomainError(f"{what}: expected a vector of length {dim}, got shape {arr.shape}")
    return arr


def _check_weights(lam: Sequence[float], dim: int) -> np.ndarray:
    arr = _as_rate_vector(lam, dim, "max_weight")
    if np.any(arr < 0):
        raise DomainError(f"max_weight: weights must be nonnegative, got {arr}")
    return arr


@dataclass(frozen=True)
class BoxRegion:
    """Independent links: feasible iff 0 <= r_i <= caps_i for all i."""

    caps: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "caps", tuple(float(c) for c in self.caps))
        if len(self.caps) == 0:
            raise DomainError("BoxRegion needs at least one link")
        if any(c < 0 for c in self.caps):
            raise DomainError(f"BoxRegion caps must be >= 0, got {self.caps}")

    @property
    def dim(self) -> int:
        return len(self.caps)

    def contains(self, r: Sequence[float], tol: float = 1e-9) -> bool:
        arr = _as_rate_vector(r, self.dim, "contains")
        caps = np.asarray(self.caps)
        return bool(np.all(arr >= -tol) and np.all(arr <= caps + tol))

    def violation(self, r: Sequence[float]) -> float:
        """Largest additive constraint violation (0 when feasible)."""
        arr = _as_rate_vector(r, self.dim, "violation")
        caps = np.asarray(self.caps)
        return float(max(0.0, np.max(arr - caps), np.max(-arr)))

    def max_weight(self, lam: Sequence[float]) -> np.ndarray:
        _check_weights(lam, self.dim)
        # every cap is a maximizer coordinate; zero weights tie-break to the cap
        return np.asarray(self.caps, dtype=float)


@dataclass(frozen=True)
class GaussianMacRegion:
    """Gaussian multiple-access capacity region (a polymatroid)."""

    powers: tuple[float, ...]
    noise: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "powers", tuple(float(p) for p in self.powers))
        if len(self.powers) == 0:
            raise DomainError("GaussianMacRegion needs at least one user")
        if len(self.powers) > MAX_MAC_USERS:
            raise DomainError(
                f"GaussianMacRegion supports at most {MAX_MAC_USERS} users "
                f"(subset enumeration), got {len(self.powers)}"
            )
        if any(p < 0 for p in self.powers):
            raise DomainError(f"powers must be >= 0, got {self.powers}")
        if not self.noise > 0:
            raise DomainError(f"noise must be > 0, got {self.noise}")

    @property
    def dim(self) -> int:
        return len(self.powers)

    def subset_capacity(self, subset: Iterable[int]) -> float:
        """C(sum of subset powers): the rank function of the polymatroid."""
        return capacity_C(sum(self.powers[i] for i in subset), self.noise)

    def contains(self, r: Sequence[float], tol: float = 1e-9) -> bool:
        return self.violation(r) <= tol

    def violation(self, r: Sequence[float]) -> float:
        arr = _as_rate_vector(r, self.dim, "violation")
        worst = float(np.max(-arr))
        idx = range(self.dim)
        for k in range(1, self.dim + 1):
            for subset in itertools.combinations(idx, k):
                excess = sum(arr[i] for i in subset) - self.subset_capacity(subset)
                if excess > worst:
                    worst = excess
        return max(0.0, worst)

    def vertex(self, order: Sequence[int]) -> np.ndarray:
        """Greedy polymatroid vertex for a serving order.

        The first user in ``order`` gets its full single-user capacity, each
        later user the marginal capacity on top of those already served.
        """
        if sorted(order) != list(range(self.dim)):
            raise DomainError(f"vertex: order must permute 0..{self.dim - 1}, got {order}")
        r = np.zeros(self.dim)
        total = 0.0
        prev = 0.0
        for i in order:
            total += self.powers[i]
            cur = capacity_C(total, self.noise)
            r[i] = cur - prev
            prev = cur
        return r

    def max_weight(self, lam: Sequence[float]) -> np.ndarray:
        arr = _check_weights(lam, self.dim)
        order = sorted(range(self.dim), key=lambda i: (-arr[i], i))
        return self.vertex(order)


@dataclass(frozen=True)
class VertexRegion:
    """Convex hull of a finite set of nonnegative rate vectors (time sharing)."""

    vertices: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        verts = tuple(tuple(float(x) for x in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if len(verts) == 0:
            raise DomainError("VertexRegion needs at least one vertex")
        d = len(verts[0])
        if d == 0 or any(len(v) != d for v in verts):
            raise DomainError("VertexRegion vertices must share a positive dimension")
        if any(x < 0 for v in verts for x in v):
            raise DomainError("VertexRegion vertices must be nonnegative")

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def contains(self, r: Sequence[float], tol: float = 1e-9) -> bool:
        arr = _as_rate_vector(r, self.dim, "contains")
        V = np.asarray(self.vertices, dtype=float)  # (m, dim)
        m = V.shape[0]
        # feasibility of convex weights theta >= 0, sum theta = 1,
        # |V^T theta - r|_inf <= tol
        A_ub = np.vstack([V.T, -V.T])
        b_ub = np.concatenate([arr + tol, -(arr - tol)])
        res = linprog(
            c=np.zeros(m),
            A_ub=A_ub,
            b_ub=b_ub,
            A_eq=np.ones((1, m)),
            b_eq=np.array([1.0]),
            bounds=[(0, None)] * m,
            method="highs",
        )
        return bool(res.status == 0)

    def violation(self, r: Sequence[float]) -> float:
        """Smallest t with r within sup-norm t of the hull."""
        arr = _as_rate_vector(r, self.dim, "violation")
        V = np.asarray(self.vertices, dtype=float)
        m = V.shape[0]
        # variables (theta_1..theta_m, t): minimize t
        A_ub = np.vstack(
            [
                np.hstack([V.T, -np.ones((self.dim, 1))]),
                np.hstack([-V.T, -np.ones((self.dim, 1))]),
            ]
        )
        b_ub = np.concatenate([arr, -arr])
        res = linprog(
            c=np.concatenate([np.zeros(m), [1.0]]),
            A_ub=A_ub,
            b_ub=b_ub,
            A_eq=np.concatenate([np.ones((1, m)), [[0.0]]], axis=1),
            b_eq=np.array([1.0]),
            bounds=[(0, None)] * m + [(0, None)],
            method="highs",
        )
        if res.status != 0:
            raise DomainError("violation: hull distance LP failed")
        return float(res.fun)

    def max_weight(self, lam: Sequence[float]) -> np.ndarray:
        arr = _check_weights(lam, self.dim)
        V = np.asarray(self.vertices, dtype=float)
        scores = V @ arr
        best = int(np.argmax(scores))  # first index on exact ties
        return V[best].copy()


RateRegion = Union[BoxRegion, GaussianMacRegion, VertexRegion]
