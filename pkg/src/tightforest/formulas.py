"""Closed-form bound evaluators.

Exact-integer formulas use math.comb (arbitrary precision, no overflow).
Real-valued formulas drop the o(1)/o(n^r) slack; the condition string on
the returned BoundValue records that and any rounding conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

comb = math.comb


@dataclass(frozen=True)
class BoundValue:
    kind: str  # "exact-integer" | "real"
    value: object
    condition: str

    def __post_init__(self):
        assert self.kind in ("exact-integer", "real")

    def to_json(self):
        return {"kind": self.kind, "value": self.value, "condition": self.condition}


@dataclass(frozen=True)
class Beta0:
    value: float
    residual: float


def crossover_poly(x: float) -> float:
    """27x^3 + (1-x)^3 - 1; its root in (0, 1/3) is the branch crossover."""
    return 27.0 * x**3 + (1.0 - x) ** 3 - 1.0


def beta0() -> Beta0:
    """Positive root (sqrt(321)-3)/52 of crossover_poly, with its residual."""
    v = (math.sqrt(321.0) - 3.0) / 52.0
    return Beta0(value=v, residual=crossover_poly(v))


BETA0 = beta0().value
ALPHA_SPLIT_R3 = 4.5 * BETA0**3  # (9/2) * beta0^3, branch split for r=3


def emc_rhs(n: int, r: int, k: int) -> BoundValue:
    """max{C(rk+r-1, r), C(n,r) - C(n-k, r)}: the matching-family bound."""
    if r < 1:
        raise DomainError(f"emc_rhs: r >= 1 required, got {r}")
    if not 0 <= k * r <= n:
        raise DomainError(f"emc_rhs: 0 <= k <= n/r required, got n={n}, k={k}")
    val = max(comb(r * k + r - 1, r), comb(n, r) - comb(n - k, r))
    return BoundValue("exact-integer", val, f"0 <= k <= n/r; exact for n >= {r * k + r - 1}")


def conjecture_rhs(n: int, r: int, k: int) -> BoundValue:
    """max{C(k+r-2, r), C(n,r) - C(n-(k-1)/r, r)}: the forest-family bound."""
    if k <= r:
        raise DomainError(f"conjecture_rhs: k > r required, got k={k}, r={r}")
    if k % r != 1:
        raise DomainError(f"conjecture_rhs: k = 1 (mod r) required, got k={k}, r={r}")
    if n < k + r - 2:
        raise DomainError(f"conjecture_rhs: n >= k+r-2 = {k + r - 2} required, got n={n}")
    t = (k - 1) // r
    val = max(comb(k + r - 2, r), comb(n, r) - comb(n - t, r))
    return BoundValue("exact-integer", val, f"k > r, k = 1 (mod r), n >= {k + r - 2}")


def emc_reduction_check(n: int, r: int, k: int) -> bool:
    """conjecture_rhs at k' = rk+1 must equal emc_rhs at k. Exact integers."""
    if k < 1:
        raise DomainError(f"emc_reduction_check: k >= 1 required, got {k}")
    if n < r * k + r - 1:
        raise DomainError(
            f"emc_reduction_check: n >= rk+r-1 = {r * k + r - 1} required, got n={n}"
        )
    return conjecture_rhs(n, r, r * k + 1).value == emc_rhs(n, r, k).value


def ning_wang_rhs(n: int, k: int) -> BoundValue:
    """Graph case (r=2), proven: max{C(k,2), C(n,2) - C(n-floor((k-1)/2),2) + c}."""
    if not 2 <= k <= n - 1:
        raise DomainError(f"ning_wang_rhs: 2 <= k <= n-1 required, got n={n}, k={k}")
    c = 0 if k % 2 == 1 else 1
    t = (k - 1) // 2
    val = max(comb(k, 2), comb(n, 2) - comb(n - t, 2) + c)
    return BoundValue("exact-integer", val, "2 <= k <= n-1; c=1 for even k")


def matching_turan_rhs_r3(n: int, k: int) -> BoundValue:
    """Proven matching bound for r=3: max{C(3k+2,3), C(n,3) - C(n-k,3)}."""
    if k < 0:
        raise DomainError(f"matching_turan_rhs_r3: k >= 0 required, got {k}")
    if n < 3 * k + 2:
        raise DomainError(f"matching_turan_rhs_r3: n >= 3k+2 = {3 * k + 2} required, got n={n}")
    val = max(comb(3 * k + 2, 3), comb(n, 3) - comb(n - k, 3))
    return BoundValue("exact-integer", val, f"n >= {3 * k + 2}")


def matching_turan_rhs_general(n: int, r: int, k: int) -> BoundValue:
    """Proven matching bound for n >= (2r-1)k+r: C(n,r) - C(n-k,r)."""
    if r < 2 or k < 0:
        raise DomainError(f"matching_turan_rhs_general: r >= 2, k >= 0 required, got r={r}, k={k}")
    if n < (2 * r - 1) * k + r:
        raise DomainError(
            f"matching_turan_rhs_general: n >= (2r-1)k+r = {(2 * r - 1) * k + r} "
            f"required, got n={n}"
        )
    val = comb(n, r) - comb(n - k, r)
    return BoundValue("exact-integer", val, f"n >= {(2 * r - 1) * k + r}")


def _general_alpha_cap(r: int) -> float:
    return (1.0 - (1.0 - 1.0 / (2 * r)) ** r) / math.factorial(r)


def matching_lb_r3(alpha: float, n: int) -> BoundValue:
    """Matching lower bound for 3-graphs with alpha*n^3 edges; o(1) dropped.

    Below the crossover: (1 - (1-6a)^(1/3)) n - 2. Above: ((6a)^(1/3)/3) n - 1.
    At the crossover exactly, the max of both branches.
    """
    if not 0.0 < alpha < 1.0 / 6.0:
        raise DomainError(f"matching_lb_r3: 0 < alpha < 1/6 required, got {alpha}")
    lo = (1.0 - (1.0 - 6.0 * alpha) ** (1.0 / 3.0)) * n - 2.0
    hi = ((6.0 * alpha) ** (1.0 / 3.0) / 3.0) * n - 1.0
    if alpha < ALPHA_SPLIT_R3:
        val = lo
    elif alpha > ALPHA_SPLIT_R3:
        val = hi
    else:
        val = max(lo, hi)
    return BoundValue("real", val, "asymptotic, o(1)*n dropped; branch split at (9/2)beta0^3")


def matching_lb_general(alpha: float, n: int, r: int) -> BoundValue:
    """Matching lower bound (1 - (1-r!a)^(1/r)) n - r + 1; o(1) dropped."""
    if r < 2:
        raise DomainError(f"matching_lb_general: r >= 2 required, got {r}")
    cap = _general_alpha_cap(r)
    if not 0.0 < alpha < cap:
        raise DomainError(
            f"matching_lb_general: 0 < alpha < {cap!r} required for r={r}, got {alpha}"
        )
    val = (1.0 - (1.0 - math.factorial(r) * alpha) ** (1.0 / r)) * n - r + 1
    return BoundValue("real", val, f"asymptotic, o(1)*n dropped; 0 < alpha < {cap!r}")


def dense_forest_lb(alpha: float, n: int, r: int) -> BoundValue:
    """Forest lower bound in graphs with alpha*n^r edges; o(1) dropped.

    r=3 is piecewise with the split at (9/2)beta0^3 (branches agree there);
    r>=4 uses (r - r(1-r!a)^(1/r)) n on the general alpha range.
    """
    if r == 3:
        if not 0.0 < alpha < 1.0 / 6.0:
            raise DomainError(f"dense_forest_lb: 0 < alpha < 1/6 required for r=3, got {alpha}")
        lo = 3.0 * (1.0 - (1.0 - 6.0 * alpha) ** (1.0 / 3.0)) * n
        hi = (6.0 * alpha) ** (1.0 / 3.0) * n
        if alpha < ALPHA_SPLIT_R3:
            val = lo
        elif alpha > ALPHA_SPLIT_R3:
            val = hi
        else:
            val = max(lo, hi)
        return BoundValue("real", val, "asymptotic, o(1)*n dropped; split at (9/2)beta0^3")
    if r >= 4:
        cap = _general_alpha_cap(r)
        if not 0.0 < alpha < cap:
            raise DomainError(
                f"dense_forest_lb: 0 < alpha < {cap!r} required for r={r}, got {alpha}"
            )
        val = (r - r * (1.0 - math.factorial(r) * alpha) ** (1.0 / r)) * n
        return BoundValue("real", val, f"asymptotic, o(1)*n dropped; 0 < alpha < {cap!r}")
    raise DomainError(f"dense_forest_lb: r >= 3 required, got {r}")


def _comb_real(x: float, r: int) -> float:
    out = 1.0
    for i in range(r):
        out *= x - i
    return out / math.factorial(r)


def asymptotic_forest_rhs(n: int, r: int, c: float) -> BoundValue:
    """Leading-order forest bound at k = c*n:
    max{C(floor(cn), r), C(n,r) - C(n - cn/r, r)} with a real-valued second branch."""
    if r < 3:
        raise DomainError(f"asymptotic_forest_rhs: r >= 3 required, got {r}")
    if r == 3:
        if not 0.0 < c < 1.0:
            raise DomainError(f"asymptotic_forest_rhs: 0 < c < 1 required for r=3, got {c}")
    elif not 0.0 < c < 0.5:
        raise DomainError(f"asymptotic_forest_rhs: 0 < c < 1/2 required for r>=4, got {c}")
    clique = float(comb(int(math.floor(c * n)), r))
    join = comb(n, r) - _comb_real(n - c * n / r, r)
    return BoundValue(
        "real",
        max(clique, join),
        "leading order, o(n^r) dropped; clique branch rounds cn down, "
        "join branch uses the real falling-factorial binomial",
    )
