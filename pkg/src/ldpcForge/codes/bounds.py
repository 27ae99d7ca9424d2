"""Closed-form counting bounds behind the minimum-distance upper bound.

Factorials and powers are compared in the log domain first; when the two
sides are within LOG_MARGIN of each other (relative) the comparison is redone
exactly with Python integers.
"""

import logging
import math
from fractions import Fraction
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from ldpcForge.codes.errors import HypothesisViolated
from ldpcForge.codes.models import BoundReport

LOG_MARGIN = 1e-6


class VcSize(NamedTuple):
    exact: int
    upper: float
    log_upper: float


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def _log_geq(lhs: float, rhs: float, exact: Callable[[], bool]) -> bool:
    if abs(lhs - rhs) <= LOG_MARGIN * max(1.0, abs(rhs)):
        return exact()
    return lhs >= rhs


def c_of(r: int, k: int) -> int:
    """Size of a reduced multisupport, k(r-2)+r."""
    return k * (r - 2) + r


def v_c_size(m: int, c: int) -> VcSize:
    """|V_c| = binomial(m+c-1, c) together with the (m+c)^c / c! upper bound."""
    exact = math.comb(m + c - 1, c)
    log_upper = c * math.log(m + c) - math.lgamma(c + 1)
    return VcSize(exact=exact, upper=_exp(log_upper), log_upper=log_upper)


def b_lower(t: int, c: int) -> float:
    """t^c / c!, a lower bound on the number of vectors within pairing width t/2."""
    return _exp(c * math.log(t) - math.lgamma(c + 1))


def b_exact_lower(t: int, c: int) -> int:
    """binomial(t+c, c), the count the ball bound is relaxed from."""
    return math.comb(t + c, c)


def m_k_lower(n: int, m: int, t: int, k: int) -> float:
    """(n-m) t^k / (k+1)!, a lower bound on the number of chains.

    Raises:
        HypothesisViolated: if t <= 2k
    """
    if t <= 2 * k:
        raise HypothesisViolated(f"the chain count needs t > 2k, got t={t}, k={k}")
    return _exp(math.log(n - m) + k * math.log(t) - math.lgamma(k + 2))


def m_k_product_lower(n: int, m: int, t: int, k: int) -> Fraction:
    """(n-m)/(k+1)! times the product of (2t-2i) for i < k."""
    if t <= 2 * k:
        raise HypothesisViolated(f"the chain count needs t > 2k, got t={t}, k={k}")
    prod = 1
    for i in range(k):
        prod *= 2 * t - 2 * i
    return Fraction((n - m) * prod, math.factorial(k + 1))


def packing_satisfied(n: int, m: int, r: int, k: int, t: int) -> bool:
    """(n-m) t^(k+c) / (k+1)! >= (m+c)^c."""
    c = c_of(r, k)
    if t < 1:
        return False
    lhs = math.log(n - m) + (k + c) * math.log(t) - math.lgamma(k + 2)
    rhs = c * math.log(m + c)
    return _log_geq(
        lhs, rhs,
        lambda: (n - m) * t ** (k + c) >= (m + c) ** c * math.factorial(k + 1),
    )


def _t_condition(t: int, m: int, r: int, k: int, c: int) -> bool:
    # t^(k+c) >= r (k+1)! (m+c)^c / m, multiplied out
    return t ** (k + c) * m >= r * math.factorial(k + 1) * (m + c) ** c


def choose_t(m: int, r: int, k: int) -> int:
    """Smallest t with t^(k+c) >= r (k+1)! (m+c)^c / m."""
    c = c_of(r, k)
    log_target = math.log(r) + math.lgamma(k + 2) + c * math.log(m + c) - math.log(m)
    t = max(1, math.ceil(_exp(log_target / (k + c))))
    # the float root can be off by one either way
    while not _t_condition(t, m, r, k, c):
        t += 1
    while t > 1 and _t_condition(t - 1, m, r, k, c):
        t -= 1
    return t


def weight_bound(t: int, k: int, r: int) -> int:
    """2(k+1) + t(k+1)r."""
    return 2 * (k + 1) + t * (k + 1) * r


def column_set_bound(s_size: int, t: int, r: int) -> int:
    """|S| + t * ceil(|S| r / 2).

    The formula presumes the column sum has even weight so its support splits
    into pairs; for odd |S| r the pair count is rounded up.
    """
    return s_size + t * ((s_size * r + 1) // 2)


def epsilon(r: int, k: int) -> Fraction:
    """1 / ((r-1)(k(r-1)+r))."""
    return Fraction(1, (r - 1) * (k * (r - 1) + r))


def exponents(r: int, k: int) -> Tuple[Fraction, Fraction, Fraction]:
    """(new, old, lower) exponents of n: (r-2)/(r-1)+epsilon, (r-1)/r and (r-2)/r."""
    new = Fraction(r - 2, r - 1) + epsilon(r, k)
    return new, Fraction(r - 1, r), Fraction(r - 2, r)


def optimal_k(m: int, r: int, k_max: int) -> int:
    """The k in [0, k_max] minimizing weight_bound(choose_t(m, r, k), k, r); ties go to the smaller k."""
    best_k, best_w = 0, None
    for k in range(k_max + 1):
        w = weight_bound(choose_t(m, r, k), k, r)
        if best_w is None or w < best_w:
            best_k, best_w = k, w
    return best_k


def bound_report(m: int, r: int, k: int, n: Optional[int] = None) -> BoundReport:
    """All closed-form quantities for one (r, k, m); n defaults to 2m."""
    if n is None:
        n = 2 * m
    t_star = choose_t(m, r, k)
    if t_star <= 2 * k:
        logging.warning(f"[bounds] t*={t_star} does not exceed 2k={2 * k} at m={m}; the chain count does not apply")
    if (n - m) * r >= m and not packing_satisfied(n, m, r, k, t_star):
        logging.warning(f"[bounds] packing condition fails at n={n}, m={m}, r={r}, k={k}, t={t_star}")
    new, old, lower = exponents(r, k)
    return BoundReport(
        r=r, k=k, m=m, n=n,
        c=c_of(r, k),
        t_star=t_star,
        weight_bound=weight_bound(t_star, k, r),
        epsilon=epsilon(r, k),
        new_exponent=new,
        old_exponent=old,
        lower_exponent=lower,
    )


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log y against log x."""
    x = np.log(np.asarray(xs, dtype=float))
    y = np.log(np.asarray(ys, dtype=float))
    if x.size < 2:
        raise ValueError(f"a slope needs at least two points, got {x.size}")
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
