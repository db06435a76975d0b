"""Special-function kernel: log-gamma, digamma, trigamma, Laguerre, Kummer M and Tricomi U.

Every public function is pure and returns an :class:`FnEvalResult` carrying the
value and an absolute error estimate. Gamma-type functions are represented as
log-magnitude plus sign so ratios can be formed next to the poles where the
intra-layer eigenvalue equations are bracketed.
"""
import math
from dataclasses import dataclass

from .errors import DomainError, NumericError, PoleError

EULER_GAMMA = 0.57721566490153286061
POLE_TOLERANCE = 1e-14
EPS = 2.220446049250313e-16

# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_TWO_PI = 0.5 * math.log(2.0 * math.pi)

# Argument above which the digamma/trigamma asymptotic series is used.
_ASYMPTOTIC_X = 8.0

# Large-z threshold for Tricomi U (asymptotic expansion beyond it).
BIG_Z = 30.0
# b = 1/2 switches earlier: the connection formula cancels like e^z·ε.
BIG_Z_HALF = 20.0

_SERIES_CAP = 2000
_LOG_SERIES_TAIL = 1e-14


@dataclass(frozen=True)
class FnEvalResult:
    """Value of a special function with an absolute error estimate.

    ``sign`` is only meaningful for :func:`ln_gamma`, where ``value`` is
    ``ln|Γ(x)|``; it is +1 everywhere else.
    """
    value: float
    absolute_error_estimate: float
    sign: int = 1


def _is_pole(x: float) -> bool:
    return x <= 0.0 and abs(x - round(x)) <= POLE_TOLERANCE


def _check_pole(name: str, x: float) -> None:
    if _is_pole(x):
        raise PoleError(f"{name} has a pole at x={x!r}")


def _sinpi(x: float) -> float:
    """sin(πx) with exact argument reduction, accurate next to integers."""
    r = math.fmod(x, 2.0)
    if r > 1.0:
        r -= 2.0
    elif r < -1.0:
        r += 2.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _cotpi(x: float) -> float:
    """cot(πx) with exact argument reduction to [-1/2, 1/2]."""
    r = math.fmod(x, 1.0)
    if r > 0.5:
        r -= 1.0
    elif r < -0.5:
        r += 1.0
    if r == 0.0:
        raise PoleError(f"cot(pi x) has a pole at x={x!r}")
    return math.cos(math.pi * r) / math.sin(math.pi * r)


def _lanczos_ln_gamma(x: float) -> float:
    """ln Γ(x) for x >= 0.5."""
    x -= 1.0
    series = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        series += _LANCZOS_COEF[i] / (x + i)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_TWO_PI + (x + 0.5) * math.log(t) - t + math.log(series)


def ln_gamma(x: float) -> FnEvalResult:
    """ln|Γ(x)| and the sign of Γ(x); reflection is used below x = 1/2."""
    x = float(x)
    _check_pole("ln_gamma", x)
    if x >= 0.5:
        value = _lanczos_ln_gamma(x)
        sign = 1
    else:
        s = _sinpi(x)
        value = math.log(math.pi) - math.log(abs(s)) - _lanczos_ln_gamma(1.0 - x)
        sign = 1 if s > 0.0 else -1
    err = 8.0 * EPS * max(1.0, abs(value))
    return FnEvalResult(value=value, absolute_error_estimate=err, sign=sign)


def reciprocal_gamma(x: float) -> float:
    """1/Γ(x), exactly zero at the poles of Γ."""
    x = float(x)
    if _is_pole(x):
        return 0.0
    lg = ln_gamma(x)
    return lg.sign * math.exp(-lg.value)


def gamma(x: float) -> float:
    """Γ(x) as a float (overflows to ±inf beyond x ≈ 171)."""
    lg = ln_gamma(x)
    return lg.sign * math.exp(lg.value)


def _digamma_positive(x: float) -> tuple[float, float]:
    value = 0.0
    scale = 0.0
    while x < _ASYMPTOTIC_X:
        step = 1.0 / x
        value -= step
        scale += abs(step)
        x += 1.0
    r = 1.0 / (x * x)
    tail = r * (1.0 / 12.0
                - r * (1.0 / 120.0
                       - r * (1.0 / 252.0
                              - r * (1.0 / 240.0
                                     - r * (1.0 / 132.0
                                            - r * (691.0 / 32760.0
                                                   - r / 12.0))))))
    value += math.log(x) - 0.5 / x - tail
    scale += abs(math.log(x)) + 0.5 / x
    return value, scale


def digamma(x: float) -> FnEvalResult:
    """ψ(x) = d ln Γ(x)/dx; reflection ψ(x) = ψ(1−x) − π cot(πx) for x <= 0."""
    x = float(x)
    _check_pole("digamma", x)
    if x > 0.0:
        value, scale = _digamma_positive(x)
    else:
        reflected, scale = _digamma_positive(1.0 - x)
        cot_term = math.pi * _cotpi(x)
        value = reflected - cot_term
        scale += abs(cot_term)
    return FnEvalResult(value=value, absolute_error_estimate=4.0 * EPS * max(1.0, scale))


def _trigamma_positive(x: float) -> tuple[float, float]:
    value = 0.0
    while x < _ASYMPTOTIC_X:
        value += 1.0 / (x * x)
        x += 1.0
    r = 1.0 / (x * x)
    tail = (1.0 / x) * r * (1.0 / 6.0
                            - r * (1.0 / 30.0
                                   - r * (1.0 / 42.0
                                          - r * (1.0 / 30.0
                                                 - r * (5.0 / 66.0
                                                        - r * (691.0 / 2730.0
                                                               - r * 7.0 / 6.0))))))
    value += 1.0 / x + 0.5 * r + tail
    return value, abs(value)


def trigamma(x: float) -> FnEvalResult:
    """ψ'(x); reflection ψ'(x) = π²/sin²(πx) − ψ'(1−x) for x <= 0."""
    x = float(x)
    _check_pole("trigamma", x)
    if x > 0.0:
        value, scale = _trigamma_positive(x)
    else:
        reflected, scale = _trigamma_positive(1.0 - x)
        s = _sinpi(x)
        pole_term = (math.pi / s) ** 2
        value = pole_term - reflected
        scale += pole_term
    return FnEvalResult(value=value, absolute_error_estimate=4.0 * EPS * max(1.0, scale))


def assoc_laguerre(n: int, alpha: float, z: float) -> FnEvalResult:
    """Associated Laguerre polynomial L_n^α(z) by the three-term recurrence."""
    if n < 0 or int(n) != n:
        raise DomainError(f"Laguerre degree must be a non-negative integer, got {n!r}")
    n = int(n)
    alpha = float(alpha)
    z = float(z)
    prev, cur = 1.0, 1.0 + alpha - z
    if n == 0:
        return FnEvalResult(value=1.0, absolute_error_estimate=0.0)
    scale = max(1.0, abs(cur))
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - z) * cur - (k + alpha) * prev) / (k + 1)
        scale = max(scale, abs(cur))
    if not math.isfinite(cur):
        raise NumericError(f"L_{n}^{alpha}({z}) overflowed")
    return FnEvalResult(value=cur, absolute_error_estimate=4.0 * EPS * (n + 1) * scale)


def kummer_m(a: float, b: float, z: float) -> FnEvalResult:
    """Kummer M(a, b, z) by its Taylor series; a polynomial when a = 0, −1, −2, …"""
    a, b, z = float(a), float(b), float(z)
    if _is_pole(b):
        raise PoleError(f"kummer_m is undefined for b={b!r}")
    terminating = _is_pole(a) or a == 0.0
    term = 1.0
    total = 1.0
    scale = 1.0
    for k in range(_SERIES_CAP):
        if terminating and k >= -round(a):
            break
        term *= (a + k) / (b + k) * z / (k + 1)
        total += term
        scale += abs(term)
        if not terminating and k > abs(a) and abs(term) <= EPS * abs(total):
            break
    else:
        raise NumericError(f"kummer_m({a}, {b}, {z}) did not converge in {_SERIES_CAP} terms")
    return FnEvalResult(value=total, absolute_error_estimate=4.0 * EPS * scale)


def _tricomi_asymptotic(a: float, b: float, z: float) -> FnEvalResult:
    term = 1.0
    total = 1.0
    smallest = 1.0
    for k in range(_SERIES_CAP):
        nxt = term * (a + k) * (a - b + 1.0 + k) / ((k + 1) * -z)
        if abs(nxt) >= abs(term) and k > 0:
            break
        term = nxt
        total += term
        smallest = abs(term)
        if smallest <= EPS * abs(total):
            break
    prefactor = z ** (-a)
    value = prefactor * total
    err = abs(prefactor) * (smallest + 4.0 * EPS * abs(total))
    return FnEvalResult(value=value, absolute_error_estimate=err)


def _tricomi_log_series(a: float, z: float) -> FnEvalResult:
    """U(a, 1, z) from the logarithmic limit of the connection formula."""
    log_z = math.log(z)
    coef = reciprocal_gamma(a)
    near_pole = max(0, math.ceil(-a)) + 1
    psi_a = None
    psi_one = -EULER_GAMMA
    total = 0.0
    scale = 0.0
    for k in range(_SERIES_CAP):
        if k <= near_pole or psi_a is None:
            psi_a = digamma(a + k).value if not _is_pole(a + k) else 0.0
        term = coef * (log_z + psi_a - 2.0 * psi_one)
        total += term
        scale += abs(term)
        if k > z + abs(a) and abs(term) <= _LOG_SERIES_TAIL * abs(total):
            break
        # advance to k + 1
        if k >= near_pole:
            psi_a += 1.0 / (a + k)
        psi_one += 1.0 / (k + 1)
        coef *= (a + k) * z / ((k + 1) * (k + 1))
    else:
        raise NumericError(f"tricomi_u({a}, 1, {z}) log series did not converge")
    return FnEvalResult(value=-total, absolute_error_estimate=8.0 * EPS * scale)


def tricomi_u(a: float, b: float, z: float) -> FnEvalResult:
    """Tricomi confluent hypergeometric function U(a, b, z) for z > 0.

    b = 1/2 goes through the two-Kummer connection formula, b = 1 through the
    logarithmic limit series, a = −n through the Laguerre identity
    U(−n, α+1, z) = (−1)^n n! L_n^α(z). The large-z asymptotic expansion takes
    over beyond z = 20 for b = 1/2 and beyond z = 30 otherwise.
    """
    a, b, z = float(a), float(b), float(z)
    if not z > 0.0:
        raise DomainError(f"tricomi_u requires z > 0, got z={z!r}")
    if a == 0.0:
        return FnEvalResult(value=1.0, absolute_error_estimate=0.0)
    if _is_pole(a):
        n = int(round(-a))
        lag = assoc_laguerre(n, b - 1.0, z)
        factor = (-1.0) ** n * math.factorial(n)
        return FnEvalResult(value=factor * lag.value,
                            absolute_error_estimate=abs(factor) * lag.absolute_error_estimate)
    if z > (BIG_Z_HALF if b == 0.5 else BIG_Z):
        return _tricomi_asymptotic(a, b, z)
    if b == 1.0:
        return _tricomi_log_series(a, z)
    if b == round(b):
        raise DomainError(f"tricomi_u supports integer b only for b=1, got b={b!r}")
    lg_first = ln_gamma(1.0 - b)
    lg_second = ln_gamma(b - 1.0)
    m_first = kummer_m(a, b, z)
    m_second = kummer_m(a - b + 1.0, 2.0 - b, z)
    c_first = lg_first.sign * math.exp(lg_first.value) * reciprocal_gamma(a - b + 1.0)
    c_second = lg_second.sign * math.exp(lg_second.value) * reciprocal_gamma(a) * z ** (1.0 - b)
    first = c_first * m_first.value
    second = c_second * m_second.value
    err = (abs(c_first) * m_first.absolute_error_estimate
           + abs(c_second) * m_second.absolute_error_estimate
           + 8.0 * EPS * (abs(first) + abs(second)))
    return FnEvalResult(value=first + second, absolute_error_estimate=err)
