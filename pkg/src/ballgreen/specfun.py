"""Real-argument special functions: Gamma, Beta, Pochhammer, Gauss 2F1.

Also the angular integral

    int_0^pi sin^(mu-1) t / (1 + r^2 - 2 r cos t)^nu dt
        = B(mu/2, 1/2) 2F1(nu, nu + (1 - mu)/2; (1 + mu)/2; r^2)

which every sphere-average in the norm computations reduces to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import special

TERM_BUDGET = 10_000
SERIES_RTOL = 1e-16
CONNECT_SWITCH = 0.75   # above this, expand about t = 1
PFAFF_SWITCH = -0.5     # below this, map t -> t/(t-1)
INTEGER_BAND = 1e-3     # c-a-b this close to an integer: log terms, defer to cephes


class DomainError(ValueError):
    pass


class ParameterError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class Hyp2F1Params:
    a: float
    b: float
    c: float
    t: float

    def __post_init__(self):
        if self.c <= 0 and float(self.c).is_integer():
            raise ParameterError(f"c={self.c} is a nonpositive integer")
        if not -1.0 < self.t < 1.0:
            raise DomainError(f"t={self.t} outside (-1, 1)")


@dataclass(frozen=True)
class AngularIntegralParams:
    mu: float
    nu: float
    r: float

    def __post_init__(self):
        if self.mu <= 0:
            raise DomainError("mu must be positive")
        if not 0.0 <= self.r < 1.0:
            raise DomainError("r must lie in [0, 1)")


@dataclass(frozen=True)
class GammaInequalityCase:
    m: float
    p: float
    k: float

    def __post_init__(self):
        if not (self.m > 0 and self.p > 0 and self.p > self.k > -self.m):
            raise DomainError(f"hypotheses m,p>0, p>k>-m violated by {self}")


def gamma_fn(x: float) -> float:
    if x <= 0:
        raise DomainError(f"gamma_fn needs x > 0, got {x}")
    return math.gamma(x)


def lgamma_fn(x: float) -> float:
    if x <= 0:
        raise DomainError(f"lgamma_fn needs x > 0, got {x}")
    return math.lgamma(x)


def beta_fn(a: float, b: float) -> float:
    if a <= 0 or b <= 0:
        raise DomainError(f"beta_fn needs positive arguments, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def _series(a: float, b: float, c: float, t: float) -> float:
    total = 1.0
    term = 1.0
    small = 0
    for k in range(TERM_BUDGET):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * t
        total += term
        if term == 0.0:
            return total
        if abs(term) < SERIES_RTOL * abs(total):
            small += 1
            if small == 3:
                return total
        else:
            small = 0
    raise ConvergenceError(f"2F1({a},{b};{c};{t}) not converged in {TERM_BUDGET} terms")


def _connect(a: float, b: float, c: float, t: float) -> float:
    # F(a,b;c;t) in terms of F(.;1-t); 1/Gamma is zero at the poles
    s = c - a - b
    w = 1.0 - t
    rg = special.rgamma
    g_c = math.gamma(c) if c < 170 else math.inf
    first = g_c * math.gamma(s) * rg(c - a) * rg(c - b)
    second = g_c * math.gamma(-s) * rg(a) * rg(b)
    out = 0.0
    if first != 0.0:
        out += first * _series(a, b, 1.0 - s, w)
    if second != 0.0:
        out += second * w ** s * _series(c - a, c - b, 1.0 + s, w)
    return out


def gauss_2f1(p: Hyp2F1Params) -> float:
    """2F1(a, b; c; t) for real parameters and -1 < t < 1.

    Plain series in the middle, Pfaff's map t/(t-1) for t < -1/2 and the
    connection formula about t = 1 for t > 3/4. When c - a - b sits on an
    integer the connection formula picks up logarithms; that band is handed
    to scipy's cephes routine.
    """
    a, b, c, t = p.a, p.b, p.c, p.t
    if t == 0.0:
        return 1.0
    if t < PFAFF_SWITCH:
        return (1.0 - t) ** (-b) * gauss_2f1(Hyp2F1Params(c - a, b, c, t / (t - 1.0)))
    if t > CONNECT_SWITCH:
        s = c - a - b
        if abs(s - round(s)) < INTEGER_BAND or c >= 170:
            return float(special.hyp2f1(a, b, c, t))
        return _connect(a, b, c, t)
    return _series(a, b, c, t)


def hyp2f1(a: float, b: float, c: float, t: float) -> float:
    return gauss_2f1(Hyp2F1Params(a, b, c, t))


def angular_integral(p: AngularIntegralParams) -> float:
    mu, nu, r = p.mu, p.nu, p.r
    return beta_fn(mu / 2, 0.5) * hyp2f1(nu, nu + (1 - mu) / 2, (1 + mu) / 2, r * r)


def gamma_inequality_holds(case: GammaInequalityCase, slack: float = 1e-12) -> tuple[bool, bool]:
    """Return (k(p-m-k) >= 0, Gamma(p)Gamma(m) >= Gamma(p-k)Gamma(m+k)).

    The comparison is done on log-Gamma with relative slack ``slack``.
    """
    m, p, k = case.m, case.p, case.k
    sign = k * (p - m - k) >= 0
    lhs = math.lgamma(p) + math.lgamma(m)
    rhs = math.lgamma(p - k) + math.lgamma(m + k)
    return sign, lhs >= rhs - slack


def gamma_inequality_le(case: GammaInequalityCase, slack: float = 1e-12) -> bool:
    """Reverse direction: Gamma(p)Gamma(m) <= Gamma(p-k)Gamma(m+k)."""
    m, p, k = case.m, case.p, case.k
    lhs = math.lgamma(p) + math.lgamma(m)
    rhs = math.lgamma(p - k) + math.lgamma(m + k)
    return lhs <= rhs + slack
