"""Polynomial families in k, threshold functions of (d1, d2) and the
classification ladder for a structural triple (d1, d2, A)."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction as F
from functools import lru_cache
from typing import Optional, Union

from .exactpoly import (
    PolyQ,
    QuadraticInL,
    QuadraticSurd,
    RationalLike,
    as_rational,
    exact_cmp,
    format_rational,
    poly_eval,
    sign_on_interval,
)

Threshold = Union[F, QuadraticSurd]

# (d1, d2) pairs excluded from the two-summands non-existence theorem
PSI_EXCLUDED = frozenset({(2, 2), (2, 3), (2, 4)})


class DimensionError(ValueError):
    """Raised when (d1, d2) violates d2 >= d1 >= 2."""


def check_dims(d1: int, d2: int) -> None:
    for v in (d1, d2):
        if not isinstance(v, int) or isinstance(v, bool):
            raise DimensionError("dimensions must be integers")
    if d1 < 2 or d2 < d1:
        raise DimensionError(f"need d2 >= d1 >= 2, got (d1, d2) = ({d1}, {d2})")


@dataclass(frozen=True)
class StructuralTriple:
    d1: int
    d2: int
    A: F

    def __post_init__(self):
        check_dims(self.d1, self.d2)
        A = as_rational(self.A)
        if A < 0:
            raise ValueError("A must be non-negative")
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.d1 + self.d2

    def __str__(self):
        return f"({self.d1}, {self.d2}, {format_rational(self.A)})"


# ---------------------------------------------------------------------------
# polynomial families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolynomialFamilySet:
    d1: int
    d2: int
    P_X: PolyQ
    Q_X: PolyQ
    T_X: PolyQ
    omega0: PolyQ
    omega1: PolyQ
    omega2: PolyQ
    beta0: PolyQ
    beta1: PolyQ
    beta2: PolyQ
    beta3: PolyQ
    beta_tilde: PolyQ
    beta_tilde2b: PolyQ
    theta0: PolyQ
    theta1: PolyQ
    theta2: PolyQ
    rho0: PolyQ
    rho1: PolyQ
    rho3: PolyQ
    alpha1: PolyQ
    alpha2: PolyQ
    alpha3: PolyQ
    alpha4: PolyQ
    zeta0: PolyQ
    zeta1a: PolyQ
    zeta1b: PolyQ
    zeta2: PolyQ

    @property
    def n(self) -> int:
        return self.d1 + self.d2

    def _k(self) -> PolyQ:
        return PolyQ.x()

    def P_Y(self, A: RationalLike) -> QuadraticInL:
        d1, d2, n, k = self.d1, self.d2, self.n, self._k()
        A = as_rational(A)
        c2 = -(d1 * (n + d1 - 2) + d2 * (n + d1 - 1) * k) * F(1, d2 * (n - 1)) * A
        c1 = (d2 - 1) * (d1 - 1 + d2 * k) * F(1, n - 1)
        c0 = -(d1 - 1) * (d1 + (d2 - 1) * k) * F(1, n - 1)
        return QuadraticInL(c2, c1, c0, A)

    def Q_Y(self, A: RationalLike) -> QuadraticInL:
        d1, d2, n, k = self.d1, self.d2, self.n, self._k()
        A = as_rational(A)
        c2 = -(2 * n * k + d2 * k + 2 * d1) * F(1, n - 1) * A
        c1 = -(2 * d1 * (d1 - 1) + (d1 * d2 - 3 * d2) * k) * F(d2 - 1, d1 * (n - 1))
        c0 = (2 * d1 + (d2 + 2) * k) * F(d1 - 1, n - 1)
        return QuadraticInL(c2, c1, c0, A)

    def T_Y(self, A: RationalLike, tau: Optional[RationalLike] = None) -> QuadraticInL:
        """Y^2 coefficient of G - H^2 + d1 R1 + d2 R2 - (n-1) tau Y Z on a slice."""
        d1, d2, n = self.d1, self.d2, self.n
        A = as_rational(A)
        t = tau_param(d1, d2, A) if tau is None else as_rational(tau)
        return QuadraticInL(PolyQ([-d1 * A]), PolyQ([d2 * (d2 - 1) - (n - 1) * t]),
                            PolyQ([d1 * (d1 - 1)]), A)

    def omega(self, A: RationalLike) -> QuadraticInL:
        d1, d2, n, k = self.d1, self.d2, self.n, self._k()
        A = as_rational(A)
        s = F(1, d1 * d1 * (n - 1))
        c2 = (2 * d1 + d2 * k) * self.omega2 * F(1, d2) * A * s
        c1 = (d2 - 1) * k * self.omega1 * s
        c0 = -(d1 - 1) * k * k * self.omega0 * s
        return QuadraticInL(c2, c1, c0, A)

    def zeta(self, A: RationalLike, tau: Optional[RationalLike] = None) -> QuadraticInL:
        """zeta with the standard tau(A) unless tau is given explicitly."""
        A = as_rational(A)
        t = tau_param(self.d1, self.d2, A) if tau is None else as_rational(tau)
        return QuadraticInL(self.zeta2 * A, self.zeta1a - self.zeta1b * t, self.zeta0, A)

    def Theta(self, A: RationalLike) -> PolyQ:
        A = as_rational(A)
        return self.theta2 * (A * A) + self.theta1 * A + self.theta0

    def theta_prefactor(self) -> PolyQ:
        """Res_l(omega, zeta) = prefactor * A * Theta."""
        d1, d2, n, k = self.d1, self.d2, self.n, self._k()
        c = F(-(d1 - 1), d1**6 * d2**3 * (d2 - 1) ** 2 * (n - 1) ** 2)
        return (2 * d1 + d2 * k) * (1 - k) ** 2 * k * k * self.beta3**2 * c

    def rho_prefactor(self) -> PolyQ:
        """Res_l(omega, P_Y) = prefactor * A * (rho1 A - rho0)."""
        d1, d2, n = self.d1, self.d2, self.n
        return self.P_X**2 * F(d1 - 1, d1 * d1 * d2 * d2 * (n - 1) ** 2)

    def a1_profile(self, k: RationalLike) -> F:
        """The function of k whose minimum on [0, 1] is A1."""
        d1, d2 = self.d1, self.d2
        k = as_rational(k)
        return (F(d2 * (d2 - 1) ** 2, d1 * d1) / (2 * d1 + d2 * k)
                * poly_eval(self.beta2, k) / poly_eval(self.omega0, k))


@lru_cache(maxsize=256)
def build_families(d1: int, d2: int) -> PolynomialFamilySet:
    check_dims(d1, d2)
    n = d1 + d2
    k = PolyQ.x()

    P_X = ((d2 * (d1 * d2 - 2 * d1 - d2 + 1) * k**2 + 2 * (d2 - 1) * (d1 - 1) * d1 * k
            + d1 * d1 * (d1 - 1)) * (1 - k) * F(1, d1 * (n - 1)))
    a = 1 + F(d2, 2 * d1) * k
    T_X = d1 + d2 * k**2 - (d1 + d2 * k) ** 2
    Q_X = (4 * k * a * (d1 + d2 * k + F(d2, 2 * d1) * k)
           + (2 + 2 * k + F(3 * d2, d1) * k) * T_X * F(1, n - 1))

    omega2 = PolyQ([
        -2 * d1**4 + 2 * d1**3,
        2 * d1**4 - 5 * d1**3 * d2 - 2 * d1**3 + 5 * d1**2 * d2,
        4 * d1**3 * d2 - 4 * d1**2 * d2**2 - 2 * d1**2 * d2 + 4 * d1 * d2**2 - 2 * d1 * d2,
        2 * d1**2 * d2**2 - d1 * d2**3 + d2**3 - d2**2,
    ])
    omega1 = PolyQ([
        4 * d1**3 - 4 * d1**2,
        d1**3 * d2 - 4 * d1**3 + 5 * d1**2 * d2 + 4 * d1**2 - 6 * d1 * d2,
        2 * d1**2 * d2**2 - 8 * d1**2 * d2 + 8 * d1 * d2 - 2 * d2**2,
        d1 * d2**3 - 4 * d1 * d2**2 - d2**3 + 3 * d2**2,
    ])
    omega0 = PolyQ([
        d1**3 * d2 - d1**2 * d2 + 4 * d1**2,
        2 * d1**2 * d2**2 - 2 * d1**2 * d2 - 2 * d1 * d2**2 - 4 * d1**2 + 4 * d1 * d2,
        d1 * d2**3 - 2 * d1 * d2**2 - d2**3 - 2 * d1 * d2 + d2**2,
    ])

    beta0 = PolyQ([
        d1**3 - d1,
        2 * d1**2 * d2 - 2 * d1**2 - d1 * d2 + 2 * d1,
        d1 * d2**2 - 2 * d1 * d2 - d2**2 + d2,
    ])
    beta1 = PolyQ([
        2 * d1**4 + d1**3 * d2 - 2 * d1**2 * d2 + 2 * d1**2 + d1 * d2 - 4 * d1,
        4 * d1**3 * d2 + 2 * d1**2 * d2**2 - 4 * d1**3 - 2 * d1**2 * d2 - 3 * d1 * d2**2
        + 4 * d1 * d2 + d2**2 + 4 * d1 - 2 * d2,
        2 * d1**2 * d2**2 + d1 * d2**3 - 4 * d1**2 * d2 - 2 * d1 * d2**2 - d2**3
        - 2 * d1 * d2 + 2 * d2,
    ])
    beta2 = PolyQ([
        2 * d1**3,
        d1**3 * d2 - 2 * d1**3 + d1**2 * d2,
        2 * d1**2 * d2**2 - 4 * d1**2 * d2 - 2 * d1 * d2**2 + 2 * d1 * d2,
        d1 * d2**3 - 2 * d1 * d2**2 - d2**3 + d2**2,
    ])
    beta3 = PolyQ([
        d1**3 - d1**2,
        2 * d1**2 * d2 - 2 * d1**2 - 2 * d1 * d2 + 2 * d1,
        d1 * d2**2 - 2 * d1 * d2 - d2**2 + d2,
    ])
    beta_tilde = PolyQ([
        2 * d1**4 + 2 * d1**3 * d2 - 4 * d1**3 - 3 * d1**2 * d2 + 2 * d1**2 + d1 * d2,
        4 * d1**3 * d2 + 4 * d1**2 * d2**2 - 6 * d1**2 * d2 - 4 * d1 * d2**2 + 2 * d1 * d2,
        2 * d1**2 * d2**2 + 2 * d1 * d2**3 - 2 * d1 * d2**2 - d2**3 + d2**2,
    ])
    beta_tilde2b = PolyQ([
        d1**3 - 4 * d1**2,
        2 * d1**2 * d2 + 2 * d1**2 - 4 * d1 * d2,
        d1 * d2**2 + d1 * d2 - d2**2,
    ])

    theta2 = 4 * d1**4 * (d1 + 1) ** 2 * omega0 * omega2
    theta1b = PolyQ([
        -2 * d1**7 + 2 * d1**5,
        d1**7 * d2 + 4 * d1**7 - 9 * d1**6 * d2 + 8 * d1**6 + 3 * d1**5 * d2 - 12 * d1**5
        + 5 * d1**4 * d2,
        4 * d1**6 * d2**2 + 12 * d1**6 * d2 - 16 * d1**5 * d2**2 - 8 * d1**6 + 28 * d1**5 * d2
        + 8 * d1**4 * d2**2 + 8 * d1**5 - 32 * d1**4 * d2 + 4 * d1**3 * d2**2 - 8 * d1**3 * d2,
        6 * d1**5 * d2**3 + 12 * d1**5 * d2**2 - 14 * d1**4 * d2**3 - 20 * d1**5 * d2
        + 35 * d1**4 * d2**2 + 7 * d1**3 * d2**3 + 12 * d1**4 * d2 - 29 * d1**3 * d2**2
        + d1**2 * d2**3 + 8 * d1**3 * d2 - 12 * d1**2 * d2**2,
        4 * d1**4 * d2**4 + 4 * d1**4 * d2**3 - 6 * d1**3 * d2**4 - 16 * d1**4 * d2**2
        + 18 * d1**3 * d2**3 + 2 * d1**2 * d2**4 + 4 * d1**3 * d2**2 - 10 * d1**2 * d2**3
        + 8 * d1**2 * d2**2 - 6 * d1 * d2**3,
        d1**3 * d2**5 - d1**2 * d2**5 - 4 * d1**3 * d2**3 + 3 * d1**2 * d2**4 - d1 * d2**4
        + 2 * d1 * d2**3 - d2**4,
    ])
    theta1 = -4 * d1**2 * d2 * (d2 - 1) ** 2 * (d1 + 1) * theta1b
    theta0 = (k * d2**2 * (d2 - 1) ** 4 * (2 * d1 + d2 * k)
              * ((2 * d1 * d2 - 2 * d1 + d2) * k + 2 * d1**2 + 2 * d1)
              * ((2 * d1**2 - 1) * d2**2 * k**2 + (4 * d1**3 - 2 * d1**2 - 2 * d1) * d2 * k
                 + 2 * d1**3 * (d1 - 1)))

    rho1 = (4 * d1**2 * (d1 - 1)
            * ((2 * d2**2 + d2) * k**2 + (4 * d1 * d2 + 2 * d1) * k + 2 * d1**2) ** 2)
    rho0 = ((d2 - 1) ** 2 * d2 * k * (4 * d1 + 3 * d2 * k)
            * ((4 * d1 * d2**2 - 3 * d2**2) * k**2 + (8 * d1**2 * d2 - 8 * d1 * d2) * k
               + 4 * d1**3 - 4 * d1**2))
    rho3 = PolyQ([
        4 * d1**3 - 4 * d1**2,
        10 * d1**2 * d2 - 4 * d1**2 - 10 * d1 * d2 + 4 * d1,
        8 * d1 * d2**2 - 2 * d1 * d2 - 5 * d2**2 + 2 * d2,
        2 * d2**3 + d2**2,
    ])

    alpha4 = PolyQ([
        2 * d1**5 * d2 - 4 * d1**5 - 4 * d1**4 * d2 + 8 * d1**4 + 2 * d1**3 * d2 - 4 * d1**3,
        -d1**5 * d2 + 5 * d1**4 * d2**2 + 4 * d1**5 - 10 * d1**4 * d2 - 10 * d1**3 * d2**2
        - 8 * d1**4 + 17 * d1**3 * d2 + 5 * d1**2 * d2**2 + 4 * d1**3 - 6 * d1**2 * d2,
        -2 * d1**4 * d2**2 + 4 * d1**3 * d2**3 + 8 * d1**4 * d2 - 8 * d1**3 * d2**2
        - 8 * d1**2 * d2**3 - 8 * d1**3 * d2 + 14 * d1**2 * d2**2 + 4 * d1 * d2**3
        - 4 * d1 * d2**2,
        -d1**3 * d2**3 + d1**2 * d2**4 + 4 * d1**3 * d2**2 - 2 * d1**2 * d2**3
        - 2 * d1 * d2**4 - d1**2 * d2**2 + 4 * d1 * d2**3 + d2**4 - d1 * d2**2 - d2**3,
    ])

    zeta2 = -(d1 + d2 * k) * (d1 + d2 * k - 1) * (2 * d1 + d2 * k) * F(1, d2)
    zeta1a = ((d1 + d2 * k) * (d2 * k**2 + d2 * (d1 - 1) * k + d1 * (d1 - 1))
              * F(d2 - 1, d1))
    zeta1b = (1 - k) * beta3 * F(1, d1)
    zeta0 = -k * (d1 - 1) * (d1 + d2 * k) * (d1 + (d2 - 2) * k + 1)

    return PolynomialFamilySet(
        d1=d1, d2=d2, P_X=P_X, Q_X=Q_X, T_X=T_X,
        omega0=omega0, omega1=omega1, omega2=omega2,
        beta0=beta0, beta1=beta1, beta2=beta2, beta3=beta3,
        beta_tilde=beta_tilde, beta_tilde2b=beta_tilde2b,
        theta0=theta0, theta1=theta1, theta2=theta2,
        rho0=rho0, rho1=rho1, rho3=rho3,
        alpha1=omega1, alpha2=beta3, alpha3=beta_tilde2b, alpha4=alpha4,
        zeta0=zeta0, zeta1a=zeta1a, zeta1b=zeta1b, zeta2=zeta2,
    )


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------

def bohm_lower(d1: int, d2: int) -> F:
    check_dims(d1, d2)
    return F(d2 * (d2 - 1) ** 2, 4 * (d1 - 1) * (2 * d1 + d2))


def bohm_focus_upper(d1: int, d2: int) -> Optional[F]:
    """Right side of the focus condition; None when it is not positive."""
    check_dims(d1, d2)
    n = d1 + d2
    den = (d1 * n - 8 * n - 9 * d1) ** 2
    if den == 0:
        return None
    val = F((9 - n) * (d2 * n + 7 * n + 9 * d1), den) * F(d2 * (d2 - 1) ** 2, 4 * (d1 - 1))
    return val if val > 0 else None


def focus_condition(triple: StructuralTriple) -> bool:
    bound = bohm_focus_upper(triple.d1, triple.d2)
    return bound is not None and triple.A < bound


def psi(d1: int, d2: int) -> F:
    check_dims(d1, d2)
    n = d1 + d2
    return (F((4 * (d1 - 1) * n * n + d2 * d2) * (3 * n + d1), (2 * n * n + n + d1) ** 2 * d1 * d1)
            * F(d2 * (d2 - 1) ** 2, 4 * (d1 - 1)))


def chi_tilde(d1: int, d2: int) -> F:
    check_dims(d1, d2)
    base = F(d2 * (d2 - 1) ** 2, (d2 + 8) ** 2)
    if d1 == 2:
        return 4 * base
    if d1 == 3:
        return base if d2 <= 19 else F(3, 2) * base
    raise ValueError("chi_tilde is only defined for d1 in {2, 3}")


def omega_at_0(d1: int, d2: int) -> F:
    check_dims(d1, d2)
    return F(d2 * (d2 - 1) ** 2, d1 * d1 * (d1 * d2 - d2 + 4))


def a1_threshold(d1: int, d2: int) -> Threshold:
    check_dims(d1, d2)
    d = d2
    if d1 == 2 and d2 >= 3:
        den = 4 * d * (d**3 - 8 * d * d - 16 * d - 16)
        a = F((d - 1) ** 2 * (-5 * d**4 - 12 * d**3 + 8 * d * d + 32 * d + 32), den)
        b = F((d - 1) ** 2 * (4 * d**3 - 8 * d - 16), den)
        return QuadraticSurd(a, b, 2 * d * d + 4 * d + 4)
    if d1 == 3:
        den = 9 * d * (2 * d**3 - 9 * d * d - 36 * d - 36)
        a = F((d - 1) ** 2 * (-6 * d**4 - 23 * d**3 + 72 * d + 72), den)
        b = F((d - 1) ** 2 * (4 * d**3 + 4 * d * d - 12 * d - 24), den)
        return QuadraticSurd(a, b, 3 * d * d + 9 * d + 9)
    return omega_at_0(d1, d2)


@dataclass(frozen=True)
class MuData:
    delta: F
    mu1: Optional[QuadraticSurd]
    mu2: Optional[QuadraticSurd]

    @property
    def mu1_infinite(self) -> bool:
        return self.mu1 is None and self.mu2 is not None


def discriminant_and_mu(triple: StructuralTriple) -> MuData:
    """Roots of ((n+d1)/d2) A l^2 - (d2-1) l + (d1-1) = 0."""
    d1, d2, A, n = triple.d1, triple.d2, triple.A, triple.n
    delta = F((d2 - 1) ** 2) - 4 * (d1 - 1) * F(n + d1, d2) * A
    if A == 0:
        return MuData(delta, None, QuadraticSurd(F(d1 - 1, d2 - 1)))
    if delta < 0:
        return MuData(delta, None, None)
    a = F(n + d1, d2) * A
    root = QuadraticSurd.sqrt_of(delta)
    mu1 = (root + (d2 - 1)) / (2 * a)
    mu2 = (-root + (d2 - 1)) / (2 * a)
    return MuData(delta, mu1, mu2)


def sigma_param(d1: int, d2: int, A: RationalLike) -> Optional[F]:
    A = as_rational(A)
    return None if A == 0 else F(d2 * (d2 - 1), 2 * d1 * d1) / A


def tau_param(d1: int, d2: int, A: RationalLike) -> F:
    return d2 - 1 - F((d1 + 1) * 2 * d1 * d1, d2 * (d2 - 1)) * as_rational(A)


def s_bullet(d1: int, d2: int, A: RationalLike) -> Optional[F]:
    """d1/tau; None when tau <= 0 and the formula has no meaning."""
    t = tau_param(d1, d2, A)
    return F(d1) / t if t > 0 else None


def nu1_poly(d1: int, d2: int, A: RationalLike, k: RationalLike) -> F:
    k = as_rational(k)
    return F(d2 * (d2 - 1), d1) / as_rational(A) * k / (2 * d1 + d2 * k)


def omega_xi_bounds(d1: int, d2: int, k: RationalLike) -> dict:
    check_dims(d1, d2)
    k = as_rational(k)
    fam = build_families(d1, d2)
    w0, w1, w2 = (poly_eval(p, k) for p in (fam.omega0, fam.omega1, fam.omega2))
    den = (2 * d1 + d2 * k) * w0 * w2
    if den == 0:
        raise ZeroDivisionError("omega0 * omega2 vanishes at this k")
    n = d1 + d2
    scale = F(d2 * (d2 - 1) ** 2, 4 * (d1 - 1))
    omega = -w1 * w1 / den * scale
    xi_den = 4 * (d1 - 1) * (d1 + d2 * k - k) * (d1 * (n + d1 - 2) + d2 * (n + d1 - 1) * k)
    xi = d2 * (d2 - 1) ** 2 * (d1 + d2 * k - 1) ** 2 / xi_den
    return {"omega": omega, "xi": xi}


def check_a2_sufficient(triple: StructuralTriple) -> bool:
    """True iff Theta(A, k) > 0 on the open interval (0, 1)."""
    fam = build_families(triple.d1, triple.d2)
    return sign_on_interval(fam.Theta(triple.A), 0, 1).positive


# ---------------------------------------------------------------------------
# report and verdict
# ---------------------------------------------------------------------------

def _fmt(v) -> Optional[str]:
    if v is None:
        return None
    if isinstance(v, QuadraticSurd):
        return str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return format_rational(v)


def _json_value(v):
    if isinstance(v, QuadraticSurd):
        return v.to_json()
    if isinstance(v, (F, int)) and not isinstance(v, bool):
        return format_rational(F(v))
    return v


@dataclass(frozen=True)
class ThresholdReport:
    triple: StructuralTriple
    delta: F
    mu1: Optional[QuadraticSurd]
    mu2: Optional[QuadraticSurd]
    bohm_lower: F
    bohm_focus_upper: Optional[F]
    chi_tilde: Optional[F]
    psi: F
    a1: Threshold
    a2_check: bool
    omega_at_0: F
    omega_at_1: F
    sigma: Optional[F]
    tau: F
    s_bullet: Optional[F]

    def to_json(self) -> dict:
        out = {"d1": self.triple.d1, "d2": self.triple.d2, "A": format_rational(self.triple.A)}
        for name in ("delta", "mu1", "mu2", "bohm_lower", "bohm_focus_upper", "chi_tilde", "psi",
                     "a1", "a2_check", "omega_at_0", "omega_at_1", "sigma", "tau", "s_bullet"):
            out[name] = _json_value(getattr(self, name))
        return out

    def rows(self) -> list[tuple[str, str, str]]:
        """(name, exact, approx) rows for table rendering."""
        out = []
        for name in ("delta", "mu1", "mu2", "bohm_lower", "bohm_focus_upper", "chi_tilde", "psi",
                     "a1", "a2_check", "omega_at_0", "omega_at_1", "sigma", "tau", "s_bullet"):
            v = getattr(self, name)
            approx = "" if v is None or isinstance(v, bool) else f"{float(v):.10g}"
            out.append((name, _fmt(v) or "-", approx))
        return out


def threshold_report(triple: StructuralTriple) -> ThresholdReport:
    d1, d2, A = triple.d1, triple.d2, triple.A
    mu = discriminant_and_mu(triple)
    return ThresholdReport(
        triple=triple,
        delta=mu.delta,
        mu1=mu.mu1,
        mu2=mu.mu2,
        bohm_lower=bohm_lower(d1, d2),
        bohm_focus_upper=bohm_focus_upper(d1, d2),
        chi_tilde=chi_tilde(d1, d2) if d1 in (2, 3) else None,
        psi=psi(d1, d2),
        a1=a1_threshold(d1, d2),
        a2_check=check_a2_sufficient(triple) if A > 0 else True,
        omega_at_0=omega_at_0(d1, d2),
        omega_at_1=bohm_lower(d1, d2),
        sigma=sigma_param(d1, d2, A),
        tau=tau_param(d1, d2, A),
        s_bullet=s_bullet(d1, d2, A),
    )


class VerdictTag(str, enum.Enum):
    EXISTENCE_PRODUCT = "ExistenceProduct"
    EXISTENCE = "Existence"
    TWO_METRICS_NUMERIC = "TwoMetricsNumeric"
    NONEXISTENCE_BOHM = "NonexistenceBohm"
    NONEXISTENCE_TWO_SUMMANDS = "NonexistenceTwoSummands"
    INDETERMINABLE = "Indeterminable"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Evidence:
    predicate: str
    lhs: Optional[str]
    rhs: Optional[str]
    holds: bool

    def to_json(self) -> dict:
        return {"predicate": self.predicate, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


@dataclass(frozen=True)
class Verdict:
    tag: VerdictTag
    triple: StructuralTriple
    evidence: tuple[Evidence, ...] = field(default=())

    def to_json(self) -> dict:
        return {"triple": {"d1": self.triple.d1, "d2": self.triple.d2,
                           "A": format_rational(self.triple.A)},
                "verdict": self.tag.value,
                "evidence": [e.to_json() for e in self.evidence]}

    def upgraded(self, tag: VerdictTag, extra: Evidence) -> "Verdict":
        return Verdict(tag, self.triple, self.evidence + (extra,))


def classify(triple: StructuralTriple) -> Verdict:
    d1, d2, A = triple.d1, triple.d2, triple.A
    ev: list[Evidence] = []

    def done(tag):
        return Verdict(tag, triple, tuple(ev))

    ev.append(Evidence("A == 0", _fmt(A), "0", A == 0))
    if A == 0:
        return done(VerdictTag.EXISTENCE_PRODUCT)

    delta = discriminant_and_mu(triple).delta
    ev.append(Evidence("Delta <= 0", _fmt(delta), "0", delta <= 0))
    if delta <= 0:
        return done(VerdictTag.NONEXISTENCE_BOHM)

    if (d1, d2) in PSI_EXCLUDED:
        ev.append(Evidence("(d1,d2) admits Psi test", f"({d1},{d2})", "excluded", False))
    else:
        p = psi(d1, d2)
        ev.append(Evidence("A >= Psi", _fmt(A), _fmt(p), A >= p))
        if A >= p:
            return done(VerdictTag.NONEXISTENCE_TWO_SUMMANDS)

    if d1 in (2, 3):
        ct = chi_tilde(d1, d2)
        ev.append(Evidence("A <= chi_tilde", _fmt(A), _fmt(ct), A <= ct))
        if A <= ct:
            return done(VerdictTag.EXISTENCE)

    a1 = a1_threshold(d1, d2)
    below = exact_cmp(A, a1) < 0
    ev.append(Evidence("A < A1", _fmt(A), _fmt(a1), below))
    if below:
        ok = check_a2_sufficient(triple)
        ev.append(Evidence("Theta(A,k) > 0 on (0,1)", _fmt(A), None, ok))
        if ok:
            return done(VerdictTag.EXISTENCE)
    return done(VerdictTag.INDETERMINABLE)
