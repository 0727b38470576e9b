"""Exact rational arithmetic, quadratic surds, polynomials in k, resultants
and Sturm-certified sign analysis.

Everything here is exact: coefficients are ``fractions.Fraction`` and no
floating point value ever enters a decision.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[int, Fraction, str]

REFINE_WIDTH = Fraction(1, 2**40)


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ``x`` to a Fraction. Floats are rejected on purpose."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        text = x.strip()
        if not text:
            raise ValueError("empty rational literal")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {x!r}") from exc
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_rational(r: Fraction) -> str:
    r = as_rational(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def _sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# quadratic surds
# ---------------------------------------------------------------------------

def _square_split(m: int) -> tuple[int, int]:
    """Return (s, r) with m = s*s*r and r square-free."""
    if m < 0:
        raise ValueError("radicand must be non-negative")
    if m in (0, 1):
        return 1, m
    s, free, rest = 1, 1, m
    p = 2
    # after removing primes up to the cube root, the cofactor has at most
    # two prime factors: it is square-free unless it is a perfect square
    while p * p * p <= rest:
        while rest % (p * p) == 0:
            rest //= p * p
            s *= p
        if rest % p == 0:
            rest //= p
            free *= p
        p += 1 if p == 2 else 2
    q = math.isqrt(rest)
    if q * q == rest:
        return s * q, free
    return s, free * rest


@dataclass(frozen=True)
class QuadraticSurd:
    """The real number a + b*sqrt(m) with rational a, b and square-free m."""

    a: Fraction
    b: Fraction = Fraction(0)
    m: int = 0

    def __post_init__(self):
        a, b, m = as_rational(self.a), as_rational(self.b), self.m
        if not isinstance(m, int) or isinstance(m, bool):
            raise TypeError("radicand must be an integer; nested radicals are not supported")
        if m < 0:
            raise ValueError("negative radicand")
        s, r = _square_split(m)
        b = b * s
        if r == 1:
            a, b, r = a + b, Fraction(0), 0
        if b == 0 or r == 0:
            b, r = Fraction(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "m", r)

    @classmethod
    def sqrt_of(cls, r: RationalLike) -> "QuadraticSurd":
        """sqrt(r) for a non-negative rational r."""
        r = as_rational(r)
        if r < 0:
            raise ValueError("square root of a negative rational")
        # sqrt(p/q) = sqrt(p*q)/q
        return cls(Fraction(0), Fraction(1, r.denominator), r.numerator * r.denominator)

    @property
    def is_rational(self) -> bool:
        return self.m == 0

    def sign(self) -> int:
        return surd_sign(self.a, self.b, self.m)

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.m)

    def __neg__(self):
        return QuadraticSurd(-self.a, -self.b, self.m)

    def __add__(self, other):
        if isinstance(other, QuadraticSurd):
            if other.m not in (0, self.m) and self.m != 0:
                raise ValueError("sum of surds with different radicands")
            m = self.m or other.m
            return QuadraticSurd(self.a + other.a, self.b + other.b, m)
        return QuadraticSurd(self.a + as_rational(other), self.b, self.m)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadraticSurd) else -as_rational(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QuadraticSurd):
            if other.m not in (0, self.m) and self.m != 0:
                raise ValueError("product of surds with different radicands")
            m = self.m or other.m
            return QuadraticSurd(self.a * other.a + self.b * other.b * m,
                                 self.a * other.b + self.b * other.a, m)
        c = as_rational(other)
        return QuadraticSurd(self.a * c, self.b * c, self.m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_rational(other)
        if c == 0:
            raise ZeroDivisionError("surd division by zero")
        return QuadraticSurd(self.a / c, self.b / c, self.m)

    def cmp(self, other) -> int:
        """Exact three-way comparison against a rational or a surd."""
        if isinstance(other, QuadraticSurd):
            return (self - other).sign()
        return surd_cmp(self, other)

    def __lt__(self, other):
        return self.cmp(other) < 0

    def __le__(self, other):
        return self.cmp(other) <= 0

    def __gt__(self, other):
        return self.cmp(other) > 0

    def __ge__(self, other):
        return self.cmp(other) >= 0

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "b": format_rational(self.b), "m": self.m}

    @classmethod
    def from_json(cls, obj: dict) -> "QuadraticSurd":
        return cls(as_rational(obj["a"]), as_rational(obj["b"]), int(obj["m"]))

    def __str__(self):
        if self.m == 0:
            return format_rational(self.a)
        return f"{format_rational(self.a)} + ({format_rational(self.b)})*sqrt({self.m})"


def surd_sign(a: Fraction, b: Fraction, m: int) -> int:
    """Sign of a + b*sqrt(m), decided by squaring."""
    sa, sb = _sign(a), _sign(b) if m else 0
    if sb == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: compare a^2 with b^2*m
    return sa * _sign(a * a - b * b * m)


def surd_cmp(s: QuadraticSurd, r: RationalLike) -> int:
    """-1, 0, 1 as s <, =, > r."""
    return surd_sign(s.a - as_rational(r), s.b, s.m)


def exact_cmp(x, y) -> int:
    """Compare two values that are each a rational or a QuadraticSurd."""
    if isinstance(x, QuadraticSurd):
        return x.cmp(y)
    if isinstance(y, QuadraticSurd):
        return -y.cmp(x)
    return _sign(as_rational(x) - as_rational(y))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class PolyQ:
    """Dense univariate polynomial with Fraction coefficients, ascending order."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c: RationalLike) -> "PolyQ":
        return cls([c])

    @classmethod
    def x(cls) -> "PolyQ":
        return cls([0, 1])

    @classmethod
    def lift(cls, other) -> "PolyQ":
        return other if isinstance(other, PolyQ) else cls([other])

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x: RationalLike) -> Fraction:
        return poly_eval(self, x)

    def __eq__(self, other):
        if isinstance(other, PolyQ):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == PolyQ([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"PolyQ([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("k" if i == 1 else f"k^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                cs = format_rational(c)
                if "/" in cs and mono:
                    cs = f"({cs})"
                terms.append(cs + ("*" + mono if mono else ""))
        return " + ".join(terms).replace("+ -", "- ")

    def __neg__(self):
        return PolyQ(-c for c in self.coeffs)

    def __add__(self, other):
        other = PolyQ.lift(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return PolyQ(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-PolyQ.lift(other))

    def __rsub__(self, other):
        return PolyQ.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PolyQ):
            c = as_rational(other)
            return PolyQ(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return PolyQ()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return PolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result, base = PolyQ([1]), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __truediv__(self, other):
        c = as_rational(other)
        return PolyQ(a / c for a in self.coeffs)

    def divmod(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return PolyQ(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        lead = other.lead
        for i in range(len(rem) - 1 - dq, -1, -1):
            c = rem[i + dq] / lead
            quot[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return PolyQ(quot), PolyQ(rem[:dq])

    def __floordiv__(self, other):
        if isinstance(other, PolyQ):
            return self.divmod(other)[0]
        return self / other

    def __mod__(self, other: "PolyQ"):
        return self.divmod(other)[1]

    def exact_div(self, other: "PolyQ") -> "PolyQ":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("division is not exact")
        return q

    def derivative(self) -> "PolyQ":
        return PolyQ(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "PolyQ":
        return self / self.lead if self.coeffs else self

    def compose(self, inner: "PolyQ") -> "PolyQ":
        out = PolyQ()
        for c in reversed(self.coeffs):
            out = out * inner + c
        return out

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]


def poly_eval(p: PolyQ, x: RationalLike) -> Fraction:
    """Horner evaluation."""
    x = as_rational(x)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: PolyQ) -> PolyQ:
    if p.degree <= 0:
        return p
    g = poly_gcd(p, p.derivative())
    return p.exact_div(g) if g.degree > 0 else p


# ---------------------------------------------------------------------------
# Sturm sequences and sign certification
# ---------------------------------------------------------------------------

def sturm_sequence(p: PolyQ) -> list[PolyQ]:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        seq.append(-r)
    seq.pop()
    # positive rescaling keeps signs and keeps the numbers small
    return [q / abs(q.lead) for q in seq]


def _variations(seq: Sequence[PolyQ], x: Fraction) -> int:
    signs = [s for s in (_sign(poly_eval(q, x)) for q in seq) if s]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def count_roots(p: PolyQ, lo: RationalLike, hi: RationalLike) -> int:
    """Number of distinct real roots of p in the half-open interval (lo, hi]."""
    lo, hi = as_rational(lo), as_rational(hi)
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if lo >= hi or p.degree <= 0:
        return 0
    q = squarefree_part(p)
    seq = sturm_sequence(q)
    return _variations(seq, lo) - _variations(seq, hi)


class SignKind(enum.Enum):
    STRICTLY_POSITIVE = "StrictlyPositive"
    STRICTLY_NEGATIVE = "StrictlyNegative"
    MIXED = "Mixed"
    ZERO = "ZeroPolynomial"


@dataclass(frozen=True)
class SignResult:
    kind: SignKind
    roots: tuple[tuple[Fraction, Fraction], ...] = field(default=())

    @property
    def positive(self) -> bool:
        return self.kind is SignKind.STRICTLY_POSITIVE

    @property
    def negative(self) -> bool:
        return self.kind is SignKind.STRICTLY_NEGATIVE


def _isolate(q, seq, lo, hi, count, out, width):
    # roots of q in (lo, hi], count of them known
    while count:
        if count == 1 and hi - lo < width:
            if poly_eval(q, hi) == 0:
                out.append((hi, hi))
            else:
                out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        left = _variations(seq, lo) - _variations(seq, mid)
        if left:
            _isolate(q, seq, lo, mid, left, out, width)
        lo, count = mid, count - left


def isolate_roots(p: PolyQ, lo: RationalLike, hi: RationalLike,
                  width: Fraction = REFINE_WIDTH) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals (each narrower than ``width``) for the distinct
    roots of p in (lo, hi]. An exactly located rational root r comes back as
    the degenerate interval (r, r)."""
    lo, hi = as_rational(lo), as_rational(hi)
    q = squarefree_part(p)
    if q.degree <= 0:
        return []
    seq = sturm_sequence(q)
    total = _variations(seq, lo) - _variations(seq, hi)
    out: list[tuple[Fraction, Fraction]] = []
    _isolate(q, seq, lo, hi, total, out, width)
    return out


def sign_on_interval(p: PolyQ, lo: RationalLike, hi: RationalLike,
                     open_lo: bool = True, open_hi: bool = True) -> SignResult:
    """Certify the sign of p on an interval with the given endpoint flags."""
    lo, hi = as_rational(lo), as_rational(hi)
    if not lo < hi:
        raise ValueError("need lo < hi")
    if p.is_zero():
        return SignResult(SignKind.ZERO)
    roots = [] if p.degree <= 0 else isolate_roots(p, lo, hi)
    if open_hi:
        roots = [r for r in roots if r != (hi, hi)]
    if not open_lo and poly_eval(p, lo) == 0:
        roots.insert(0, (lo, lo))
    if roots:
        return SignResult(SignKind.MIXED, tuple(roots))
    s = _sign(poly_eval(p, (lo + hi) / 2))
    return SignResult(SignKind.STRICTLY_POSITIVE if s > 0 else SignKind.STRICTLY_NEGATIVE)


# ---------------------------------------------------------------------------
# quadratics in l with polynomial coefficients, resultants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuadraticInL:
    """c2*l^2 + c1*l + c0 with coefficients in Q[k].

    ``A`` records the rational that was substituted at construction; the
    leading coefficient ``c2`` already carries the factor A.
    """

    c2: PolyQ
    c1: PolyQ
    c0: PolyQ
    A: Fraction | None = None

    def coeffs_desc(self) -> list[PolyQ]:
        return [self.c2, self.c1, self.c0]

    def at_k(self, k: RationalLike) -> tuple[Fraction, Fraction, Fraction]:
        return (poly_eval(self.c2, k), poly_eval(self.c1, k), poly_eval(self.c0, k))

    def __call__(self, k: RationalLike, l: RationalLike) -> Fraction:
        a, b, c = self.at_k(k)
        l = as_rational(l)
        return (a * l + b) * l + c

    def __add__(self, other: "QuadraticInL") -> "QuadraticInL":
        return QuadraticInL(self.c2 + other.c2, self.c1 + other.c1, self.c0 + other.c0,
                            self.A if self.A is not None else other.A)

    def __sub__(self, other: "QuadraticInL") -> "QuadraticInL":
        return QuadraticInL(self.c2 - other.c2, self.c1 - other.c1, self.c0 - other.c0,
                            self.A if self.A is not None else other.A)

    def scale(self, p) -> "QuadraticInL":
        p = PolyQ.lift(p)
        return QuadraticInL(self.c2 * p, self.c1 * p, self.c0 * p, self.A)


def bareiss_det(matrix: list[list[PolyQ]]) -> PolyQ:
    """Fraction-free determinant over Q[k]."""
    m = [[PolyQ.lift(e) for e in row] for row in matrix]
    size = len(m)
    if size == 0:
        return PolyQ([1])
    sign = 1
    prev = PolyQ([1])
    for i in range(size - 1):
        if m[i][i].is_zero():
            swap = next((r for r in range(i + 1, size) if not m[r][i].is_zero()), None)
            if swap is None:
                return PolyQ()
            m[i], m[swap] = m[swap], m[i]
            sign = -sign
        for r in range(i + 1, size):
            for c in range(i + 1, size):
                m[r][c] = (m[r][c] * m[i][i] - m[r][i] * m[i][c]).exact_div(prev)
        prev = m[i][i]
    det = m[size - 1][size - 1]
    return det if sign > 0 else -det


def sylvester_matrix(f: Sequence[PolyQ], g: Sequence[PolyQ]) -> list[list[PolyQ]]:
    """Sylvester matrix for coefficient lists given in descending degree."""
    df, dg = len(f) - 1, len(g) - 1
    size = df + dg
    zero = PolyQ()
    rows = []
    for i in range(dg):
        rows.append([zero] * i + list(f) + [zero] * (size - df - 1 - i))
    for i in range(df):
        rows.append([zero] * i + list(g) + [zero] * (size - dg - 1 - i))
    return rows


def _strip(coeffs: Sequence[PolyQ]) -> list[PolyQ]:
    cs = list(coeffs)
    while cs and cs[0].is_zero():
        cs.pop(0)
    return cs


def sylvester_resultant(f: Sequence[PolyQ], g: Sequence[PolyQ]) -> PolyQ:
    """Resultant in l of two polynomials whose coefficients (descending) lie in Q[k]."""
    f, g = _strip(f), _strip(g)
    if not f or not g:
        return PolyQ()
    return bareiss_det(sylvester_matrix(f, g))


def quad_resultant_in_l(f: QuadraticInL, g: QuadraticInL) -> PolyQ:
    """Res_l(f, g) via the closed 2x2 formula for two genuine quadratics."""
    if f.A is not None and g.A is not None and f.A != g.A:
        raise ValueError("both quadratics must carry the same A")
    if f.c2.is_zero() or g.c2.is_zero():
        return sylvester_resultant(f.coeffs_desc(), g.coeffs_desc())
    a2, a1, a0 = f.c2, f.c1, f.c0
    b2, b1, b0 = g.c2, g.c1, g.c0
    return (a2 * b0 - a0 * b2) ** 2 - (a2 * b1 - a1 * b2) * (a1 * b0 - a0 * b1)
