"""Exact arithmetic kernel.

Coordinates are Python ints or :class:`fractions.Fraction`; nothing on a
decision path ever touches a float.  Event times of linear motions are
roots of quadratics and are carried in closed form as :class:`AlgebraicTime`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Union

Rational = Union[int, Fraction]


class DegenerateSegment(ValueError):
    pass


class ZeroPolynomial(ValueError):
    """Raised when an orientation polynomial vanishes identically."""


def qnorm(x) -> Rational:
    """Canonical rational: ints stay ints, integral Fractions become ints."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def parse_rational(s) -> Rational:
    if isinstance(s, (int, Fraction)):
        return qnorm(s)
    if not isinstance(s, str):
        raise ValueError(f"rational must be a string, got {s!r}")
    try:
        return qnorm(Fraction(s.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {s!r}") from exc


def format_rational(x: Rational) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


class Point(NamedTuple):
    x: Rational
    y: Rational

    def __add__(self, o):  # type: ignore[override]
        return Point(self.x + o[0], self.y + o[1])

    def __sub__(self, o):
        return Point(self.x - o[0], self.y - o[1])

    def __mul__(self, k):  # type: ignore[override]
        return Point(self.x * k, self.y * k)

    __rmul__ = __mul__

    def __neg__(self):
        return Point(-self.x, -self.y)

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


def P(x, y) -> Point:
    return Point(qnorm(x), qnorm(y))


def cross(a, b) -> Rational:
    return a[0] * b[1] - a[1] * b[0]


def dot(a, b) -> Rational:
    return a[0] * b[0] + a[1] * b[1]


def sgn(x) -> int:
    return (x > 0) - (x < 0)


def orientation(a, b, c) -> int:
    """Sign of (b - a) x (c - a); +1 is counterclockwise."""
    return sgn((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))


def on_segment(p, a, b) -> bool:
    if a[0] == b[0] and a[1] == b[1]:
        raise DegenerateSegment("segment endpoints coincide")
    if orientation(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


class Intersection(str, enum.Enum):
    DISJOINT = "disjoint"
    PROPER = "proper-crossing"
    TOUCHING = "touching"


def segments_intersect(a, b, c, d) -> Intersection:
    if (a[0] == b[0] and a[1] == b[1]) or (c[0] == d[0] and c[1] == d[1]):
        raise DegenerateSegment("segment endpoints coincide")
    o1 = orientation(a, b, c)
    o2 = orientation(a, b, d)
    o3 = orientation(c, d, a)
    o4 = orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return Intersection.PROPER
    if ((o1 == 0 and on_segment(c, a, b)) or (o2 == 0 and on_segment(d, a, b))
            or (o3 == 0 and on_segment(a, c, d)) or (o4 == 0 and on_segment(b, c, d))):
        return Intersection.TOUCHING
    return Intersection.DISJOINT


def lerp(p0, p1, t) -> Point:
    return Point(p0[0] + (p1[0] - p0[0]) * t, p0[1] + (p1[1] - p0[1]) * t)


# --------------------------------------------------------------------------
# quadratic polynomials in the morph time


@dataclass(frozen=True)
class QuadraticPoly:
    c0: Rational
    c1: Rational = 0
    c2: Rational = 0

    def __call__(self, t):
        return (self.c2 * t + self.c1) * t + self.c0

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0 and self.c2 == 0


def _lin_cross(A, B, C, D):
    # (A + tB) x (C + tD)
    return (cross(A, C), cross(A, D) + cross(B, C), cross(B, D))


def moving_orientation(a0, a1, b0, b1, c0, c1) -> QuadraticPoly:
    """cross(b(t) - a(t), c(t) - a(t)) for points moving linearly on [0, 1]."""
    A = (b0[0] - a0[0], b0[1] - a0[1])
    B = (b1[0] - a1[0] - A[0], b1[1] - a1[1] - A[1])
    C = (c0[0] - a0[0], c0[1] - a0[1])
    D = (c1[0] - a1[0] - C[0], c1[1] - a1[1] - C[1])
    k0, k1, k2 = _lin_cross(A, B, C, D)
    return QuadraticPoly(qnorm(k0), qnorm(k1), qnorm(k2))


def moving_dot(a0, a1, b0, b1, c0, c1) -> QuadraticPoly:
    """dot(b(t) - a(t), c(t) - a(t)) for linearly moving points."""
    A = (b0[0] - a0[0], b0[1] - a0[1])
    B = (b1[0] - a1[0] - A[0], b1[1] - a1[1] - A[1])
    C = (c0[0] - a0[0], c0[1] - a0[1])
    D = (c1[0] - a1[0] - C[0], c1[1] - a1[1] - C[1])
    return QuadraticPoly(qnorm(dot(A, C)), qnorm(dot(A, D) + dot(B, C)), qnorm(dot(B, D)))


# --------------------------------------------------------------------------
# the quadratic field Q(sqrt d)

_SMALL_PRIMES = [p for p in range(2, 1000) if all(p % k for k in range(2, int(p ** 0.5) + 1))]


def squarefree_split(n: int) -> tuple[int, int]:
    """Return (s, k) with n == s*s*k.

    Exact square-freeness of k is guaranteed for n < 10**9; beyond that only
    square factors of primes below 1000 and perfect squares are removed
    (no general factoring).  Comparisons never rely on k being square-free.
    """
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 0
    s = 1
    r = math.isqrt(n)
    if r * r == n:
        return r, 1
    for p in _SMALL_PRIMES:
        pp = p * p
        if pp > n:
            break
        while n % pp == 0:
            n //= pp
            s *= p
    r = math.isqrt(n)
    if r * r == n:
        return s * r, 1
    return s, n


class QSqrt:
    """Element a + b*sqrt(d) of Q(sqrt d); d is never a perfect square > 0."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d=0):
        if b == 0 or d == 0:
            b, d = 0, 0
        self.a = a
        self.b = b
        self.d = d

    @staticmethod
    def lift(x, d):
        return x if isinstance(x, QSqrt) else QSqrt(x, 0, d)

    def _d(self, o):
        if self.d and o.d and self.d != o.d:
            raise ValueError("mixed quadratic fields")
        return self.d or o.d

    def __add__(self, o):
        if not isinstance(o, QSqrt):
            return QSqrt(self.a + o, self.b, self.d)
        return QSqrt(self.a + o.a, self.b + o.b, self._d(o))

    __radd__ = __add__

    def __neg__(self):
        return QSqrt(-self.a, -self.b, self.d)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if not isinstance(o, QSqrt):
            return QSqrt(self.a * o, self.b * o, self.d)
        d = self._d(o)
        return QSqrt(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def sign(self) -> int:
        sa, sb = sgn(self.a), sgn(self.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        return sa * sgn(self.a * self.a - self.b * self.b * self.d)

    def __eq__(self, o):
        if not isinstance(o, QSqrt):
            o = QSqrt(o)
        return (self - o).sign() == 0

    def __hash__(self):
        return hash((self.a, self.b, self.d))

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def __repr__(self):
        if self.b == 0:
            return f"QSqrt({self.a})"
        return f"QSqrt({self.a} + {self.b}*sqrt({self.d}))"


def qsign(x) -> int:
    return x.sign() if isinstance(x, QSqrt) else sgn(x)


# --------------------------------------------------------------------------
# algebraic event times


def _sqrt_bounds(d: int, k: int) -> tuple[Fraction, Fraction]:
    s = math.isqrt(d << (2 * k))
    return Fraction(s, 1 << k), Fraction(s + 1, 1 << k)


@dataclass(frozen=True, eq=False)
class AlgebraicTime:
    """The real number (p + q*sqrt(d)) / r with r > 0."""

    p: Fraction
    q: Fraction
    r: Fraction
    d: int

    @staticmethod
    def make(p, q=0, r=1, d=0) -> "AlgebraicTime":
        p, q, r = Fraction(p), Fraction(q), Fraction(r)
        if r == 0:
            raise ZeroDivisionError("zero denominator")
        if d < 0:
            raise ValueError("negative radicand")
        if q != 0 and d != 0:
            s, k = squarefree_split(d)
            q *= s
            d = k
            if d == 1:
                p, q, d = p + q, Fraction(0), 0
        if q == 0 or d == 0:
            q, d = Fraction(0), 0
        if r < 0:
            p, q, r = -p, -q, -r
        # fold the rational part into r = 1 when exact
        if q == 0:
            p, r = p / r, Fraction(1)
        return AlgebraicTime(p, q, r, d)

    @staticmethod
    def rational(x) -> "AlgebraicTime":
        return AlgebraicTime.make(x)

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError("irrational time")
        return self.p / self.r

    def field(self) -> QSqrt:
        """This value as an element of Q(sqrt d)."""
        return QSqrt(self.p / self.r, self.q / self.r, self.d)

    def _interval(self, k: int) -> tuple[Fraction, Fraction]:
        base = self.p / self.r
        if self.q == 0:
            return base, base
        lo, hi = _sqrt_bounds(self.d, k)
        c = self.q / self.r
        a, b = base + c * lo, base + c * hi
        return (a, b) if a <= b else (b, a)

    def compare(self, other) -> int:
        if not isinstance(other, AlgebraicTime):
            other = AlgebraicTime.make(other)
        if self.d == other.d or self.q == 0 or other.q == 0:
            d = self.d or other.d
            diff = QSqrt(self.p / self.r - other.p / other.r,
                         self.q / self.r - other.q / other.r, d)
            return diff.sign()
        # distinct radicals: equal only if A + B sqrt(d1) = C sqrt(d2) holds exactly
        A = self.p / self.r - other.p / other.r
        B = self.q / self.r
        C = other.q / other.r
        if (A == 0 or B == 0) and A * A + B * B * self.d == C * C * other.d:
            lhs = QSqrt(A, B, self.d).sign()
            if lhs == sgn(C):
                return 0
        k = 8
        while True:
            a0, a1 = self._interval(k)
            b0, b1 = other._interval(k)
            if a1 < b0:
                return -1
            if b1 < a0:
                return 1
            k *= 2

    def __lt__(self, o):
        return self.compare(o) < 0

    def __le__(self, o):
        return self.compare(o) <= 0

    def __gt__(self, o):
        return self.compare(o) > 0

    def __ge__(self, o):
        return self.compare(o) >= 0

    def __eq__(self, o):
        if not isinstance(o, (AlgebraicTime, int, Fraction)):
            return NotImplemented
        return self.compare(o) == 0

    def __hash__(self):
        return hash((self.p, self.q, self.r, self.d))

    def __float__(self):
        return (float(self.p) + float(self.q) * math.sqrt(self.d)) / float(self.r)

    def to_json(self) -> dict:
        return {"p": format_rational(self.p), "q": format_rational(self.q),
                "r": format_rational(self.r), "d": self.d}

    @staticmethod
    def from_json(obj) -> "AlgebraicTime":
        return AlgebraicTime.make(parse_rational(obj["p"]), parse_rational(obj["q"]),
                                  parse_rational(obj["r"]), int(obj["d"]))

    def __repr__(self):
        if self.q == 0:
            return f"AlgebraicTime({self.p / self.r})"
        return f"AlgebraicTime(({self.p} + {self.q}*sqrt({self.d}))/{self.r})"


def eval_at(f: QuadraticPoly, t: AlgebraicTime):
    """Exact value of f(t) in Q(sqrt d)."""
    if t.is_rational:
        return f(t.as_rational())
    x = t.field()
    return (x * f.c2 + f.c1) * x + f.c0


def real_roots(f: QuadraticPoly) -> list[AlgebraicTime]:
    """All real roots of a polynomial that is not identically zero, sorted."""
    c0, c1, c2 = Fraction(f.c0), Fraction(f.c1), Fraction(f.c2)
    if c2 == 0:
        if c1 == 0:
            if c0 == 0:
                raise ZeroPolynomial("identically zero polynomial")
            return []
        return [AlgebraicTime.make(-c0 / c1)]
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return []
    if disc == 0:
        return [AlgebraicTime.make(-c1 / (2 * c2))]
    # sqrt(n/m) = sqrt(n*m)/m
    n, m = disc.numerator, disc.denominator
    s, k = squarefree_split(n * m)
    if k == 1:
        root = Fraction(s, m)
        rs = [(-c1 - root) / (2 * c2), (-c1 + root) / (2 * c2)]
        return sorted(AlgebraicTime.make(x) for x in rs)
    q = Fraction(s, m)
    r = 2 * c2
    a = AlgebraicTime.make(-c1, -q, r, k)
    b = AlgebraicTime.make(-c1, q, r, k)
    return [a, b] if a < b else [b, a]


def roots_in_unit_interval(f: QuadraticPoly) -> list[AlgebraicTime]:
    """Real roots of f in the closed interval [0, 1], sorted ascending."""
    return [t for t in real_roots(f) if t.compare(0) >= 0 and t.compare(1) <= 0]


def position_at(p0, p1, t) -> tuple:
    """Exact position of the point moving linearly p0 -> p1 at time t.

    Coordinates are rationals for rational t and :class:`QSqrt` otherwise.
    """
    if not isinstance(t, AlgebraicTime):
        t = AlgebraicTime.make(t)
    if t.is_rational:
        return lerp(p0, p1, t.as_rational())
    x = t.field()
    return (x * (p1[0] - p0[0]) + p0[0], x * (p1[1] - p0[1]) + p0[1])


def orientation_field(a, b, c) -> int:
    """orientation() for coordinates that may live in Q(sqrt d)."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return qsign(v)


def on_segment_field(p, a, b) -> bool:
    if qsign(a[0] - b[0]) == 0 and qsign(a[1] - b[1]) == 0:
        raise DegenerateSegment("segment endpoints coincide")
    if orientation_field(a, b, p) != 0:
        return False
    return qsign((p[0] - a[0]) * (p[0] - b[0]) + (p[1] - a[1]) * (p[1] - b[1])) <= 0
