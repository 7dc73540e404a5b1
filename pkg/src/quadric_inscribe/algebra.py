"""Arithmetic in the algebras R + R*kappa with kappa^2 in {-1, 0, +1}.

kappa^2 = -1 gives the complex numbers, +1 the Lorentz (split-complex)
numbers, 0 the dual numbers.  The projective line over each algebra carries
the ideal boundary of the corresponding 3-dimensional geometry; cross ratios
of four ideal points carry shear and bending data simultaneously.
"""

import math
from dataclasses import dataclass

from .config import resolve_tol


class AlgebraError(Exception):
    pass


class WrongAlgebra(AlgebraError):
    pass


class NotInvertible(AlgebraError):
    pass


class DegenerateTriple(AlgebraError):
    pass


class CrossRatioAtInfinity(AlgebraError):
    pass


class NotSpacelike(AlgebraError):
    pass


class AtChartInfinity(AlgebraError):
    pass


@dataclass(frozen=True)
class GC:
    """Number a + b*kappa.  Immutable; all arithmetic returns new values."""

    re: float
    im: float
    kappa2: int

    def __post_init__(self):
        if self.kappa2 not in (-1, 0, 1):
            raise WrongAlgebra(f"kappa^2 must be -1, 0 or +1, got {self.kappa2}")

    def _check(self, other):
        if self.kappa2 != other.kappa2:
            raise WrongAlgebra("mixed algebras")

    def __add__(self, other):
        other = as_gc(other, self.kappa2)
        self._check(other)
        return GC(self.re + other.re, self.im + other.im, self.kappa2)

    def __sub__(self, other):
        other = as_gc(other, self.kappa2)
        self._check(other)
        return GC(self.re - other.re, self.im - other.im, self.kappa2)

    def __neg__(self):
        return GC(-self.re, -self.im, self.kappa2)

    def __mul__(self, other):
        other = as_gc(other, self.kappa2)
        self._check(other)
        return GC(
            self.re * other.re + self.kappa2 * self.im * other.im,
            self.re * other.im + self.im * other.re,
            self.kappa2,
        )

    __radd__ = __add__
    __rmul__ = __mul__

    def conj(self):
        return GC(self.re, -self.im, self.kappa2)

    def sq_norm(self):
        """|z|^2 = re^2 - kappa^2 * im^2; real, not positive definite."""
        return self.re * self.re - self.kappa2 * self.im * self.im

    def size(self):
        """Euclidean magnitude of the coefficient vector (scale gauge)."""
        return math.hypot(self.re, self.im)

    def inverse(self, tol=None):
        n = self.sq_norm()
        if abs(n) <= resolve_tol(tol) * max(1.0, self.size() ** 2):
            raise NotInvertible(f"{self} has null square-norm")
        return GC(self.re / n, -self.im / n, self.kappa2)

    def scale(self, c):
        return GC(self.re * c, self.im * c, self.kappa2)

    def is_zero(self, tol=None):
        return self.size() <= resolve_tol(tol)


def as_gc(x, kappa2):
    if isinstance(x, GC):
        return x
    return GC(float(x), 0.0, kappa2)


def split_lr(z, tol=None):
    """Left/right projections of a Lorentz number through its idempotents."""
    if not isinstance(z, GC) or z.kappa2 != 1:
        raise WrongAlgebra("split_lr needs kappa^2 = +1")
    return z.re - z.im, z.re + z.im


def join_lr(x, y):
    """Inverse of split_lr: x*(1-tau)/2 + y*(1+tau)/2."""
    return GC((x + y) / 2.0, (y - x) / 2.0, 1)


def compose_shape(sign, s, theta, kappa2):
    """sign * exp(s + kappa*theta) in the given algebra."""
    if sign not in (1, -1, 1.0, -1.0):
        raise ValueError("sign must be +-1")
    es = math.exp(s)
    if kappa2 == -1:
        return GC(es * math.cos(theta), es * math.sin(theta), -1).scale(sign)
    if kappa2 == 1:
        return GC(es * math.cosh(theta), es * math.sinh(theta), 1).scale(sign)
    return GC(es, es * theta, 0).scale(sign)


def decompose_shape(z, tol=None):
    """Write a space-like z as sign * exp(s + kappa*theta).

    Returns (sign, s, theta).  For kappa^2 = +1 the computation runs through
    the left/right projections (s = log|xy|/2, theta = log(y/x)/2) rather
    than transcendental solving.
    """
    tol = resolve_tol(tol)
    if z.sq_norm() <= tol * max(1.0, z.size() ** 2):
        raise NotSpacelike(f"|z|^2 = {z.sq_norm()} is not positive")
    if z.kappa2 == -1:
        return 1, 0.5 * math.log(z.re * z.re + z.im * z.im), math.atan2(z.im, z.re)
    if z.kappa2 == 0:
        sign = 1 if z.re > 0 else -1
        return sign, math.log(abs(z.re)), z.im / z.re
    x, y = split_lr(z)
    if x == 0 or y == 0 or (x > 0) != (y > 0):
        raise NotSpacelike(f"projections ({x}, {y}) differ in sign")
    sign = 1 if x > 0 else -1
    return sign, 0.5 * (math.log(abs(x)) + math.log(abs(y))), 0.5 * (math.log(abs(y)) - math.log(abs(x)))


@dataclass(frozen=True)
class ProjPoint:
    """Point of P^1(B) as a normalized representative pair [u : v]."""

    u: GC
    v: GC
    normalized: bool = False

    @property
    def kappa2(self):
        return self.u.kappa2

    @staticmethod
    def of(u, v, tol=None):
        if u.kappa2 != v.kappa2:
            raise WrongAlgebra("mixed algebras in projective pair")
        tol = resolve_tol(tol)
        scale = max(u.size(), v.size())
        if scale <= tol:
            raise AlgebraError("zero representative")
        u = u.scale(1.0 / scale)
        v = v.scale(1.0 / scale)
        # rank-one test: the Hermitian matrix w w* must be nonzero
        uv = u * v.conj()
        if abs(u.sq_norm()) <= tol and abs(v.sq_norm()) <= tol and uv.size() <= tol:
            raise AlgebraError("pair is null: w w* vanishes, not a point of P^1(B)")
        return ProjPoint(u, v, True)

    @staticmethod
    def from_real(x, kappa2):
        """Real ideal point; x = math.inf maps to [1 : 0]."""
        if math.isinf(x):
            return ProjPoint.of(GC(1.0, 0.0, kappa2), GC(0.0, 0.0, kappa2))
        return ProjPoint.of(GC(float(x), 0.0, kappa2), GC(1.0, 0.0, kappa2))

    @staticmethod
    def from_value(z):
        """Finite algebra value z as the point [z : 1]."""
        return ProjPoint.of(z, GC(1.0, 0.0, z.kappa2))

    def is_real(self, tol=None):
        tol = resolve_tol(tol)
        return abs(self.u.im) <= tol and abs(self.v.im) <= tol

    def value(self, tol=None):
        """The algebra value u / v; CrossRatioAtInfinity when v is null."""
        try:
            return self.u * self.v.inverse(tol)
        except NotInvertible as exc:
            raise CrossRatioAtInfinity(str(exc)) from exc


def pair_det(p, q):
    """u_p v_q - u_q v_p, the homogenized difference of two points."""
    return p.u * q.v - q.u * p.v


def points_equal(p, q, tol=None):
    return pair_det(p, q).size() <= resolve_tol(tol)


@dataclass(frozen=True)
class Mobius:
    """Projective transformation [[a, b], [c, d]] with |det|^2 > 0."""

    a: GC
    b: GC
    c: GC
    d: GC

    @property
    def kappa2(self):
        return self.a.kappa2

    @staticmethod
    def identity(kappa2):
        one = GC(1.0, 0.0, kappa2)
        zero = GC(0.0, 0.0, kappa2)
        return Mobius(one, zero, zero, one)

    @staticmethod
    def from_reals(a, b, c, d, kappa2):
        return Mobius(*(GC(float(t), 0.0, kappa2) for t in (a, b, c, d)))

    def det(self):
        return self.a * self.d - self.b * self.c

    def is_valid(self, tol=None):
        det = self.det()
        scale = max(t.size() for t in (self.a, self.b, self.c, self.d))
        if scale == 0.0:
            return False
        return det.sq_norm() > resolve_tol(tol) * scale**4

    def apply(self, p, tol=None):
        return ProjPoint.of(self.a * p.u + self.b * p.v, self.c * p.u + self.d * p.v, tol)

    def compose(self, other):
        return Mobius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        return Mobius(self.d, -self.b, -self.c, self.a)


def mobius_to_standard(z1, z2, z3, tol=None):
    """The transformation sending (z1, z2, z3) to (inf, 0, 1).

    Raises DegenerateTriple when a pairwise determinant has non-positive
    square-norm (collapsed or null-related points).
    """
    tol = resolve_tol(tol)
    d31 = pair_det(z3, z1)
    d32 = pair_det(z3, z2)
    d12 = pair_det(z1, z2)
    for d in (d31, d32, d12):
        if d.sq_norm() <= tol:
            raise DegenerateTriple(f"pairwise determinant {d} has non-positive square-norm")
    # |det| of the assembled matrix is the product of the three pairwise
    # determinants, so the checks above already guarantee validity
    return Mobius(d31 * z2.v, -(d31 * z2.u), d32 * z1.v, -(d32 * z1.u))


def cross_ratio(z1, z2, z3, z4, tol=None):
    """(z1, z2; z3, z4) = A z4 where A maps (z1, z2, z3) to (inf, 0, 1)."""
    m = mobius_to_standard(z1, z2, z3, tol)
    w = m.apply(z4, tol)
    return w.value(tol)


def embed_affine(p, tol=None):
    """Affine chart coordinates of the rank-one matrix of a projective point.

    The image satisfies x1^2 + x2^2 - kappa^2 x3^2 = 1.  Raises
    AtChartInfinity when the x4 component vanishes; the caller should then
    renormalize the configuration by a Mobius map first.
    """
    tol = resolve_tol(tol)
    nu = p.u.sq_norm()
    nv = p.v.sq_norm()
    c = p.u * p.v.conj()
    x4 = 0.5 * (nu + nv)
    if abs(x4) <= tol:
        raise AtChartInfinity("rank-one matrix has no x4 component in this chart")
    x1 = 0.5 * (nu - nv)
    return (x1 / x4, c.re / x4, -c.im / x4)


def quadric_residual(point, kappa2):
    """x1^2 + x2^2 - kappa^2 x3^2 - 1 at an affine point."""
    x1, x2, x3 = point
    return x1 * x1 + x2 * x2 - kappa2 * x3 * x3 - 1.0
