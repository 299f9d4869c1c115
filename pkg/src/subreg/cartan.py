"""Exact root and weight data for sp4 and its affinization.

Weights are stored in the fundamental-weight basis, so the two coordinates of a
finite weight are its Dynkin labels. The invariant form is normalized so that
long roots have squared length 2.
"""

from collections import deque
from collections.abc import Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import floor

Matrix = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]

H_DUAL = 3
DIM_G0 = 4


class CriticalLevelError(ValueError):
    """Raised when a computation needs a non-critical level (k != -3)."""


def _frac(value: int | Fraction | str) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True, order=True)
class Weight:
    """Finite weight a*w1 + b*w2 with exact rational coordinates."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _frac(self.a))
        object.__setattr__(self, "b", _frac(self.b))

    @property
    def coords(self) -> tuple[Fraction, Fraction]:
        return (self.a, self.b)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "Weight":
        return Weight(-self.a, -self.b)

    def __mul__(self, scalar: int | Fraction) -> "Weight":
        return Weight(self.a * scalar, self.b * scalar)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def simple_root_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates in the basis (alpha1, alpha2)."""
        y = self.a + self.b
        return ((self.a + y) / 2, y)

    @classmethod
    def from_simple_root_coords(cls, x: int | Fraction, y: int | Fraction) -> "Weight":
        return x * ALPHA1 + y * ALPHA2

    def __str__(self) -> str:
        return f"({self.a}, {self.b})"


GRAM: Matrix = (
    (Fraction(1), Fraction(1, 2)),
    (Fraction(1, 2), Fraction(1, 2)),
)

ZERO = Weight(0, 0)
OMEGA1 = Weight(1, 0)
OMEGA2 = Weight(0, 1)
RHO = OMEGA1 + OMEGA2
X0 = OMEGA1
ALPHA1 = Weight(2, -2)
ALPHA2 = Weight(-1, 2)
THETA = Weight(0, 2)


def inner_product(x: Weight, y: Weight) -> Fraction:
    """Return (x|y) through the fixed Gram matrix of the fundamental weights."""
    return (
        GRAM[0][0] * x.a * y.a
        + GRAM[0][1] * x.a * y.b
        + GRAM[1][0] * x.b * y.a
        + GRAM[1][1] * x.b * y.b
    )


def norm2(x: Weight) -> Fraction:
    return inner_product(x, x)


def coroot(alpha: Weight) -> Weight:
    return alpha * (2 / norm2(alpha))


def pairing(lam: Weight, alpha: Weight) -> Fraction:
    """Return <lam, alpha^vee>."""
    return 2 * inner_product(lam, alpha) / norm2(alpha)


def is_long(alpha: Weight) -> bool:
    return norm2(alpha) == 2


POSITIVE_ROOTS: tuple[Weight, ...] = (ALPHA1, ALPHA2, ALPHA1 + ALPHA2, THETA)
ROOTS: tuple[Weight, ...] = POSITIVE_ROOTS + tuple(-alpha for alpha in POSITIVE_ROOTS)


def is_positive(alpha: Weight) -> bool:
    return alpha in POSITIVE_ROOTS


def central_charge(k: int | Fraction) -> Fraction:
    """Central charge dim g0 - 12/(k+3) |rho - (k+3) x0|^2."""
    t = _frac(k) + H_DUAL
    if t == 0:
        raise CriticalLevelError("central charge is undefined at the critical level")
    return DIM_G0 - Fraction(12) / t * norm2(RHO - t * X0)


def central_charge_closed_form(k: int | Fraction) -> Fraction:
    k = _frac(k)
    if k + H_DUAL == 0:
        raise CriticalLevelError("central charge is undefined at the critical level")
    return -2 * (9 + 16 * k + 6 * k * k) / (3 + k)


# Finite Weyl group


def _matmul(x: Matrix, y: Matrix) -> Matrix:
    return (
        (
            x[0][0] * y[0][0] + x[0][1] * y[1][0],
            x[0][0] * y[0][1] + x[0][1] * y[1][1],
        ),
        (
            x[1][0] * y[0][0] + x[1][1] * y[1][0],
            x[1][0] * y[0][1] + x[1][1] * y[1][1],
        ),
    )


def _det(x: Matrix) -> Fraction:
    return x[0][0] * x[1][1] - x[0][1] * x[1][0]


@dataclass(frozen=True)
class FiniteWeylElement:
    """Element of W acting on column vectors of Dynkin labels."""

    matrix: Matrix
    word: tuple[int, ...] = field(default=(), compare=False)

    @property
    def sign(self) -> int:
        return 1 if _det(self.matrix) > 0 else -1

    def apply(self, lam: Weight) -> Weight:
        m = self.matrix
        return Weight(
            m[0][0] * lam.a + m[0][1] * lam.b,
            m[1][0] * lam.a + m[1][1] * lam.b,
        )

    def __mul__(self, other: "FiniteWeylElement") -> "FiniteWeylElement":
        return FiniteWeylElement(
            _matmul(self.matrix, other.matrix), self.word + other.word
        )

    def inverse(self) -> "FiniteWeylElement":
        m = self.matrix
        d = _det(m)
        inv: Matrix = ((m[1][1] / d, -m[0][1] / d), (-m[1][0] / d, m[0][0] / d))
        return FiniteWeylElement(inv, tuple(reversed(self.word)))

    def is_identity(self) -> bool:
        return self.matrix == IDENTITY.matrix


IDENTITY = FiniteWeylElement(((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))))


def reflection(alpha: Weight, word: tuple[int, ...] = ()) -> FiniteWeylElement:
    """Return r_alpha(lam) = lam - <lam, alpha^vee> alpha as a matrix."""
    images = [omega - pairing(omega, alpha) * alpha for omega in (OMEGA1, OMEGA2)]
    matrix: Matrix = ((images[0].a, images[1].a), (images[0].b, images[1].b))
    return FiniteWeylElement(matrix, word)


SIMPLE_REFLECTIONS = (reflection(ALPHA1, (1,)), reflection(ALPHA2, (2,)))


@cache
def weyl_group() -> tuple[FiniteWeylElement, ...]:
    """All 8 elements of W in breadth-first order of shortest words."""
    seen = {IDENTITY.matrix: IDENTITY}
    queue = deque([IDENTITY])
    while queue:
        current = queue.popleft()
        for s in SIMPLE_REFLECTIONS:
            candidate = s * current
            if candidate.matrix not in seen:
                seen[candidate.matrix] = candidate
                queue.append(candidate)
    return tuple(seen.values())


# Affine weights


@dataclass(frozen=True)
class AffineWeight:
    """lam + level * Lambda0 + delta * delta.

    The pairing satisfies (Lambda0|delta) = 1, so the value of an affine weight on
    D is its delta coefficient.
    """

    finite: Weight
    level: Fraction
    delta: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "level", _frac(self.level))
        object.__setattr__(self, "delta", _frac(self.delta))

    def __add__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            self.finite + other.finite,
            self.level + other.level,
            self.delta + other.delta,
        )

    def __sub__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            self.finite - other.finite,
            self.level - other.level,
            self.delta - other.delta,
        )

    def inner_product(self, other: "AffineWeight") -> Fraction:
        return (
            inner_product(self.finite, other.finite)
            + self.level * other.delta
            + self.delta * other.level
        )

    def graded_pairing(self, vector: Weight) -> Fraction:
        """Return (self | D + vector)."""
        return self.delta + inner_product(self.finite, vector)

    def coroot_pairing(self, alpha: Weight, n: int) -> Fraction:
        """Return <self, (alpha + n delta)^vee>."""
        return 2 * (inner_product(self.finite, alpha) + n * self.level) / norm2(alpha)


def affine_weight(
    finite: Weight, level: int | Fraction, delta: int | Fraction = 0
) -> AffineWeight:
    return AffineWeight(finite, _frac(level), _frac(delta))


RHO_HAT = AffineWeight(RHO, Fraction(H_DUAL))


def translation(alpha: Weight, lam: AffineWeight) -> AffineWeight:
    """t_alpha(lam) = lam + lam(K) alpha - ((alpha|lam) + |alpha|^2/2 lam(K)) delta."""
    return AffineWeight(
        lam.finite + lam.level * alpha,
        lam.level,
        lam.delta - (inner_product(alpha, lam.finite) + norm2(alpha) / 2 * lam.level),
    )


@dataclass(frozen=True)
class AffineWeylElement:
    """The element w t_beta of the affine Weyl group.

    ``translation`` is the translation vector itself, so the element written
    w t_{q eta} in terms of a coroot-lattice vector eta stores q * eta.
    """

    w: FiniteWeylElement
    translation: Weight = ZERO

    @property
    def sign(self) -> int:
        return self.w.sign

    def apply(self, lam: AffineWeight) -> AffineWeight:
        moved = translation(self.translation, lam)
        return AffineWeight(self.w.apply(moved.finite), moved.level, moved.delta)

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        return AffineWeylElement(
            self.w * other.w,
            other.w.inverse().apply(self.translation) + other.translation,
        )

    def inverse(self) -> "AffineWeylElement":
        return AffineWeylElement(self.w.inverse(), -self.w.apply(self.translation))


AFFINE_IDENTITY = AffineWeylElement(IDENTITY)


def affine_reflection(alpha: Weight, n: int) -> AffineWeylElement:
    """Reflection in the real root alpha + n delta."""
    return AffineWeylElement(reflection(alpha), n * coroot(alpha))


def dot_action(g: AffineWeylElement, lam: AffineWeight) -> AffineWeight:
    """w o lam = w(lam + rho_hat) - rho_hat."""
    return g.apply(lam + RHO_HAT) - RHO_HAT


# Integrality and admissibility


@dataclass(frozen=True)
class Progression:
    """The integers n0 + period * Z."""

    start: int
    period: int

    def smallest_at_least(self, bound: int) -> int:
        return bound + (self.start - bound) % self.period


def integral_progression(lam: AffineWeight, alpha: Weight) -> Progression | None:
    """Values of n with <lam, (alpha + n delta)^vee> integral, or None."""
    a = pairing(lam.finite, alpha)
    c = 2 * lam.level / norm2(alpha)
    period = c.denominator
    for n in range(period):
        if (a + n * c).denominator == 1:
            return Progression(n, period)
    return None


def _require_noncritical(lam: AffineWeight) -> Fraction:
    t = lam.level + H_DUAL
    if t == 0:
        raise CriticalLevelError("the critical level k = -3 is not supported")
    return t


def is_admissible_weight(lam_hat: AffineWeight) -> bool:
    """Return True when lam_hat is regular dominant and has full integral span."""
    t = _require_noncritical(lam_hat)
    shifted = lam_hat + RHO_HAT
    integral_roots = []
    for alpha in ROOTS:
        progression = integral_progression(lam_hat, alpha)
        if progression is None:
            continue
        if t < 0:
            return False
        integral_roots.append(alpha)
        n = progression.smallest_at_least(0 if is_positive(alpha) else 1)
        if shifted.coroot_pairing(alpha, n) <= 0:
            return False
    if not integral_roots:
        return False
    return any(
        _is_independent(integral_roots[0], other) for other in integral_roots[1:]
    )


def _is_independent(x: Weight, y: Weight) -> bool:
    return x.a * y.b - x.b * y.a != 0


def _extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _extended_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _hermite_basis(
    rows: list[tuple[int, int]],
) -> tuple[tuple[int, int], tuple[int, int]]:
    """Basis of the rank-two sublattice of Z^2 generated by ``rows``."""
    g1, combo = 0, (0, 0)
    for x, y in rows:
        g, s, u = _extended_gcd(g1, x)
        combo = (s * combo[0] + u * x, s * combo[1] + u * y)
        g1 = g
    if g1 == 0:
        raise ValueError("translation generators do not span a rank-two lattice")
    g2 = 0
    for x, y in rows:
        quotient = x // g1
        g2 = _extended_gcd(g2, y - quotient * combo[1])[0]
    if g2 == 0:
        raise ValueError("translation generators do not span a rank-two lattice")
    return (combo, (0, g2))


@cache
def integral_translation_lattice(level: Fraction) -> tuple[Weight, Weight]:
    """Basis of the translations contained in the integral Weyl group at ``level``.

    A reflection pair s_{alpha + (n+d) delta} s_{alpha + n delta} is the
    translation by -d alpha^vee, where d is the period of integrality of alpha.
    """
    level = _frac(level)
    if level + H_DUAL == 0:
        raise CriticalLevelError("the critical level has no integral Weyl group")
    rows = []
    for alpha in POSITIVE_ROOTS:
        period = (2 * level / norm2(alpha)).denominator
        x, y = (period * coroot(alpha)).simple_root_coords()
        rows.append((int(x), int(y)))
    (x1, y1), (x2, y2) = _hermite_basis(rows)
    return (
        Weight.from_simple_root_coords(x1, y1),
        Weight.from_simple_root_coords(x2, y2),
    )


def lattice_coords(
    vector: Weight, basis: tuple[Weight, Weight]
) -> tuple[Fraction, Fraction]:
    """Solve vector = x * basis[0] + y * basis[1]."""
    (a1, b1), (a2, b2) = basis[0].coords, basis[1].coords
    det = a1 * b2 - a2 * b1
    x = (vector.a * b2 - a2 * vector.b) / det
    y = (a1 * vector.b - vector.a * b1) / det
    return (x, y)


def reduce_mod_lattice(vector: Weight, basis: tuple[Weight, Weight]) -> Weight:
    x, y = lattice_coords(vector, basis)
    return (x - floor(x)) * basis[0] + (y - floor(y)) * basis[1]


@dataclass(frozen=True)
class IntegralWeylGroup:
    """The integral Weyl group of an affine weight as cosets of its translations.

    Every element is ``coset * t_tau`` with ``coset`` one of ``cosets`` and
    ``tau`` in the lattice spanned by ``lattice``.
    """

    cosets: tuple[AffineWeylElement, ...]
    lattice: tuple[Weight, Weight]

    def element(self, coset: AffineWeylElement, x: int, y: int) -> AffineWeylElement:
        tau = x * self.lattice[0] + y * self.lattice[1]
        return AffineWeylElement(coset.w, coset.translation + tau)

    def elements(self, radius: int) -> Iterator[AffineWeylElement]:
        for coset in self.cosets:
            for x in range(-radius, radius + 1):
                for y in range(-radius, radius + 1):
                    yield self.element(coset, x, y)


def integral_weyl_group(lam_hat: AffineWeight) -> IntegralWeylGroup:
    """Generate the integral Weyl group of ``lam_hat`` from its integral reflections."""
    _require_noncritical(lam_hat)
    lattice = integral_translation_lattice(lam_hat.level)
    generators = []
    for alpha in POSITIVE_ROOTS:
        progression = integral_progression(lam_hat, alpha)
        if progression is not None:
            generators.append(affine_reflection(alpha, progression.start))

    found: dict[Matrix, AffineWeylElement] = {IDENTITY.matrix: AFFINE_IDENTITY}
    queue = deque([AFFINE_IDENTITY])
    while queue:
        current = queue.popleft()
        for s in generators:
            candidate = s * current
            reduced = AffineWeylElement(
                candidate.w, reduce_mod_lattice(candidate.translation, lattice)
            )
            known = found.get(candidate.w.matrix)
            if known is None:
                found[candidate.w.matrix] = reduced
                queue.append(reduced)
            elif known.translation != reduced.translation:
                raise AssertionError(
                    "integral Weyl group has translations outside the expected lattice"
                )
    return IntegralWeylGroup(tuple(found.values()), lattice)
