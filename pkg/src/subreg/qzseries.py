"""Truncated bivariate formal series in q and z with exact coefficients.

A series stores exponents relative to rational offsets: the term at ``(n, m)``
means ``coeff * q**(q_offset + n) * z**(z_offset + m)``. Data is known for
``0 <= n <= order`` and ``z_window[0] <= m <= z_window[1]``; outside the window
nothing is claimed.
"""

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

Key = tuple[int, int]
Window = tuple[int, int]


class NonAlignableOffsetsError(ValueError):
    """Raised when two series have offsets differing by a non-integer."""


class ZeroExponentFactorError(ValueError):
    """Raised for the factor (1 - q^0 z^0)^-1, which has no expansion."""


def format_rational(value: Fraction) -> str:
    """Serialize a rational as a "num/den" string."""
    return f"{value.numerator}/{value.denominator}"


def _integral_difference(x: Fraction, y: Fraction, what: str) -> int:
    diff = x - y
    if diff.denominator != 1:
        raise NonAlignableOffsetsError(
            f"{what} offsets {x} and {y} differ by the non-integer {diff}"
        )
    return int(diff)


@dataclass(frozen=True, eq=False)
class QZSeries:
    q_offset: Fraction
    z_offset: Fraction
    order: int
    z_window: Window
    coeffs: Mapping[Key, Fraction] = field(default_factory=dict)

    @classmethod
    def from_terms(
        cls,
        q_offset: int | Fraction,
        z_offset: int | Fraction,
        order: int,
        z_window: Window,
        terms: Iterable[tuple[Key, Fraction | int]],
    ) -> "QZSeries":
        """Build a series, summing repeated keys and dropping out-of-range terms."""
        if order < 0:
            raise ValueError(f"series order must be non-negative, got {order}")
        lo, hi = z_window
        coeffs: dict[Key, Fraction] = {}
        for (n, m), c in terms:
            if 0 <= n <= order and lo <= m <= hi:
                coeffs[(n, m)] = coeffs.get((n, m), Fraction(0)) + c
        return cls(
            Fraction(q_offset),
            Fraction(z_offset),
            order,
            z_window,
            {key: Fraction(c) for key, c in coeffs.items() if c != 0},
        )

    @classmethod
    def zero(
        cls,
        order: int = 0,
        z_window: Window = (0, 0),
        q_offset: int | Fraction = 0,
        z_offset: int | Fraction = 0,
    ) -> "QZSeries":
        return cls.from_terms(q_offset, z_offset, order, z_window, ())

    @classmethod
    def monomial(
        cls,
        q_exp: int | Fraction = 0,
        z_exp: int | Fraction = 0,
        coeff: int | Fraction = 1,
        order: int = 0,
    ) -> "QZSeries":
        terms = [((0, 0), Fraction(coeff))]
        return cls.from_terms(q_exp, z_exp, order, (0, 0), terms)

    @classmethod
    def one(cls, order: int = 0) -> "QZSeries":
        return cls.monomial(order=order)

    def coefficient(self, n: int, m: int) -> Fraction:
        return self.coeffs.get((n, m), Fraction(0))

    def coefficient_at(self, q_exp: int | Fraction, z_exp: int | Fraction) -> Fraction:
        """Coefficient at absolute exponents, which must lie in the known region."""
        n = Fraction(q_exp) - self.q_offset
        m = Fraction(z_exp) - self.z_offset
        if n.denominator != 1 or m.denominator != 1:
            return Fraction(0)
        if n < 0:
            return Fraction(0)
        if n > self.order or not self.z_window[0] <= m <= self.z_window[1]:
            raise ValueError(f"q^{q_exp} z^{z_exp} lies outside the known region")
        return self.coefficient(int(n), int(m))

    def layer(self, n: int) -> dict[int, Fraction]:
        """The q-degree ``n`` slice as a map from relative z-exponent to coefficient."""
        return {m: c for (d, m), c in sorted(self.coeffs.items()) if d == n}

    def terms(self) -> Iterator[tuple[Key, Fraction]]:
        yield from sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def support_window(self) -> Window | None:
        if not self.coeffs:
            return None
        ms = [m for _, m in self.coeffs]
        return (min(ms), max(ms))

    def __add__(self, other: "QZSeries") -> "QZSeries":
        return add(self, other)

    def __sub__(self, other: "QZSeries") -> "QZSeries":
        return add(self, other.scale(-1))

    def __mul__(self, other: "QZSeries") -> "QZSeries":
        return mul(self, other)

    def __neg__(self) -> "QZSeries":
        return self.scale(-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QZSeries):
            return NotImplemented
        return (
            self.q_offset == other.q_offset
            and self.z_offset == other.z_offset
            and self.order == other.order
            and self.z_window == other.z_window
            and dict(self.coeffs) == dict(other.coeffs)
        )

    def scale(self, factor: int | Fraction) -> "QZSeries":
        return QZSeries.from_terms(
            self.q_offset,
            self.z_offset,
            self.order,
            self.z_window,
            ((key, c * factor) for key, c in self.coeffs.items()),
        )

    def truncate(self, order: int) -> "QZSeries":
        return QZSeries.from_terms(
            self.q_offset,
            self.z_offset,
            min(order, self.order),
            self.z_window,
            self.coeffs.items(),
        )

    def restricted(self, window: Window) -> "QZSeries":
        """Keep only the columns of ``window`` that are already known."""
        lo = max(window[0], self.z_window[0])
        hi = min(window[1], self.z_window[1])
        if lo > hi:
            raise ValueError(
                f"window {window} misses the known columns {self.z_window}"
            )
        return QZSeries(
            self.q_offset,
            self.z_offset,
            self.order,
            (lo, hi),
            {(n, m): c for (n, m), c in self.coeffs.items() if lo <= m <= hi},
        )

    def times_monomial(
        self, q_exp: int | Fraction, z_exp: int | Fraction
    ) -> "QZSeries":
        return QZSeries(
            self.q_offset + q_exp,
            self.z_offset + z_exp,
            self.order,
            self.z_window,
            dict(self.coeffs),
        )

    def reflect_z(self) -> "QZSeries":
        """Substitute z -> 1/z."""
        lo, hi = self.z_window
        return QZSeries(
            self.q_offset,
            -self.z_offset,
            self.order,
            (-hi, -lo),
            {(n, -m): c for (n, m), c in self.coeffs.items()},
        )

    def tightened(self) -> "QZSeries":
        """Shrink the window to the support.

        Only valid once the caller knows every coefficient outside the support
        vanishes up to ``order``.
        """
        window = self.support_window()
        if window is None:
            return self
        return QZSeries(
            self.q_offset, self.z_offset, self.order, window, dict(self.coeffs)
        )

    def with_offsets(self, q_offset: Fraction, z_offset: Fraction) -> "QZSeries":
        """Re-express the same series relative to integrally shifted offsets."""
        dn = _integral_difference(self.q_offset, q_offset, "q")
        dm = _integral_difference(self.z_offset, z_offset, "z")
        if dn < 0 and any(n + dn < 0 for n, _ in self.coeffs):
            raise ValueError("new q offset lies above a stored term")
        lo, hi = self.z_window
        return QZSeries(
            q_offset,
            z_offset,
            self.order + dn,
            (lo + dm, hi + dm),
            {(n + dn, m + dm): c for (n, m), c in self.coeffs.items()},
        )

    def to_json_dict(self) -> dict[str, object]:
        return {
            "q_offset": format_rational(self.q_offset),
            "z_offset": format_rational(self.z_offset),
            "order": self.order,
            "z_window": list(self.z_window),
            "terms": [[n, m, format_rational(c)] for (n, m), c in self.terms()],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping[str, object]) -> "QZSeries":
        raw_window = data.get("z_window")
        raw_terms = data["terms"]
        if not isinstance(raw_terms, list):
            raise TypeError("series terms must be a list")
        terms = [((int(n), int(m)), Fraction(str(c))) for n, m, c in raw_terms]
        if isinstance(raw_window, list) and len(raw_window) == 2:
            window = (int(raw_window[0]), int(raw_window[1]))
        else:
            ms = [m for (_, m), _ in terms] or [0]
            window = (min(ms), max(ms))
        order = data["order"]
        if not isinstance(order, int):
            raise TypeError("series order must be an integer")
        return cls.from_terms(
            Fraction(str(data["q_offset"])),
            Fraction(str(data["z_offset"])),
            order,
            window,
            terms,
        )


def add(a: QZSeries, b: QZSeries) -> QZSeries:
    """Sum on the intersection of the known regions."""
    dq = _integral_difference(b.q_offset, a.q_offset, "q")
    dz = _integral_difference(b.z_offset, a.z_offset, "z")
    q_offset = min(a.q_offset, b.q_offset)
    shift_a = int(a.q_offset - q_offset)
    shift_b = shift_a + dq
    order = min(a.order + shift_a, b.order + shift_b)
    lo = max(a.z_window[0], b.z_window[0] + dz)
    hi = min(a.z_window[1], b.z_window[1] + dz)
    terms: list[tuple[Key, Fraction]] = [
        ((n + shift_a, m), c) for (n, m), c in a.coeffs.items()
    ]
    terms.extend(((n + shift_b, m + dz), c) for (n, m), c in b.coeffs.items())
    return QZSeries.from_terms(q_offset, a.z_offset, order, (lo, hi), terms)


def mul(a: QZSeries, b: QZSeries, window: Window | None = None) -> QZSeries:
    """Cauchy product; ``window`` clips the sum of the factor windows."""
    order = min(a.order, b.order)
    lo = a.z_window[0] + b.z_window[0]
    hi = a.z_window[1] + b.z_window[1]
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    product: dict[Key, Fraction] = {}
    right = sorted(b.coeffs.items())
    for (n1, m1), c1 in a.coeffs.items():
        if n1 > order:
            continue
        for (n2, m2), c2 in right:
            n = n1 + n2
            if n > order:
                break
            m = m1 + m2
            if lo <= m <= hi:
                product[(n, m)] = product.get((n, m), Fraction(0)) + c1 * c2
    return QZSeries.from_terms(
        a.q_offset + b.q_offset,
        a.z_offset + b.z_offset,
        order,
        (lo, hi),
        product.items(),
    )


def product(factors: Iterable[QZSeries], window: Window | None = None) -> QZSeries:
    result: QZSeries | None = None
    for factor in factors:
        result = factor if result is None else mul(result, factor, window)
    if result is None:
        raise ValueError("product of no series")
    return result


def inv_one_minus_monomial(
    n: int, m: int, order: int, window: Window | None = None
) -> QZSeries:
    """Geometric series sum_t q^(t n) z^(t m) truncated to ``order`` and ``window``."""
    if n < 0:
        raise ValueError(f"q-exponent of a geometric factor must be >= 0, got {n}")
    if n == 0 and m == 0:
        raise ZeroExponentFactorError("(1 - q^0 z^0)^-1 has no formal expansion")
    if n == 0:
        if window is None:
            raise ValueError("a pure z geometric series needs an explicit window")
        lo, hi = window
        bound = hi // m if m > 0 else lo // m
        steps = range(max(bound, -1) + 1)
    else:
        steps = range(order // n + 1)
        if window is None:
            ends = (0, m * steps[-1])
            window = (min(ends), max(ends))
    terms = (((t * n, t * m), 1) for t in steps)
    return QZSeries.from_terms(0, 0, order, window, terms)


def substitute_z_qshift(a: QZSeries, shift: int) -> QZSeries:
    """Replace z by q^shift z.

    The new q offset is chosen at the window edge that moves furthest down, so
    every term keeps a non-negative relative degree. A relative degree ``n'``
    at column ``m`` comes from an original degree ``n' - shift * (m - edge)``,
    which never exceeds ``n'``; the relative order therefore stays valid while
    the absolute order drops together with the offset.
    """
    if shift == 0:
        return a
    lo, hi = a.z_window
    edge = hi if shift < 0 else lo
    q_offset = a.q_offset + shift * (a.z_offset + edge)
    terms = (((n + shift * (m - edge), m), c) for (n, m), c in a.coeffs.items())
    return QZSeries.from_terms(q_offset, a.z_offset, a.order, a.z_window, terms)


@dataclass(frozen=True)
class Discrepancy:
    q_exp: Fraction
    z_exp: Fraction
    left: Fraction
    right: Fraction


@dataclass(frozen=True)
class Comparison:
    """Outcome of comparing two series on their common known region."""

    q_max: Fraction
    z_range: tuple[Fraction, Fraction] | None
    discrepancy: Discrepancy | None

    @property
    def agrees(self) -> bool:
        return self.discrepancy is None and self.z_range is not None


def compare(a: QZSeries, b: QZSeries) -> Comparison:
    """Compare ``a`` and ``b`` where both are known."""
    _integral_difference(a.q_offset, b.q_offset, "q")
    dz = _integral_difference(b.z_offset, a.z_offset, "z")
    q_max = min(a.q_offset + a.order, b.q_offset + b.order)
    lo = max(a.z_window[0], b.z_window[0] + dz)
    hi = min(a.z_window[1], b.z_window[1] + dz)
    if lo > hi:
        return Comparison(q_max, None, None)

    def absolute(series: QZSeries) -> dict[tuple[Fraction, Fraction], Fraction]:
        return {
            (series.q_offset + n, series.z_offset + m): c
            for (n, m), c in series.coeffs.items()
        }

    left, right = absolute(a), absolute(b)
    z_lo, z_hi = a.z_offset + lo, a.z_offset + hi
    for key in sorted(set(left) | set(right)):
        q_exp, z_exp = key
        if q_exp > q_max or not z_lo <= z_exp <= z_hi:
            continue
        x, y = left.get(key, Fraction(0)), right.get(key, Fraction(0))
        if x != y:
            return Comparison(q_max, (z_lo, z_hi), Discrepancy(q_exp, z_exp, x, y))
    return Comparison(q_max, (z_lo, z_hi), None)


def format_table(series: QZSeries) -> str:
    """Render rows of q-degree against columns of z-exponent."""
    window = series.support_window()
    header = f"q^({series.q_offset} + n) z^({series.z_offset} + m)"
    if window is None:
        return f"{header}\n(zero to order {series.order})"
    columns = list(range(window[0], window[1] + 1))
    cells = [["n\\m", *(str(m) for m in columns)]]
    for n in range(series.order + 1):
        row = series.layer(n)
        cells.append([str(n), *(str(row.get(m, 0)) for m in columns)])
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns) + 1)]
    lines = [header]
    lines.extend(
        "  ".join(cell.rjust(width) for cell, width in zip(row, widths))
        for row in cells
    )
    return "\n".join(lines)
