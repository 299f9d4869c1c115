"""Truncated characters of the simple modules as formal (q, z)-series.

A character is ``q^h A(q, z) * sum eps(w) q^a z^b`` where the sum runs over the
integral Weyl group of an affine weight and

    A(q, z) = prod_{n>0} (1 - q^n)^-2 (1 - q^(n-1) z)^-1 (1 - q^n z^-1)^-1.

The factor (1 - z)^-1 is never expanded: the numerator is multiplied by the
rest of A, checked to vanish at z = 1 in every q-degree, and divided by
(1 - z) as a prefix sum. Characters of the forms 2, 3 and 2' are obtained by
twisting the numerator of a form 1 or 1' module term by term.
"""

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache

from .cartan import (
    ALPHA2,
    RHO,
    X0,
    AffineWeylElement,
    Weight,
    affine_weight,
    dot_action,
    inner_product,
    integral_weyl_group,
    lattice_coords,
    norm2,
)
from .classifier import (
    Form,
    Level,
    ModuleLabel,
    enumerate_modules,
    h_weight,
    hw_weight,
    make_label,
    phi_label,
    psi_label,
    require_supported,
)
from .logging import debug, error
from .qzseries import (
    Comparison,
    QZSeries,
    Window,
    compare,
    inv_one_minus_monomial,
    mul,
    product,
    substitute_z_qshift,
)

MAX_WINDOW_DOUBLINGS = 4


class WindowOverflowError(RuntimeError):
    """Raised when the z-window keeps clipping a numerator product."""


class CharacterError(RuntimeError):
    """Raised when a Weyl sum fails to produce a well-formed character."""


@dataclass(frozen=True)
class CharacterRequest:
    """What to compute, and how generously to size the enumeration."""

    label: ModuleLabel
    level: Level
    order: int
    box_padding: int = 0
    window_scale: int = 1

    def __post_init__(self) -> None:
        if self.order < 0:
            raise ValueError(f"order must be non-negative, got {self.order}")
        if self.box_padding < 0 or self.window_scale < 1:
            raise ValueError("box_padding must be >= 0 and window_scale >= 1")

    @property
    def window_pad(self) -> int:
        return (self.label.top_dim + 1) * self.window_scale


@dataclass(frozen=True)
class WeylSumTerm:
    g: AffineWeylElement
    sign: int
    q_exp: Fraction
    z_exp: Fraction


# Denominators


@cache
def _core_denominator(order: int) -> QZSeries:
    """A(q, z) * (1 - z), complete on the window (-order, order)."""
    window = (-order, order)
    factors = [QZSeries.one(order)]
    for n in range(1, order + 1):
        factors.append(inv_one_minus_monomial(n, 0, order))
        factors.append(inv_one_minus_monomial(n, 0, order))
        factors.append(inv_one_minus_monomial(n, 1, order))
        factors.append(inv_one_minus_monomial(n, -1, order))
    return product(factors, window)


def denominator(order: int, window: Window | None = None) -> QZSeries:
    """A(q, z) with (1 - z)^-1 expanded in non-negative powers of z."""
    if window is None:
        window = (-order, order)
    span = max(window[1], 0) - min(window[0], 0)
    geometric = inv_one_minus_monomial(0, 1, order, (0, span))
    return mul(_core_denominator(order), geometric, window)


@cache
def universal_pbw_character(order: int, window: Window | None = None) -> QZSeries:
    """Character of the span of PBW monomials in J, L, G-, G+."""
    if window is None:
        window = (-order, order)
    factors = [QZSeries.one(order)]
    for n in range(1, order + 1):
        factors.append(inv_one_minus_monomial(n, 0, order))
        if n >= 2:
            factors.append(inv_one_minus_monomial(n, 0, order))
            factors.append(inv_one_minus_monomial(n, 1, order))
            factors.append(inv_one_minus_monomial(n, -1, order))
    return product(factors, window)


# Weyl sums


def _twist(
    sign: int, a: Fraction, b: Fraction, c: Fraction, power: int
) -> tuple[int, Fraction, Fraction]:
    """Move one numerator term through ``power`` applications of the twist."""
    for _ in range(power):
        sign, a, b = -sign, a - b + c + 1, b - 2 * c - 1
    for _ in range(-power):
        sign, a, b = -sign, a + b + c, b + 2 * c + 1
    return sign, a, b


def _term(
    g: AffineWeylElement, lam: Weight, level: Level, twist: int
) -> WeylSumTerm:
    moved = dot_action(g, affine_weight(lam, level.k))
    a = -moved.graded_pairing(X0)
    b = -inner_product(moved.finite, ALPHA2)
    sign, a, b = _twist(g.sign, a, b, (2 + level.k) / 2, twist)
    return WeylSumTerm(g, sign, h_weight(lam, level) + a, b)


def _ceil_sqrt(r: Fraction) -> int:
    """Smallest h >= 0 with h^2 >= r."""
    if r <= 0:
        return 0
    h = math.isqrt(math.ceil(r))
    return h if h * h >= r else h + 1


def _box(
    center: tuple[Fraction, Fraction],
    radius2: Fraction,
    lattice: tuple[Weight, Weight],
    padding: int,
) -> Iterator[tuple[int, int]]:
    """Lattice coordinates inside the ellipse |x e1 + y e2 - center|^2 <= radius2."""
    e1, e2 = lattice
    g11, g22, g12 = norm2(e1), norm2(e2), inner_product(e1, e2)
    det = g11 * g22 - g12 * g12
    half_x = _ceil_sqrt(radius2 * g22 / det)
    half_y = _ceil_sqrt(radius2 * g11 / det)
    margin = 1 + padding
    cx, cy = center
    xs = range(math.floor(cx) - half_x - margin, math.ceil(cx) + half_x + margin + 1)
    ys = range(math.floor(cy) - half_y - margin, math.ceil(cy) + half_y + margin + 1)
    for x in xs:
        for y in ys:
            yield (x, y)


def weyl_sum_terms(
    lam: Weight,
    level: Level,
    q_max: Fraction,
    twist: int = 0,
    box_padding: int = 0,
) -> list[WeylSumTerm]:
    """Terms of the integral Weyl sum of lam + k Lambda0 with q-exponent <= q_max.

    Exponents include the prefactor q^h_lam and ``twist`` applications of the
    twist. Along a coset u t_beta the q-exponent is a quadratic in beta with
    leading part (k + 3)/2 |beta|^2, minimal at beta* = u^-1 v - (lam + rho)/(k + 3)
    where v = x0 - twist * alpha2; the enumeration box is the ellipse around
    beta* plus a margin.
    """
    lam_hat = affine_weight(lam, level.k)
    group = integral_weyl_group(lam_hat)
    t = level.t
    grading = X0 - twist * ALPHA2
    mu = lam + RHO
    terms: list[WeylSumTerm] = []
    seen: set[tuple[object, Weight]] = set()
    for coset in group.cosets:
        u = coset.w
        beta_star = u.inverse().apply(grading) - mu * (1 / t)
        lowest = _term(AffineWeylElement(u, beta_star), lam, level, twist).q_exp
        slack = q_max - lowest
        if slack < 0:
            continue
        center = lattice_coords(beta_star - coset.translation, group.lattice)
        radius2 = 2 * slack / t
        for x, y in _box(center, radius2, group.lattice, box_padding):
            g = group.element(coset, x, y)
            key = (g.w.matrix, g.translation)
            if key in seen:
                continue
            seen.add(key)
            term = _term(g, lam, level, twist)
            if term.q_exp <= q_max:
                terms.append(term)
    debug(f"Weyl sum for {lam} (twist {twist}): {len(terms)} terms up to q^{q_max}")
    terms.sort(key=lambda term: (term.q_exp, term.z_exp, term.sign))
    return terms


# Assembly


def _numerator(
    terms: Iterable[WeylSumTerm], label: ModuleLabel, order: int
) -> dict[tuple[int, int], Fraction]:
    numerator: dict[tuple[int, int], Fraction] = {}
    for term in terms:
        n = term.q_exp - label.chi
        m = term.z_exp - label.xi
        if n.denominator != 1 or m.denominator != 1:
            raise CharacterError(
                f"Weyl term q^{term.q_exp} z^{term.z_exp} is not integrally "
                f"spaced from the top of {label}"
            )
        key = (int(n), int(m))
        numerator[key] = numerator.get(key, Fraction(0)) + term.sign
    below = {key: c for key, c in numerator.items() if key[0] < 0 and c != 0}
    if below:
        n, m = min(below)
        raise CharacterError(
            f"Weyl sum for {label} leaves q^{label.chi + n} z^{label.xi + m} "
            "below the top degree"
        )
    return {
        key: c for key, c in numerator.items() if 0 <= key[0] <= order and c != 0
    }


def _reduced_numerator(
    numerator: dict[tuple[int, int], Fraction], label: ModuleLabel, order: int, pad: int
) -> tuple[QZSeries, Window]:
    """The numerator times A(q, z)(1 - z), inside a window free of clipping."""
    columns = [m for _, m in numerator] or [0]
    num = QZSeries.from_terms(
        label.chi, label.xi, order, (min(columns), max(columns)), numerator.items()
    )
    core = _core_denominator(order)
    for _ in range(MAX_WINDOW_DOUBLINGS + 1):
        window = (-(order + pad), order + pad)
        reduced = mul(num, core, window)
        if _is_unclipped(reduced, window):
            return reduced, window
        debug(f"window {window} clips the numerator of {label}; doubling the pad")
        pad *= 2
    message = (
        f"z-window {window} still clips the character of {label} "
        f"after {MAX_WINDOW_DOUBLINGS} doublings"
    )
    error(message)
    raise WindowOverflowError(message)


def _is_unclipped(reduced: QZSeries, window: Window) -> bool:
    lo, hi = window
    sums: dict[int, Fraction] = {}
    for (n, m), c in reduced.coeffs.items():
        if m in (lo, hi):
            return False
        sums[n] = sums.get(n, Fraction(0)) + c
    return all(total == 0 for total in sums.values())


def assemble(
    terms: Iterable[WeylSumTerm],
    label: ModuleLabel,
    order: int,
    window_pad: int | None = None,
) -> QZSeries:
    """Multiply a Weyl-sum numerator by A(q, z) and read off the character."""
    pad = label.top_dim + 1 if window_pad is None else window_pad
    numerator = _numerator(terms, label, order)
    reduced, (lo, hi) = _reduced_numerator(numerator, label, order, pad)
    prefix = inv_one_minus_monomial(0, 1, order, (0, hi - lo))
    ch = mul(reduced, prefix, (lo, hi)).tightened()
    for (n, m), c in ch.coeffs.items():
        if not -n <= m <= n + label.top_dim - 1:
            raise CharacterError(
                f"character of {label} has q^{label.chi + n} z^{label.xi + m} "
                f"(coefficient {c}) outside the allowed J0 range"
            )
    return ch


def _source(label: ModuleLabel, level: Level) -> tuple[ModuleLabel, int]:
    """The form 1 or 1' module whose twist by psi^power is ``label``."""
    p, i, j = level.p, label.i, label.j
    if label.s is Form.THREE:
        return make_label(Form.ONE, p - i - j, i, level), 1
    if label.s is Form.TWO:
        return make_label(Form.ONE, j, p - i - j, level), 2
    if label.s is Form.TWO_PRIME:
        return make_label(Form.ONE_PRIME, j, i, level), -1
    return label, 0


def compute_character(request: CharacterRequest) -> QZSeries:
    """Truncated (q, z)-character of one simple module.

    Labels of the forms 2, 3 and 2' are computed from the Weyl sum of their
    untwisted source, twisted as many times as psi takes the source to them.

    Args:
        request: Label, level, q-order and enumeration margins

    Returns:
        Series with every coefficient of q-degree <= order above the top

    Raises:
        UnsupportedLevelError: If the level is not principal or coprincipal
        WindowOverflowError: If no z-window keeps the numerator unclipped
    """
    label, level, order = request.label, request.level, request.order
    require_supported(level)
    source, power = _source(label, level)
    lam = hw_weight(source, level)
    terms = weyl_sum_terms(
        lam, level, label.chi + order, twist=power, box_padding=request.box_padding
    )
    return assemble(terms, label, order, request.window_pad)


def character(
    label: ModuleLabel,
    level: Level,
    order: int,
    *,
    box_padding: int = 0,
    window_scale: int = 1,
) -> QZSeries:
    """Character of ``label`` up to q-degree ``order`` above its top."""
    return compute_character(
        CharacterRequest(label, level, order, box_padding, window_scale)
    )


def psi_transform(ch: QZSeries, level: Level) -> QZSeries:
    """ch(q, z) -> q^((2+k)/2) z^-(2+k) ch(q, z/q)."""
    c = (2 + level.k) / 2
    return substitute_z_qshift(ch, -1).times_monomial(c, -2 * c)


# Checks


@dataclass(frozen=True)
class CharacterCheck:
    name: str
    subject: str
    passed: bool
    detail: str = ""


def _describe(comparison: Comparison) -> str:
    if comparison.z_range is None:
        return "no common known region"
    found = comparison.discrepancy
    if found is None:
        return f"agree up to q^{comparison.q_max}"
    return (
        f"differ at q^{found.q_exp} z^{found.z_exp}: {found.left} != {found.right}"
    )


def nonnegativity_check(ch: QZSeries, label: ModuleLabel) -> CharacterCheck:
    bad = [
        (key, c) for key, c in ch.terms() if c.denominator != 1 or c < 0
    ]
    detail = f"first bad coefficient {bad[0][1]} at {bad[0][0]}" if bad else ""
    return CharacterCheck("nonnegative-integral", str(label), not bad, detail)


def lowest_layer_check(ch: QZSeries, label: ModuleLabel) -> CharacterCheck:
    expected = {m: Fraction(1) for m in range(label.top_dim)}
    found = ch.layer(0)
    detail = "" if found == expected else f"lowest layer {found}"
    return CharacterCheck("lowest-layer", str(label), found == expected, detail)


def pbw_bound_check(level: Level, order: int) -> CharacterCheck:
    """The vacuum character is bounded by the PBW count, with equality at q^1."""
    vacuum = make_label(level.forms[0], 1, 1, level)
    ch = character(vacuum, level, order)
    bound = universal_pbw_character(order)
    for (n, m), c in ch.terms():
        if c > bound.coefficient(n, m):
            return CharacterCheck(
                "pbw-bound",
                str(level),
                False,
                f"q^{n} z^{m}: {c} exceeds {bound.coefficient(n, m)}",
            )
    if order >= 1 and ch.layer(1) != bound.layer(1):
        return CharacterCheck(
            "pbw-bound", str(level), False, f"q^1 layer {ch.layer(1)}"
        )
    return CharacterCheck("pbw-bound", str(level), True)


def psi_compatibility_check(
    label: ModuleLabel, level: Level, order: int
) -> CharacterCheck:
    """Twisting the character of ``label`` gives the character of its psi image."""
    target = psi_label(label, level)
    i, i_image = label.top_dim, target.top_dim
    source_order = 2 * order + i_image - 1
    source = character(label, level, source_order).restricted(
        (-order + i - 1, order + i + i_image - 2)
    )
    twisted = psi_transform(source, level)
    comparison = compare(twisted, character(target, level, order))
    return CharacterCheck(
        "psi-compatible",
        f"{label} -> {target}",
        comparison.agrees,
        _describe(comparison),
    )


def phi_compatibility_check(
    label: ModuleLabel, level: Level, order: int
) -> CharacterCheck:
    image = phi_label(label, level)
    reflected = character(label, level, order).reflect_z()
    comparison = compare(reflected, character(image, level, order))
    return CharacterCheck(
        "phi-compatible",
        f"{label} -> {image}",
        comparison.agrees,
        _describe(comparison),
    )


def truncation_soundness_check(
    label: ModuleLabel, level: Level, order: int
) -> CharacterCheck:
    """A larger box and a doubled window leave every coefficient unchanged."""
    baseline = character(label, level, order)
    generous = character(label, level, order, box_padding=1, window_scale=2)
    detail = "" if baseline == generous else "enlarged enumeration changed the series"
    return CharacterCheck("truncation-sound", str(label), baseline == generous, detail)


@dataclass(frozen=True)
class TwistedIdentityReport:
    """Weyl sum over the weight of a twisted form against the twisted character.

    Agreement to finite order is evidence for the identity, not a proof.
    """

    label: ModuleLabel
    weight: Weight | None
    comparison: Comparison | None
    problems: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.problems
            and self.comparison is not None
            and self.comparison.agrees
        )

    @property
    def detail(self) -> str:
        if self.problems:
            return "; ".join(self.problems)
        assert self.comparison is not None
        return _describe(self.comparison) + " (finite-order evidence only)"


def verify_twisted_identity(
    label: ModuleLabel, level: Level, order: int
) -> TwistedIdentityReport:
    if label.s in (Form.ONE, Form.ONE_PRIME):
        raise ValueError(f"{label} is not of a twisted form")
    try:
        lam = hw_weight(label, level)
        terms = weyl_sum_terms(lam, level, label.chi + order)
        left = assemble(terms, label, order)
        right = character(label, level, order)
    except RuntimeError as exc:
        return TwistedIdentityReport(label, None, None, [str(exc)])
    return TwistedIdentityReport(label, lam, compare(left, right))


def twisted_labels(level: Level) -> list[ModuleLabel]:
    return [
        label
        for label in enumerate_modules(level)
        if label.s not in (Form.ONE, Form.ONE_PRIME)
    ]
