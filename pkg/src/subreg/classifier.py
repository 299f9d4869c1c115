"""Admissible levels and the simple modules of the simple W-algebra.

Simple modules are L(xi, chi) labelled by a form ``s`` and a pair ``(i, j)``.
Principal levels k = -3 + p/3 carry the forms 1, 2, 3; coprincipal levels
k = -3 + p/4 carry the forms 1' and 2'.
"""

from collections.abc import Iterator
from dataclasses import dataclass
from enum import StrEnum
from fractions import Fraction
from math import gcd

from .cartan import (
    ALPHA2,
    H_DUAL,
    OMEGA1,
    OMEGA2,
    RHO,
    X0,
    Weight,
    affine_weight,
    inner_product,
    is_admissible_weight,
)
from .modes import h_closed_form
from .qzseries import format_rational

COXETER_NUMBER = 4
LACING = 2


class OutOfRangeError(ValueError):
    """Raised for a label (s, i, j) outside the classification ranges."""


class UnsupportedLevelError(ValueError):
    """Raised when a level is neither principal nor coprincipal admissible."""


class WeightSelectionError(RuntimeError):
    """Raised when the admissible representative of a twisted weight is not unique."""


class LevelKind(StrEnum):
    PRINCIPAL = "principal"
    COPRINCIPAL = "coprincipal"
    OTHER_ADMISSIBLE = "other-admissible"
    NON_ADMISSIBLE = "non-admissible"
    CRITICAL = "critical"


class Form(StrEnum):
    ONE = "1"
    TWO = "2"
    THREE = "3"
    ONE_PRIME = "1'"
    TWO_PRIME = "2'"

    @property
    def slug(self) -> str:
        """File-name friendly spelling."""
        return self.value.replace("'", "p")

    @classmethod
    def parse(cls, text: str) -> "Form":
        cleaned = text.strip().replace("′", "'")
        if cleaned.endswith("p"):
            cleaned = cleaned[:-1] + "'"
        try:
            return cls(cleaned)
        except ValueError:
            valid = ", ".join(form.value for form in cls)
            raise OutOfRangeError(
                f"unknown form {text!r}; expected one of {valid}"
            ) from None


PRINCIPAL_FORMS = (Form.ONE, Form.TWO, Form.THREE)
COPRINCIPAL_FORMS = (Form.ONE_PRIME, Form.TWO_PRIME)


@dataclass(frozen=True)
class Level:
    k: Fraction
    kind: LevelKind
    p: int
    q: int

    @property
    def t(self) -> Fraction:
        """k + h^vee."""
        return self.k + H_DUAL

    @property
    def is_supported(self) -> bool:
        return self.kind in (LevelKind.PRINCIPAL, LevelKind.COPRINCIPAL)

    @property
    def forms(self) -> tuple[Form, ...]:
        if self.kind is LevelKind.PRINCIPAL:
            return PRINCIPAL_FORMS
        if self.kind is LevelKind.COPRINCIPAL:
            return COPRINCIPAL_FORMS
        return ()

    def __str__(self) -> str:
        return f"k={self.k} ({self.kind.value}, p={self.p}, q={self.q})"


def classify_level(k: int | Fraction | str) -> Level:
    """Classify k = -3 + p/q by the admissibility criteria for sp4."""
    k = Fraction(k)
    t = k + H_DUAL
    p, q = t.numerator, t.denominator
    if t == 0:
        return Level(k, LevelKind.CRITICAL, 0, 1)
    if t < 0:
        return Level(k, LevelKind.NON_ADMISSIBLE, p, q)
    minimum = H_DUAL if gcd(q, LACING) == 1 else COXETER_NUMBER
    if p < minimum:
        return Level(k, LevelKind.NON_ADMISSIBLE, p, q)
    if q == 3:
        return Level(k, LevelKind.PRINCIPAL, p, q)
    if q == 4:
        return Level(k, LevelKind.COPRINCIPAL, p, q)
    return Level(k, LevelKind.OTHER_ADMISSIBLE, p, q)


def require_supported(level: Level) -> Level:
    if not level.is_supported:
        raise UnsupportedLevelError(
            f"{level} is not principal (q=3) or coprincipal (q=4) admissible"
        )
    return level


def admissible_levels(q: int, p_max: int, p_min: int = 1) -> list[Level]:
    """Principal (q=3) or coprincipal (q=4) levels with p_min <= p <= p_max."""
    if q not in (3, 4):
        raise UnsupportedLevelError(f"unsupported denominator q={q}; use 3 or 4")
    if p_max < p_min:
        raise ValueError(f"empty range p_min={p_min} > p_max={p_max}")
    levels = []
    for p in range(max(p_min, 1), p_max + 1):
        if gcd(p, q) != 1:
            continue
        level = classify_level(Fraction(p, q) - H_DUAL)
        if level.is_supported:
            levels.append(level)
    return levels


# Closed forms


def closed_forms(
    s: Form, i: int | Fraction, j: int | Fraction, k: Fraction
) -> tuple[Fraction, Fraction, Fraction]:
    """(xi, chi, l) of the form ``s`` as rational functions of k."""
    i, j, k = Fraction(i), Fraction(j), Fraction(k)
    denominator = 4 * (3 + k)
    if s in (Form.ONE, Form.ONE_PRIME):
        xi = (1 - i) / 2
        chi = (
            13 - 6 * i + i * i - 12 * j + 2 * i * j + 2 * j * j + 6 * k
            - 2 * i * k - 4 * j * k
        ) / denominator
        if s is Form.ONE:
            return xi, chi, 9 - i - j + 3 * k
        return xi, chi, 12 - i - 2 * j + 4 * k
    if s in (Form.TWO, Form.TWO_PRIME):
        xi = (7 - 2 * i - j + 2 * k) / 2
        chi = (
            31 - 12 * i + 2 * i * i - 12 * j + 2 * i * j + j * j + 18 * k
            - 4 * i * k - 4 * j * k + 2 * k * k
        ) / denominator
        return xi, chi, i
    xi = (4 - i - j + k) / 2
    chi = (4 + i * i - 6 * j + j * j - 2 * j * k - k * k) / denominator
    return xi, chi, 9 - i - j + 3 * k


def index_ranges(s: Form, level: Level) -> Iterator[tuple[int, int]]:
    p = level.p
    if s in PRINCIPAL_FORMS:
        for i in range(1, p - 1):
            for j in range(1, p - i):
                yield (i, j)
    elif s is Form.ONE_PRIME:
        for i in range(1, p - 2):
            for j in range(1, (p - i - 1) // 2 + 1):
                yield (i, j)
    else:
        for i in range(1, p - 2):
            for j in range(1, p - 2 * i):
                yield (i, j)


def describe_ranges(s: Form, level: Level) -> str:
    p = level.p
    if s in PRINCIPAL_FORMS:
        return f"1 <= i <= {p - 2}, 1 <= j <= {p - 1} - i"
    if s is Form.ONE_PRIME:
        return f"1 <= i <= {p - 3}, 1 <= j <= ({p - 1} - i)/2"
    return f"1 <= i <= {p - 3}, 1 <= j <= {p - 1} - 2i"


def _in_range(s: Form, i: int, j: int, level: Level) -> bool:
    p = level.p
    if s not in level.forms or i < 1 or j < 1:
        return False
    if s in PRINCIPAL_FORMS:
        return i <= p - 2 and j <= p - i - 1
    if s is Form.ONE_PRIME:
        return i <= p - 3 and 2 * j <= p - i - 1
    return i <= p - 3 and j <= p - 2 * i - 1


@dataclass(frozen=True)
class ModuleLabel:
    """The simple module L(xi, chi) of form ``s`` and indices (i, j)."""

    s: Form
    i: int
    j: int
    xi: Fraction
    chi: Fraction
    l: int  # noqa: E741

    @property
    def top_dim(self) -> int:
        return self.i

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.s.value, self.i, self.j)

    def __str__(self) -> str:
        return f"L^({self.s.value})_{{{self.i},{self.j}}} = L({self.xi}, {self.chi})"


def xi_chi(s: Form, i: int, j: int, level: Level) -> tuple[Fraction, Fraction, int]:
    """Exact (xi, chi, l) of the label (s, i, j) at ``level``."""
    require_supported(level)
    if not _in_range(s, i, j, level):
        if s not in level.forms:
            forms = ", ".join(form.value for form in level.forms)
            raise OutOfRangeError(
                f"form {s.value} does not occur at {level}; use one of {forms}"
            )
        raise OutOfRangeError(
            f"({s.value}, {i}, {j}) is out of range at {level}: "
            f"{describe_ranges(s, level)}"
        )
    xi, chi, l = closed_forms(s, i, j, level.k)  # noqa: E741
    if l.denominator != 1 or l < 1:
        raise AssertionError(f"top dimension of the psi^2 image is {l}")
    return xi, chi, int(l)


def make_label(s: Form | str, i: int, j: int, level: Level) -> ModuleLabel:
    form = s if isinstance(s, Form) else Form.parse(s)
    xi, chi, l = xi_chi(form, i, j, level)  # noqa: E741
    return ModuleLabel(form, i, j, xi, chi, l)


def enumerate_modules(level: Level) -> list[ModuleLabel]:
    """Every simple module at ``level``, form by form.

    Args:
        level: A principal or coprincipal admissible level

    Returns:
        Labels in form order, then by (i, j)

    Raises:
        UnsupportedLevelError: For any other kind of level
    """
    require_supported(level)
    return [
        make_label(s, i, j, level)
        for s in level.forms
        for i, j in index_ranges(s, level)
    ]


def label_count(level: Level) -> int:
    require_supported(level)
    p = level.p
    if level.kind is LevelKind.PRINCIPAL:
        return 3 * (p - 2) * (p - 1) // 2
    ones = sum((p - i - 1) // 2 for i in range(1, p - 2))
    twos = sum(max(0, p - 2 * i - 1) for i in range(1, p - 2))
    return ones + twos


# The twist and the component group


def psi_eigenvalues(
    xi: Fraction, chi: Fraction, top_dim: int | Fraction, k: Fraction
) -> tuple[Fraction, Fraction]:
    """Highest weight of psi(L(xi, chi)) when the top of L(xi, chi) has ``top_dim``."""
    shift = top_dim - 1
    return xi + shift - (2 + k), chi - xi - shift + (2 + k) / 2


def _psi_indices(s: Form, i: int, j: int, p: int) -> tuple[Form, int, int]:
    if s is Form.ONE:
        return Form.THREE, j, p - i - j
    if s is Form.THREE:
        return Form.TWO, j, p - i - j
    if s is Form.TWO:
        return Form.ONE, j, i
    if s is Form.ONE_PRIME:
        return Form.TWO_PRIME, j, p - i - 2 * j
    return Form.ONE_PRIME, j, i


def psi_label(label: ModuleLabel, level: Level) -> ModuleLabel:
    s, i, j = _psi_indices(label.s, label.i, label.j, level.p)
    if not _in_range(s, i, j, level):
        raise AssertionError(
            f"psi image ({s.value}, {i}, {j}) of {label} left the table"
        )
    return make_label(s, i, j, level)


def psi_squared_label(label: ModuleLabel, level: Level) -> ModuleLabel:
    """psi^2 read off the classification directly."""
    p, i, j = level.p, label.i, label.j
    images = {
        Form.ONE: (Form.TWO, p - i - j, i),
        Form.TWO: (Form.THREE, i, p - i - j),
        Form.THREE: (Form.ONE, p - i - j, j),
        Form.ONE_PRIME: (Form.ONE_PRIME, p - i - 2 * j, j),
        Form.TWO_PRIME: (Form.TWO_PRIME, i, p - 2 * i - j),
    }
    return make_label(*images[label.s], level)


def psi_power(label: ModuleLabel, level: Level, power: int) -> ModuleLabel:
    period = 6 if level.kind is LevelKind.PRINCIPAL else 4
    for _ in range(power % period):
        label = psi_label(label, level)
    return label


def phi_eigenvalues(
    xi: Fraction, chi: Fraction, top_dim: int
) -> tuple[Fraction, Fraction]:
    """Highest weight of phi(L(xi, chi)); the top is read from its other end."""
    return -(xi + top_dim - 1), chi


def phi_label(label: ModuleLabel, level: Level) -> ModuleLabel:
    p, i, j = level.p, label.i, label.j
    if label.s is Form.TWO:
        image = make_label(Form.THREE, i, p - i - j, level)
    elif label.s is Form.THREE:
        image = make_label(Form.TWO, i, p - i - j, level)
    elif label.s is Form.TWO_PRIME:
        image = make_label(Form.TWO_PRIME, i, p - 2 * i - j, level)
    else:
        image = label
    expected = phi_eigenvalues(label.xi, label.chi, label.top_dim)
    if (image.xi, image.chi) != expected:
        raise AssertionError(
            f"phi image {image} of {label} should have weights {expected}"
        )
    return image


def _orbits(labels: list[ModuleLabel], step) -> list[tuple[ModuleLabel, ...]]:
    seen: set[tuple[str, int, int]] = set()
    orbits = []
    for start in labels:
        if start.key in seen:
            continue
        orbit = [start]
        seen.add(start.key)
        current = step(start)
        while current.key != start.key:
            orbit.append(current)
            seen.add(current.key)
            current = step(current)
        orbits.append(tuple(orbit))
    return orbits


def psi_orbits(level: Level) -> list[tuple[ModuleLabel, ...]]:
    return _orbits(enumerate_modules(level), lambda lab: psi_label(lab, level))


def phi_orbits(level: Level) -> list[tuple[ModuleLabel, ...]]:
    return _orbits(enumerate_modules(level), lambda lab: phi_label(lab, level))


def vacuum_relation(level: Level) -> Fraction:
    """h_l at the psi^2 image of the vacuum; zero when the top of psi^2(V) is cut off.

    The psi^2 image of the vacuum is L(-2(2+k), 2(2+k)) at both kinds of level.
    """
    vacuum = make_label(level.forms[0], 1, 1, level)
    k = level.k
    return h_closed_form(vacuum.l, -2 * (2 + k), 2 * (2 + k), k)


# Highest weights


def _lam(i: int, j: int) -> Weight:
    return (j - 1) * OMEGA1 + (i - 1) * OMEGA2


def h_weight(lam: Weight, level: Level) -> Fraction:
    """(lam | lam + 2 rho) / 2(k + 3)."""
    return inner_product(lam, lam + 2 * RHO) / (2 * level.t)


def conformal_dimension_and_charge(
    lam: Weight, level: Level
) -> tuple[Fraction, Fraction]:
    """(chi, xi) of the reduction of L(lam - (p/q) x0)."""
    t = level.t
    mu = lam - t * X0
    chi = (
        inner_product(mu, mu + 2 * RHO) / (2 * t)
        - t / 2 * inner_product(X0, X0)
        + inner_product(X0, RHO)
    )
    xi = -inner_product(mu, ALPHA2)
    return chi, xi


def weight_candidates(label: ModuleLabel, level: Level) -> list[Weight]:
    """Candidate highest weights reproducing (xi, chi) of ``label`` modulo Z."""
    p, i, j = Fraction(level.p), label.i, label.j
    if label.s in (Form.ONE, Form.ONE_PRIME):
        return [_lam(i, j)]
    if label.s is Form.TWO:
        second = (-3 + 6 * i + 3 * j - 2 * p) / 3
        return [
            Weight((-6 - 6 * i - 3 * j + 4 * p + sign * (3 * j - 2 * p)) / 6, second)
            for sign in (1, -1)
        ]
    if label.s is Form.THREE:
        return [Weight(-i + p / 3 - 1, i + j - p / 3 - 1)]
    return [Weight(-i + p / 4 - 1, 2 * i + j - p / 2 - 1)]


def eqweight_congruences(lam: Weight, label: ModuleLabel, level: Level) -> bool:
    """True when xi = -(lam|alpha2) and chi = h_lam - (lam|x0) hold modulo Z."""
    xi_gap = label.xi + inner_product(lam, ALPHA2)
    chi_gap = label.chi - h_weight(lam, level) + inner_product(lam, X0)
    return xi_gap.denominator == 1 and chi_gap.denominator == 1


def is_admissible_at(lam: Weight, level: Level) -> bool:
    return is_admissible_weight(affine_weight(lam, level.k))


def select_weight(label: ModuleLabel, level: Level) -> Weight:
    """The unique admissible candidate weight of ``label``."""
    candidates = weight_candidates(label, level)
    kept = [lam for lam in candidates if is_admissible_at(lam, level)]
    if len(kept) != 1:
        listed = ", ".join(str(lam) for lam in candidates)
        raise WeightSelectionError(
            f"{len(kept)} admissible candidates for {label} among {listed}"
        )
    lam = kept[0]
    if not eqweight_congruences(lam, label, level):
        raise WeightSelectionError(f"{lam} does not reproduce the weights of {label}")
    return lam


def hw_weight(label: ModuleLabel, level: Level) -> Weight:
    """Highest weight lam with H_f(L(lam + k Lambda0)) realizing ``label``."""
    if label.s in (Form.ONE, Form.ONE_PRIME):
        return _lam(label.i, label.j)
    return select_weight(label, level)


def search_weights(label: ModuleLabel, level: Level, radius: int = 3) -> list[Weight]:
    """Admissible weights with coordinates in (1/q)Z, |coords| <= radius, that
    satisfy the congruences of ``label``."""
    q = level.q
    span = range(-radius * q, radius * q + 1)
    found = []
    for a in span:
        for b in span:
            lam = Weight(Fraction(a, q), Fraction(b, q))
            if eqweight_congruences(lam, label, level) and is_admissible_at(lam, level):
                found.append(lam)
    return found


# Tables


@dataclass(frozen=True)
class ModuleRow:
    label: ModuleLabel
    psi_image: ModuleLabel
    phi_image: ModuleLabel

    def to_json_dict(self) -> dict[str, object]:
        def ref(label: ModuleLabel) -> dict[str, object]:
            return {"s": label.s.value, "i": label.i, "j": label.j}

        return {
            **ref(self.label),
            "xi": format_rational(self.label.xi),
            "chi": format_rational(self.label.chi),
            "top_dim": self.label.top_dim,
            "psi_image": ref(self.psi_image),
            "phi_image": ref(self.phi_image),
        }


def module_table(level: Level) -> list[ModuleRow]:
    return [
        ModuleRow(label, psi_label(label, level), phi_label(label, level))
        for label in enumerate_modules(level)
    ]
