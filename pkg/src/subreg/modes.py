"""Mode algebra of W^k(sp4, f_subreg) and its action on highest-weight modules.

Operators are linear combinations of words, ordered products of modes that act
right to left. Module states are kept in PBW normal form: creation monomials
sorted J < L < G- < G+, with indices non-decreasing inside each block, applied
to the highest-weight vector v.
"""

import random
from collections.abc import Callable, Iterable, Iterator, Mapping
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import StrEnum
from fractions import Fraction
from functools import cache
from itertools import combinations, product, repeat

from .cartan import central_charge


class Generator(StrEnum):
    J = "J"
    L = "L"
    GMINUS = "G-"
    GPLUS = "G+"


_RANK = {Generator.J: 0, Generator.L: 1, Generator.GMINUS: 2, Generator.GPLUS: 3}
CONFORMAL_WEIGHTS = {
    Generator.J: 1,
    Generator.L: 2,
    Generator.GMINUS: 2,
    Generator.GPLUS: 2,
}
CHARGES = {Generator.J: 0, Generator.L: 0, Generator.GMINUS: -1, Generator.GPLUS: 1}


class DepthOverflowError(RuntimeError):
    """Raised when a state would leave the truncated module."""


@dataclass(frozen=True)
class Mode:
    generator: Generator
    index: int

    def sort_key(self) -> tuple[int, int]:
        return (_RANK[self.generator], self.index)

    @property
    def charge(self) -> int:
        return CHARGES[self.generator]

    def is_creation(self) -> bool:
        if self.generator is Generator.GPLUS:
            return self.index <= 0
        return self.index <= -1

    def is_diagonal(self) -> bool:
        return self.index == 0 and self.generator in (Generator.J, Generator.L)

    def __str__(self) -> str:
        return f"{self.generator.value}_{self.index}"


def J(n: int) -> Mode:
    return Mode(Generator.J, n)


def L(n: int) -> Mode:
    return Mode(Generator.L, n)


def GPLUS(n: int) -> Mode:
    return Mode(Generator.GPLUS, n)


def GMINUS(n: int) -> Mode:
    return Mode(Generator.GMINUS, n)


class CompositeTag(StrEnum):
    J2 = "J2"
    LJ = "LJ"
    J3 = "J3"
    JDJ = "JdJ"


@dataclass(frozen=True)
class CompositeMode:
    tag: CompositeTag
    index: int


Word = tuple[Mode, ...]


def _word_key(item: tuple[Word, Fraction | int]) -> list[tuple[int, int]]:
    return [mode.sort_key() for mode in item[0]]


@dataclass(frozen=True, eq=False)
class ModeExpression:
    """Finite linear combination of words with rational coefficients."""

    terms: Mapping[Word, Fraction] = field(default_factory=dict)

    @classmethod
    def from_terms(
        cls, terms: Iterable[tuple[Word, Fraction | int]]
    ) -> "ModeExpression":
        collected: dict[Word, Fraction] = {}
        for word, c in terms:
            collected[word] = collected.get(word, Fraction(0)) + c
        return cls({w: Fraction(c) for w, c in collected.items() if c != 0})

    @classmethod
    def scalar(cls, value: int | Fraction) -> "ModeExpression":
        return cls.from_terms([((), Fraction(value))])

    @classmethod
    def of(cls, *modes: Mode, coeff: int | Fraction = 1) -> "ModeExpression":
        return cls.from_terms([(tuple(modes), Fraction(coeff))])

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ModeExpression") -> "ModeExpression":
        return ModeExpression.from_terms([*self.terms.items(), *other.terms.items()])

    def __neg__(self) -> "ModeExpression":
        return ModeExpression({w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "ModeExpression") -> "ModeExpression":
        return self + (-other)

    def __mul__(self, other: "ModeExpression | int | Fraction") -> "ModeExpression":
        if not isinstance(other, ModeExpression):
            scaled = ((w, c * other) for w, c in self.terms.items())
            return ModeExpression.from_terms(scaled)
        return ModeExpression.from_terms(
            (w1 + w2, c1 * c2)
            for w1, c1 in self.terms.items()
            for w2, c2 in other.terms.items()
        )

    def __rmul__(self, other: int | Fraction) -> "ModeExpression":
        return self * other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ModeExpression):
            return NotImplemented
        return dict(self.terms) == dict(other.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for word, c in sorted(self.terms.items(), key=_word_key):
            body = " ".join(str(m) for m in word) or "1"
            parts.append(f"({c}) {body}")
        return " + ".join(parts)


ZERO = ModeExpression()


def bracket(x: ModeExpression, y: ModeExpression) -> ModeExpression:
    return x * y - y * x


# Composite modes


def expand_composite(c: CompositeMode, cutoff: int) -> ModeExpression:
    """Normal-ordered mode sum of a composite, keeping terms that can act on
    states of depth at most ``cutoff``.

    For fields a, b with a of conformal weight da,
    :ab:_n = sum_{j <= -da} a_j b_{n-j} + sum_{j > -da} b_{n-j} a_j.
    """
    return _expand(c.tag, c.index, cutoff)


@cache
def _expand(tag: CompositeTag, n: int, cutoff: int) -> ModeExpression:
    if n > cutoff or cutoff < 0:
        return ZERO
    terms: list[tuple[Word, Fraction | int]] = []
    if tag is CompositeTag.J2:
        terms.extend(((J(j), J(n - j)), 1) for j in range(n - cutoff, 0))
        terms.extend(((J(n - j), J(j)), 1) for j in range(0, cutoff + 1))
    elif tag is CompositeTag.LJ:
        terms.extend(((L(j), J(n - j)), 1) for j in range(n - cutoff, -1))
        terms.extend(((J(n - j), L(j)), 1) for j in range(-1, cutoff + 1))
    elif tag is CompositeTag.JDJ:
        # (dJ)_r = -(r + 1) J_r
        terms.extend(((J(j), J(n - j)), -(n - j + 1)) for j in range(n - cutoff, 0))
        terms.extend(((J(n - j), J(j)), -(n - j + 1)) for j in range(0, cutoff + 1))
    else:
        for j in range(n - cutoff, 0):
            inner = _expand(CompositeTag.J2, n - j, cutoff)
            terms.extend(((J(j), *w), c) for w, c in inner.terms.items())
        for j in range(0, cutoff + 1):
            inner = _expand(CompositeTag.J2, n - j, cutoff - j)
            terms.extend(((*w, J(j)), c) for w, c in inner.terms.items())
    return ModeExpression.from_terms(terms)


# Brackets

# A bracket term is the identity (None), a single mode or a composite mode.
Item = Mode | CompositeMode | None
BracketTerms = tuple[tuple[Item, Fraction], ...]


def _delta(a: int, b: int) -> int:
    return 1 if a == b else 0


def _gplus_gminus(m: int, n: int, k: Fraction) -> list[tuple[Item, Fraction]]:
    """[G+_m, G-_n]."""
    s = m + n
    kk = 2 + k
    j_coeff = Fraction(3) * (1 + k) * kk / 2 * (m + 1) * (n + 1) - (
        5 + 4 * k + k * k
    ) / 2 * (s + 1) * (s + 2)
    return [
        (None, -(1 + k) * kk * kk / 2 * (m**3 - m) * _delta(s, 0)),
        (L(s), kk * (3 + k) / 2 * (m - n)),
        (J(s), j_coeff),
        (CompositeMode(CompositeTag.J2, s), -(3 + 2 * k) * (m + 1)),
        (CompositeMode(CompositeTag.LJ, s), 3 + k),
        (CompositeMode(CompositeTag.J3, s), Fraction(-1)),
        (CompositeMode(CompositeTag.JDJ, s), -(3 + 2 * k)),
    ]


@cache
def bracket_terms(a: Mode, b: Mode, k: Fraction) -> BracketTerms:
    """[a, b] as a combination of the identity, modes and composite modes.

    Zero coefficients are dropped, so [G+_m, G+_n] is the empty tuple.
    """
    k = Fraction(k)
    if a.sort_key() > b.sort_key():
        return tuple((item, -c) for item, c in bracket_terms(b, a, k))
    ga, gb = a.generator, b.generator
    m, n = a.index, b.index
    G = Generator
    terms: list[tuple[Item, Fraction]]
    if ga is G.J and gb is G.J:
        terms = [(None, (2 + k) * m * _delta(m + n, 0))]
    elif ga is G.J and gb is G.L:
        terms = [(J(m + n), Fraction(m))]
    elif ga is G.J and gb is G.GPLUS:
        terms = [(GPLUS(m + n), Fraction(1))]
    elif ga is G.J and gb is G.GMINUS:
        terms = [(GMINUS(m + n), Fraction(-1))]
    elif ga is G.L and gb is G.L:
        central = central_charge(k) / 12 * (m**3 - m) * _delta(m + n, 0)
        terms = [(None, central), (L(m + n), Fraction(m - n))]
    elif ga is G.L:
        terms = [(Mode(gb, m + n), Fraction(m - n))]
    elif ga is G.GMINUS and gb is G.GPLUS:
        terms = [(item, -c) for item, c in _gplus_gminus(n, m, k)]
    else:
        # G+ with G+ or G- with G-
        terms = []
    return tuple((item, c) for item, c in terms if c)


def _expand_item(item: Item, cutoff: int) -> ModeExpression:
    if item is None:
        return ModeExpression.scalar(1)
    if isinstance(item, Mode):
        return ModeExpression.of(item)
    return _expand(item.tag, item.index, cutoff)


def commutator(a: Mode, b: Mode, k: Fraction, cutoff: int) -> ModeExpression:
    """[a, b] with composite modes expanded for states of depth <= ``cutoff``."""
    return _commutator(a, b, Fraction(k), cutoff)


@cache
def _commutator(a: Mode, b: Mode, k: Fraction, cutoff: int) -> ModeExpression:
    return ModeExpression.from_terms(
        (word, c * coeff)
        for item, c in bracket_terms(a, b, k)
        for word, coeff in _expand_item(item, cutoff).terms.items()
    )


# Closed forms


def g_eigenvalue(xi: Fraction, chi: Fraction, k: Fraction) -> Fraction:
    """Eigenvalue of G-_0 G+_0 on a highest-weight vector."""
    inner = 2 + 3 * k + k * k - 2 * xi * xi + 6 * chi + 2 * k * chi
    return -Fraction(1, 2) * xi * inner


def h_closed_form(
    i: int | Fraction, xi: Fraction, chi: Fraction, k: Fraction
) -> Fraction:
    """Closed form of h_i, a polynomial in i that also accepts rational i."""
    i, xi, chi, k = Fraction(i), Fraction(xi), Fraction(chi), Fraction(k)
    inner = (
        -2
        - i
        + i * i
        - 3 * k
        - k * k
        - 2 * xi
        + 2 * i * xi
        + 2 * xi * xi
        - 6 * chi
        - 2 * k * chi
    )
    return (2 * xi + i - 1) / 4 * inner


def h_poly(i: int, xi: Fraction, chi: Fraction, k: Fraction) -> Fraction:
    """h_i(xi, chi), the average of g(xi + m, chi) over m < i."""
    if i < 1:
        raise ValueError(f"h_i needs i >= 1, got {i}")
    xi, chi, k = Fraction(xi), Fraction(chi), Fraction(k)
    summed = sum((g_eigenvalue(xi + m, chi, k) for m in range(i)), Fraction(0)) / i
    closed = h_closed_form(i, xi, chi, k)
    if summed != closed:
        raise AssertionError(
            f"h_{i} sum form {summed} differs from closed form {closed}"
        )
    return closed


# The twist


def psi_mode(a: Mode, k: Fraction) -> ModeExpression:
    kk = 2 + Fraction(k)
    n = a.index
    if a.generator is Generator.J:
        return ModeExpression.of(a) - ModeExpression.scalar(kk * _delta(n, 0))
    if a.generator is Generator.L:
        return (
            ModeExpression.of(a)
            - ModeExpression.of(J(n))
            + ModeExpression.scalar(kk / 2 * _delta(n, 0))
        )
    if a.generator is Generator.GPLUS:
        return ModeExpression.of(GPLUS(n - 1))
    return ModeExpression.of(GMINUS(n + 1))


def psi_expression(expr: ModeExpression, k: Fraction) -> ModeExpression:
    result = ZERO
    for word, c in expr.terms.items():
        image = ModeExpression.scalar(c)
        for mode in word:
            image = image * psi_mode(mode, k)
        result = result + image
    return result


def phi_mode(a: Mode) -> ModeExpression:
    """The component-group involution: J -> -J, L -> L, G+ <-> G-."""
    if a.generator is Generator.J:
        return ModeExpression.of(a, coeff=-1)
    if a.generator is Generator.L:
        return ModeExpression.of(a)
    if a.generator is Generator.GPLUS:
        return ModeExpression.of(GMINUS(a.index))
    return ModeExpression.of(GPLUS(a.index))


def phi_expression(expr: ModeExpression) -> ModeExpression:
    result = ZERO
    for word, c in expr.terms.items():
        image = ModeExpression.scalar(c)
        for mode in word:
            image = image * phi_mode(mode)
        result = result + image
    return result


# Highest-weight modules

State = dict[Word, Fraction]
Coefficient = int | Fraction


def depth(monomial: Word) -> int:
    return -sum(mode.index for mode in monomial)


def charge(monomial: Word) -> int:
    return sum(mode.charge for mode in monomial)


@dataclass(frozen=True)
class TruncatedHWModule:
    """Verma-type module generated by v = |xi, chi> with states of depth <= depth."""

    xi: Fraction
    chi: Fraction
    k: Fraction
    depth: int

    def __post_init__(self) -> None:
        for name in ("xi", "chi", "k"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def vacuum(self) -> State:
        return {(): Fraction(1)}


def _accumulate(
    target: State, items: Iterable[tuple[Word, Fraction]], scale: Fraction
) -> None:
    for word, c in items:
        value = target.get(word, Fraction(0)) + scale * c
        if value:
            target[word] = value
        else:
            target.pop(word, None)


@cache
def _apply_mode(
    module: TruncatedHWModule, mode: Mode, monomial: Word
) -> tuple[tuple[Word, Fraction], ...]:
    if mode.is_diagonal():
        if mode.generator is Generator.J:
            eigenvalue = module.xi + charge(monomial)
        else:
            eigenvalue = module.chi + depth(monomial)
        return ((monomial, eigenvalue),) if eigenvalue else ()
    if mode.index > depth(monomial):
        return ()
    if mode.is_creation() and (
        not monomial or mode.sort_key() <= monomial[0].sort_key()
    ):
        created = (mode, *monomial)
        if depth(created) > module.depth:
            raise DepthOverflowError(
                f"{mode} pushes a state past depth {module.depth}"
            )
        return ((created, Fraction(1)),)
    if not monomial:
        return ()

    first, rest = monomial[0], monomial[1:]
    result: State = {}
    for word, c in _apply_mode(module, mode, rest):
        _accumulate(result, _apply_mode(module, first, word), c)
    for item, c in bracket_terms(mode, first, module.k):
        _accumulate(result, _apply_item(module, item, rest), c)
    return tuple(result.items())


@cache
def _apply_item(
    module: TruncatedHWModule, item: Item, monomial: Word
) -> tuple[tuple[Word, Fraction], ...]:
    if item is None:
        return ((monomial, Fraction(1)),)
    if isinstance(item, Mode):
        return _apply_mode(module, item, monomial)
    # words past depth(monomial) end in an annihilator that kills it
    expanded = _expand(item.tag, item.index, depth(monomial))
    result: State = {}
    for word, c in expanded.terms.items():
        _accumulate(result, _apply_word(module, word, monomial).items(), c)
    return tuple(result.items())


def _apply_word(module: TruncatedHWModule, word: Word, monomial: Word) -> State:
    state: State = {monomial: Fraction(1)}
    for mode in reversed(word):
        state = apply_mode(module, mode, state)
        if not state:
            break
    return state


def apply_mode(
    module: TruncatedHWModule, mode: Mode, state: Mapping[Word, Fraction]
) -> State:
    result: State = {}
    for monomial, c in state.items():
        _accumulate(result, _apply_mode(module, mode, monomial), c)
    return result


def act(
    expr: ModeExpression, state: Mapping[Word, Fraction], module: TruncatedHWModule
) -> State:
    """Apply ``expr`` to ``state`` and return the PBW normal form."""
    result: State = {}
    for word, c in expr.terms.items():
        for monomial, s in state.items():
            _accumulate(result, _apply_word(module, word, monomial).items(), c * s)
    return result


def clear_caches() -> None:
    """Drop the memoised brackets, expansions and mode actions."""
    _apply_mode.cache_clear()
    _apply_item.cache_clear()
    _commutator.cache_clear()
    _expand.cache_clear()
    bracket_terms.cache_clear()


def creation_modes(max_depth: int) -> list[Mode]:
    modes = [GPLUS(0)]
    for n in range(1, max_depth + 1):
        modes.extend((J(-n), L(-n), GMINUS(-n), GPLUS(-n)))
    return sorted(modes, key=Mode.sort_key)


def basis(module: TruncatedHWModule, max_top_power: int = 1) -> list[Word]:
    """PBW monomials of depth <= module.depth with bounded G+_0 powers."""
    modes = creation_modes(module.depth)
    found: list[Word] = []

    def extend(prefix: Word, start: int, remaining: int, top: int) -> None:
        found.append(prefix)
        for position in range(start, len(modes)):
            mode = modes[position]
            cost = -mode.index
            if cost > remaining:
                continue
            if mode == GPLUS(0):
                if top >= max_top_power:
                    continue
                extend((*prefix, mode), position, remaining, top + 1)
            else:
                extend((*prefix, mode), position, remaining - cost, top)

    extend((), 0, module.depth, 0)
    return found


# Consistency checks


@dataclass
class ModeCheckReport:
    """Result of a brute-force consistency check over the mode algebra."""

    name: str
    checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def _random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-12, 12), rng.randint(1, 7))


def random_module(depth: int, seed: int = 0) -> TruncatedHWModule:
    rng = random.Random(seed)
    k = _random_rational(rng)
    while k == -3 or k == -2:
        k = _random_rational(rng)
    return TruncatedHWModule(_random_rational(rng), _random_rational(rng), k, depth)


# 3 + k divides 15, so with integral xi and chi every structure constant is an
# integer.
INTEGRAL_LEVELS = (-18, -8, -6, -4, 0, 2, 12)


def random_integral_module(depth: int, seed: int = 0) -> TruncatedHWModule:
    rng = random.Random(seed)
    k = Fraction(rng.choice(INTEGRAL_LEVELS))
    xi, chi = Fraction(rng.randint(-6, 6)), Fraction(rng.randint(-6, 6))
    return TruncatedHWModule(xi, chi, k, depth)


def modes_up_to(
    bound: int, generators: Iterable[Generator] = tuple(Generator)
) -> list[Mode]:
    return [Mode(g, n) for g in generators for n in range(-bound, bound + 1)]


def _format_state(state: Mapping[Word, Coefficient]) -> str:
    items = sorted(state.items(), key=_word_key)
    return " + ".join(
        f"({c}) {' '.join(str(m) for m in word) or 'v'}" for word, c in items
    ) or "0"


def antisymmetry_check(bound: int, k: Fraction, cutoff: int = 4) -> ModeCheckReport:
    report = ModeCheckReport("antisymmetry")
    modes = modes_up_to(bound)
    for a, b in product(modes, repeat=2):
        report.checked += 1
        forward = commutator(a, b, k, cutoff)
        backward = commutator(b, a, k, cutoff)
        if not (forward + backward).is_zero():
            report.violations.append(f"[{a}, {b}] != -[{b}, {a}]")
    return report


# Module action with integer coefficients where exact

Vector = dict[Word, Coefficient]


def _exact(c: Fraction) -> Coefficient:
    return c.numerator if c.denominator == 1 else c


def _add_into(
    target: Vector, source: Mapping[Word, Coefficient], scale: Coefficient
) -> None:
    for word, c in source.items():
        value = target.get(word, 0) + scale * c
        if value:
            target[word] = value
        else:
            target.pop(word, None)


class ActionTable:
    """Memoised images of single PBW monomials under modes and brackets.

    Coefficients are kept as ints whenever they are integral, which they all are
    on an integral module (see ``random_integral_module``).
    """

    def __init__(self, module: TruncatedHWModule) -> None:
        self.module = module
        self._modes: dict[tuple[Mode, Word], Vector] = {}
        self._brackets: dict[tuple[Mode, Mode, Word], Vector] = {}

    def mode(self, mode: Mode, monomial: Word) -> Vector:
        key = (mode, monomial)
        column = self._modes.get(key)
        if column is None:
            applied = _apply_mode(self.module, mode, monomial)
            column = {word: _exact(c) for word, c in applied}
            self._modes[key] = column
        return column

    def bracket(self, a: Mode, b: Mode, monomial: Word) -> Vector:
        """[a, b] applied to ``monomial``."""
        key = (a, b, monomial)
        column = self._brackets.get(key)
        if column is None:
            column = {}
            for item, c in bracket_terms(a, b, self.module.k):
                applied = _apply_item(self.module, item, monomial)
                _add_into(column, {w: _exact(x) for w, x in applied}, _exact(c))
            self._brackets[key] = column
        return column

    def apply(self, mode: Mode, vector: Mapping[Word, Coefficient]) -> Vector:
        result: Vector = {}
        for monomial, c in vector.items():
            _add_into(result, self.mode(mode, monomial), c)
        return result

    def apply_bracket(
        self, a: Mode, b: Mode, vector: Mapping[Word, Coefficient]
    ) -> Vector:
        result: Vector = {}
        for monomial, c in vector.items():
            _add_into(result, self.bracket(a, b, monomial), c)
        return result

    def jacobiator(self, a: Mode, b: Mode, c: Mode, monomial: Word) -> Vector:
        """([a,[b,c]] - [b,[a,c]] - [[a,b],c]) applied to ``monomial``."""
        result: Vector = {}
        _add_into(result, self.apply(a, self.bracket(b, c, monomial)), 1)
        _add_into(result, self.apply_bracket(b, c, self.mode(a, monomial)), -1)
        _add_into(result, self.apply(b, self.bracket(a, c, monomial)), -1)
        _add_into(result, self.apply_bracket(a, c, self.mode(b, monomial)), 1)
        _add_into(result, self.apply_bracket(a, b, self.mode(c, monomial)), -1)
        _add_into(result, self.apply(c, self.bracket(a, b, monomial)), 1)
        return result


def _jacobi_chunk(
    module: TruncatedHWModule,
    triples: list[tuple[Mode, Mode, Mode]],
    states: list[Word],
) -> tuple[int, list[str]]:
    table = ActionTable(module)
    checked = 0
    violations: list[str] = []
    try:
        for a, b, c in triples:
            shift = a.index + b.index + c.index
            for monomial in states:
                # the image would sit at negative depth
                if depth(monomial) < shift:
                    continue
                checked += 1
                result = table.jacobiator(a, b, c, monomial)
                if result:
                    violations.append(
                        f"({a}, {b}, {c}) on {_format_state({monomial: 1})}: "
                        f"{_format_state(result)}"
                    )
    finally:
        clear_caches()
    return checked, violations


def _chunks(
    triples: list[tuple[Mode, Mode, Mode]], count: int
) -> list[list[tuple[Mode, Mode, Mode]]]:
    size = max(1, -(-len(triples) // count))
    return [triples[i : i + size] for i in range(0, len(triples), size)]


def jacobi_check(
    bound: int,
    max_depth: int,
    seed: int = 0,
    generators: Iterable[Generator] = tuple(Generator),
    module: TruncatedHWModule | None = None,
    max_top_power: int = 1,
    triples: Iterable[tuple[Mode, Mode, Mode]] | None = None,
    parallelism: int = 1,
) -> ModeCheckReport:
    """Check [a,[b,c]] - [b,[a,c]] - [[a,b],c] = 0 on every basis state.

    The left side is totally antisymmetric, so each unordered triple of distinct
    modes is checked once.

    Args:
        bound: Largest |index| of the modes in a triple
        max_depth: Depth of the basis states the identity is applied to
        seed: Seed for the random integral module, unless ``module`` is given
        generators: Generators the modes are drawn from
        module: Highest weight and level to check on (its depth is ignored)
        max_top_power: Largest power of G+_0 in a basis state
        triples: Triples to check instead of all triples of distinct modes
        parallelism: Worker processes; the triples are split between them

    Returns:
        Report counting (triple, state) pairs with a nonzero image
    """
    margin = 3 * bound + 4
    if module is None:
        module = random_integral_module(max_depth + margin, seed)
    else:
        module = replace(module, depth=max_depth + margin)
    states = basis(replace(module, depth=max_depth), max_top_power)
    if triples is None:
        triples = combinations(modes_up_to(bound, generators), 3)
    selected = list(triples)
    report = ModeCheckReport("jacobi")
    if parallelism > 1:
        chunks = _chunks(selected, parallelism * 4)
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            results = list(
                pool.map(_jacobi_chunk, repeat(module), chunks, repeat(states))
            )
    else:
        results = [_jacobi_chunk(module, selected, states)]
    for checked, violations in results:
        report.checked += checked
        report.violations.extend(violations)
    return report


def _automorphism_check(
    name: str,
    image: Callable[[Mode], ModeExpression],
    extend: Callable[[ModeExpression], ModeExpression],
    bound: int,
    max_depth: int,
    seed: int,
) -> ModeCheckReport:
    margin = 2 * bound + 4
    module = random_module(max_depth + margin, seed)
    states = basis(replace(module, depth=max_depth))
    cutoff = max_depth + bound + 1
    report = ModeCheckReport(name)
    for a, b in combinations(modes_up_to(bound), 2):
        left = bracket(image(a), image(b))
        right = extend(commutator(a, b, module.k, cutoff))
        difference = left - right
        for monomial in states:
            report.checked += 1
            result = act(difference, {monomial: Fraction(1)}, module)
            if result:
                report.violations.append(
                    f"{name}([{a}, {b}]) on {_format_state({monomial: Fraction(1)})}: "
                    f"{_format_state(result)}"
                )
    return report


def psi_bracket_check(bound: int, max_depth: int, seed: int = 0) -> ModeCheckReport:
    """Check [psi(a), psi(b)] = psi([a, b]) through the module action."""
    k = random_module(0, seed).k
    return _automorphism_check(
        "psi-brackets",
        lambda a: psi_mode(a, k),
        lambda e: psi_expression(e, k),
        bound,
        max_depth,
        seed,
    )


def phi_bracket_check(bound: int, max_depth: int, seed: int = 0) -> ModeCheckReport:
    """Check [phi(a), phi(b)] = phi([a, b]) through the module action."""
    return _automorphism_check(
        "phi-brackets", phi_mode, phi_expression, bound, max_depth, seed
    )


def top_relation_check(
    xi: Fraction, chi: Fraction, k: Fraction, max_power: int = 5
) -> ModeCheckReport:
    """Check G-_0 (G+_0)^i v = i h_i(xi, chi) (G+_0)^(i-1) v for i <= max_power."""
    module = TruncatedHWModule(xi, chi, k, 2)
    report = ModeCheckReport("top-relation")
    for i in range(1, max_power + 1):
        report.checked += 1
        state = {(GPLUS(0),) * i: Fraction(1)}
        result = act(ModeExpression.of(GMINUS(0)), state, module)
        expected_coeff = i * h_poly(i, module.xi, module.chi, module.k)
        expected = {(GPLUS(0),) * (i - 1): expected_coeff} if expected_coeff else {}
        if result != expected:
            report.violations.append(
                f"i={i}: got {_format_state(result)}, "
                f"expected {_format_state(expected)}"
            )
    return report


def g_oracle_check(samples: int = 20, seed: int = 0) -> ModeCheckReport:
    """Compare G-_0 G+_0 v with g(xi, chi) on random highest weights."""
    report = ModeCheckReport("g-oracle")
    for offset in range(samples):
        module = random_module(2, seed + offset)
        report.checked += 1
        result = act(ModeExpression.of(GMINUS(0), GPLUS(0)), module.vacuum(), module)
        expected = g_eigenvalue(module.xi, module.chi, module.k)
        if result != ({(): expected} if expected else {}):
            report.violations.append(
                f"xi={module.xi}, chi={module.chi}, k={module.k}: "
                f"{_format_state(result)} != {expected}"
            )
    return report


def iter_reports(
    bound: int, max_depth: int, seed: int = 0, parallelism: int = 1
) -> Iterator[ModeCheckReport]:
    """The mode-algebra verification suite; only the Jacobi check uses workers."""
    k = random_module(0, seed).k
    yield antisymmetry_check(bound + 1, k)
    yield g_oracle_check(seed=seed)
    module = random_module(0, seed)
    yield top_relation_check(module.xi, module.chi, module.k)
    yield jacobi_check(bound, max_depth, seed, parallelism=parallelism)
    yield psi_bracket_check(min(bound, 2), min(max_depth, 2), seed)
    yield phi_bracket_check(min(bound, 2), min(max_depth, 2), seed)
