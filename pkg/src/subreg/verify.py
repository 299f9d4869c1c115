"""Verification suites behind ``subreg verify``."""

from collections.abc import Callable, Iterable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import (
    affine_weight,
    central_charge,
    central_charge_closed_form,
    is_admissible_weight,
    weyl_group,
)
from .characters import (
    CharacterCheck,
    character,
    lowest_layer_check,
    nonnegativity_check,
    pbw_bound_check,
    phi_compatibility_check,
    psi_compatibility_check,
    truncation_soundness_check,
    verify_twisted_identity,
)
from .classifier import (
    Form,
    Level,
    LevelKind,
    ModuleLabel,
    WeightSelectionError,
    admissible_levels,
    closed_forms,
    conformal_dimension_and_charge,
    enumerate_modules,
    hw_weight,
    label_count,
    phi_label,
    phi_orbits,
    psi_label,
    psi_orbits,
    psi_squared_label,
    search_weights,
    vacuum_relation,
)
from .logging import info, timed, warning
from .modes import h_closed_form, iter_reports
from .qzseries import (
    QZSeries,
    inv_one_minus_monomial,
    mul,
    product,
    substitute_z_qshift,
)

SUITES = ("cartan", "qzseries", "modes", "classifier", "characters")
IDENTITY_P_MAX = 13

# Generic levels for the rational-function identities; none is -3 or -2.
TEST_LEVELS = tuple(
    Fraction(text)
    for text in ("-5/2", "-7/3", "1/2", "2/3", "1", "3/4", "-1/5", "5/7", "7/2", "11/6")
)

# Partition numbers p(0..9), the coefficients of prod (1 - q^n)^-1.
PARTITIONS = (1, 1, 2, 3, 5, 7, 11, 15, 22, 30)


@dataclass
class CheckOutcome:
    name: str
    passed: bool
    checked: int = 1
    detail: str = ""


@dataclass
class SuiteReport:
    """Outcome of one verification suite."""

    suite: str
    outcomes: list[CheckOutcome] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)

    @property
    def failures(self) -> list[CheckOutcome]:
        return [outcome for outcome in self.outcomes if not outcome.passed]

    def add(self, name: str, passed: bool, checked: int = 1, detail: str = "") -> None:
        self.outcomes.append(CheckOutcome(name, passed, checked, detail))


@dataclass(frozen=True)
class VerifyOptions:
    level: Level | None = None
    order: int = 8
    bound: int = 3
    depth: int = 4
    seed: int = 0
    parallelism: int = 1


# cartan


def verify_cartan(options: VerifyOptions) -> SuiteReport:
    report = SuiteReport("cartan")
    mismatches = [
        k for k in TEST_LEVELS if central_charge(k) != central_charge_closed_form(k)
    ]
    report.add(
        "central-charge",
        not mismatches,
        len(TEST_LEVELS),
        f"differs at k={mismatches[0]}" if mismatches else "",
    )
    group = weyl_group()
    signs = sum(w.sign for w in group)
    report.add(
        "weyl-group",
        len(group) == 8 and signs == 0,
        len(group),
        f"{len(group)} elements, sign sum {signs}",
    )
    levels = [options.level] if options.level else _default_levels()
    for level in levels:
        rejected = [
            label
            for label in enumerate_modules(level)
            if label.s in (Form.ONE, Form.ONE_PRIME)
            and not is_admissible_weight(
                affine_weight(hw_weight(label, level), level.k)
            )
        ]
        report.add(
            f"admissible-weights {level}",
            not rejected,
            label_count(level),
            f"{rejected[0]} is not admissible" if rejected else "",
        )
    return report


def _default_levels() -> list[Level]:
    return [admissible_levels(3, 4, 4)[0], admissible_levels(4, 5, 5)[0]]


# qzseries


def verify_qzseries(options: VerifyOptions) -> SuiteReport:
    report = SuiteReport("qzseries")
    order = len(PARTITIONS) - 1
    euler = product(inv_one_minus_monomial(n, 0, order) for n in range(1, order + 1))
    found = tuple(int(euler.coefficient(n, 0)) for n in range(order + 1))
    report.add(
        "partition-numbers",
        found == PARTITIONS,
        order + 1,
        "" if found == PARTITIONS else f"got {found}",
    )
    one_minus = QZSeries.from_terms(0, 0, order, (0, 1), [((0, 0), 1), ((1, 1), -1)])
    inverse = inv_one_minus_monomial(1, 1, order)
    identity = mul(one_minus, inverse)
    expected = QZSeries.from_terms(0, 0, order, identity.z_window, [((0, 0), 1)])
    report.add("geometric-inverse", identity == expected)
    round_trip = euler.reflect_z().reflect_z()
    report.add("reflect-involution", round_trip == euler)
    shifted = substitute_z_qshift(inverse, 1)
    report.add(
        "z-shift",
        shifted.coefficient(2, 1) == 1 and shifted.coefficient(1, 1) == 0,
        detail="q z -> q^2 z",
    )
    return report


# modes


def verify_modes(options: VerifyOptions) -> SuiteReport:
    report = SuiteReport("modes")
    mode_reports = iter_reports(
        options.bound, options.depth, options.seed, options.parallelism
    )
    for mode_report in mode_reports:
        info(f"  {mode_report.name}: {mode_report.checked} cases")
        detail = mode_report.violations[0] if mode_report.violations else ""
        report.add(
            mode_report.name,
            mode_report.passed,
            mode_report.checked,
            f"{len(mode_report.violations)} violations; first: {detail}"
            if detail
            else "0 violations",
        )
    return report


# classifier


def _identity_failures(level: Level, k: Fraction) -> list[str]:
    """h_i, h_j after psi and h_l after psi^2 vanish on every label of ``level``."""
    failures = []
    for label in enumerate_modules(level):
        i, j = label.i, label.j
        xi, chi, l = closed_forms(label.s, i, j, k)  # noqa: E741
        psi_xi = xi + i - 1 - (2 + k)
        psi_chi = chi - xi - (i - 1) + (2 + k) / 2
        psi2_xi = xi + (i - 1) + (j - 1) - 2 * (2 + k)
        psi2_chi = chi - 2 * xi - 2 * (i - 1) - (j - 1) + 2 * (2 + k)
        values = (
            h_closed_form(i, xi, chi, k),
            h_closed_form(j, psi_xi, psi_chi, k),
            h_closed_form(l, psi2_xi, psi2_chi, k),
        )
        if any(values):
            failures.append(f"{label.key} at k={k}: {values}")
    return failures


def _identity_check(report: SuiteReport, level: Level) -> None:
    q = level.q
    checked = 0
    failures: list[str] = []
    for candidate in admissible_levels(q, IDENTITY_P_MAX):
        for k in (candidate.k, *TEST_LEVELS):
            checked += label_count(candidate)
            failures.extend(_identity_failures(candidate, k))
    report.add(
        f"top-identities q={q}",
        not failures,
        checked,
        failures[0] if failures else f"p <= {IDENTITY_P_MAX}",
    )


def _classifier_checks(report: SuiteReport, level: Level) -> None:
    labels = enumerate_modules(level)
    distinct = {(label.xi, label.chi) for label in labels}
    report.add(
        f"module-count {level}",
        len(labels) == label_count(level) == len(distinct),
        len(labels),
        f"{len(labels)} labels",
    )
    period = 6 if level.kind is LevelKind.PRINCIPAL else 4
    orbits = psi_orbits(level)
    report.add(
        f"psi-orbits {level}",
        all(period % len(orbit) == 0 for orbit in orbits),
        len(labels),
        f"{len(orbits)} orbits of sizes {sorted(len(orbit) for orbit in orbits)}",
    )
    squared = [
        label
        for label in labels
        if psi_label(psi_label(label, level), level) != psi_squared_label(label, level)
    ]
    report.add(
        f"psi-squared {level}",
        not squared,
        len(labels),
        f"mismatch at {squared[0]}" if squared else "",
    )
    phi_bad = [
        label for label in labels if phi_label(phi_label(label, level), level) != label
    ]
    report.add(
        f"phi-involution {level}",
        not phi_bad,
        len(labels),
        f"{len(phi_orbits(level))} orbits" if not phi_bad else f"fails at {phi_bad[0]}",
    )
    relation = vacuum_relation(level)
    report.add(f"vacuum-relation {level}", relation == 0, detail=f"h_l = {relation}")
    _identity_check(report, level)

    weights_bad = []
    for label in labels:
        try:
            lam = hw_weight(label, level)
        except WeightSelectionError as exc:
            weights_bad.append(str(exc))
            continue
        if label.s in (Form.ONE, Form.ONE_PRIME):
            if conformal_dimension_and_charge(lam, level) != (label.chi, label.xi):
                weights_bad.append(f"{label}: weights of {lam} differ")
        else:
            extra = [w for w in search_weights(label, level) if w != lam]
            if extra:
                warning(
                    f"{label}: further admissible weights solve the congruences: "
                    + ", ".join(str(w) for w in extra)
                )
    report.add(
        f"highest-weights {level}",
        not weights_bad,
        len(labels),
        weights_bad[0] if weights_bad else "",
    )


def verify_classifier(options: VerifyOptions) -> SuiteReport:
    levels = [options.level] if options.level else _default_levels()
    report = SuiteReport("classifier")
    for level in levels:
        _classifier_checks(report, level)
    return report


# characters


def _label_checks(label: ModuleLabel, level: Level, order: int) -> list[CharacterCheck]:
    """Every per-label character check; runs in a worker process."""
    ch = character(label, level, order)
    checks = [
        nonnegativity_check(ch, label),
        lowest_layer_check(ch, label),
        psi_compatibility_check(label, level, order),
        phi_compatibility_check(label, level, order),
        truncation_soundness_check(label, level, order),
    ]
    if label.s not in (Form.ONE, Form.ONE_PRIME):
        twisted = verify_twisted_identity(label, level, order)
        checks.append(
            CharacterCheck(
                "twisted-identity", str(label), twisted.passed, twisted.detail
            )
        )
    return checks


def _run_label_checks(
    labels: list[ModuleLabel], level: Level, order: int, parallelism: int
) -> Iterator[list[CharacterCheck]]:
    if parallelism <= 1:
        for label in labels:
            yield _label_checks(label, level, order)
        return
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        futures = [pool.submit(_label_checks, label, level, order) for label in labels]
        for future in futures:
            yield future.result()


def verify_characters(options: VerifyOptions) -> SuiteReport:
    levels = [options.level] if options.level else _default_levels()
    report = SuiteReport("characters")
    for level in levels:
        pbw = pbw_bound_check(level, options.order)
        report.add(f"{pbw.name} {level}", pbw.passed, detail=pbw.detail)
        labels = enumerate_modules(level)
        grouped: dict[str, list[CharacterCheck]] = {}
        results = _run_label_checks(labels, level, options.order, options.parallelism)
        for label, checks in zip(labels, results):
            info(f"  {label}: {sum(c.passed for c in checks)}/{len(checks)} checks")
            for check in checks:
                grouped.setdefault(check.name, []).append(check)
        for name, checks in grouped.items():
            failed = [check for check in checks if not check.passed]
            detail = (
                f"{failed[0].subject}: {failed[0].detail}" if failed else "all agree"
            )
            report.add(f"{name} {level}", not failed, len(checks), detail)
    return report


RUNNERS: dict[str, Callable[[VerifyOptions], SuiteReport]] = {
    "cartan": verify_cartan,
    "qzseries": verify_qzseries,
    "modes": verify_modes,
    "classifier": verify_classifier,
    "characters": verify_characters,
}


def run_suites(names: Iterable[str], options: VerifyOptions) -> list[SuiteReport]:
    """Run the named verification suites in the given order.

    Args:
        names: Suite names, each a key of ``RUNNERS``
        options: Level, orders and bounds shared by every suite

    Returns:
        One report per suite, in the order of ``names``
    """
    reports = []
    for name in names:
        with timed(f"suite {name}"):
            reports.append(RUNNERS[name](options))
    return reports


def format_suite_report(report: SuiteReport, verbose: bool = False) -> str:
    """One PASS/FAIL line per check and a summary line for the suite."""
    lines = []
    for outcome in report.outcomes:
        status = "PASS" if outcome.passed else "FAIL"
        line = f"{status}  {report.suite}/{outcome.name} ({outcome.checked} checked)"
        if outcome.detail and (verbose or not outcome.passed):
            line += f": {outcome.detail}"
        lines.append(line)
    passed = len(report.outcomes) - len(report.failures)
    verdict = "PASS" if report.passed else "FAIL"
    lines.append(f"{verdict}  {report.suite}: {passed}/{len(report.outcomes)} checks")
    return "\n".join(lines)
