"""
The commands behind the command line. Each reads a scenario file and returns a Report;
input problems propagate as KernelError or OSError and are mapped to exit codes by
main.py.

Functions:
    cmd_check(path, strict=False): Every check that applies to the sections present.
    cmd_lie(path, form): Lie derivative, pairing and flatness of a form.
    cmd_residue(path): Residue and order tables for the [residue] section.
    cmd_trdeg(path, elems): Transcendence degree of a list of elements.
    cmd_prolong(path, elems, order): Iterated derivatives and their transcendence degree.
"""

import logging
from pathlib import Path

from ..algebra.rational_functions import format_ratfunc
from ..analysis.ax_harness import AxScenario, HypothesisReport, verify_claims
from ..analysis.places_residues import (
    dlog_residue_check,
    order_balance_check,
    ord_place,
    places_of,
)
from ..differential.d_variety import (
    AffineDVariety,
    cotangent_class,
    cotangent_dimension,
    cotangent_flow_apply,
    generic_sharp_point_check,
    induced_derivation,
    is_sharp_point,
    point,
    validate_section,
)
from ..differential.diff_field import DiffFieldPresentation, prolong
from ..differential.kaehler_forms import format_form, lie_D1, pair_partial, parse_form, trdeg
from ..errors import (
    IdentityFailedError,
    KernelAssertionError,
    KernelError,
    PreconditionError,
    UnsupportedPlaceError,
    ZeroElementError,
)
from ..processors.scenario_builder import (
    ResidueInput,
    build_ax,
    build_field,
    build_residue,
    build_variety,
)
from ..processors.scenario_parser import ScenarioDoc, read_scenario, split_items
from ..settings import (
    STATUS_ERROR,
    STATUS_FAIL,
    STATUS_INFO,
    STATUS_PASS,
    STATUS_SKIP,
)
from .report import CheckEntry, Report

logger = logging.getLogger(__name__)

REF_FIELD = "derivation table"
REF_SECTION = "section of the shifted tangent bundle"
REF_GENERIC = "coordinate functions form a sharp point"
REF_SHARP = "sharp point"
REF_FLOW = "cotangent operator sends df to d(d'f)"
REF_HYPOTHESES = "da = db/b, b nonzero, a independent mod constants"
REF_BOUND = "Ax-Schanuel bound"
REF_PAIRING = "forms vanish on the derivation"
REF_FLAT = "logarithmic forms are flat"
REF_ONTO = "derivation nonzero on some a_i"
REF_CHAIN = "trdeg <= n forces a relation"
REF_RANK = "forms dependent over F"
REF_DEPENDENCY = "flat forms dependent over constants"
REF_MONOMIAL = "monomial in the b_i is constant"
REF_A_RELATION = "a_i dependent modulo constants"
REF_IDENTITY = "sum c_i db_i/b_i = d(nu)"
REF_BALANCE = "residues of both sides agree"
REF_DLOG = "res(de/e) = ord(e), res(de) = 0"


def _load(path: str | Path) -> tuple[ScenarioDoc, Report]:
    doc = read_scenario(path)
    return doc, Report(Path(path).stem)


def _flow_commutes(X: AffineDVariety, alpha, f) -> bool:
    left = cotangent_flow_apply(X, alpha, cotangent_class(X, alpha, f))
    return left == cotangent_class(X, alpha, induced_derivation(X, f))


def check_dvariety(doc: ScenarioDoc, F: DiffFieldPresentation) -> list[CheckEntry]:
    """Section validity, the generic sharp point and, given a sharp point, its checks."""
    try:
        X = build_variety(doc, F)
    except KernelError as e:
        return [
            CheckEntry("section", REF_SECTION, STATUS_FAIL, str(e)),
            CheckEntry("generic_sharp_point", REF_GENERIC, STATUS_SKIP, "no valid D-variety"),
        ]
    entries = [CheckEntry("section", REF_SECTION, STATUS_PASS, validate_section(X).describe())]
    generic = generic_sharp_point_check(X)
    entries.append(
        CheckEntry(
            "generic_sharp_point",
            REF_GENERIC,
            STATUS_PASS if generic else STATUS_FAIL,
            f"coordinate functions are {'' if generic else 'not '}sharp over K(X)",
        )
    )
    if doc.dvariety.sharp is None:
        return entries + [
            CheckEntry("sharp_point", REF_SHARP, STATUS_SKIP, "no sharp point given"),
            CheckEntry("cotangent_flow", REF_FLOW, STATUS_SKIP, "no sharp point given"),
        ]
    try:
        alpha = point(X, list(doc.dvariety.sharp))
        sharp = is_sharp_point(X, alpha)
    except KernelError as e:
        return entries + [
            CheckEntry("sharp_point", REF_SHARP, STATUS_ERROR, str(e)),
            CheckEntry("cotangent_flow", REF_FLOW, STATUS_SKIP, "no sharp point"),
        ]
    entries.append(
        CheckEntry("sharp_point", REF_SHARP, STATUS_PASS if sharp else STATUS_FAIL, str(alpha))
    )
    if not sharp:
        entries.append(CheckEntry("cotangent_flow", REF_FLOW, STATUS_SKIP, "not a sharp point"))
        return entries
    samples = list(X.coordinates) + [f"{x}^2" for x in X.coordinates]
    try:
        commutes = all(_flow_commutes(X, alpha, f) for f in samples)
    except KernelError as e:
        entries.append(CheckEntry("cotangent_flow", REF_FLOW, STATUS_ERROR, str(e)))
        return entries
    witness = f"dim T* = {cotangent_dimension(X, alpha)}, {len(samples)} sample functions"
    entries.append(
        CheckEntry("cotangent_flow", REF_FLOW, STATUS_PASS if commutes else STATUS_FAIL, witness)
    )
    return entries


def _hypothesis_witness(h: HypothesisReport) -> str:
    if h.all_hold:
        return "hold"
    parts = []
    zero = [str(i) for i, ok in enumerate(h.b_nonzero, 1) if not ok]
    if zero:
        parts.append(f"b_i = 0 for i = {', '.join(zero)}")
    bad = [
        str(i)
        for i, (ok, nonzero) in enumerate(zip(h.logderiv_ok, h.b_nonzero), 1)
        if nonzero and not ok
    ]
    if bad:
        parts.append(f"da_i != db_i/b_i for i = {', '.join(bad)}")
    if h.q_relations:
        parts.append(f"a_i dependent modulo constants: {h.q_relations[0]}")
    return "; ".join(parts)


def check_ax(sc: AxScenario, strict: bool = False) -> list[CheckEntry]:
    """
    Runs the Ax pipeline. Outcomes explained by a failing hypothesis are INFO rows;
    with strict the failing hypothesis itself is a FAIL.
    """
    logger.info("Running the Ax pipeline with n = %d", sc.n)
    try:
        verdict = verify_claims(sc)
    except KernelAssertionError as e:
        return [CheckEntry("ax_pipeline", REF_BOUND, STATUS_ERROR, str(e))]
    h = verdict.hypotheses
    excused = not h.all_hold

    def status(ok: bool) -> str:
        if ok:
            return STATUS_PASS
        return STATUS_INFO if excused else STATUS_FAIL

    hypotheses_status = STATUS_PASS if h.all_hold else (STATUS_FAIL if strict else STATUS_INFO)
    relation = ">=" if verdict.satisfied else "<"
    entries = [
        CheckEntry("hypotheses", REF_HYPOTHESES, hypotheses_status, _hypothesis_witness(h)),
        CheckEntry(
            "trdeg_bound",
            REF_BOUND,
            status(verdict.satisfied),
            f"trdeg {verdict.trdeg_value} {relation} {verdict.bound}",
        ),
    ]
    if all(h.b_nonzero):
        entries.append(
            CheckEntry(
                "forms_pairing",
                REF_PAIRING,
                status(verdict.pairing_zero),
                "all forms pair to 0" if verdict.pairing_zero else "a form pairs to nonzero",
            )
        )
        entries.append(
            CheckEntry(
                "forms_flat",
                REF_FLAT,
                status(verdict.forms_flat),
                "all forms are flat" if verdict.forms_flat else "a form is not flat",
            )
        )
    else:
        entries.append(CheckEntry("forms_pairing", REF_PAIRING, STATUS_SKIP, "some b_i is zero"))
        entries.append(CheckEntry("forms_flat", REF_FLAT, STATUS_SKIP, "some b_i is zero"))
    onto = verdict.onto_witness
    entries.append(
        CheckEntry(
            "nonconstant_a",
            REF_ONTO,
            status(onto is not None),
            f"a{onto + 1}" if onto is not None else "every a_i is constant",
        )
    )
    if verdict.satisfied:
        entries.append(CheckEntry("contradiction_chain", REF_CHAIN, STATUS_SKIP, "bound holds"))
        return entries
    if verdict.forms_rank is None:
        entries.append(CheckEntry("contradiction_chain", REF_CHAIN, STATUS_SKIP, "some b_i is zero"))
        return entries
    entries.append(
        CheckEntry("forms_rank", REF_RANK, STATUS_INFO, f"rank {verdict.forms_rank} of {verdict.n}")
    )
    if verdict.dependency is None:
        entries.append(CheckEntry("dependency", REF_DEPENDENCY, STATUS_SKIP, "none found"))
        return entries
    entries.append(
        CheckEntry(
            "dependency",
            REF_DEPENDENCY,
            STATUS_INFO,
            f"c = {verdict.dependency}, nu = {format_ratfunc(verdict.nu)}",
        )
    )
    for name, reference, value in (
        ("monomial_relation", REF_MONOMIAL, verdict.monomial_relation),
        ("a_relation", REF_A_RELATION, verdict.a_relation),
    ):
        if value is None:
            entries.append(CheckEntry(name, reference, STATUS_SKIP, "none found"))
        else:
            entries.append(CheckEntry(name, reference, STATUS_INFO, f"d = {value}"))
    return entries


def check_residue(residue: ResidueInput) -> list[CheckEntry]:
    """The identity, the order balance per place and the log-residue rule per b_i."""
    variable = residue.variable
    entries = []
    try:
        balances = order_balance_check(residue.bs, residue.c, residue.nu, variable=variable)
    except IdentityFailedError as e:
        entries.append(CheckEntry("residue_identity", REF_IDENTITY, STATUS_FAIL, str(e)))
        balances = []
    except ZeroElementError as e:
        return [CheckEntry("residue_identity", REF_IDENTITY, STATUS_ERROR, str(e))]
    except UnsupportedPlaceError as e:
        entries.append(CheckEntry("residue_identity", REF_IDENTITY, STATUS_PASS, "holds"))
        entries.append(CheckEntry("balance", REF_BALANCE, STATUS_ERROR, f"unsupported place: {e}"))
        balances = []
    else:
        entries.append(CheckEntry("residue_identity", REF_IDENTITY, STATUS_PASS, "holds"))
    for balance in balances:
        entries.append(
            CheckEntry(
                f"balance[{balance.place.label(variable)}]",
                REF_BALANCE,
                STATUS_PASS if balance.ok else STATUS_FAIL,
                f"orders {balance.orders}, total {balance.total}",
            )
        )
    for i, b in enumerate(residue.bs, 1):
        try:
            places = places_of(b)
        except UnsupportedPlaceError as e:
            entries.append(
                CheckEntry(f"dlog_residue[b{i}]", REF_DLOG, STATUS_ERROR, f"unsupported place: {e}")
            )
            continue
        for p in places:
            order = ord_place(b, p)
            ok = dlog_residue_check(b, p)
            entries.append(
                CheckEntry(
                    f"dlog_residue[b{i},{p.label(variable)}]",
                    REF_DLOG,
                    STATUS_PASS if ok else STATUS_FAIL,
                    f"res = ord = {order}" if ok else f"res differs from ord = {order}",
                )
            )
    return entries


def cmd_check(path: str | Path, strict: bool = False) -> Report:
    """
    Runs every check that applies to the sections of the scenario.

    Args:
        path (str | Path): The scenario file.
        strict (bool): Report failing hypotheses as failures instead of narrating them.

    Returns:
        Report: The report; its exit_code is 0 iff nothing failed.

    Raises:
        OSError: If the file cannot be read.
        KernelError: If the scenario is invalid.
    """
    doc, report = _load(path)
    F = build_field(doc)
    report.info("field", REF_FIELD, F.describe())
    if doc.dvariety is not None:
        report.extend(check_dvariety(doc, F))
    ax = build_ax(doc, F)
    if ax is not None:
        report.extend(check_ax(ax, strict))
    residue = build_residue(doc)
    if residue is not None:
        report.extend(check_residue(residue))
    logger.info("Scenario %s: %s", report.scenario, report.verdict)
    return report


def cmd_lie(path: str | Path, form: str) -> Report:
    doc, report = _load(path)
    F = build_field(doc)
    omega = parse_form(F, form)
    lie = lie_D1(F, omega)
    pairing = pair_partial(F, omega)
    report.info("form", "element of the module of differentials", format_form(omega))
    report.info("lie_derivative", "D1 on differentials", format_form(lie))
    report.info("pairing", "pairing with the derivation", format_ratfunc(pairing))
    report.add(
        "flatness",
        "D1(omega) = 0",
        STATUS_PASS if not lie else STATUS_INFO,
        "FLAT" if not lie else "NOT FLAT",
    )
    return report


def cmd_residue(path: str | Path) -> Report:
    """
    Raises:
        PreconditionError: If the scenario has no [residue] section.
    """
    doc, report = _load(path)
    residue = build_residue(doc)
    if residue is None:
        raise PreconditionError("the scenario has no [residue] section")
    report.extend(check_residue(residue))
    return report


def _elements(F: DiffFieldPresentation, text: str) -> list:
    return [F.element(item.text) for item in split_items(text, 1, 1)]


def cmd_trdeg(path: str | Path, elems: str) -> Report:
    doc, report = _load(path)
    F = build_field(doc)
    values = _elements(F, elems)
    report.info("elements", "elements of F", ", ".join(format_ratfunc(v) for v in values))
    report.info("trdeg", "rank of the differentials", str(trdeg(F, values)))
    return report


def cmd_prolong(path: str | Path, elems: str, order: int) -> Report:
    doc, report = _load(path)
    F = build_field(doc)
    values = _elements(F, elems)
    rows = prolong(F, values, order)
    width = len(values)
    for position, value in enumerate(rows):
        k, i = divmod(position, width)
        report.info(f"d^{k} e{i + 1}", "iterated derivative", format_ratfunc(value))
    report.info("trdeg", "rank of the differentials", str(trdeg(F, rows)))
    return report
