import json
import math
from enum import Enum
from typing import Any, Dict, List, Optional, Union

from idlattice.idanalysis.verdict import (
    CompoundPoissonForm, Degenerate, IdShifted, IdVerdict, Inconclusive, NotId,
)
from idlattice.pmfcore.pmf import Pmf
from idlattice.pmfcore.tolerances import Tolerances, DEFAULT_TOLERANCES
from idlattice.supportanalysis.supportanalysis import GapCheckResult, SupportReport
from idlattice.verification.theorems import SuiteResult


Report = Dict[str, Any]

# Jump laws are listed up to this many atoms in reports
MAX_LISTED_ATOMS = 20


class ReportField(Enum):
    # Programmatic labels for data that is used in reports
    Input = 'input'
    Verdict = 'verdict'
    Shift = 'shift'
    Rate = 'rate[lambda]'
    JumpAtoms = 'jump_atoms'
    JumpMasses = 'jump_masses'
    JumpTailBound = 'jump_tail_bound'
    WitnessIndex = 'witness_index'
    WitnessValue = 'witness_value[l_m]'
    At = 'at'
    Reason = 'reason'
    Detail = 'detail'
    Truncation = 'truncation'
    Probs = 'probs'
    TailBound = 'tail_bound'
    OutputFile = 'output_file'
    Atoms = 'atoms'
    MinPoint = 'min_point'
    Gaps = 'gaps'
    LatticeGcd = 'lattice_gcd'
    GapFree = 'gap_free'
    Horizon = 'horizon'
    FaintAtoms = 'faint_atoms'
    GapTheorem = 'gap_theorem'
    P1Positive = 'p1_positive'
    HasGaps = 'has_gaps'
    GapTheoremHorizon = 'gap_theorem_horizon'
    Suite = 'suite'
    Passed = 'passed'
    Checked = 'checked'
    Failures = 'failures'


def summarize_form(form: CompoundPoissonForm, tol: Tolerances = DEFAULT_TOLERANCES) -> Report:
    atoms = form.jump_atoms(tol)[:MAX_LISTED_ATOMS]
    return {
        ReportField.Rate.value: form.rate,
        ReportField.JumpAtoms.value: atoms,
        ReportField.JumpMasses.value: [float(form.jump.probs[a]) for a in atoms],
        ReportField.JumpTailBound.value: form.jump.tail_bound,
    }


def summarize_verdict(verdict: IdVerdict, meta_data: Optional[Dict[ReportField, Any]] = None,
                      tol: Tolerances = DEFAULT_TOLERANCES) -> Report:
    summary = {m.value: v for m, v in (meta_data or {}).items()}
    summary[ReportField.Verdict.value] = verdict.kind.value
    summary[ReportField.Rate.value] = math.nan
    form = verdict.canonical_form()
    if form is not None:
        summary.update(summarize_form(form, tol))
    if isinstance(verdict, IdShifted):
        summary[ReportField.Shift.value] = verdict.shift
    elif isinstance(verdict, NotId):
        summary[ReportField.WitnessIndex.value] = verdict.witness_index
        summary[ReportField.WitnessValue.value] = verdict.witness_value
        summary[ReportField.Shift.value] = verdict.shift
    elif isinstance(verdict, Degenerate):
        summary[ReportField.At.value] = verdict.at
    elif isinstance(verdict, Inconclusive):
        summary[ReportField.Reason.value] = verdict.reason.value
        summary[ReportField.Detail.value] = verdict.detail
    return summary


def summarize_pmf(p: Pmf) -> Report:
    return {
        ReportField.Truncation.value: p.truncation,
        ReportField.Probs.value: [float(v) for v in p.probs],
        ReportField.TailBound.value: p.tail_bound,
    }


def summarize_support(report: SupportReport) -> Report:
    return {
        ReportField.Atoms.value: report.atoms,
        ReportField.MinPoint.value: report.min_point,
        ReportField.Gaps.value: [list(g) for g in report.gaps],
        ReportField.LatticeGcd.value: report.lattice_gcd,
        ReportField.GapFree.value: report.gap_free,
        ReportField.Horizon.value: report.horizon,
        ReportField.FaintAtoms.value: report.faint_atoms,
    }


def summarize_gap_check(result: GapCheckResult) -> Report:
    return {
        ReportField.GapTheorem.value: result.status.value,
        ReportField.P1Positive.value: result.p1_positive,
        ReportField.HasGaps.value: result.has_gaps,
        ReportField.GapTheoremHorizon.value: result.horizon,
        ReportField.Detail.value: result.detail,
    }


def summarize_suites(results: List[SuiteResult]) -> List[Report]:
    return [
        {
            ReportField.Suite.value: r.name,
            ReportField.Passed.value: r.passed,
            ReportField.Checked.value: r.checked,
            ReportField.Failures.value: r.failures,
        }
        for r in results
    ]


def report_to_json(report: Union[Report, List[Report]]) -> str:
    # Replace 'NaN' with 'null' to comply with the JSON specification. Report values never contain the text NaN
    return json.dumps(report, indent=2).replace('NaN', 'null')


def dump_report_to_json(report: Union[Report, List[Report]], json_file: str):
    with open(json_file, 'w') as writer:
        writer.write(report_to_json(report))


def format_report(report: Union[Report, List[Report]]) -> str:
    """ Fixed-width text: one field per line, label padded to 20 characters """
    if isinstance(report, list):
        return '\n\n'.join(format_report(r) for r in report)

    def _formatter(_v):
        if isinstance(_v, float):
            return f'{_v:.12g}'
        if isinstance(_v, list) and len(_v) > MAX_LISTED_ATOMS:
            return str(_v[:MAX_LISTED_ATOMS])[:-1] + ', ...]'
        return str(_v)

    return '\n'.join(f'{k:<20.20}{_formatter(v)}' for k, v in report.items())
