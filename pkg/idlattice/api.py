import logging
from typing import List, Optional, Sequence, Tuple, Union

from idlattice.constructors.familyspec import parse_family
from idlattice.exceptions import NotFactorizable, PmfFileError, VerdictMismatch
from idlattice.idanalysis import idanalysis
from idlattice.idanalysis.verdict import CompoundPoissonForm, IdVerdict, VerdictKind
from idlattice.pmfcore.pmf import Pmf
from idlattice.pmfcore.pmffile import load_pmf, save_pmf
from idlattice.reports import summary
from idlattice.reports.summary import Report, ReportField
from idlattice.settings import Settings
from idlattice.supportanalysis.supportanalysis import check_gap_theorem, support_report
from idlattice.verification.theorems import run_suites


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_INCONCLUSIVE = 2
EXIT_VERIFY_FAILURE = 3


def load_input(pmf_file: Optional[str], family: Optional[str], settings: Settings) -> Tuple[Pmf, str]:
    """
    Reads the pmf a command works on, either from a pmf file or from a family specification such as poisson:2.
    Exactly one of the two must be given.

    :return: the pmf and a label naming its source
    """
    if (pmf_file is None) == (family is None):
        raise PmfFileError('Give either a pmf file or a family specification')
    if family is not None:
        return parse_family(family, settings.truncation), family
    return load_pmf(pmf_file, settings.tolerances), pmf_file


def _verdict_exit_code(verdict: IdVerdict) -> int:
    return EXIT_INCONCLUSIVE if verdict.kind == VerdictKind.Inconclusive else EXIT_OK


def _not_factorizable(e: NotFactorizable, label: str, settings: Settings) -> Tuple[Report, int]:
    # Exit code 2 when the verdict is inconclusive, 1 otherwise
    if e.verdict is None:
        raise e
    report = summary.summarize_verdict(e.verdict, {ReportField.Input: label}, settings.tolerances)
    report[ReportField.Detail.value] = str(e)
    code = _verdict_exit_code(e.verdict)
    return report, code if code != EXIT_OK else EXIT_INPUT_ERROR


def cmd_test_id(pmf_file: Optional[str], family: Optional[str], settings: Settings) -> Tuple[Report, int]:
    p, label = load_input(pmf_file, family, settings)
    verdict = idanalysis.test_id(p, settings.tolerances)
    logger.debug('Verdict for %s: %s', label, verdict)
    report = summary.summarize_verdict(verdict, {ReportField.Input: label}, settings.tolerances)
    return report, _verdict_exit_code(verdict)


def cmd_factorize(pmf_file: Optional[str], family: Optional[str], settings: Settings) -> Tuple[Report, int]:
    """
    Compound Poisson form of the input. Inputs without one report their verdict and exit with 2 when the verdict is
    inconclusive, 1 otherwise.
    """
    p, label = load_input(pmf_file, family, settings)
    try:
        form = idanalysis.factorize(p, settings.tolerances)
    except NotFactorizable as e:
        return _not_factorizable(e, label, settings)
    report = {ReportField.Input.value: label}
    report.update(summary.summarize_form(form, settings.tolerances))
    return report, EXIT_OK


def cmd_root(pmf_file: Optional[str], family: Optional[str], n: int, output_file: Optional[str],
             settings: Settings) -> Tuple[Report, int]:
    # The n-th convolution root, written as a pmf file when output_file is given
    p, label = load_input(pmf_file, family, settings)
    try:
        root = idanalysis.convolution_root(p, n, settings.tolerances)
    except NotFactorizable as e:
        return _not_factorizable(e, label, settings)
    report = {ReportField.Input.value: label}
    if output_file is not None:
        save_pmf(root, output_file)
        report[ReportField.OutputFile.value] = output_file
    report.update(summary.summarize_pmf(root))
    return report, EXIT_OK


def cmd_support(pmf_file: Optional[str], family: Optional[str], horizon: Optional[int], settings: Settings
                ) -> Tuple[Report, int]:
    """
    Support report of the input. For infinitely divisible inputs the gap criterion (no gaps if and only if
    P{X=1} > 0) is checked as well.
    """
    p, label = load_input(pmf_file, family, settings)
    tol = settings.tolerances
    report = {ReportField.Input.value: label}
    report.update(summary.summarize_support(support_report(p, horizon, tol)))
    verdict = idanalysis.test_id(p, tol)
    report[ReportField.Verdict.value] = verdict.kind.value
    try:
        gap_check = check_gap_theorem(p, verdict, horizon, tol)
    except VerdictMismatch:
        return report, EXIT_OK
    report.update(summary.summarize_gap_check(gap_check))
    return report, EXIT_OK


def cmd_compose(rate: float, jump_file: Optional[str], jump_family: Optional[str], output_file: Optional[str],
                settings: Settings) -> Tuple[Report, int]:
    # Compound Poisson law with the given rate and jump law, truncated at settings.truncation
    jump, label = load_input(jump_file, jump_family, settings)
    form = CompoundPoissonForm(rate, jump, settings.tolerances)
    p = idanalysis.compose(form, settings.truncation, settings.tolerances)
    report = {ReportField.Input.value: f'rate {rate}, jump {label}'}
    if output_file is not None:
        save_pmf(p, output_file)
        report[ReportField.OutputFile.value] = output_file
    report.update(summary.summarize_pmf(p))
    return report, EXIT_OK


def cmd_verify(suites: Sequence[str], settings: Settings, show_progress: bool = False
               ) -> Tuple[List[Report], int]:
    results = run_suites(suites, settings, show_progress)
    code = EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY_FAILURE
    return summary.summarize_suites(results), code


def render(report: Union[Report, List[Report]], as_json: bool) -> str:
    return summary.report_to_json(report) if as_json else summary.format_report(report)

