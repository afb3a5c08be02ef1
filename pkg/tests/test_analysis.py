"""
Tests for the theorem checks, the bound report and the full suite.

The three reference hypergraphs have hand-computed spectra:
    G1: spec(A) = {-1, 1}, spec(K) = {0, 2}
    G2: spec(A) = {0, 0},  spec(K) = {2, 2}
    G3: spec(A) = {-2, 1, 1}, spec(K) = {0, 0, 3}
"""
import logging
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import analysis  # noqa: E402
import config  # noqa: E402
from analysis import (  # noqa: E402
    BOUND_VERDICTS, FAIL, PASS, SKIPPED, CheckReport, SuiteResult, bound_report,
    check_bounds, check_constant_phase_set, check_dual_spectra, check_edge_deletion_interlacing,
    check_independence_bounds, check_kernels, check_nonnegativity, check_operator_identities,
    check_quadratic_forms, check_rayleigh_extremality, check_regular_equivalence,
    check_regular_uniform_dual_L, check_structure, check_switching, check_trace_identities,
    check_vertex_deletion_interlacing, merge_reports, run_full_suite,
)
from hypergraph import PhaseValue, SwitchingFunction, build  # noqa: E402
from utils import BadParameter, BadVertexIndex, LengthMismatch, NoConvergence, TooLarge  # noqa: E402

ALL_CHECKS = [
    'bounds', 'constant_phase_set', 'dual_spectra', 'edge_deletion_interlacing',
    'independence_bounds', 'kernels', 'nonnegativity', 'operator_identities',
    'quadratic_forms', 'rayleigh_extremality', 'regular_equivalence', 'regular_uniform_dual_L',
    'structure', 'switching', 'trace_identities', 'vertex_deletion_interlacing',
]

SINGLE_GRAPH_CHECKS = [
    check_trace_identities, check_dual_spectra, check_kernels, check_nonnegativity,
    check_structure, check_operator_identities, check_quadratic_forms, check_rayleigh_extremality,
    check_regular_equivalence, check_regular_uniform_dual_L, check_bounds, check_independence_bounds,
]


def measured(report, label):
    return dict(report.measured)[label]


def two_plus_one():
    """Edges {v0, v1} and {v2}: regular, not uniform, disconnected"""
    return build(3, [[(0, 1.0, 0.0), (1, 1.0, 0.0)], [(2, 1.0, 0.0)]])


@pytest.mark.unit
class TestReferenceHypergraphs:
    @pytest.mark.parametrize('check', SINGLE_GRAPH_CHECKS, ids=lambda c: c.__name__)
    def test_every_check_passes_on_g3(self, check, g3):
        report = check(g3)
        assert report.verdict == PASS, f"{report.check_name}: {report.reason}"

    @pytest.mark.parametrize('check', SINGLE_GRAPH_CHECKS, ids=lambda c: c.__name__)
    def test_g1_and_g2_pass(self, check, g1, g2):
        for G in (g1, g2):
            assert check(G).verdict == PASS

    def test_suite_on_g3(self, g3):
        result = run_full_suite(g3)
        assert [r.check_name for r in result.reports] == ALL_CHECKS
        assert (result.passed, result.failed, result.skipped) == (16, 0, 0)
        assert result.summary_line() == 'checks: 16 passed, 0 failed, 0 skipped'
        assert result.ok

    def test_suite_on_empty_hypergraph(self, empty):
        result = run_full_suite(empty)
        assert result.by_name('structure').verdict == PASS
        assert result.by_name('operator_identities').verdict == PASS
        assert (result.passed, result.failed, result.skipped) == (2, 0, 14)

    def test_trace_measurements_on_g2(self, g2):
        report = check_trace_identities(g2)
        assert measured(report, 'sum_lambda_K') == pytest.approx(4.0)
        assert measured(report, 'sum_lambda_Kstar.expected') == 4.0
        assert measured(report, 'sum_lambda_L') == pytest.approx(2.0)

    def test_isolated_vertex_skips_l_parts_only(self):
        report = check_trace_identities(build(1, []))
        assert report.verdict == PASS
        assert report.skipped_parts == ('L: zero-degree vertex',)

    def test_nullities_on_g3(self, g3):
        report = check_dual_spectra(g3)
        assert measured(report, 'nullity_K_minus_Kstar') == 2
        assert measured(report, 'nullity_L_minus_Lstar') == 2
        assert measured(check_kernels(g3), 'rank_B') == 1

    def test_nullity_on_g1(self, g1):
        report = check_dual_spectra(g1)
        assert measured(report, 'nullity_K_minus_Kstar') == 1


@pytest.mark.unit
class TestSkippedHypotheses:
    def test_regular_equivalence_needs_regular(self):
        report = check_regular_equivalence(build(3, [[(0, 1.0, 0.0), (1, 1.0, 0.0)]]))
        assert report.verdict == SKIPPED
        assert report.reason == 'not regular'

    def test_dual_l_needs_uniform(self):
        report = check_regular_uniform_dual_L(two_plus_one())
        assert report.verdict == SKIPPED
        assert report.reason == 'not uniform'

    def test_regular_equivalence_on_two_plus_one(self):
        assert check_regular_equivalence(two_plus_one()).verdict == PASS

    def test_non_constant_phase_set(self, g2):
        report = check_constant_phase_set(g2, [1])
        assert report.verdict == SKIPPED
        assert report.reason.startswith('hypothesis fails')

    def test_empty_phase_set(self, g3):
        assert check_constant_phase_set(g3, []).verdict == SKIPPED

    def test_empty_hypergraph(self, empty):
        for check in (check_trace_identities, check_dual_spectra, check_kernels, check_bounds):
            report = check(empty)
            assert report.verdict == SKIPPED
            assert report.reason == 'no vertices'

    def test_only_empty_edges(self):
        report = bound_report(build(2, [[]]))
        assert set(report.verdicts.values()) == {SKIPPED}
        assert report.notes == ('every edge is empty',)


@pytest.mark.unit
class TestDeletionInterlacing:
    @pytest.mark.parametrize('S', [[2], [0, 1], []])
    def test_vertex_deletion_g3(self, S, g3):
        assert check_vertex_deletion_interlacing(g3, S).verdict == PASS

    def test_vertex_deletion_g2(self, g2):
        assert check_vertex_deletion_interlacing(g2, [0]).verdict == PASS

    def test_deleting_everything_is_skipped(self, g3):
        report = check_vertex_deletion_interlacing(g3, [0, 1, 2])
        assert report.verdict == SKIPPED
        assert report.reason == 'deletion leaves no vertices'

    def test_bad_vertex(self, g3):
        with pytest.raises(BadVertexIndex):
            check_vertex_deletion_interlacing(g3, [5])

    @pytest.mark.parametrize('F', [[1], [0], [0, 1]])
    def test_edge_deletion_g2(self, F, g2):
        report = check_edge_deletion_interlacing(g2, F)
        assert report.verdict == PASS
        assert any('stated range' in note for note in report.notes)

    def test_edge_deletion_without_lower_chain(self, g1):
        report = check_edge_deletion_interlacing(g1, [0])
        assert report.verdict == PASS
        assert report.skipped_parts == ()
        report = check_edge_deletion_interlacing(build(1, [[(0, 1.0, 0.0)]]), [0])
        assert report.skipped_parts == ('lower: no index j with j > r',)


@pytest.mark.unit
class TestSwitching:
    def test_vertex_switch_g1(self, g1):
        zeta = SwitchingFunction('vertex', (PhaseValue.one(), PhaseValue(0.0, 1.0)))
        report = check_switching(g1, zeta)
        assert report.verdict == PASS
        assert measured(report, 'vertex_kind') == 1.0

    def test_edge_switch_g3(self, g3):
        xi = SwitchingFunction('edge', (PhaseValue.from_angle(1.0),))
        assert check_switching(g3, xi).verdict == PASS

    def test_identity_switch(self, g2):
        ones = SwitchingFunction('edge', (PhaseValue.one(), PhaseValue.one()))
        assert check_switching(g2, ones).verdict == PASS

    def test_length_mismatch(self, g3):
        with pytest.raises(LengthMismatch):
            check_switching(g3, SwitchingFunction('vertex', (PhaseValue.one(),)))


@pytest.mark.unit
class TestBoundReport:
    def test_g3_is_sharp(self, g3):
        report = bound_report(g3)
        assert (report.delta, report.nabla) == (1, 3)
        assert report.rho_A == pytest.approx(2.0)
        assert report.bound_rho_A == 2
        assert report.rho_A_sharp
        assert report.lambda_max_K == pytest.approx(3.0)
        assert report.equality_K and report.equality_L
        assert report.alpha == 1
        assert report.alpha_witness == (0,)
        assert set(report.verdicts) == set(BOUND_VERDICTS)
        assert set(report.verdicts.values()) == {PASS}

    def test_g2(self, g2):
        report = bound_report(g2)
        assert report.rho_A == pytest.approx(0.0, abs=1e-12)
        assert report.lambda_max_K == pytest.approx(2.0)
        assert report.lambda_max_K_underlying == pytest.approx(4.0)
        assert report.bound_K == 4
        assert report.lambda_max_L == pytest.approx(1.0)
        assert report.lambda_max_L_underlying == pytest.approx(2.0)
        assert set(report.verdicts.values()) == {PASS}

    def test_g1(self, g1):
        report = bound_report(g1)
        assert report.rho_A == pytest.approx(1.0)
        assert report.rho_A_sharp
        assert report.lambda_max_K == pytest.approx(2.0)
        assert report.gershgorin_A == pytest.approx(1.0)

    def test_disconnected_equality_is_noted(self):
        report = bound_report(two_plus_one())
        assert not report.is_connected
        assert not report.strict_converse
        assert report.equality_K and report.equality_L
        assert report.verdicts['K_equality'] == PASS
        assert report.verdicts['L_equality'] == PASS
        assert len(report.notes) == 2

    def test_converse_failure_under_strict_hypothesis(self):
        notes = []
        assert analysis._equality_verdict(True, False, True, 'K', 'regular and uniform', notes) == FAIL
        assert analysis._equality_verdict(False, True, True, 'K', 'regular and uniform', notes) == FAIL
        assert analysis._equality_verdict(False, False, True, 'K', 'regular and uniform', notes) == PASS
        assert notes == []

    def test_isolated_vertex_skips_l_bounds(self):
        report = bound_report(build(3, [[(0, 1.0, 0.0), (1, 0.0, 1.0)]]))
        assert report.verdicts['L_upper'] == SKIPPED
        assert report.lambda_max_L is None
        assert report.verdicts['K_upper'] == PASS

    def test_without_alpha(self, g3):
        assert bound_report(g3, with_alpha=False).alpha is None


@pytest.mark.unit
class TestIndependenceAndConstantPhase:
    def test_constant_phase_on_g3(self, g3):
        report = check_constant_phase_set(g3, [0, 1, 2])
        assert report.verdict == PASS
        assert measured(report, 'sum_sq_intersections') == 9

    def test_constant_phase_on_g1(self, g1):
        assert check_constant_phase_set(g1, [0, 1]).verdict == PASS

    def test_independence_on_edgeless(self):
        report = check_independence_bounds(build(3, []))
        assert report.verdict == PASS
        assert measured(report, 'alpha') == 3
        assert report.skipped_parts == ('switched.L: zero-degree vertex', 'L: zero-degree vertex')

    def test_too_large_raises(self):
        with pytest.raises(TooLarge):
            check_independence_bounds(build(config.MAX_BRUTE_FORCE_VERTICES + 1, []))

    def test_too_large_is_skipped_in_suite(self, g3, monkeypatch):
        monkeypatch.setattr(config, 'MAX_BRUTE_FORCE_VERTICES', 2)
        result = run_full_suite(g3)
        report = result.by_name('independence_bounds')
        assert report.verdict == SKIPPED
        assert report.reason.startswith('too large')
        assert result.by_name('bounds').verdict == PASS
        assert (result.passed, result.failed, result.skipped) == (15, 0, 1)


@pytest.mark.unit
class TestFailurePaths:
    def test_wrong_spectrum_fails_trace_check(self, g3, monkeypatch):
        real = analysis._values
        monkeypatch.setattr(analysis, '_values', lambda G, kind: real(G, kind) + 1.0)
        report = check_trace_identities(g3)
        assert report.verdict == FAIL
        assert report.reason.startswith('violated: sum_lambda_A')
        assert report.failed

    def test_errors_become_failing_reports(self, g3, monkeypatch):
        def broken(G):
            raise NoConvergence(60, 1.0)

        monkeypatch.setattr(analysis, 'check_kernels', broken)
        result = run_full_suite(g3)
        report = result.by_name('kernels')
        assert report.verdict == FAIL
        assert 'NoConvergence' in report.reason
        assert result.failed == 1
        assert not result.ok


@pytest.mark.unit
class TestSuiteMechanics:
    def test_deterministic(self, g2):
        assert run_full_suite(g2, seed=9).reports == run_full_suite(g2, seed=9).reports

    def test_workers_do_not_change_results(self, g3):
        assert run_full_suite(g3, seed=5, workers=4).reports == run_full_suite(g3, seed=5, workers=1).reports

    def test_negative_seed(self, g3):
        with pytest.raises(BadParameter):
            run_full_suite(g3, seed=-1)

    def test_by_name_unknown(self, g3):
        with pytest.raises(KeyError):
            run_full_suite(g3).by_name('nope')

    def test_each_check_is_timed(self, g1, caplog):
        caplog.set_level(logging.DEBUG, logger='utils')
        result = run_full_suite(g1, seed=2)
        timed = [r.getMessage() for r in caplog.records if r.name == 'utils' and r.getMessage().startswith('check ')]
        assert len(timed) == len(result.reports), "Every check should log its duration"
        assert any(m.startswith('check kernels: ') and 'ms' in m for m in timed)

    def test_merge(self):
        def report(verdict, reason=None):
            return CheckReport('x', 'n1m1:abc:0', (('value', 1.0),), 1e-8, verdict, reason)

        merged = merge_reports('x', [report(PASS), report(FAIL, 'violated: value')])
        assert merged.verdict == FAIL
        assert merged.reason == 'sample1 violated: value'
        assert merged.measured == (('sample0.value', 1.0), ('sample1.value', 1.0))
        assert merge_reports('x', [report(SKIPPED, 'a'), report(SKIPPED, 'a')]).reason == 'a'
        assert merge_reports('x', [report(SKIPPED, 'a'), report(PASS)]).verdict == PASS

    def test_merge_nothing(self):
        with pytest.raises(BadParameter):
            merge_reports('x', [])

    def test_summary_counts(self):
        reports = tuple(CheckReport(name, 'd', (), 0.0, verdict)
                        for name, verdict in [('a', PASS), ('b', FAIL), ('c', SKIPPED)])
        result = SuiteResult('d', 0, reports)
        assert result.summary_line() == 'checks: 1 passed, 1 failed, 1 skipped'
        assert not result.ok


@pytest.mark.fuzz
class TestCorpusSuite:
    def test_no_check_fails(self, corpus):
        for i, G in enumerate(corpus):
            result = run_full_suite(G)
            failing = [(r.check_name, r.reason) for r in result.reports if r.failed]
            assert not failing, f"instance {i} ({result.inputs_digest}): {failing}"
