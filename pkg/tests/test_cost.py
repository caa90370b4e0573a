"""Energy, delay and area accounting."""

import numpy as np
import pytest

from mvap.blocked import compile_blocked
from mvap.cost import (ComparisonSummary, CostParams, CostReport, comparison_summary,
                       delay_cycles, energy_from_trace, normalized_area)
from mvap.diagram import break_cycles, build_diagram
from mvap.executor import CompareEvent, ExecutionTrace, WriteEvent, add_vectors, \
    make_adder_array, random_operands
from mvap.mvl import make_adder_spec
from mvap.nonblocked import compile_nonblocked

from test_diagram import identity_spec


def programs(n):
    d = break_cycles(build_diagram(make_adder_spec(n)))
    return compile_nonblocked(d), compile_blocked(d)


NB3, BL3 = programs(3)
NB2, _ = programs(2)


class TestDelay:
    def test_ternary_per_trit(self):
        assert delay_cycles(NB3, 1) == 42
        assert delay_cycles(BL3, 1) == 30
        assert delay_cycles(NB3, 1) / delay_cycles(BL3, 1) == pytest.approx(1.40)

    def test_binary_vs_ternary_blocked(self):
        assert delay_cycles(NB2, 32) == 256
        assert delay_cycles(BL3, 20) == 600
        ratio = delay_cycles(BL3, 20) / delay_cycles(NB2, 32)
        assert 2.3 <= ratio <= 2.4

    def test_empty_program(self):
        prog = compile_nonblocked(build_diagram(identity_spec(3, 2)))
        assert delay_cycles(prog, 8) == 0

    def test_blocked_faster_when_fewer_blocks(self):
        assert BL3.block_count < BL3.pass_count
        assert delay_cycles(BL3, 5) < delay_cycles(NB3, 5)

    def test_custom_cycle_costs(self):
        params = CostParams(cycles_compare=2, cycles_write=3)
        assert delay_cycles(NB3, 1, params) == 21 * 5
        assert delay_cycles(BL3, 1, params) == 21 * 2 + 9 * 3


class TestArea:
    @pytest.mark.parametrize("n,digits,expect", [
        (2, 32, 64), (3, 20, 60), (3, 5, 15),
        (2, 8, 16), (2, 16, 32), (2, 51, 102), (2, 64, 128), (2, 128, 256),
        (3, 10, 30), (3, 32, 96), (3, 40, 120), (3, 80, 240),
    ])
    def test_values(self, n, digits, expect):
        assert normalized_area(n, digits) == expect

    def test_custom_factor(self):
        assert normalized_area(3, 10, CostParams(cell_area_factor=2.0)) == 40

    def test_requires_positive_digits(self):
        with pytest.raises(ValueError):
            normalized_area(3, 0)


class TestEnergy:
    def synthetic_trace(self):
        trace = ExecutionTrace(rows=10)
        trace.compares.append(CompareEvent(0, "000", (4, 3, 2, 1)))
        trace.compares.append(CompareEvent(0, "111", (10, 0, 0, 0)))
        trace.writes.append(WriteEvent(0, "W01", sets=5, resets=4, rows_written=5))
        return trace

    def test_write_energy_from_pulse_counts(self):
        rep = energy_from_trace(self.synthetic_trace(),
                                CostParams(e_set=2.0, e_reset=0.5))
        assert rep.set_count == 5 and rep.reset_count == 4
        assert rep.write_energy == 5 * 2.0 + 4 * 0.5
        assert rep.compare_energy == 0.0
        assert rep.total_energy == rep.write_energy + rep.compare_energy

    def test_compare_energy_classes(self):
        params = CostParams(e_compare_by_class=(0.1, 0.2, 0.3, 0.4))
        rep = energy_from_trace(self.synthetic_trace(), params)
        expect = (4 * 0.1 + 3 * 0.2 + 2 * 0.3 + 1 * 0.4) + 10 * 0.1
        assert rep.compare_energy == pytest.approx(expect)

    def test_zero_operand_run(self):
        array = make_adder_array(3, np.zeros((4, 2), dtype=int), np.zeros((4, 2), dtype=int))
        rep = energy_from_trace(add_vectors(array, NB3, 2))
        assert rep.write_energy == 0.0

    def test_energy_monotone_in_digits_and_rows(self):
        rng = np.random.default_rng(12)
        totals_p = []
        for p in (2, 4, 8):
            a, b = random_operands(rng, 100, p, 3)
            rep = energy_from_trace(add_vectors(make_adder_array(3, a, b), NB3, p))
            totals_p.append(rep.total_energy)
        assert totals_p == sorted(totals_p)
        totals_r = []
        for rows in (50, 200, 800):
            a, b = random_operands(rng, rows, 4, 3)
            rep = energy_from_trace(add_vectors(make_adder_array(3, a, b), NB3, 4))
            totals_r.append(rep.total_energy)
        assert totals_r == sorted(totals_r)

    def test_delay_independent_of_rows(self):
        for rows in (1, 10, 1000):
            assert delay_cycles(BL3, 20) == 600  # closed form never sees rows
        rng = np.random.default_rng(13)
        counts = []
        for rows in (1, 16):
            a, b = random_operands(rng, rows, 2, 3)
            trace = add_vectors(make_adder_array(3, a, b), BL3, 2)
            counts.append((trace.compare_count, trace.write_count))
        assert counts[0] == counts[1]

    def test_params_validation(self):
        with pytest.raises(ValueError):
            CostParams(e_set=-1.0)
        with pytest.raises(ValueError):
            CostParams(cycles_write=0)

    def test_free_writes_leave_only_compare_energy(self):
        params = CostParams(e_set=0.0, e_reset=0.0,
                            e_compare_by_class=(0.001, 0.002, 0.003, 0.004))
        rep = energy_from_trace(self.synthetic_trace(), params)
        assert rep.write_energy == 0.0
        assert rep.total_energy == rep.compare_energy > 0.0

    def test_params_from_json(self):
        params = CostParams.from_json(
            '{"e_set": 0.5, "e_compare_by_class": [0.001, 0.002, 0.003, 0.004],'
            ' "cell_area_factor": 1.4}')
        assert params.e_set == 0.5
        assert params.e_compare_by_class == (0.001, 0.002, 0.003, 0.004)
        assert params.area_factor(3) == 1.4


class TestComparison:
    def report(self, sets, area):
        return CostReport(additions=100, set_count=sets, reset_count=sets,
                          write_energy=2.0 * sets, compare_energy=0.0,
                          normalized_area=area)

    def test_degenerate_self_comparison(self):
        reports = [self.report(600, 16.0), self.report(1200, 32.0)]
        s = comparison_summary(reports, reports)
        assert s == ComparisonSummary(2, 0.0, 0.0, 0.0)

    def test_reduction_math(self):
        s = comparison_summary([self.report(1000, 16.0)], [self.report(900, 15.0)])
        assert s.sets_reduction_pct == pytest.approx(10.0)
        assert s.energy_reduction_pct == pytest.approx(10.0)
        assert s.area_reduction_pct == pytest.approx(6.25)

    def test_mismatched_pairing_rejected(self):
        with pytest.raises(ValueError):
            comparison_summary([self.report(1, 1.0)], [])

    def test_area_required(self):
        bad = CostReport(additions=1, set_count=1, reset_count=1,
                         write_energy=2.0, compare_energy=0.0)
        with pytest.raises(ValueError):
            comparison_summary([bad], [bad])
