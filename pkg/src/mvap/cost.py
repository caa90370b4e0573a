"""Energy, delay and area accounting over execution traces.

Write energy is pulse counting: every memristor set or reset costs a fixed
energy (1 nJ each by default).  Compare energy is classed by the per-row
mismatching-cell count (fm, 1mm, 2mm, 3mm); the per-class constants default
to zero because they are device measurements the simulator cannot derive --
supply calibrated values through a parameter file when you have them.  They
sit three orders of magnitude below write energy, so totals are dominated by
pulse counts either way.

Delay is closed-form in clock cycles: each compare costs one cycle (precharge
overlaps the preceding write) and each scheduled write costs one, charged
whether or not any row matches.  Delay never depends on the row count; that
is the point of the architecture.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .executor import ExecutionTrace
from .program import LutProgram

MISMATCH_CLASSES = ("fm", "1mm", "2mm", "3mm")


@dataclass(frozen=True)
class CostParams:
    e_set: float = 1.0    # nJ per memristor set pulse
    e_reset: float = 1.0  # nJ per memristor reset pulse
    # nJ per row per compare, indexed by mismatch class; uncalibrated default
    e_compare_by_class: tuple[float, ...] = (0.0, 0.0, 0.0, 0.0)
    cycles_compare: int = 1
    cycles_write: int = 1
    # area of one nTnR cell in 2T2R units; None selects the default n / 2
    cell_area_factor: float | None = None
    # optional external adders: name -> {"energy_nj": E/add, "delay_cycles": D/add}
    baselines: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.e_set < 0 or self.e_reset < 0 or any(e < 0 for e in self.e_compare_by_class):
            raise ValueError("energies must be non-negative")
        if self.cycles_compare < 1 or self.cycles_write < 1:
            raise ValueError("cycle costs must be >= 1")

    def area_factor(self, radix: int) -> float:
        if self.cell_area_factor is not None:
            return self.cell_area_factor
        return radix / 2

    @classmethod
    def from_json(cls, text: str) -> "CostParams":
        doc = json.loads(text)
        kwargs = {}
        for name in ("e_set", "e_reset", "cycles_compare", "cycles_write",
                     "cell_area_factor", "baselines"):
            if name in doc:
                kwargs[name] = doc[name]
        if "e_compare_by_class" in doc:
            kwargs["e_compare_by_class"] = tuple(doc["e_compare_by_class"])
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path) -> "CostParams":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json(fh.read())


@dataclass
class CostReport:
    additions: int
    set_count: int
    reset_count: int
    write_energy: float     # nJ, whole run
    compare_energy: float   # nJ, whole run
    delay_cycles: int | None = None
    normalized_area: float | None = None

    @property
    def total_energy(self) -> float:
        return self.write_energy + self.compare_energy

    @property
    def avg_sets(self) -> float:
        return self.set_count / self.additions if self.additions else 0.0

    @property
    def avg_resets(self) -> float:
        return self.reset_count / self.additions if self.additions else 0.0

    @property
    def avg_write_energy(self) -> float:
        return self.write_energy / self.additions if self.additions else 0.0

    @property
    def avg_compare_energy(self) -> float:
        return self.compare_energy / self.additions if self.additions else 0.0

    @property
    def avg_total_energy(self) -> float:
        return self.total_energy / self.additions if self.additions else 0.0

    def to_record(self) -> dict:
        return {
            "additions": self.additions,
            "set_count": self.set_count,
            "reset_count": self.reset_count,
            "avg_sets": self.avg_sets,
            "avg_resets": self.avg_resets,
            "write_energy_nj": self.write_energy,
            "compare_energy_nj": self.compare_energy,
            "total_energy_nj": self.total_energy,
            "delay_cycles": self.delay_cycles,
            "normalized_area": self.normalized_area,
        }


def energy_from_trace(trace: ExecutionTrace, params: CostParams | None = None,
                      delay_cycles: int | None = None,
                      normalized_area: float | None = None) -> CostReport:
    """Convert pulse counts and compare censuses into an energy report.

    The report's "additions" is the row count: every row is one parallel
    addition, so per-addition averages divide by it.
    """
    params = params or CostParams()
    sets = trace.set_total
    resets = trace.reset_total
    write_energy = sets * params.e_set + resets * params.e_reset
    compare_energy = 0.0
    for event in trace.compares:
        for cls, count in enumerate(event.census):
            if count and cls < len(params.e_compare_by_class):
                compare_energy += count * params.e_compare_by_class[cls]
    return CostReport(additions=trace.rows, set_count=sets, reset_count=resets,
                      write_energy=write_energy, compare_energy=compare_energy,
                      delay_cycles=delay_cycles, normalized_area=normalized_area)


def delay_cycles(program: LutProgram, digits: int,
                 params: CostParams | None = None) -> int:
    """Clock cycles for a digits-wide operation, independent of row count.

    Non-blocked programs pay compare + write per pass; blocked programs pay
    compare per pass but write only once per block.
    """
    params = params or CostParams()
    if digits < 0:
        raise ValueError("digit count must be >= 0")
    per_digit = (program.pass_count * params.cycles_compare
                 + program.block_count * params.cycles_write)
    return digits * per_digit


def normalized_area(radix: int, digits: int,
                    params: CostParams | None = None) -> float:
    """Operand-cell area in 2T2R units: factor x 2 operand columns x digits.

    The shared carry column is excluded from the normalized figure.
    """
    params = params or CostParams()
    if digits < 1:
        raise ValueError("digit count must be >= 1")
    return params.area_factor(radix) * 2 * digits


@dataclass(frozen=True)
class ComparisonSummary:
    """Averaged percentage reductions of the second report set vs the first."""

    pairs: int
    sets_reduction_pct: float
    energy_reduction_pct: float
    area_reduction_pct: float


def comparison_summary(reports_a: list, reports_b: list) -> ComparisonSummary:
    """Mean pairwise reductions of b relative to a (positive = b smaller).

    Reports must be paired index-by-index over the same size sweep and carry
    normalized_area.
    """
    if len(reports_a) != len(reports_b) or not reports_a:
        raise ValueError("report lists must be non-empty and paired")
    sets_red, energy_red, area_red = [], [], []
    for ra, rb in zip(reports_a, reports_b):
        if ra.normalized_area is None or rb.normalized_area is None:
            raise ValueError("reports need normalized_area for the summary")
        sets_red.append(1.0 - rb.avg_sets / ra.avg_sets)
        energy_red.append(1.0 - rb.avg_total_energy / ra.avg_total_energy)
        area_red.append(1.0 - rb.normalized_area / ra.normalized_area)
    k = len(reports_a)
    return ComparisonSummary(
        pairs=k,
        sets_reduction_pct=100.0 * sum(sets_red) / k,
        energy_reduction_pct=100.0 * sum(energy_red) / k,
        area_reduction_pct=100.0 * sum(area_red) / k,
    )
