"""Simulation and estimation toolkit for one-way IEEE 1588 synchronization
with dual slave clocks.

With one-way Sync messages the clock skew is identifiable but the path delay
and the clock offset are not: only ``psi = (1 + eps) * D + theta`` is. The
dual-clock estimator therefore returns a zero offset on physically generated
data and absorbs the true offset into its delay estimate.
"""

from ._core import BACKEND
from .clocks import (
    SLAVE1_RATE_MULTIPLIER,
    DerivedClockParams,
    DualSlaveClock,
    MasterClock,
    common_offset_residual,
    effective_phases,
    normalized_skew,
    read_master,
    read_slaves,
    simultaneous_start,
    slaves_from_master,
)
from .errors import ConfigError, DomainError, DualClockError, RankError, TrialError
from .estimators import (
    BaselineEstimate,
    ChinChenEstimate,
    CorrectedEstimate,
    ambiguity_line,
    estimate_baseline,
    estimate_chin_chen,
    estimate_corrected,
)
from .experiment import (
    DEMO_CONFIG,
    EstimateReport,
    ScenarioConfig,
    SweepReport,
    estimate_report,
    run_demo,
    run_sweep,
)
from .identifiability import (
    DesignMatrix,
    RankReport,
    RidgeSurface,
    build_design_matrix,
    fisher_information,
    rank_analysis,
    ridge_scan,
)
from .protocol import (
    ClockScenario,
    GroundTruth,
    JitterModel,
    PathModel,
    SyncRecord,
    SyncSchedule,
    generate_chin_chen,
    generate_corrected,
    ground_truth,
    read_csv,
    write_csv,
)

__version__ = "0.1.0"
