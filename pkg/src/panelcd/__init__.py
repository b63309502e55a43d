"""Cross-sectional dependence tests for large fixed-effects panels."""

from .cdtests import (
    Tail,
    TestConstants,
    TestName,
    TestResult,
    cd_test,
    lm_adj_test,
    lm_bc_test,
    lm_e_test,
    lm_p_statistic,
    lm_rmt_test,
    lm_test,
    pet_test,
    run_all_tests,
    test_constants,
)
from .correlation import CorrSummary, correlation_summary, residual_covariance
from .csvio import read_panel_csv, write_panel_csv
from .errors import (
    DegenerateUnit,
    DuplicateRow,
    NonpositiveVariance,
    PanelCdError,
    ParseError,
    SingularDesign,
    SingularUnitDesign,
    UnbalancedPanel,
)
from .kernels import USING_EXTENSION
from .panel import (
    CenteredPanel,
    PanelData,
    RegressionFit,
    UnitRegressionFit,
    center_panel,
    fit_pooled_ols,
    fit_unit_ols,
)
from .simulate import (
    Alternative,
    AltKind,
    DgpConfig,
    ErrorDist,
    McReport,
    SlopeMode,
    gen_errors_null,
    gen_loadings,
    gen_panel,
    gen_regressors,
    run_experiment,
    statistic_samples,
    trace_gap_probe,
)

__version__ = "0.1.0"

__all__ = [
    "AltKind",
    "Alternative",
    "CenteredPanel",
    "CorrSummary",
    "DegenerateUnit",
    "DgpConfig",
    "DuplicateRow",
    "ErrorDist",
    "McReport",
    "NonpositiveVariance",
    "PanelCdError",
    "PanelData",
    "ParseError",
    "RegressionFit",
    "SingularDesign",
    "SingularUnitDesign",
    "SlopeMode",
    "Tail",
    "TestConstants",
    "TestName",
    "TestResult",
    "USING_EXTENSION",
    "UnbalancedPanel",
    "UnitRegressionFit",
    "cd_test",
    "center_panel",
    "correlation_summary",
    "fit_pooled_ols",
    "fit_unit_ols",
    "gen_errors_null",
    "gen_loadings",
    "gen_panel",
    "gen_regressors",
    "lm_adj_test",
    "lm_bc_test",
    "lm_e_test",
    "lm_p_statistic",
    "lm_rmt_test",
    "lm_test",
    "pet_test",
    "read_panel_csv",
    "residual_covariance",
    "run_all_tests",
    "run_experiment",
    "statistic_samples",
    "test_constants",
    "trace_gap_probe",
    "write_panel_csv",
]
