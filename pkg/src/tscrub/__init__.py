"""tscrub: automated cleaning of univariate time series.

The pipeline repairs the timeline (missing and duplicated timestamps),
classifies gaps as isolated or contiguous, picks the best imputation
method per mechanism by simulating matching missingness, replaces
decomposition-flagged outliers, and keeps a change log so individual
repairs can be reverted.
"""

__version__ = "0.1.0"

from .anomaly import (
    AnomalyConfig,
    Decomposition,
    decompose,
    detect_outliers,
    infer_period,
    iqr_bounds,
    replace_outliers,
)
from .benchmark import (
    BenchmarkConfig,
    GapClassification,
    classify_gaps,
    evaluate_methods,
    impute_by_mechanism,
    score,
    select_best,
    simulate_missing,
)
from .errors import CleaningError
from .imputation import (
    DEFAULT_METHODS,
    MethodRegistry,
    default_registry,
    external_method,
    impute_interpolation,
    impute_locf,
    impute_moving_average,
)
from .ingest import coerce_values, merge_csv, read_csv, select_columns, write_csv
from .kalman import KalmanModel, fit_kalman, impute_kalman, kalman_loglik, kalman_smooth
from .model import (
    AnnotatedPoint,
    ChangeEntry,
    CleanData,
    CleanResult,
    OutlierRecord,
    RawSeries,
    RawTable,
    TimeSeries,
    result_from_json,
    result_to_json,
    revert,
)
from .pipeline import clean, summary_stats
from .report import generate_report
from .timeline import find_missing_timestamps, infer_interval, regularize, resolve_duplicates
from .timestamps import (
    FormatOrder,
    parse_column,
    parse_format_order,
    parse_timestamp,
    render_instant,
)
from .windows import IntervalSpec, parse_interval_spec, render_frames, split_windows
