from .bounds import (
    CountReport,
    SeparationReport,
    count_bound,
    count_bound_check,
    degenerate_count_bound,
    select_events,
    separation_check,
    separation_threshold,
)
from .calibrate import (
    CalibrationPoint,
    calibrate,
    calibration_point,
    fit_calibration,
    store_calibration,
    thick_points,
)
from .calibration import (
    CALIBRATION_ENV,
    DEFAULT_CALIBRATION_PATH,
    Calibration,
    calibration_path,
    load_calibration,
    save_calibration,
)
from .detection import (
    ReturnEvent,
    check_return_step,
    find_beta_returns,
    max_beta,
    return_step,
    shell_index,
    verify_return,
)
from .injectivity import (
    Box,
    Collision,
    InjectivityGrid,
    UpperBound,
    bisect_scale,
    c_gamma_covariance,
    c_gamma_upper,
    decompose_box,
    find_collision,
    injectivity_radius,
    injectivity_scale,
    injectivity_search,
)
from .width import WidthProfile, tube_side, width_integral

__all__ = [
    "CountReport",
    "SeparationReport",
    "count_bound",
    "count_bound_check",
    "degenerate_count_bound",
    "select_events",
    "separation_check",
    "separation_threshold",
    "CalibrationPoint",
    "calibrate",
    "calibration_point",
    "fit_calibration",
    "store_calibration",
    "thick_points",
    "CALIBRATION_ENV",
    "DEFAULT_CALIBRATION_PATH",
    "Calibration",
    "calibration_path",
    "load_calibration",
    "save_calibration",
    "ReturnEvent",
    "check_return_step",
    "find_beta_returns",
    "max_beta",
    "return_step",
    "shell_index",
    "verify_return",
    "Box",
    "Collision",
    "InjectivityGrid",
    "UpperBound",
    "bisect_scale",
    "c_gamma_covariance",
    "c_gamma_upper",
    "decompose_box",
    "find_collision",
    "injectivity_radius",
    "injectivity_scale",
    "injectivity_search",
    "WidthProfile",
    "tube_side",
    "width_integral",
]
