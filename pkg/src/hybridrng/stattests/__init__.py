"""Desk-scale statistical battery."""

from .battery import (
    CSV_COLUMNS,
    BatteryReport,
    default_manifest,
    load_manifest,
    run_battery,
    run_battery_on_words,
    write_battery_csv,
)
from .checks import (
    DEFAULT_ALPHA,
    SampleSizeError,
    TestReport,
    birthday_spacings,
    gap_test,
    lag_autocorrelation,
    monobit,
    monobit_from_count,
    runs_test,
    serial_pairs_chisq,
)
