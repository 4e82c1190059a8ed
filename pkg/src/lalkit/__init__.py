"""Forward resampling under the local action lemma: monoids, weight conditions, solvers."""

from .conditions import (LalConditionTable, SeriesSpec, GeometricFamily, check_lal_inequality,
                         solve_series_fixpoint, nonrep_color_threshold, ramsey_certify, ramsey_max_n)
from .engine import RunReport, RunTrace, run, run_many
from .graphs import Graph
from .monoid import FreePower, PowersetElement, trace_decodes, underline_f

__version__ = "0.1.0"
