# Copyright 2026 The covint authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact worst-case coverage probabilities of random intervals.

The heavy lifting lives in the compiled extension; this package just
re-exports it.
"""

from covint._core import (  # noqa: F401
    BoundsMode,
    CoverageReport,
    CriticalPoint,
    CriticalSet,
    CurvePoint,
    Direction,
    DistributionSpec,
    EvalKind,
    Family,
    IntervalProcedure,
    KIndexInterval,
    PointEvaluation,
    Witness,
    breakpoints_continuous,
    breakpoints_hypergeom,
    cdf,
    coverage_at,
    coverage_curve,
    dump_procedure_table,
    inf_closed_coverage,
    interval_prob,
    k_interval_for,
    load_procedure_table,
    min_hypergeom_coverage,
    min_open_coverage,
    oracle,
    pmf,
    t_weight,
)
from covint._core import __version__  # noqa: F401
