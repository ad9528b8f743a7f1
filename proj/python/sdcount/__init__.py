#------------------------------------------------------------------------------
#
#   Copyright 2026 The sdcount Authors
#
#   Licensed under the Apache License, Version 2.0 (the "License");
#   you may not use this file except in compliance with the License.
#   You may obtain a copy of the License at
#
#       http://www.apache.org/licenses/LICENSE-2.0
#
#   Unless required by applicable law or agreed to in writing, software
#   distributed under the License is distributed on an "AS IS" BASIS,
#   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
#   See the License for the specific language governing permissions and
#   limitations under the License.
#
#------------------------------------------------------------------------------

"""Blind estimation of the number of sources in noisy linear mixtures."""

from ._sdcount import (
    ComputationError,
    Error,
    InputError,
    __version__,
    amari_index,
    covariance_spectrum,
    db_to_linear,
    dcor,
    dcov_sq,
    derive_seed,
    draw_mixing,
    draw_sources,
    dvar_sq,
    estimate,
    mdl_estimate,
    mix64,
    rmt_estimate,
    sdc_curve,
    sdc_estimate,
    separate,
    simulate,
    sorte_estimate,
    synthesize,
)

__all__ = [
    "ComputationError",
    "Error",
    "InputError",
    "__version__",
    "amari_index",
    "covariance_spectrum",
    "db_to_linear",
    "dcor",
    "dcov_sq",
    "derive_seed",
    "draw_mixing",
    "draw_sources",
    "dvar_sq",
    "estimate",
    "mdl_estimate",
    "mix64",
    "rmt_estimate",
    "sdc_curve",
    "sdc_estimate",
    "separate",
    "simulate",
    "sorte_estimate",
    "synthesize",
]
