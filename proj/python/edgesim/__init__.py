# Copyright 2026 The Edgesim Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Privacy-aware MEC offloading simulator."""

from edgesim._core import (
    ConfigError,
    IoError,
    LatencyParams,
    PairingError,
    RadioParams,
    Topology,
    TraceError,
    __version__,
    bs_mh_latency_ms,
    config_hash,
    default_config,
    displacement_stats,
    epsilon_label,
    generate,
    obfuscate,
    parse_epsilon,
    path_loss_db,
    planar_laplace_cdf,
    planar_laplace_radius,
    proportional_fair,
    report,
    run,
    run_all,
    shannon_capacity_bps,
    snr_db,
    ue_bs_capacity_bps,
    validate_config,
)

__all__ = [
    "ConfigError",
    "IoError",
    "LatencyParams",
    "PairingError",
    "RadioParams",
    "Topology",
    "TraceError",
    "__version__",
    "bs_mh_latency_ms",
    "config_hash",
    "default_config",
    "displacement_stats",
    "epsilon_label",
    "generate",
    "obfuscate",
    "parse_epsilon",
    "path_loss_db",
    "planar_laplace_cdf",
    "planar_laplace_radius",
    "proportional_fair",
    "report",
    "run",
    "run_all",
    "shannon_capacity_bps",
    "snr_db",
    "ue_bs_capacity_bps",
    "validate_config",
]
