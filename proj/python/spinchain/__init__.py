# Copyright 2026 The spinchain Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""Quantum state transfer through spin chains under decoherence."""

from ._core import (  # noqa: F401
    BlochResponse,
    Channel,
    ChainFamily,
    ChainSpec,
    ConfigError,
    EntanglementResult,
    ExplicitEnvironment,
    GaussianEnvironment,
    LindbladConfig,
    NumericalError,
    TransferAmplitude,
    ValidationError,
    __version__,
    average_fidelity_bloch,
    average_fidelity_common_env,
    average_fidelity_free,
    bloch_response,
    build_full_hamiltonian,
    build_subspace_hamiltonian,
    closed_form_mirror_amplitude,
    critical_chain_length,
    distribute_entanglement,
    explicit_decoherence_factor,
    gaussian_decoherence_factor,
    integrate_master_equation,
    max_excitation_probability,
    max_fidelity_search,
    mirror_couplings,
    run_cli,
    transfer_amplitude,
    wootters_concurrence,
)
