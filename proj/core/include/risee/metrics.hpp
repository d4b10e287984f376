// risee - spectral/energy efficiency tradeoff simulator for RIS-aided MIMO downlinks
// Copyright (C) 2026 the risee authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "risee/types.hpp"

namespace risee {

/// Standard Gaussian tail probability Q(x).
double gaussian_q(double x);

/// Inverse Gaussian tail: returns x with Q(x) = epsilon, |error| <= 1e-9.
/// Throws std::domain_error unless 0 < epsilon < 1.
double inv_q(double epsilon);

/// Dispersion scaling Q^{-1}(epsilon) / sqrt(n); zero when n_block == 0
/// (infinite-blocklength convention).
double dispersion_factor(const SystemConfig &cfg);

/// Finite-blocklength achievable rate of user k in nats per channel use,
/// normal approximation:
///
///   r_k = log|I + (sigma2 I + sum_{i!=k} Z_ki)^{-1} Z_kk|
///         - Q^{-1}(eps)/sqrt(n) * sqrt(2 Tr(Z_kk (sigma2 I + sum_i Z_ki)^{-1}))
///
/// with Z_ki = H_k W_i W_i^H H_k^H. The raw value may be negative; clamping is
/// the reporting layer's concern. `channels` holds the effective H_k for every
/// user. Throws std::runtime_error when the noise-plus-interference matrix is
/// not positive definite (sigma2 = 0 degenerate).
double fbl_rate(const std::vector<Matrix> &channels, const BeamformerSet &bf,
                const SystemConfig &cfg, int k);

/// Number of interconnect circuit elements of a fully-connected BD surface.
inline double bd_circuit_count(int n_ris) {
    return 0.5 * static_cast<double>(n_ris) * (n_ris - 1);
}

/// Static power P_c = P_t + P_RIS / K. P_RIS uses the per-element model for
/// diagonal variants, the per-circuit model with N_c = n(n-1)/2 for BD
/// variants, and is zero without a RIS.
double static_power(const PowerModel &pm, Architecture arch, int n_ris, int k_users);

/// Tradeoff objective zeta_k = alpha_k r + (1 - alpha_k) r / (p_c + eta Tr(W_k W_k^H)).
/// Unit-agnostic: `rate` in nats gives zeta in nats.
double see_objective(double rate, const Matrix &w_k, double p_c,
                     const SystemConfig &cfg, int k);

/// Approximate multiplication counts for one outer iteration.
struct ComplexityEstimate {
    double w_step_mults = 0.0;
    double phi_step_mults = 0.0;
};

ComplexityEstimate complexity_estimate(const SystemConfig &cfg, Architecture arch);

/// Evaluates the full per-user metrics record at an operating point.
/// Rates are converted to bits and clamped at zero.
MetricsRecord evaluate_metrics(const std::vector<Matrix> &channels,
                               const BeamformerSet &bf, const SystemConfig &cfg,
                               double p_c);

} // namespace risee
