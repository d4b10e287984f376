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

#include "risee/channel.hpp"
#include "risee/types.hpp"

namespace risee {

/// Coefficients of the concave global lower bound on the finite-blocklength
/// rate of one user,
///
///   r_k >= a + 2 sum_i Re Tr(A_i W_i^H H^H) - Tr(B (sigma2 I + sum_i H W_i W_i^H H^H)),
///
/// tight (value and gradient) at the expansion point. The same triple serves
/// the beamformer subproblem (H frozen, W variable) and the scattering
/// subproblem (W frozen, H affine in Phi).
///
/// The Shannon part uses the classical log-det minorant with
/// B_sh = Nbar^{-1} - Sbar^{-1} (PSD). The dispersion penalty
/// -c sqrt(v), v = 2 Tr(Z_kk S^{-1}) = 2 (N_u - sigma2 Tr(S^{-1})
/// - sum_{i != k} Tr(X_i^H S^{-1} X_i)), is minorized by the AM-GM bound
/// sqrt(v) <= (v + vbar) / (2 sqrt(vbar)) followed by tangent-plane lower
/// bounds of the convex pieces sigma2 Tr(S^{-1}) and Tr(X_i^H S^{-1} X_i)
/// (jointly convex in (X_i, S)); the S-linear parts collapse into
/// B_disp = (c / sqrt(vbar)) Sbar^{-1} Nbar Sbar^{-1}.
///
/// When vbar falls below a threshold the AM-GM step is skipped and the
/// constant safe bound -c sqrt(2 N_u) is used instead (dispersion_active
/// is false, tangency is sacrificed, minorization is kept).
struct SurrogateCoeffs {
    int user = 0;
    double a = 0.0;            ///< constant term
    std::vector<Matrix> a_mats; ///< K linear coefficients, N_u x d each
    Matrix b;                  ///< N_u x N_u Hermitian PSD quadratic coefficient
    bool dispersion_active = false;
    double vbar = 0.0;             ///< dispersion argument at the expansion point
    double rate_at_expansion = 0.0; ///< r_k at the expansion point (nats)
    double sigma2_ref = 1.0;       ///< noise power baked into the quadratic term

    // expansion-point snapshot
    BeamformerSet w_ref;
    Matrix phi_ref;
    Matrix h_ref; ///< H_k(phi_ref)
};

/// Builds the coefficient triple at the expansion point (w_l, phi_l).
/// Throws std::runtime_error when the interference-plus-noise matrix at the
/// expansion point is not positive definite.
SurrogateCoeffs build_coeffs(const ChannelSet &ch, const Matrix &phi_l,
                             const BeamformerSet &w_l, const SystemConfig &cfg, int k);

/// Beamformer-subproblem evaluation: channel frozen at h_k, W variable.
double eval_surrogate_w(const SurrogateCoeffs &sc, const BeamformerSet &w,
                        const Matrix &h_k);

/// Conjugate (Wirtinger) gradients d/dW_i^* of eval_surrogate_w; the gradient
/// in real coordinates is twice the (Re, Im) parts.
std::vector<Matrix> grad_surrogate_w(const SurrogateCoeffs &sc, const BeamformerSet &w,
                                     const Matrix &h_k);

/// Scattering-subproblem evaluation: W frozen, Phi variable through
/// H_k(Phi) = G_k Phi G + F_k.
double eval_surrogate_phi(const SurrogateCoeffs &sc, const Matrix &phi,
                          const ChannelSet &ch, const BeamformerSet &w_fixed);

/// Conjugate gradient d/dPhi^* of eval_surrogate_phi.
Matrix grad_surrogate_phi(const SurrogateCoeffs &sc, const Matrix &phi,
                          const ChannelSet &ch, const BeamformerSet &w_fixed);

} // namespace risee
