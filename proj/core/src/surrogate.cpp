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

#include "risee/surrogate.hpp"
#include "risee/metrics.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace risee {

namespace {

constexpr double kVbarThreshold = 1e-10;

double logdet_psd(const Matrix &m) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("surrogate: matrix not positive definite");
    double s = 0.0;
    const auto &l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(std::real(l(i, i)));
    return 2.0 * s;
}

} // namespace

SurrogateCoeffs build_coeffs(const ChannelSet &ch, const Matrix &phi_l,
                             const BeamformerSet &w_l, const SystemConfig &cfg, int k) {
    const int kk = cfg.k_users;
    SurrogateCoeffs sc;
    sc.user = k;
    sc.sigma2_ref = cfg.sigma2;
    sc.phi_ref = phi_l;
    sc.w_ref = w_l;
    sc.h_ref = effective_channel(ch, phi_l, k);

    const Eigen::Index nu = sc.h_ref.rows();
    std::vector<Matrix> x(static_cast<std::size_t>(kk)); // X_i = H W_i
    Matrix n_bar = cfg.sigma2 * Matrix::Identity(nu, nu);
    for (int i = 0; i < kk; ++i) {
        x[static_cast<std::size_t>(i)] = sc.h_ref * w_l.w.at(static_cast<std::size_t>(i));
        if (i != k) n_bar.noalias() += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)].adjoint();
    }
    const Matrix &xk = x[static_cast<std::size_t>(k)];
    Matrix s_bar = n_bar + xk * xk.adjoint();

    Eigen::LLT<Matrix> llt_n(n_bar);
    Eigen::LLT<Matrix> llt_s(s_bar);
    if (llt_n.info() != Eigen::Success || llt_s.info() != Eigen::Success)
        throw std::runtime_error("build_coeffs: expansion-point covariance not positive definite");

    Matrix n_inv = llt_n.solve(Matrix::Identity(nu, nu));
    Matrix s_inv = llt_s.solve(Matrix::Identity(nu, nu));

    // Shannon term: log|I + Nbar^{-1} Z| - Tr(Nbar^{-1} Z) constant,
    // A_kk = Nbar^{-1} X_k, B = Nbar^{-1} - Sbar^{-1}.
    double shannon_bar = logdet_psd(s_bar) - logdet_psd(n_bar);
    double tr_ninv_z = std::real((xk.adjoint() * n_inv * xk).trace());
    sc.a = shannon_bar - tr_ninv_z;
    sc.a_mats.assign(static_cast<std::size_t>(kk), Matrix::Zero(nu, w_l.w.front().cols()));
    sc.a_mats[static_cast<std::size_t>(k)] = n_inv * xk;
    sc.b = n_inv - s_inv;

    const double cn = dispersion_factor(cfg);
    sc.vbar = 2.0 * std::real((xk.adjoint() * s_inv * xk).trace());
    sc.rate_at_expansion = shannon_bar - cn * std::sqrt(std::max(0.0, sc.vbar));

    if (cn > 0.0) {
        if (sc.vbar >= kVbarThreshold) {
            sc.dispersion_active = true;
            const double gamma = cn / std::sqrt(sc.vbar);
            sc.a += -0.5 * cn * std::sqrt(sc.vbar) - gamma * static_cast<double>(nu) +
                    2.0 * gamma * cfg.sigma2 * std::real(s_inv.trace());
            for (int i = 0; i < kk; ++i) {
                if (i == k) continue;
                sc.a_mats[static_cast<std::size_t>(i)] = gamma * (s_inv * x[static_cast<std::size_t>(i)]);
            }
            sc.b += gamma * (s_inv * n_bar * s_inv);
        } else {
            // silent user: constant safe bound, v <= 2 N_u always
            sc.dispersion_active = false;
            sc.a += -cn * std::sqrt(2.0 * static_cast<double>(nu));
        }
    }
    sc.b = 0.5 * (sc.b + sc.b.adjoint()).eval();
    return sc;
}

namespace {

double quadratic_form(const SurrogateCoeffs &sc, const std::vector<Matrix> &y,
                      double sigma2) {
    // Tr(B (sigma2 I + sum_i Y_i Y_i^H))
    double val = sigma2 * std::real(sc.b.trace());
    for (const Matrix &yi : y) val += std::real((yi.adjoint() * sc.b * yi).trace());
    return val;
}

double linear_form(const SurrogateCoeffs &sc, const std::vector<Matrix> &y) {
    // 2 sum_i Re Tr(A_i Y_i^H)
    double val = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        val += 2.0 * std::real(sc.a_mats[i].cwiseProduct(y[i].conjugate()).sum());
    return val;
}

} // namespace

double eval_surrogate_w(const SurrogateCoeffs &sc, const BeamformerSet &w,
                        const Matrix &h_k) {
    std::vector<Matrix> y;
    y.reserve(w.w.size());
    for (const Matrix &wi : w.w) y.push_back(h_k * wi);
    return sc.a + linear_form(sc, y) - quadratic_form(sc, y, sc.sigma2_ref);
}

std::vector<Matrix> grad_surrogate_w(const SurrogateCoeffs &sc, const BeamformerSet &w,
                                     const Matrix &h_k) {
    std::vector<Matrix> g;
    g.reserve(w.w.size());
    Matrix hb = h_k.adjoint() * sc.b * h_k; // N_BS x N_BS
    for (std::size_t i = 0; i < w.w.size(); ++i)
        g.push_back(h_k.adjoint() * sc.a_mats[i] - hb * w.w[i]);
    return g;
}

double eval_surrogate_phi(const SurrogateCoeffs &sc, const Matrix &phi,
                          const ChannelSet &ch, const BeamformerSet &w_fixed) {
    Matrix h = effective_channel(ch, phi, sc.user);
    std::vector<Matrix> y;
    y.reserve(w_fixed.w.size());
    for (const Matrix &wi : w_fixed.w) y.push_back(h * wi);
    return sc.a + linear_form(sc, y) - quadratic_form(sc, y, sc.sigma2_ref);
}

Matrix grad_surrogate_phi(const SurrogateCoeffs &sc, const Matrix &phi,
                          const ChannelSet &ch, const BeamformerSet &w_fixed) {
    const Matrix &gk = ch.g_k.at(static_cast<std::size_t>(sc.user));
    Matrix h = effective_channel(ch, phi, sc.user);
    Matrix acc = Matrix::Zero(h.rows(), h.cols()); // sum_i (A_i - B H W_i) W_i^H
    for (std::size_t i = 0; i < w_fixed.w.size(); ++i) {
        const Matrix &wi = w_fixed.w[i];
        acc.noalias() += (sc.a_mats[i] - sc.b * (h * wi)) * wi.adjoint();
    }
    return gk.adjoint() * acc * ch.g.adjoint();
}

} // namespace risee
