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

#include "risee/metrics.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace risee {

double gaussian_q(double x) { return 0.5 * std::erfc(x / M_SQRT2); }

namespace {

// Acklam-style rational approximation of the standard normal quantile,
// used as the Newton starting point.
double norm_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double p_low = 0.02425;
    double q, r;
    if (p < p_low) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        q = p - 0.5;
        r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double std_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}

} // namespace

double inv_q(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::domain_error("inv_q: epsilon must lie in (0, 1)");
    if (epsilon == 0.5) return 0.0;
    // Q(x) = eps  <=>  CDF(x) = 1 - eps
    double x = norm_quantile_approx(1.0 - epsilon);
    // Newton polish on Q(x) - eps; Q'(x) = -pdf(x)
    for (int it = 0; it < 4; ++it) {
        double f = gaussian_q(x) - epsilon;
        double df = -std_normal_pdf(x);
        if (df == 0.0) break;
        double step = f / df;
        x -= step;
        if (std::abs(step) < 1e-14 * (1.0 + std::abs(x))) break;
    }
    return x;
}

double dispersion_factor(const SystemConfig &cfg) {
    if (cfg.n_block <= 0.0) return 0.0;
    return inv_q(cfg.epsilon) / std::sqrt(cfg.n_block);
}

double fbl_rate(const std::vector<Matrix> &channels, const BeamformerSet &bf,
                const SystemConfig &cfg, int k) {
    const Matrix &h = channels.at(static_cast<std::size_t>(k));
    const Eigen::Index nu = h.rows();
    const int kk = cfg.k_users;

    Matrix noise_int = cfg.sigma2 * Matrix::Identity(nu, nu); // sigma2 I + interference
    Matrix xk;                                                // H_k W_k
    for (int i = 0; i < kk; ++i) {
        Matrix x = h * bf.w.at(static_cast<std::size_t>(i));
        if (i == k)
            xk = std::move(x);
        else
            noise_int.noalias() += x * x.adjoint();
    }
    Matrix total = noise_int + xk * xk.adjoint();

    Eigen::LLT<Matrix> llt_n(noise_int);
    Eigen::LLT<Matrix> llt_s(total);
    if (llt_n.info() != Eigen::Success || llt_s.info() != Eigen::Success)
        throw std::runtime_error("fbl_rate: noise-plus-interference matrix not positive definite");

    auto logdet = [](const Eigen::LLT<Matrix> &llt) {
        double s = 0.0;
        const auto &l = llt.matrixLLT();
        for (Eigen::Index i = 0; i < l.rows(); ++i) s += std::log(std::real(l(i, i)));
        return 2.0 * s;
    };
    double shannon = logdet(llt_s) - logdet(llt_n);

    double cn = dispersion_factor(cfg);
    if (cn == 0.0) return shannon;

    // v = 2 Tr(Z_kk S^{-1}) = 2 ||L^{-1} X_k||_F^2 with S = L L^H
    Matrix y = llt_s.matrixL().solve(xk);
    double v = 2.0 * y.squaredNorm();
    return shannon - cn * std::sqrt(v);
}

double static_power(const PowerModel &pm, Architecture arch, int n_ris, int k_users) {
    if (n_ris < 1 || k_users < 1)
        throw std::invalid_argument("static_power: counts must be >= 1");
    double p_ris = 0.0;
    if (arch == Architecture::NoRis) {
        p_ris = 0.0;
    } else if (is_bd(arch)) {
        p_ris = pm.p_ris0_bd + bd_circuit_count(n_ris) * pm.p_ris_n_bd;
    } else {
        p_ris = pm.p_ris0_d + static_cast<double>(n_ris) * pm.p_ris_n_d;
    }
    return pm.p_t + p_ris / static_cast<double>(k_users);
}

double see_objective(double rate, const Matrix &w_k, double p_c,
                     const SystemConfig &cfg, int k) {
    double alpha = cfg.alpha_of(k);
    double denom = p_c + cfg.eta * w_k.squaredNorm();
    return alpha * rate + (1.0 - alpha) * rate / denom;
}

ComplexityEstimate complexity_estimate(const SystemConfig &cfg, Architecture arch) {
    cfg.validate();
    const double nb = cfg.n_bs, nu = cfg.n_u, kk = cfg.k_users, nr = cfg.n_ris;
    ComplexityEstimate est;
    est.w_step_mults = nb * nb * kk * kk * std::sqrt(2.0 * kk + 1.0) * (2.0 * nb + nu);
    double per_channel = is_bd(arch) ? nu * nb * nr * nr : nu * nb * nr;
    est.phi_step_mults = kk * (kk * nb * nb * (2.0 * nb + nu) + per_channel);
    return est;
}

MetricsRecord evaluate_metrics(const std::vector<Matrix> &channels,
                               const BeamformerSet &bf, const SystemConfig &cfg,
                               double p_c) {
    const double to_bits = 1.0 / std::log(2.0);
    MetricsRecord rec;
    rec.static_power = p_c;
    rec.rate.resize(static_cast<std::size_t>(cfg.k_users));
    rec.ee.resize(static_cast<std::size_t>(cfg.k_users));
    rec.see.resize(static_cast<std::size_t>(cfg.k_users));
    for (int k = 0; k < cfg.k_users; ++k) {
        double r = std::max(0.0, fbl_rate(channels, bf, cfg, k)) * to_bits;
        double denom = p_c + cfg.eta * bf.w.at(static_cast<std::size_t>(k)).squaredNorm();
        double e = r / denom;
        double alpha = cfg.alpha_of(k);
        rec.rate[static_cast<std::size_t>(k)] = r;
        rec.ee[static_cast<std::size_t>(k)] = e;
        rec.see[static_cast<std::size_t>(k)] = alpha * r + (1.0 - alpha) * e;
    }
    auto vmin = [](const std::vector<double> &v) {
        double m = v.front();
        for (double x : v) m = std::min(m, x);
        return m;
    };
    rec.min_rate = vmin(rec.rate);
    rec.min_ee = vmin(rec.ee);
    rec.min_see = vmin(rec.see);
    return rec;
}

} // namespace risee
