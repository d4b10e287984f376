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

#include "risee/feasibility.hpp"
#include "risee/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <functional>
#include <limits>

namespace risee {

GnpWeight gnp_weight(const Matrix &g, const BeamformerSet &bf) {
    Matrix c = bf.covariance();
    if (c.rows() != g.cols())
        throw std::invalid_argument("gnp_weight: dimension mismatch between G and C");
    GnpWeight w;
    w.d = g * c * g.adjoint();
    w.d = 0.5 * (w.d + w.d.adjoint()).eval();
    w.budget = std::real(w.d.trace());
    return w;
}

double spectral_norm(const Matrix &phi) {
    if (phi.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(phi);
    return svd.singularValues()(0);
}

double lmi_min_eigenvalue(const Matrix &phi) {
    const Eigen::Index n = phi.rows();
    Matrix block(2 * n, 2 * n);
    block.topLeftCorner(n, n) = Matrix::Identity(n, n);
    block.topRightCorner(n, n) = phi;
    block.bottomLeftCorner(n, n) = phi.adjoint();
    block.bottomRightCorner(n, n) = Matrix::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Matrix> es(block, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

namespace {

double max_offdiag(const Matrix &phi) {
    double m = 0.0;
    for (Eigen::Index r = 0; r < phi.rows(); ++r)
        for (Eigen::Index c = 0; c < phi.cols(); ++c)
            if (r != c) m = std::max(m, std::abs(phi(r, c)));
    return m;
}

double max_asymmetry(const Matrix &phi) {
    return (phi - phi.transpose()).cwiseAbs().maxCoeff();
}

double gnp_violation(const Matrix &phi, const GnpWeight &w) {
    return std::real((phi * w.d * phi.adjoint()).trace()) - w.budget;
}

} // namespace

ContainsResult contains(Architecture arch, const Matrix &phi, const GnpWeight *weight,
                        double tol) {
    if (is_gnp(arch) && weight == nullptr)
        throw std::invalid_argument("contains: GNP architectures require a GnpWeight");

    double violation = 0.0;
    switch (arch) {
    case Architecture::NoRis:
        violation = phi.size() == 0 ? 0.0 : phi.cwiseAbs().maxCoeff();
        break;
    case Architecture::RandD:
    case Architecture::LnpD: {
        violation = max_offdiag(phi);
        for (Eigen::Index m = 0; m < phi.rows(); ++m)
            violation = std::max(violation, std::abs(phi(m, m)) - 1.0);
        break;
    }
    case Architecture::LnpBd:
        violation = std::max(max_asymmetry(phi), spectral_norm(phi) - 1.0);
        break;
    case Architecture::GnpD:
        violation = std::max(max_offdiag(phi), gnp_violation(phi, *weight));
        break;
    case Architecture::GnpBd:
        violation = std::max(max_asymmetry(phi), gnp_violation(phi, *weight));
        break;
    }
    return {violation <= tol, violation};
}

namespace {

Matrix project_diag_unit(const Matrix &phi0) {
    Matrix out = Matrix::Zero(phi0.rows(), phi0.cols());
    for (Eigen::Index m = 0; m < phi0.rows(); ++m) {
        Complex v = phi0(m, m);
        double a = std::abs(v);
        out(m, m) = a > 1.0 ? v / a : v;
    }
    return out;
}

Matrix project_symmetric(const Matrix &x) { return 0.5 * (x + x.transpose()); }

Matrix project_spectral_ball(const Matrix &x) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    RealVector s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 1.0) return x;
    for (Eigen::Index i = 0; i < s.size(); ++i) s(i) = std::min(s(i), 1.0);
    return svd.matrixU() * s.asDiagonal() * svd.matrixV().adjoint();
}

// Projection of the diagonal vector onto { sum_m d_m |phi_m|^2 <= budget }:
// shrinkage phi_m = phi0_m / (1 + mu d_m) with mu found by bisection.
Matrix project_gnp_diag(const Matrix &phi0, const GnpWeight &w) {
    const Eigen::Index n = phi0.rows();
    RealVector d(n), p2(n);
    for (Eigen::Index m = 0; m < n; ++m) {
        d(m) = std::max(0.0, std::real(w.d(m, m)));
        p2(m) = std::norm(phi0(m, m));
    }
    const double budget = w.budget;
    auto excess = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index m = 0; m < n; ++m) {
            double den = 1.0 + mu * d(m);
            s += d(m) * p2(m) / (den * den);
        }
        return s - budget;
    };

    Matrix out = Matrix::Zero(n, n);
    if (excess(0.0) <= 0.0) {
        for (Eigen::Index m = 0; m < n; ++m) out(m, m) = phi0(m, m);
        return out;
    }
    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (excess(hi) > 0.0 && guard++ < 200) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const double mu = hi;
    for (Eigen::Index m = 0; m < n; ++m) out(m, m) = phi0(m, m) / (1.0 + mu * d(m));
    return out;
}

// Projection onto { Tr(Phi D Phi^H) <= budget }: Phi = Phi0 (I + mu D)^{-1}
// in the eigenbasis of D, mu by bisection on the quadratic constraint.
Matrix project_gnp_ellipsoid(const Matrix &phi0, const GnpWeight &w) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(w.d);
    RealVector lam = es.eigenvalues().cwiseMax(0.0);
    Matrix u = es.eigenvectors();
    Matrix y = phi0 * u; // columns scale independently
    RealVector col2(lam.size());
    for (Eigen::Index j = 0; j < lam.size(); ++j) col2(j) = y.col(j).squaredNorm();

    const double budget = w.budget;
    auto excess = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index j = 0; j < lam.size(); ++j) {
            double den = 1.0 + mu * lam(j);
            s += lam(j) * col2(j) / (den * den);
        }
        return s - budget;
    };
    if (excess(0.0) <= 0.0) return phi0;

    double lo = 0.0, hi = 1.0;
    int guard = 0;
    while (excess(hi) > 0.0 && guard++ < 200) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        (excess(mid) > 0.0 ? lo : hi) = mid;
    }
    const double mu = hi;
    RealVector scale(lam.size());
    for (Eigen::Index j = 0; j < lam.size(); ++j) scale(j) = 1.0 / (1.0 + mu * lam(j));
    return y * scale.asDiagonal() * u.adjoint();
}

// Dykstra alternation between the transpose-symmetric subspace and a convex
// set given by its projection. The returned point is made exactly feasible by
// a final symmetrize-and-shrink step (both sets are closed under it), so the
// tolerance only controls how close the result is to the true projection.
template <typename ProjectSet, typename Fixup>
Matrix dykstra_symmetric(const Matrix &phi0, ProjectSet &&project_set,
                         const std::function<double(const Matrix &)> &set_violation,
                         Fixup &&fixup, double tol, const char *label) {
    Matrix x = phi0;
    Matrix p = Matrix::Zero(phi0.rows(), phi0.cols());
    Matrix q = p;
    const int cap = 500;
    double resid = std::numeric_limits<double>::infinity();
    for (int it = 0; it < cap; ++it) {
        Matrix y = project_symmetric(x + p);
        p = x + p - y;
        Matrix x_next = project_set(y + q);
        q = y + q - x_next;
        double asym = max_asymmetry(x_next);
        double sv = set_violation(x_next);
        resid = std::max(asym, sv);
        x = std::move(x_next);
        if (resid <= tol) break;
    }
    const double scale = std::max(1.0, phi0.cwiseAbs().maxCoeff());
    if (!(resid <= 1e-5 * scale))
        throw ProjectionError(std::string(label) + ": Dykstra did not converge, residual " +
                                  std::to_string(resid),
                              resid);
    return fixup(project_symmetric(x));
}

} // namespace

Matrix project(Architecture arch, const Matrix &phi0, const GnpWeight *weight, double tol) {
    if (is_gnp(arch) && weight == nullptr)
        throw std::invalid_argument("project: GNP architectures require a GnpWeight");
    if (phi0.rows() != phi0.cols())
        throw std::invalid_argument("project: Phi must be square");

    // Interior points pass through untouched.
    if (contains(arch, phi0, weight, 1e-12).ok) return phi0;

    switch (arch) {
    case Architecture::NoRis:
        return Matrix::Zero(phi0.rows(), phi0.cols());
    case Architecture::RandD:
    case Architecture::LnpD:
        return project_diag_unit(phi0);
    case Architecture::GnpD:
        return project_gnp_diag(phi0, *weight);
    case Architecture::LnpBd:
        // symmetrizing never grows the spectral norm, and a uniform shrink
        // keeps symmetry, so the fixup lands exactly inside the set
        return dykstra_symmetric(
            phi0, [](const Matrix &x) { return project_spectral_ball(x); },
            [](const Matrix &x) { return spectral_norm(x) - 1.0; },
            [](const Matrix &x) {
                double sv = spectral_norm(x);
                return sv > 1.0 ? Matrix(x / sv) : x;
            },
            tol, "project(LnpBd)");
    case Architecture::GnpBd:
        return dykstra_symmetric(
            phi0, [&](const Matrix &x) { return project_gnp_ellipsoid(x, *weight); },
            [&](const Matrix &x) { return gnp_violation(x, *weight); },
            [&](const Matrix &x) {
                double lhs = std::real((x * weight->d * x.adjoint()).trace());
                if (lhs <= weight->budget) return x;
                return Matrix(x * std::sqrt(weight->budget / lhs));
            },
            tol, "project(GnpBd)");
    }
    throw std::logic_error("project: unreachable");
}

ScatteringMatrix random_feasible(Architecture arch, const SystemConfig &cfg,
                                 std::uint64_t seed) {
    Rng rng(seed);
    Matrix phi = Matrix::Zero(cfg.n_ris, cfg.n_ris);
    for (int m = 0; m < cfg.n_ris; ++m)
        phi(m, m) = std::polar(1.0, rng.uniform(0.0, 2.0 * M_PI));
    return {std::move(phi), arch};
}

} // namespace risee
