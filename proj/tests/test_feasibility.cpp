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

#include <doctest.h>

#include "oracles.hpp"
#include <risee/feasibility.hpp>
#include <risee/rng.hpp>

#include <cmath>
#include <limits>

using namespace risee;

namespace {

GnpWeight random_weight(Rng &rng, int n_ris, int n_bs = 4, int k_users = 2) {
    Matrix g = oracle::random_matrix(rng, n_ris, n_bs);
    BeamformerSet bf = oracle::random_feasible_beamformers(rng, n_bs, 2, k_users, 10.0);
    return gnp_weight(g, bf);
}

const Architecture kOptimized[] = {Architecture::LnpD, Architecture::LnpBd,
                                   Architecture::GnpD, Architecture::GnpBd};

} // namespace

TEST_CASE("gnp_weight basics") {
    Rng rng(1);
    const int n_ris = 6, n_bs = 3;
    Matrix g = oracle::random_matrix(rng, n_ris, n_bs);

    BeamformerSet zero;
    zero.w.push_back(Matrix::Zero(n_bs, 2));
    GnpWeight w0 = gnp_weight(g, zero);
    CHECK(w0.d.cwiseAbs().maxCoeff() == 0.0);
    CHECK(w0.budget == 0.0);

    // C = I via orthonormal columns at unit power
    BeamformerSet eye;
    eye.w.push_back(Matrix::Identity(n_bs, n_bs));
    GnpWeight wi = gnp_weight(g, eye);
    CHECK((wi.d - g * g.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

    // global-passivity trace against the naive loop
    BeamformerSet bf = oracle::random_feasible_beamformers(rng, n_bs, 2, 2, 8.0);
    GnpWeight w = gnp_weight(g, bf);
    Matrix phi = oracle::random_matrix(rng, n_ris, n_ris);
    double lib = std::real((phi * w.d * phi.adjoint()).trace()) - w.budget;
    CHECK(lib == doctest::Approx(oracle::naive_gnp_lhs(phi, w.d)).epsilon(1e-10));
}

TEST_CASE("contains handles the architecture rules") {
    Rng rng(2);
    const int n = 5;

    SystemConfig cfg5;
    cfg5.n_ris = 5;
    ScatteringMatrix unitdiag = random_feasible(Architecture::LnpD, cfg5, 3);
    CHECK(contains(Architecture::LnpD, unitdiag.phi).ok);

    Matrix scaled = 1.2 * Matrix::Identity(n, n);
    auto res = contains(Architecture::LnpBd, scaled);
    CHECK_FALSE(res.ok);
    CHECK(res.violation == doctest::Approx(0.2).epsilon(1e-9));

    // GnpD boundary: D = I, |phi_1|^2 = 2 and the rest adjusted so the sum is 0
    GnpWeight eye;
    eye.d = Matrix::Identity(3, 3);
    eye.budget = 3.0;
    Matrix phi = Matrix::Zero(3, 3);
    phi(0, 0) = std::sqrt(2.0);
    phi(1, 1) = std::sqrt(0.5);
    phi(2, 2) = std::sqrt(0.5);
    auto boundary = contains(Architecture::GnpD, phi, &eye);
    CHECK(boundary.ok);
    CHECK(std::abs(boundary.violation) < 1e-12);

    CHECK_THROWS_AS(contains(Architecture::GnpD, phi), std::invalid_argument);
}

TEST_CASE("LMI route agrees with the spectral-norm route") {
    Rng rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        Matrix m = oracle::random_matrix(rng, 4, 4, rng.uniform(0.1, 0.8));
        double sv = spectral_norm(m);
        double le = lmi_min_eigenvalue(m);
        // eigenvalues of the block matrix are 1 +- sigma_i
        CHECK(le == doctest::Approx(1.0 - sv).epsilon(1e-9));
        if (std::abs(sv - 1.0) > 1e-8) CHECK((sv <= 1.0) == (le >= 0.0));
    }
}

TEST_CASE("projection returns feasible points and fixes them") {
    Rng rng(4);
    SystemConfig cfg;
    cfg.n_ris = 5;
    GnpWeight weight = random_weight(rng, cfg.n_ris);

    for (Architecture arch : kOptimized) {
        const GnpWeight *wp = is_gnp(arch) ? &weight : nullptr;
        for (int trial = 0; trial < 25; ++trial) {
            Matrix x = oracle::random_matrix(rng, cfg.n_ris, cfg.n_ris, 1.5);
            Matrix p = project(arch, x, wp);
            CHECK(contains(arch, p, wp).ok);
            Matrix p2 = project(arch, p, wp);
            CHECK((p2 - p).cwiseAbs().maxCoeff() <= 2e-9);
        }
        // feasible inputs pass through unchanged
        Matrix member = oracle::sample_member(arch, cfg.n_ris, &weight, rng);
        Matrix same = project(arch, member, wp);
        CHECK((same - member).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("LnpD projection clips radially") {
    Matrix x = Matrix::Zero(3, 3);
    x(0, 0) = 2.0 * std::polar(1.0, M_PI / 4.0);
    x(1, 1) = Complex(0.3, 0.1);
    x(0, 2) = Complex(5.0, -2.0); // off-diagonal must vanish
    Matrix p = project(Architecture::LnpD, x);
    CHECK(std::abs(p(0, 0) - std::polar(1.0, M_PI / 4.0)) < 1e-14);
    CHECK(p(1, 1) == x(1, 1));
    CHECK(std::abs(p(0, 2)) == 0.0);
}

TEST_CASE("projection optimality against random feasible comparators") {
    Rng rng(5);
    SystemConfig cfg;
    cfg.n_ris = 4;
    GnpWeight weight = random_weight(rng, cfg.n_ris);
    for (Architecture arch : kOptimized) {
        const GnpWeight *wp = is_gnp(arch) ? &weight : nullptr;
        for (int trial = 0; trial < 10; ++trial) {
            Matrix x = oracle::random_matrix(rng, cfg.n_ris, cfg.n_ris, 2.0);
            if (contains(arch, x, wp).ok) continue;
            Matrix p = project(arch, x, wp);
            double dist = (p - x).norm();
            for (int c = 0; c < 200; ++c) {
                Matrix member = oracle::sample_member(arch, cfg.n_ris, &weight, rng);
                CHECK(dist <= (member - x).norm() + 1e-9);
            }
        }
    }
}

TEST_CASE("projection is approximately non-expansive") {
    Rng rng(6);
    SystemConfig cfg;
    cfg.n_ris = 4;
    GnpWeight weight = random_weight(rng, cfg.n_ris);
    const double tol = 1e-9;
    for (Architecture arch : kOptimized) {
        const GnpWeight *wp = is_gnp(arch) ? &weight : nullptr;
        for (int trial = 0; trial < 20; ++trial) {
            Matrix x = oracle::random_matrix(rng, cfg.n_ris, cfg.n_ris, 1.5);
            Matrix y = oracle::random_matrix(rng, cfg.n_ris, cfg.n_ris, 1.5);
            double lhs = (project(arch, x, wp) - project(arch, y, wp)).norm();
            CHECK(lhs <= (x - y).norm() + 4.0 * tol);
        }
    }
}

TEST_CASE("random_feasible members satisfy every set") {
    SystemConfig cfg;
    cfg.n_ris = 6;
    Rng rng(7);
    GnpWeight weight = random_weight(rng, cfg.n_ris);
    for (Architecture arch : kOptimized) {
        ScatteringMatrix sm = random_feasible(arch, cfg, 1234);
        const GnpWeight *wp = is_gnp(arch) ? &weight : nullptr;
        CHECK(contains(arch, sm.phi, wp).ok);
    }
    // unit-modulus diagonal makes the global constraint an exact equality
    ScatteringMatrix sm = random_feasible(Architecture::GnpBd, cfg, 77);
    double lhs = std::real((sm.phi * weight.d * sm.phi.adjoint()).trace()) - weight.budget;
    CHECK(std::abs(lhs) < 1e-10 * std::max(1.0, weight.budget));
}

TEST_CASE("random_feasible phases are uniform") {
    SystemConfig cfg;
    cfg.n_ris = 1;
    const int draws = 10000, bins = 16;
    std::vector<int> hist(bins, 0);
    for (int i = 0; i < draws; ++i) {
        ScatteringMatrix sm = random_feasible(Architecture::LnpD, cfg, static_cast<std::uint64_t>(i));
        double theta = std::arg(sm.phi(0, 0));
        if (theta < 0) theta += 2.0 * M_PI;
        int b = std::min(bins - 1, static_cast<int>(theta / (2.0 * M_PI) * bins));
        ++hist[static_cast<std::size_t>(b)];
    }
    double expected = static_cast<double>(draws) / bins;
    double chi2 = 0.0;
    for (int b = 0; b < bins; ++b) {
        double d = hist[static_cast<std::size_t>(b)] - expected;
        chi2 += d * d / expected;
    }
    // 15 degrees of freedom; 0.999 quantile is ~37.7
    CHECK(chi2 < 37.7);
}

TEST_CASE("set nesting holds on random members") {
    Rng rng(8);
    SystemConfig cfg;
    cfg.n_ris = 5;
    for (int trial = 0; trial < 100; ++trial) {
        GnpWeight weight = random_weight(rng, cfg.n_ris);
        Matrix lnpd = oracle::sample_member(Architecture::LnpD, cfg.n_ris, &weight, rng);
        CHECK(contains(Architecture::LnpBd, lnpd).ok);
        CHECK(contains(Architecture::GnpD, lnpd, &weight).ok);
        Matrix lnpbd = oracle::sample_member(Architecture::LnpBd, cfg.n_ris, &weight, rng);
        CHECK(contains(Architecture::GnpBd, lnpbd, &weight).ok);
        Matrix gnpd = oracle::sample_member(Architecture::GnpD, cfg.n_ris, &weight, rng);
        CHECK(contains(Architecture::GnpBd, gnpd, &weight).ok);
    }
}

TEST_CASE("projection error carries the residual") {
    // non-finite input cannot reach joint feasibility and must fail loudly
    Matrix x = Matrix::Constant(4, 4, Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
    try {
        project(Architecture::LnpBd, x);
        CHECK(false);
    } catch (const ProjectionError &e) {
        CHECK((std::isnan(e.residual()) || e.residual() > 0.0));
    }
}
