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
#include <risee/channel.hpp>
#include <risee/rng.hpp>

#include <cstdio>
#include <filesystem>

using namespace risee;

namespace {

SystemConfig chan_config(int n_ris = 4, int n_bs = 4, int n_u = 2, int k = 2) {
    SystemConfig cfg;
    cfg.n_bs = n_bs;
    cfg.n_u = n_u;
    cfg.k_users = k;
    cfg.n_ris = n_ris;
    cfg.d_streams = std::min(n_bs, n_u);
    return cfg;
}

} // namespace

TEST_CASE("scenario geometry honors the layout") {
    SystemConfig cfg = chan_config();
    ScenarioGeometry geom = generate_scenario(cfg, 42);
    CHECK(geom.users.size() == 2);
    CHECK(geom.bs.z() == 25.0);
    CHECK(geom.ris.z() == 25.0);
    CHECK((geom.ris - geom.bs).norm() == doctest::Approx(130.0));
    for (const auto &u : geom.users) {
        CHECK(u.z() == 1.5);
        CHECK(std::abs(u.x() - geom.ris.x()) <= 10.0);
        CHECK(std::abs(u.y() - geom.ris.y()) <= 10.0);
    }

    ScenarioGeometry again = generate_scenario(cfg, 42);
    for (std::size_t k = 0; k < geom.users.size(); ++k)
        CHECK((geom.users[k] - again.users[k]).norm() == 0.0);
}

TEST_CASE("user draws average to the square center") {
    SystemConfig cfg = chan_config();
    cfg.k_users = 1;
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    const int draws = 10000;
    for (int i = 0; i < draws; ++i)
        acc += generate_scenario(cfg, static_cast<std::uint64_t>(i)).users[0];
    acc /= draws;
    CHECK(std::abs(acc.x() - 130.0) < 0.5);
    CHECK(std::abs(acc.y() - 0.0) < 0.5);
}

TEST_CASE("channel generation is deterministic per seed") {
    SystemConfig cfg = chan_config();
    FadingParams fp;
    ScenarioGeometry geom = generate_scenario(cfg, 7);
    ChannelSet a = generate_channels(geom, fp, cfg, 99);
    ChannelSet b = generate_channels(geom, fp, cfg, 99);
    CHECK((a.g - b.g).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < cfg.k_users; ++k) {
        CHECK((a.g_k[k] - b.g_k[k]).cwiseAbs().maxCoeff() == 0.0);
        CHECK((a.f_k[k] - b.f_k[k]).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("Rician factor shows up in the LOS/scatter power split") {
    SystemConfig cfg = chan_config(4, 4, 2, 1);
    FadingParams fp;
    fp.rician_k = 3.0;
    ScenarioGeometry geom = generate_scenario(cfg, 11);
    double gain = link_gains(geom, fp).bs_ris;

    const int draws = 10000;
    Matrix mean = Matrix::Zero(cfg.n_ris, cfg.n_bs);
    std::vector<Matrix> all;
    all.reserve(draws);
    for (int i = 0; i < draws; ++i) {
        all.push_back(generate_channels(geom, fp, cfg, 1000 + static_cast<std::uint64_t>(i)).g);
        mean += all.back();
    }
    mean /= draws;
    // the empirical mean estimates the deterministic LOS part
    double los_power = mean.cwiseAbs2().mean();
    double scatter_power = 0.0;
    for (const Matrix &g : all) scatter_power += (g - mean).cwiseAbs2().mean();
    scatter_power /= draws;
    CHECK(los_power / scatter_power == doctest::Approx(3.0).epsilon(0.05));
    CHECK(los_power + scatter_power == doctest::Approx(gain).epsilon(0.05));
}

TEST_CASE("direct-link moments match the configured gain") {
    SystemConfig cfg = chan_config(2, 5, 4, 1);
    FadingParams fp;
    ScenarioGeometry geom = generate_scenario(cfg, 13);
    double gain = link_gains(geom, fp).bs_user[0];

    const int draws = 5000; // 5000 * 20 entries = 1e5 samples
    Complex mean = 0.0;
    double var = 0.0;
    std::size_t count = 0;
    for (int i = 0; i < draws; ++i) {
        ChannelSet ch = generate_channels(geom, fp, cfg, 555 + static_cast<std::uint64_t>(i));
        mean += ch.f_k[0].sum();
        var += ch.f_k[0].cwiseAbs2().sum();
        count += static_cast<std::size_t>(ch.f_k[0].size());
    }
    mean /= static_cast<double>(count);
    var /= static_cast<double>(count);
    CHECK(std::abs(mean) < 0.02 * std::sqrt(gain));
    CHECK(var == doctest::Approx(gain).epsilon(0.03));
}

TEST_CASE("effective channel composition") {
    SystemConfig cfg = chan_config();
    FadingParams fp;
    ScenarioGeometry geom = generate_scenario(cfg, 3);
    ChannelSet ch = generate_channels(geom, fp, cfg, 31);

    Matrix zero = Matrix::Zero(cfg.n_ris, cfg.n_ris);
    CHECK((effective_channel(ch, zero, 0) - ch.f_k[0]).cwiseAbs().maxCoeff() == 0.0);

    Matrix eye = Matrix::Identity(cfg.n_ris, cfg.n_ris);
    Matrix expected = ch.g_k[1] * ch.g + ch.f_k[1];
    CHECK((effective_channel(ch, eye, 1) - expected).cwiseAbs().maxCoeff() < 1e-12);

    Rng rng(17);
    Matrix phi = oracle::random_matrix(rng, cfg.n_ris, cfg.n_ris);
    Matrix naive = oracle::naive_effective_channel(ch.g_k[0], phi, ch.g, ch.f_k[0]);
    CHECK((effective_channel(ch, phi, 0) - naive).cwiseAbs().maxCoeff() < 1e-12);

    // affine in Phi
    Matrix phi2 = oracle::random_matrix(rng, cfg.n_ris, cfg.n_ris);
    Matrix lhs = effective_channel(ch, phi + phi2, 0) - effective_channel(ch, phi2, 0);
    Matrix rhs = effective_channel(ch, phi, 0) - ch.f_k[0];
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

    Matrix bad = Matrix::Zero(cfg.n_ris + 1, cfg.n_ris + 1);
    CHECK_THROWS_AS(effective_channel(ch, bad, 0), std::invalid_argument);
}

TEST_CASE("draws from distinct seeds decorrelate") {
    SystemConfig cfg = chan_config(2, 2, 1, 1);
    FadingParams fp;
    ScenarioGeometry geom = generate_scenario(cfg, 5);
    const int draws = 1000;
    std::vector<double> a, b;
    for (int i = 0; i < draws; ++i) {
        a.push_back(std::real(
            generate_channels(geom, fp, cfg, static_cast<std::uint64_t>(i)).f_k[0](0, 0)));
        b.push_back(std::real(
            generate_channels(geom, fp, cfg, 700000 + static_cast<std::uint64_t>(i)).f_k[0](0, 0)));
    }
    double ma = 0, mb = 0;
    for (int i = 0; i < draws; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= draws;
    mb /= draws;
    double cov = 0, va = 0, vb = 0;
    for (int i = 0; i < draws; ++i) {
        cov += (a[i] - ma) * (b[i] - mb);
        va += (a[i] - ma) * (a[i] - ma);
        vb += (b[i] - mb) * (b[i] - mb);
    }
    CHECK(std::abs(cov / std::sqrt(va * vb)) < 0.05);
}

TEST_CASE("channel dump round-trips exactly") {
    SystemConfig cfg = chan_config();
    FadingParams fp;
    ScenarioGeometry geom = generate_scenario(cfg, 21);
    ChannelSet ch = generate_channels(geom, fp, cfg, 22);

    std::string path = (std::filesystem::temp_directory_path() / "risee_chan_test.txt").string();
    save_channels(ch, path);
    ChannelSet back = load_channels(path);
    CHECK((ch.g - back.g).cwiseAbs().maxCoeff() == 0.0);
    for (int k = 0; k < cfg.k_users; ++k) {
        CHECK((ch.g_k[k] - back.g_k[k]).cwiseAbs().maxCoeff() == 0.0);
        CHECK((ch.f_k[k] - back.f_k[k]).cwiseAbs().maxCoeff() == 0.0);
    }
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_channels(path), std::runtime_error);
}
