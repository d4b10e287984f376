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

#include "risee/channel.hpp"
#include "risee/rng.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace risee {

void FadingParams::validate() const {
    if (rician_k < 0.0)
        throw std::invalid_argument("FadingParams: rician_k must be >= 0");
    if (ris_pl_exp <= 0.0 || direct_pl_exp <= 0.0)
        throw std::invalid_argument("FadingParams: path-loss exponents must be positive");
}

ScenarioGeometry generate_scenario(const SystemConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    ScenarioGeometry geom;
    Rng rng(seed);
    geom.users.reserve(static_cast<std::size_t>(cfg.k_users));
    for (int k = 0; k < cfg.k_users; ++k) {
        double x = rng.uniform(geom.ris.x() - 10.0, geom.ris.x() + 10.0);
        double y = rng.uniform(geom.ris.y() - 10.0, geom.ris.y() + 10.0);
        geom.users.emplace_back(x, y, 1.5);
    }
    return geom;
}

namespace {

double pathloss_db(double ref, double exp, double dist) {
    return ref + exp * std::log10(std::max(dist, 1.0));
}

} // namespace

LinkGains link_gains(const ScenarioGeometry &geom, const FadingParams &fp) {
    fp.validate();
    LinkGains gains;
    const double user_height = geom.users.empty() ? 1.5 : geom.users.front().z();
    const Eigen::Vector3d square_center(geom.ris.x(), geom.ris.y(), user_height);

    const double d_bs_ris = (geom.ris - geom.bs).norm();
    const double d_ris_ref = (square_center - geom.ris).norm();
    const double d_direct_ref = (square_center - geom.bs).norm();

    double ref_bs_ris = 0.0, ref_ris_user = 0.0, ref_direct = 0.0;
    switch (fp.normalization) {
    case Normalization::PerLink:
        ref_bs_ris = pathloss_db(fp.ris_pl_ref, fp.ris_pl_exp, d_bs_ris);
        ref_ris_user = pathloss_db(fp.ris_pl_ref, fp.ris_pl_exp, d_ris_ref);
        ref_direct = pathloss_db(fp.direct_pl_ref, fp.direct_pl_exp, d_direct_ref);
        break;
    case Normalization::DirectRef: {
        double ref = pathloss_db(fp.direct_pl_ref, fp.direct_pl_exp, d_direct_ref);
        ref_bs_ris = ref_ris_user = ref_direct = ref;
        break;
    }
    case Normalization::None:
        break;
    }

    // In PerLink mode the reference levels are set by direct_ref_db and
    // cascade_ref_db; the geometric variation around the reference remains.
    const bool per_link = fp.normalization == Normalization::PerLink;
    const double cascade_db = per_link ? fp.cascade_ref_db : 0.0;
    const double direct_db = per_link ? fp.direct_ref_db : 0.0;
    gains.bs_ris = std::pow(10.0, -(pathloss_db(fp.ris_pl_ref, fp.ris_pl_exp, d_bs_ris) - ref_bs_ris) / 10.0);
    for (const auto &u : geom.users) {
        double d_ru = (u - geom.ris).norm();
        double d_bu = (u - geom.bs).norm();
        gains.ris_user.push_back(std::pow(
            10.0,
            (cascade_db - (pathloss_db(fp.ris_pl_ref, fp.ris_pl_exp, d_ru) - ref_ris_user)) / 10.0));
        gains.bs_user.push_back(std::pow(
            10.0,
            (direct_db - (pathloss_db(fp.direct_pl_ref, fp.direct_pl_exp, d_bu) - ref_direct)) / 10.0));
    }
    return gains;
}

namespace {

// Deterministic rank-one steering component with unit-modulus entries;
// uniform linear arrays along the y axis at both ends.
Matrix los_component(const ScenarioGeometry &geom, int n_ris, int n_bs) {
    Eigen::Vector3d dir = (geom.ris - geom.bs).normalized();
    const double cos_y = dir.y();
    Vector a_ris(n_ris), a_bs(n_bs);
    for (int m = 0; m < n_ris; ++m) a_ris(m) = std::polar(1.0, M_PI * m * cos_y);
    for (int m = 0; m < n_bs; ++m) a_bs(m) = std::polar(1.0, M_PI * m * cos_y);
    return a_ris * a_bs.adjoint();
}

Matrix draw_iid(Rng &rng, Eigen::Index rows, Eigen::Index cols, double power_gain) {
    const double amp = std::sqrt(power_gain);
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = amp * rng.cgauss();
    return m;
}

} // namespace

ChannelSet generate_channels(const ScenarioGeometry &geom, const FadingParams &fp,
                             const SystemConfig &cfg, std::uint64_t seed) {
    cfg.validate();
    fp.validate();
    if (geom.users.size() != static_cast<std::size_t>(cfg.k_users))
        throw std::invalid_argument("generate_channels: geometry user count mismatch");

    LinkGains gains = link_gains(geom, fp);
    Rng rng(seed);
    ChannelSet ch;

    const double kappa = fp.rician_k;
    const double los_w = std::sqrt(kappa / (1.0 + kappa));
    const double nlos_w = std::sqrt(1.0 / (1.0 + kappa));
    Matrix scatter = draw_iid(rng, cfg.n_ris, cfg.n_bs, 1.0);
    ch.g = std::sqrt(gains.bs_ris) *
           (los_w * los_component(geom, cfg.n_ris, cfg.n_bs) + nlos_w * scatter);

    ch.g_k.reserve(static_cast<std::size_t>(cfg.k_users));
    ch.f_k.reserve(static_cast<std::size_t>(cfg.k_users));
    for (int k = 0; k < cfg.k_users; ++k) {
        ch.g_k.push_back(draw_iid(rng, cfg.n_u, cfg.n_ris, gains.ris_user[static_cast<std::size_t>(k)]));
        ch.f_k.push_back(draw_iid(rng, cfg.n_u, cfg.n_bs, gains.bs_user[static_cast<std::size_t>(k)]));
    }
    return ch;
}

Matrix effective_channel(const ChannelSet &ch, const Matrix &phi, int k) {
    const Matrix &gk = ch.g_k.at(static_cast<std::size_t>(k));
    const Matrix &fk = ch.f_k.at(static_cast<std::size_t>(k));
    if (phi.rows() != ch.g.rows() || phi.cols() != ch.g.rows())
        throw std::invalid_argument("effective_channel: Phi must be N_RIS x N_RIS");
    return fk + gk * phi * ch.g;
}

std::vector<Matrix> effective_channels(const ChannelSet &ch, const Matrix &phi) {
    std::vector<Matrix> h;
    h.reserve(ch.g_k.size());
    for (std::size_t k = 0; k < ch.g_k.size(); ++k)
        h.push_back(effective_channel(ch, phi, static_cast<int>(k)));
    return h;
}

namespace {

void write_matrix(std::ostream &os, const Matrix &m) {
    os << m.rows() << ' ' << m.cols() << '\n';
    os.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) os << ' ';
            os << std::real(m(r, c)) << ' ' << std::imag(m(r, c));
        }
        os << '\n';
    }
}

Matrix read_matrix(std::istream &is) {
    Eigen::Index rows = 0, cols = 0;
    if (!(is >> rows >> cols)) throw std::runtime_error("channel file: bad matrix header");
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) {
            double re, im;
            if (!(is >> re >> im)) throw std::runtime_error("channel file: truncated matrix data");
            m(r, c) = Complex(re, im);
        }
    return m;
}

} // namespace

void save_channels(const ChannelSet &ch, const std::string &path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_channels: cannot open " + path);
    os << "risee-channels 1\n";
    os << ch.g_k.size() << '\n';
    write_matrix(os, ch.g);
    for (const auto &m : ch.g_k) write_matrix(os, m);
    for (const auto &m : ch.f_k) write_matrix(os, m);
    if (!os) throw std::runtime_error("save_channels: write failed for " + path);
}

ChannelSet load_channels(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_channels: cannot open " + path);
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != "risee-channels" || version != 1)
        throw std::runtime_error("load_channels: unrecognized format in " + path);
    std::size_t k_users = 0;
    is >> k_users;
    ChannelSet ch;
    ch.g = read_matrix(is);
    for (std::size_t k = 0; k < k_users; ++k) ch.g_k.push_back(read_matrix(is));
    for (std::size_t k = 0; k < k_users; ++k) ch.f_k.push_back(read_matrix(is));
    return ch;
}

} // namespace risee
