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

#include "risee/types.hpp"

#include <stdexcept>

namespace risee {

const char *to_string(Architecture a) {
    switch (a) {
    case Architecture::NoRis: return "NoRis";
    case Architecture::RandD: return "RandD";
    case Architecture::LnpD: return "LnpD";
    case Architecture::LnpBd: return "LnpBd";
    case Architecture::GnpD: return "GnpD";
    case Architecture::GnpBd: return "GnpBd";
    }
    return "?";
}

Architecture architecture_from_string(const std::string &name) {
    if (name == "NoRis") return Architecture::NoRis;
    if (name == "RandD") return Architecture::RandD;
    if (name == "LnpD") return Architecture::LnpD;
    if (name == "LnpBd") return Architecture::LnpBd;
    if (name == "GnpD") return Architecture::GnpD;
    if (name == "GnpBd") return Architecture::GnpBd;
    throw std::invalid_argument("unknown architecture: " + name);
}

double SystemConfig::alpha_of(int k) const {
    if (alpha.empty()) return 0.5;
    if (alpha.size() == 1) return alpha[0];
    return alpha.at(static_cast<std::size_t>(k));
}

void SystemConfig::validate() const {
    if (n_bs < 1 || n_u < 1 || k_users < 1 || n_ris < 1 || d_streams < 1)
        throw std::invalid_argument("SystemConfig: all counts must be >= 1");
    if (d_streams > std::min(n_bs, n_u))
        throw std::invalid_argument("SystemConfig: d_streams must not exceed min(n_bs, n_u)");
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("SystemConfig: epsilon must lie in (0, 0.5)");
    if (!(p_budget > 0.0))
        throw std::invalid_argument("SystemConfig: p_budget must be positive");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("SystemConfig: sigma2 must be positive");
    if (n_block < 0.0)
        throw std::invalid_argument("SystemConfig: n_block must be >= 0");
    if (alpha.size() != 1 && alpha.size() != static_cast<std::size_t>(k_users))
        throw std::invalid_argument("SystemConfig: alpha must have 1 or k_users entries");
    for (double a : alpha)
        if (!(a >= 0.0 && a <= 1.0))
            throw std::invalid_argument("SystemConfig: every alpha_k must lie in [0, 1]");
}

void PowerModel::validate() const {
    if (p_t < 0 || p_ris0_d < 0 || p_ris_n_d < 0 || p_ris0_bd < 0 || p_ris_n_bd < 0)
        throw std::invalid_argument("PowerModel: powers must be nonnegative");
}

Matrix BeamformerSet::covariance() const {
    if (w.empty()) return Matrix();
    const Eigen::Index n = w.front().rows();
    Matrix c = Matrix::Zero(n, n);
    for (const Matrix &wk : w) c.noalias() += wk * wk.adjoint();
    // kill roundoff asymmetry so downstream PSD checks are clean
    c = 0.5 * (c + c.adjoint()).eval();
    return c;
}

double BeamformerSet::trace_power() const {
    double p = 0.0;
    for (const Matrix &wk : w) p += wk.squaredNorm();
    return p;
}

} // namespace risee
