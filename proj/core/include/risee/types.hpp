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

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace risee {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Surface architectures. NoRis and RandD are baselines; the other four are the
/// optimized variants (locally/globally nearly-passive, diagonal/beyond-diagonal).
enum class Architecture { NoRis, RandD, LnpD, LnpBd, GnpD, GnpBd };

constexpr bool is_bd(Architecture a) {
    return a == Architecture::LnpBd || a == Architecture::GnpBd;
}
constexpr bool is_gnp(Architecture a) {
    return a == Architecture::GnpD || a == Architecture::GnpBd;
}
constexpr bool uses_ris(Architecture a) { return a != Architecture::NoRis; }
constexpr bool optimizes_phi(Architecture a) {
    return a != Architecture::NoRis && a != Architecture::RandD;
}

const char *to_string(Architecture a);
Architecture architecture_from_string(const std::string &name);

/// All counts and powers describing one downlink instance. Powers are linear and
/// normalized so that the per-antenna noise power is the unit (sigma2 defaults to 1).
struct SystemConfig {
    int n_bs = 4;      ///< transmit antennas at the BS
    int n_u = 4;       ///< receive antennas per user
    int k_users = 2;   ///< number of users
    int n_ris = 12;    ///< RIS elements
    int d_streams = 2; ///< data streams per user (columns of each W_k)

    double n_block = 256; ///< codeword length n; 0 means infinite blocklength
    double epsilon = 1e-5;
    double sigma2 = 1.0;
    double p_budget = 10.0; ///< BS transmit power budget (linear over noise)
    double eta = 2.5;       ///< inverse power-amplifier efficiency

    /// Per-user tradeoff weights; a single entry broadcasts to all users.
    std::vector<double> alpha{0.5};

    double alpha_of(int k) const;
    void validate() const;
};

/// Static power consumption model. All values in watts.
struct PowerModel {
    double p_t = 2.5;        ///< per-user base static power (BS share + UE)
    double p_ris0_d = 0.0;   ///< diagonal architecture base power
    double p_ris_n_d = 0.02; ///< per-element power, diagonal
    double p_ris0_bd = 0.0;  ///< beyond-diagonal architecture base power
    double p_ris_n_bd = 0.02; ///< per-circuit power, beyond-diagonal

    void validate() const;
};

/// Per-user precoders W_k (n_bs x d_streams each) and the derived transmit
/// covariance C = sum_k W_k W_k^H.
struct BeamformerSet {
    std::vector<Matrix> w;

    Matrix covariance() const;
    /// Tr(C), the total transmit power.
    double trace_power() const;
};

/// Per-user metrics evaluated at one operating point. Rates are reported in
/// bits per channel use and clamped at zero; the optimizer works on raw values.
struct MetricsRecord {
    std::vector<double> rate; ///< bits / channel use, clamped >= 0
    std::vector<double> ee;   ///< rate / watt
    std::vector<double> see;  ///< alpha_k * rate + (1 - alpha_k) * ee
    double min_rate = 0.0;
    double min_ee = 0.0;
    double min_see = 0.0;
    double static_power = 0.0; ///< P_c used in the EE denominators
};

} // namespace risee
