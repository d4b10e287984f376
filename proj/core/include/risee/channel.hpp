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

#include <cstdint>
#include <string>

namespace risee {

/// Node placement for one trial. BS at the origin (height 25 m), RIS 130 m away
/// at the same height, users uniform in a 20 m x 20 m square centered at the
/// RIS ground projection, height 1.5 m.
struct ScenarioGeometry {
    Eigen::Vector3d bs{0.0, 0.0, 25.0};
    Eigen::Vector3d ris{130.0, 0.0, 25.0};
    std::vector<Eigen::Vector3d> users;
};

/// How absolute path losses are mapped to the normalized (sigma2 = 1) domain.
///   PerLink   - each link class is referenced to its own geometry-derived
///               reference distance, so all channel entries are O(1).
///   DirectRef - every link is referenced to the direct BS->user reference loss.
///   None      - raw linear gains 10^(-PL/10).
enum class Normalization { PerLink, DirectRef, None };

struct FadingParams {
    double rician_k = 3.0; ///< Rician factor of the BS->RIS link (linear)

    // log-distance path loss in dB: ref + exp * log10(d)
    double ris_pl_ref = 35.6;     ///< BS->RIS and RIS->user links
    double ris_pl_exp = 22.0;
    double direct_pl_ref = 32.6;  ///< direct BS->user link (NLOS)
    double direct_pl_exp = 36.7;

    /// PerLink mode only: reference levels over the unit noise floor, in dB.
    /// The direct BS->user link is NLOS and weak; each reflected element pair
    /// is weaker still but a surface of N elements adds up to N^2 coherent
    /// power on top. The defaults put a 20-element surface a few dB above the
    /// direct path when aligned, matching the regime the surface is meant for.
    double direct_ref_db = -12.0;  ///< direct-link power at the reference distance
    double cascade_ref_db = -30.0; ///< per-element cascade power at the reference

    Normalization normalization = Normalization::PerLink;

    void validate() const;
};

/// Raw channel matrices of one Monte-Carlo draw.
struct ChannelSet {
    Matrix g;                 ///< N_RIS x N_BS, BS->RIS (Rician)
    std::vector<Matrix> g_k;  ///< K of N_u x N_RIS, RIS->user (Rayleigh)
    std::vector<Matrix> f_k;  ///< K of N_u x N_BS, BS->user (Rayleigh)
};

/// Per-link amplitude-squared gains after normalization; exposed so statistical
/// tests can check empirical variances against the configured values.
struct LinkGains {
    double bs_ris = 1.0;
    std::vector<double> ris_user;
    std::vector<double> bs_user;
};

ScenarioGeometry generate_scenario(const SystemConfig &cfg, std::uint64_t seed);

LinkGains link_gains(const ScenarioGeometry &geom, const FadingParams &fp);

/// Draws one ChannelSet. The BS->RIS link combines a deterministic unit-modulus
/// rank-one steering component with an i.i.d. scatter part at the configured
/// Rician factor; the other links are i.i.d. CN(0, gain). Deterministic for a
/// fixed (geometry, params, seed).
ChannelSet generate_channels(const ScenarioGeometry &geom, const FadingParams &fp,
                             const SystemConfig &cfg, std::uint64_t seed);

/// H_k(Phi) = G_k Phi G + F_k (N_u x N_BS).
Matrix effective_channel(const ChannelSet &ch, const Matrix &phi, int k);

/// All users' effective channels at one Phi.
std::vector<Matrix> effective_channels(const ChannelSet &ch, const Matrix &phi);

/// Text container for replaying a trial: dimensions header followed by
/// row-major "re im" pairs per matrix, full double precision.
void save_channels(const ChannelSet &ch, const std::string &path);
ChannelSet load_channels(const std::string &path);

} // namespace risee
