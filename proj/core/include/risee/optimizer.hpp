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
#include "risee/feasibility.hpp"
#include "risee/surrogate.hpp"
#include "risee/types.hpp"

#include <cstdint>
#include <functional>

namespace risee {

struct InnerSettings {
    double step0 = 1.0;    ///< initial step scale (normalized internally)
    int max_iters = 300;
    double smoothing = 0.0; ///< softmin temperature; 0 uses the hard min supergradient
};

/// Audit hook payload: fired right after each coefficient build so callers can
/// verify tangency / minorization / gradient contracts at every expansion point.
struct ExpansionAudit {
    int outer_iter = 0;
    char step = 'w'; ///< 'w' for the beamformer half-step, 'p' for the scattering one
    int user = 0;
    Architecture arch = Architecture::LnpD;
    const SurrogateCoeffs *coeffs = nullptr;
    const ChannelSet *ch = nullptr;
    const SystemConfig *cfg = nullptr;
};

struct AlgoParams {
    double delta = 1e-3;      ///< relative min-SEE improvement threshold
    int max_outer_iters = 200;
    InnerSettings inner_w{1.0, 300, 0.0};
    InnerSettings inner_phi{1.0, 300, 0.0};
    bool safeguard = true; ///< reject half-steps that do not improve the true objective
    std::function<void(const ExpansionAudit &)> audit;

    void validate() const;
};

/// One row of the per-iteration trace. Metric fields are in bits (clamped);
/// `objective` is the raw min_k zeta_k in nats that the ascent works on.
struct TraceRecord {
    int iter = 0;
    double min_rate = 0.0;
    double min_ee = 0.0;
    double min_see = 0.0;
    double objective = 0.0;
    double budget_violation = 0.0; ///< Tr(C) - P
    double phi_violation = 0.0;    ///< architecture-set violation at the iterate
    double gnp_residual = 0.0;     ///< Tr(G C G^H (Phi^H Phi - I)), 0 when inactive
};

struct IterateState {
    Architecture arch = Architecture::LnpD;
    BeamformerSet w;
    ScatteringMatrix phi;
    std::vector<double> beta; ///< EE linearization coefficients of the last W-step
    std::vector<double> u;    ///< auxiliary u_k = sqrt(max(r~_k, 0)) at the last W-step
    std::vector<double> p;    ///< per-user power terms P_c + eta Tr(W_k W_k^H)
    std::vector<TraceRecord> trace;
    int safeguard_events = 0;
    int beta_clamp_events = 0;

    int outer_iters() const { return trace.empty() ? 0 : trace.back().iter; }
};

/// Generic concave max-min subproblem over a flattened complex variable.
struct InnerProblem {
    std::vector<std::function<double(const Vector &)>> objectives;
    std::vector<std::function<Vector(const Vector &)>> gradients;
    std::function<Vector(const Vector &)> project;
    Vector start;
};

struct InnerResult {
    Vector x;
    double objective = 0.0;
    int iters = 0;
};

/// Projected supergradient ascent on min_k f_k with diminishing steps
/// step0/sqrt(t) and best-iterate tracking. The returned point is feasible and
/// its objective never falls below the start value. Ties in the active
/// objective break toward the lowest index (within 1e-12).
InnerResult solve_inner_maxmin(const InnerProblem &problem, const InnerSettings &settings);

// Flattening helpers shared by the subproblem builders and tests.
Vector pack_beamformers(const BeamformerSet &w);
BeamformerSet unpack_beamformers(const Vector &x, int n_bs, int d_streams, int k_users);
Vector pack_phi(const Matrix &phi);
Matrix unpack_phi(const Vector &x, int n_ris);

/// Raw objective min_k zeta_k (nats, unclamped rates) at an operating point.
double min_see_raw(const ChannelSet &ch, const BeamformerSet &w, const Matrix &phi,
                   const SystemConfig &cfg, double p_c);

/// Initial iterate: Phi is a seeded unit-modulus diagonal (zero for NoRis);
/// W_k spans the top right singular vectors of the direct channel F_k with the
/// power budget split evenly, so Tr(C) = P exactly.
IterateState init_state(const ChannelSet &ch, const SystemConfig &cfg, Architecture arch,
                        std::uint64_t seed);

/// Warm-started iterate from an existing feasible pair.
IterateState init_state_from(const ChannelSet &ch, const SystemConfig &cfg,
                             Architecture arch, BeamformerSet w, Matrix phi);

/// Assembled W-subproblem: objectives alpha_k r~_k + (1-alpha_k)(2 beta_k u_k
/// - beta_k^2 p_k) with u_k eliminated, the trace-budget (plus, for GNP
/// architectures, the power-coupling cone) projection, and the coefficients
/// built at the current iterate.
struct WStepProblem {
    InnerProblem inner;
    std::vector<SurrogateCoeffs> coeffs;
    std::vector<double> beta;
    std::vector<Matrix> h; ///< effective channels at Phi^(l)
    int beta_clamps = 0;
};

WStepProblem build_w_step(const IterateState &state, const ChannelSet &ch,
                          const SystemConfig &cfg, const PowerModel &pm,
                          Architecture arch);

/// Assembled Phi-subproblem: objectives theta_k r^_k with theta_k frozen at
/// W^(l+1), feasibility projection of the architecture set (GNP weight fixed
/// at D = G C^(l+1) G^H).
struct PhiStepProblem {
    InnerProblem inner;
    std::vector<SurrogateCoeffs> coeffs;
    std::vector<double> theta;
    GnpWeight weight;
};

PhiStepProblem build_phi_step(const BeamformerSet &w_next, const Matrix &phi_l,
                              const ChannelSet &ch, const SystemConfig &cfg,
                              const PowerModel &pm, Architecture arch);

/// One beamformer half-step; monotone in the true objective (falls back to the
/// previous iterate when the candidate does not improve it).
void update_w(IterateState &state, const ChannelSet &ch, const SystemConfig &cfg,
              const PowerModel &pm, const AlgoParams &params, int outer_iter);

/// One scattering half-step; identity for NoRis and RandD.
void update_phi(IterateState &state, const ChannelSet &ch, const SystemConfig &cfg,
                const PowerModel &pm, const AlgoParams &params, int outer_iter);

/// Full alternating optimization; stops when the relative min-SEE improvement
/// drops below delta or the outer cap is reached. The recorded objective trace
/// is non-decreasing.
IterateState run_algorithm_one(const ChannelSet &ch, const SystemConfig &cfg,
                               const PowerModel &pm, Architecture arch,
                               const AlgoParams &params, std::uint64_t seed);

/// Same, but starting from a caller-provided iterate (warm start).
IterateState run_algorithm_one_from(const ChannelSet &ch, const SystemConfig &cfg,
                                    const PowerModel &pm, Architecture arch,
                                    const AlgoParams &params, IterateState start);

} // namespace risee
