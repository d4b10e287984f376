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

#include "risee/optimizer.hpp"

#include <cstdint>
#include <string>
#include <utility>

namespace risee {

enum class SweepKind { Alpha, RisStaticPower, NRis, TxPower };

const char *to_string(SweepKind kind);
SweepKind sweep_kind_from_string(const std::string &name);

/// One Monte-Carlo experiment: a sweep over `grid` with `trials` channel draws
/// per point, run for every architecture in `archs` on shared per-trial
/// channels. With `chained` set, architectures warm-start along the
/// feasibility-nesting order (RandD -> LnpD -> {GnpD, LnpBd} -> GnpBd), which
/// makes the rate orderings deterministic per trial.
struct ExperimentSpec {
    SweepKind kind = SweepKind::Alpha;
    std::vector<double> grid;
    int trials = 20;
    SystemConfig cfg;
    PowerModel pm;
    FadingParams fading;
    std::vector<Architecture> archs{Architecture::NoRis, Architecture::RandD,
                                    Architecture::LnpD,  Architecture::LnpBd,
                                    Architecture::GnpD,  Architecture::GnpBd};
    std::uint64_t master_seed = 1;
    AlgoParams algo;
    bool chained = true;
    bool timing = false; ///< when false, wall_ms is emitted as 0 so output is reproducible
    int threads = 0;     ///< trial-level parallelism; 0 picks the hardware count

    void validate() const;

    /// Applies one sweep value to the base config/power model.
    std::pair<SystemConfig, PowerModel> materialize(double value) const;
};

struct ResultRow {
    SweepKind kind = SweepKind::Alpha;
    double sweep_value = 0.0;
    Architecture arch = Architecture::NoRis;
    std::uint64_t seed = 0;
    double min_rate = 0.0; ///< bits per channel use
    double min_ee = 0.0;
    double min_see = 0.0;
    int iters = 0;
    double wall_ms = 0.0;
};

/// Channel seed of one (point, trial) cell. Identical across architectures by
/// construction; identical across sweep points as well except for n_ris sweeps,
/// where the channel dimensions change with the point.
std::uint64_t trial_channel_seed(const ExperimentSpec &spec, std::size_t point_idx,
                                 int trial);

/// One cold-started trial of a single architecture.
ResultRow run_trial(const ExperimentSpec &spec, double sweep_value, Architecture arch,
                    std::uint64_t trial_seed);

/// Full result of a trial, for callers that want the final iterate and trace.
struct TrialResult {
    IterateState state;
    MetricsRecord metrics;
    ResultRow row;
};

TrialResult run_trial_full(const ExperimentSpec &spec, double sweep_value,
                           Architecture arch, std::uint64_t trial_seed,
                           const ChannelSet *preloaded = nullptr);

/// Runs every requested architecture on the shared channels of one trial,
/// warm-start chained when the spec asks for it.
std::vector<ResultRow> run_point_trial(const ExperimentSpec &spec, double sweep_value,
                                       std::uint64_t trial_seed,
                                       std::vector<TrialResult> *details = nullptr);

/// Alpha sweep: one averaged (min-rate, min-EE, min-SEE) row per
/// (alpha, architecture), rows sorted by alpha.
std::vector<ResultRow> pareto_sweep(const ExperimentSpec &spec);

/// Generic driver for the ris_static_power / n_ris / tx_power sweep kinds;
/// averaged metrics per (point, architecture).
std::vector<ResultRow> sweep(const ExperimentSpec &spec);

/// Keeps the rows not dominated in the (min_rate, min_ee) plane; result sorted
/// by rate ascending (EE is then non-increasing).
std::vector<ResultRow> pareto_filter(const std::vector<ResultRow> &rows);

/// Fixed schema: sweep_kind,sweep_value,architecture,seed,min_rate,min_ee,
/// min_see,iters,wall_ms. Floats carry 12 significant digits; rows are written
/// in deterministic order. I/O failures surface with the path in the message.
void emit_csv(const std::vector<ResultRow> &rows, const std::string &path);
std::vector<ResultRow> parse_csv(const std::string &path);
std::string csv_header();

} // namespace risee
