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

#include "risee/experiments.hpp"
#include "risee/metrics.hpp"
#include "risee/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace risee {

const char *to_string(SweepKind kind) {
    switch (kind) {
    case SweepKind::Alpha: return "alpha";
    case SweepKind::RisStaticPower: return "ris_static_power";
    case SweepKind::NRis: return "n_ris";
    case SweepKind::TxPower: return "tx_power";
    }
    return "?";
}

SweepKind sweep_kind_from_string(const std::string &name) {
    if (name == "alpha") return SweepKind::Alpha;
    if (name == "ris_static_power") return SweepKind::RisStaticPower;
    if (name == "n_ris") return SweepKind::NRis;
    if (name == "tx_power") return SweepKind::TxPower;
    throw std::invalid_argument("unknown sweep kind: " + name);
}

void ExperimentSpec::validate() const {
    if (grid.empty()) throw std::invalid_argument("ExperimentSpec: grid must be non-empty");
    if (trials < 1) throw std::invalid_argument("ExperimentSpec: trials must be >= 1");
    if (archs.empty()) throw std::invalid_argument("ExperimentSpec: architecture list is empty");
    cfg.validate();
    pm.validate();
    fading.validate();
    algo.validate();
    for (double v : grid) {
        if (kind == SweepKind::Alpha && !(v >= 0.0 && v <= 1.0))
            throw std::invalid_argument("ExperimentSpec: alpha grid values must lie in [0, 1]");
        if (kind == SweepKind::RisStaticPower && v < 0.0)
            throw std::invalid_argument("ExperimentSpec: static powers must be nonnegative");
        if (kind == SweepKind::NRis &&
            (v < 1.0 || std::abs(v - std::round(v)) > 1e-9))
            throw std::invalid_argument("ExperimentSpec: n_ris grid values must be integers >= 1");
    }
}

std::pair<SystemConfig, PowerModel> ExperimentSpec::materialize(double value) const {
    SystemConfig c = cfg;
    PowerModel p = pm;
    switch (kind) {
    case SweepKind::Alpha:
        c.alpha = {value};
        break;
    case SweepKind::RisStaticPower:
        p.p_ris_n_d = value;
        p.p_ris_n_bd = value;
        break;
    case SweepKind::NRis:
        c.n_ris = static_cast<int>(std::llround(value));
        break;
    case SweepKind::TxPower:
        c.p_budget = c.sigma2 * std::pow(10.0, value / 10.0);
        break;
    }
    c.validate();
    return {c, p};
}

std::uint64_t trial_channel_seed(const ExperimentSpec &spec, std::size_t point_idx,
                                 int trial) {
    // Channels are shared across architectures and, except for n_ris sweeps
    // (where dimensions change), across sweep points, so comparisons are paired.
    std::uint64_t point_salt = spec.kind == SweepKind::NRis ? 1000 + point_idx : 0;
    return derive_seed(spec.master_seed, {0x5eedULL, static_cast<std::uint64_t>(trial), point_salt});
}

namespace {

std::uint64_t arch_salt(Architecture a) {
    return 100 + static_cast<std::uint64_t>(a);
}

ChannelSet make_channels(const ExperimentSpec &spec, const SystemConfig &cfg,
                         std::uint64_t trial_seed) {
    ScenarioGeometry geom = generate_scenario(cfg, derive_seed(trial_seed, {1}));
    return generate_channels(geom, spec.fading, cfg, derive_seed(trial_seed, {2}));
}

TrialResult finish_trial(const ExperimentSpec &spec, const SystemConfig &cfg,
                         const PowerModel &pm, double sweep_value, Architecture arch,
                         std::uint64_t trial_seed, const ChannelSet &ch,
                         IterateState state, double wall_ms) {
    TrialResult out;
    double p_c = static_power(pm, arch, cfg.n_ris, cfg.k_users);
    out.metrics = evaluate_metrics(effective_channels(ch, state.phi.phi), state.w, cfg, p_c);
    out.row = {spec.kind,           sweep_value,        arch,
               trial_seed,          out.metrics.min_rate, out.metrics.min_ee,
               out.metrics.min_see, state.outer_iters(), spec.timing ? wall_ms : 0.0};
    out.state = std::move(state);
    return out;
}

} // namespace

TrialResult run_trial_full(const ExperimentSpec &spec, double sweep_value,
                           Architecture arch, std::uint64_t trial_seed,
                           const ChannelSet *preloaded) {
    auto [cfg, pm] = spec.materialize(sweep_value);
    ChannelSet ch = preloaded ? *preloaded : make_channels(spec, cfg, trial_seed);
    auto t0 = std::chrono::steady_clock::now();
    IterateState state = run_algorithm_one(ch, cfg, pm, arch, spec.algo,
                                           derive_seed(trial_seed, {arch_salt(arch)}));
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return finish_trial(spec, cfg, pm, sweep_value, arch, trial_seed, ch, std::move(state), wall_ms);
}

ResultRow run_trial(const ExperimentSpec &spec, double sweep_value, Architecture arch,
                    std::uint64_t trial_seed) {
    return run_trial_full(spec, sweep_value, arch, trial_seed).row;
}

namespace {

// Warm-start dependencies along the feasibility nesting.
std::vector<Architecture> chain_closure(const std::vector<Architecture> &requested) {
    auto has = [](const std::vector<Architecture> &v, Architecture a) {
        return std::find(v.begin(), v.end(), a) != v.end();
    };
    std::vector<Architecture> need = requested;
    if (has(need, Architecture::GnpBd)) {
        if (!has(need, Architecture::GnpD)) need.push_back(Architecture::GnpD);
        if (!has(need, Architecture::LnpBd)) need.push_back(Architecture::LnpBd);
    }
    if (has(need, Architecture::GnpD) || has(need, Architecture::LnpBd))
        if (!has(need, Architecture::LnpD)) need.push_back(Architecture::LnpD);
    if (has(need, Architecture::LnpD)) {
        if (!has(need, Architecture::RandD)) need.push_back(Architecture::RandD);
        if (!has(need, Architecture::NoRis)) need.push_back(Architecture::NoRis);
    }
    // canonical execution order
    const Architecture order[] = {Architecture::NoRis, Architecture::RandD, Architecture::LnpD,
                                  Architecture::GnpD,  Architecture::LnpBd, Architecture::GnpBd};
    std::vector<Architecture> sorted;
    for (Architecture a : order)
        if (has(need, a)) sorted.push_back(a);
    return sorted;
}

} // namespace

std::vector<ResultRow> run_point_trial(const ExperimentSpec &spec, double sweep_value,
                                       std::uint64_t trial_seed,
                                       std::vector<TrialResult> *details) {
    auto [cfg, pm] = spec.materialize(sweep_value);
    ChannelSet ch = make_channels(spec, cfg, trial_seed);

    std::map<Architecture, TrialResult> done;
    std::vector<Architecture> order =
        spec.chained ? chain_closure(spec.archs) : spec.archs;

    for (Architecture arch : order) {
        auto t0 = std::chrono::steady_clock::now();
        IterateState start;
        bool warm = false;
        if (spec.chained) {
            auto warm_from = [&](Architecture src) {
                const IterateState &s = done.at(src).state;
                start = init_state_from(ch, cfg, arch, s.w, s.phi.phi);
                warm = true;
            };
            switch (arch) {
            case Architecture::LnpD: {
                // better of the random-reflection solution and the direct-only
                // solution with the reflection switched off (Phi = 0 is
                // LnpD-feasible), evaluated under the LnpD power model
                double p_c = static_power(pm, arch, cfg.n_ris, cfg.k_users);
                const IterateState &r = done.at(Architecture::RandD).state;
                const IterateState &n = done.at(Architecture::NoRis).state;
                double fr = min_see_raw(ch, r.w, r.phi.phi, cfg, p_c);
                double fn = min_see_raw(ch, n.w, n.phi.phi, cfg, p_c);
                const IterateState &best = fr >= fn ? r : n;
                start = init_state_from(ch, cfg, arch, best.w, best.phi.phi);
                warm = true;
                break;
            }
            case Architecture::GnpD:
            case Architecture::LnpBd:
                warm_from(Architecture::LnpD);
                break;
            case Architecture::GnpBd: {
                // start from the better of the two nested solutions under the
                // BD power model
                double p_c = static_power(pm, arch, cfg.n_ris, cfg.k_users);
                const IterateState &a = done.at(Architecture::GnpD).state;
                const IterateState &b = done.at(Architecture::LnpBd).state;
                double fa = min_see_raw(ch, a.w, a.phi.phi, cfg, p_c);
                double fb = min_see_raw(ch, b.w, b.phi.phi, cfg, p_c);
                const IterateState &best = fa >= fb ? a : b;
                start = init_state_from(ch, cfg, arch, best.w, best.phi.phi);
                warm = true;
                break;
            }
            default:
                break;
            }
        }
        IterateState state =
            warm ? run_algorithm_one_from(ch, cfg, pm, arch, spec.algo, std::move(start))
                 : run_algorithm_one(ch, cfg, pm, arch, spec.algo,
                                     derive_seed(trial_seed, {arch_salt(arch)}));
        double wall_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        done[arch] = finish_trial(spec, cfg, pm, sweep_value, arch, trial_seed, ch,
                                  std::move(state), wall_ms);
    }

    std::vector<ResultRow> rows;
    for (Architecture arch : spec.archs) {
        rows.push_back(done.at(arch).row);
        if (details) details->push_back(done.at(arch));
    }
    return rows;
}

namespace {

void parallel_over_cells(int n_cells, int threads, const std::function<void(int)> &work) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    int n_threads = threads > 0 ? threads : std::max(1, hw);
    n_threads = std::min(n_threads, n_cells);
    if (n_threads <= 1) {
        for (int i = 0; i < n_cells; ++i) work(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) {
        pool.emplace_back([&, t]() {
            try {
                for (int i = t; i < n_cells; i += n_threads) work(i);
            } catch (...) {
                errors[static_cast<std::size_t>(t)] = std::current_exception();
            }
        });
    }
    for (auto &th : pool) th.join();
    for (auto &e : errors)
        if (e) std::rethrow_exception(e);
}

std::vector<ResultRow> run_grid(const ExperimentSpec &spec) {
    spec.validate();
    const int points = static_cast<int>(spec.grid.size());
    const int cells = points * spec.trials;
    std::vector<std::vector<ResultRow>> cell_rows(static_cast<std::size_t>(cells));

    parallel_over_cells(cells, spec.threads, [&](int cell) {
        int pi = cell / spec.trials;
        int trial = cell % spec.trials;
        std::uint64_t seed = trial_channel_seed(spec, static_cast<std::size_t>(pi), trial);
        cell_rows[static_cast<std::size_t>(cell)] =
            run_point_trial(spec, spec.grid[static_cast<std::size_t>(pi)], seed);
    });

    // average per (point, architecture), deterministic order
    std::vector<ResultRow> out;
    for (int pi = 0; pi < points; ++pi) {
        for (Architecture arch : spec.archs) {
            ResultRow acc;
            acc.kind = spec.kind;
            acc.sweep_value = spec.grid[static_cast<std::size_t>(pi)];
            acc.arch = arch;
            acc.seed = spec.master_seed;
            double iters = 0.0;
            for (int trial = 0; trial < spec.trials; ++trial) {
                const auto &rows = cell_rows[static_cast<std::size_t>(pi * spec.trials + trial)];
                auto it = std::find_if(rows.begin(), rows.end(),
                                       [&](const ResultRow &r) { return r.arch == arch; });
                acc.min_rate += it->min_rate;
                acc.min_ee += it->min_ee;
                acc.min_see += it->min_see;
                acc.wall_ms += it->wall_ms;
                iters += it->iters;
            }
            const double n = spec.trials;
            acc.min_rate /= n;
            acc.min_ee /= n;
            acc.min_see /= n;
            acc.wall_ms /= n;
            acc.iters = static_cast<int>(std::lround(iters / n));
            out.push_back(acc);
        }
    }
    return out;
}

} // namespace

std::vector<ResultRow> pareto_sweep(const ExperimentSpec &spec) {
    if (spec.kind != SweepKind::Alpha)
        throw std::invalid_argument("pareto_sweep: spec.kind must be the alpha sweep");
    std::vector<ResultRow> rows = run_grid(spec);
    std::stable_sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
        return a.sweep_value < b.sweep_value;
    });
    return rows;
}

std::vector<ResultRow> sweep(const ExperimentSpec &spec) {
    if (spec.kind == SweepKind::Alpha)
        return pareto_sweep(spec);
    return run_grid(spec);
}

std::vector<ResultRow> pareto_filter(const std::vector<ResultRow> &rows) {
    std::vector<ResultRow> kept;
    for (const ResultRow &r : rows) {
        bool dominated = false;
        for (const ResultRow &s : rows) {
            if (&s == &r) continue;
            bool geq = s.min_rate >= r.min_rate && s.min_ee >= r.min_ee;
            bool strict = s.min_rate > r.min_rate || s.min_ee > r.min_ee;
            if (geq && strict) {
                dominated = true;
                break;
            }
        }
        if (!dominated) kept.push_back(r);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const ResultRow &a, const ResultRow &b) {
        return a.min_rate < b.min_rate;
    });
    return kept;
}

std::string csv_header() {
    return "sweep_kind,sweep_value,architecture,seed,min_rate,min_ee,min_see,iters,wall_ms";
}

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace

void emit_csv(const std::vector<ResultRow> &rows, const std::string &path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("emit_csv: cannot open " + path);
    os << csv_header() << '\n';
    for (const ResultRow &r : rows) {
        os << to_string(r.kind) << ',' << fmt_double(r.sweep_value) << ',' << to_string(r.arch)
           << ',' << r.seed << ',' << fmt_double(r.min_rate) << ',' << fmt_double(r.min_ee)
           << ',' << fmt_double(r.min_see) << ',' << r.iters << ',' << fmt_double(r.wall_ms)
           << '\n';
    }
    if (!os) throw std::runtime_error("emit_csv: write failed for " + path);
}

std::vector<ResultRow> parse_csv(const std::string &path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("parse_csv: cannot open " + path);
    std::string line;
    if (!std::getline(is, line) || line != csv_header())
        throw std::runtime_error("parse_csv: bad header in " + path);
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string field;
        auto next = [&]() {
            if (!std::getline(ss, field, ','))
                throw std::runtime_error("parse_csv: truncated row in " + path);
            return field;
        };
        ResultRow r;
        r.kind = sweep_kind_from_string(next());
        r.sweep_value = std::stod(next());
        r.arch = architecture_from_string(next());
        r.seed = std::stoull(next());
        r.min_rate = std::stod(next());
        r.min_ee = std::stod(next());
        r.min_see = std::stod(next());
        r.iters = std::stoi(next());
        r.wall_ms = std::stod(next());
        rows.push_back(r);
    }
    return rows;
}

} // namespace risee
