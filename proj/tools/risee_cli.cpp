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

#include <CLI11.hpp>

#include <risee/experiments.hpp>
#include <risee/metrics.hpp>
#include <risee/rng.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace risee;

namespace {

struct CliOptions {
    ExperimentSpec spec;
    std::vector<std::string> arch_names;
    std::string out_path = "results.csv";
    std::string trace_path;
    std::string dump_channels_path;
    std::string load_channels_path;
    double tx_power_db = 10.0;
    bool tx_power_db_set = false;
    double single_value = 0.5;
    Architecture single_arch = Architecture::GnpBd;
    int trial_index = 0;
};

void add_common_flags(CLI::App *cmd, CliOptions &opt) {
    ExperimentSpec &spec = opt.spec;
    SystemConfig &cfg = spec.cfg;
    PowerModel &pm = spec.pm;
    FadingParams &fading = spec.fading;
    AlgoParams &algo = spec.algo;

    cmd->add_option("--n-bs", cfg.n_bs, "transmit antennas at the BS");
    cmd->add_option("--n-u", cfg.n_u, "receive antennas per user");
    cmd->add_option("--users", cfg.k_users, "number of users");
    cmd->add_option("--n-ris", cfg.n_ris, "RIS elements");
    cmd->add_option("--streams", cfg.d_streams, "data streams per user");
    cmd->add_option("--blocklength", cfg.n_block, "codeword length n (0 = infinite)");
    cmd->add_option("--epsilon", cfg.epsilon, "target error probability");
    cmd->add_option("--sigma2", cfg.sigma2, "per-antenna noise power");
    cmd->add_option("--p-budget", cfg.p_budget, "transmit power budget (linear)");
    auto *pdb = cmd->add_option("--tx-power-db", opt.tx_power_db,
                                "transmit power budget in dB over the noise floor");
    pdb->each([&opt](const std::string &) { opt.tx_power_db_set = true; });
    cmd->add_option("--eta", cfg.eta, "inverse power-amplifier efficiency");
    cmd->add_option("--alpha", cfg.alpha, "SE/EE tradeoff weight(s), one or per user");

    cmd->add_option("--p-t", pm.p_t, "per-user base static power [W]");
    cmd->add_option("--p-ris0-d", pm.p_ris0_d, "diagonal architecture base power [W]");
    cmd->add_option("--p-ris-n-d", pm.p_ris_n_d, "per-element power, diagonal [W]");
    cmd->add_option("--p-ris0-bd", pm.p_ris0_bd, "BD architecture base power [W]");
    cmd->add_option("--p-ris-n-bd", pm.p_ris_n_bd, "per-circuit power, BD [W]");

    cmd->add_option("--rician-k", fading.rician_k, "Rician factor of the BS-RIS link");
    cmd->add_option("--direct-ref-db", fading.direct_ref_db,
                    "direct-link reference power over noise [dB]");
    cmd->add_option("--cascade-ref-db", fading.cascade_ref_db,
                    "per-element cascade reference power over noise [dB]");
    std::map<std::string, Normalization> norm_map{{"per_link", Normalization::PerLink},
                                                  {"direct_ref", Normalization::DirectRef},
                                                  {"none", Normalization::None}};
    cmd->add_option("--normalization", fading.normalization, "path-gain normalization mode")
        ->transform(CLI::CheckedTransformer(norm_map, CLI::ignore_case));

    cmd->add_option("--delta", algo.delta, "relative convergence threshold");
    cmd->add_option("--max-outer", algo.max_outer_iters, "outer iteration cap");
    cmd->add_option("--inner-w-iters", algo.inner_w.max_iters, "W-step inner iterations");
    cmd->add_option("--inner-phi-iters", algo.inner_phi.max_iters, "Phi-step inner iterations");
    cmd->add_option("--inner-step0", algo.inner_w.step0, "inner solver step scale");
    cmd->add_option("--smoothing", algo.inner_w.smoothing, "softmin temperature (0 = hard min)");

    cmd->add_option("--seed", spec.master_seed, "master seed");
    cmd->add_option("--trials", spec.trials, "Monte-Carlo trials per point");
    cmd->add_option("--arch", opt.arch_names, "architecture (repeatable)")
        ->check(CLI::IsMember({"NoRis", "RandD", "LnpD", "LnpBd", "GnpD", "GnpBd"}));
    cmd->add_flag("!--no-chain", spec.chained,
                  "disable warm-start chaining across architectures");
    cmd->add_flag("--timing", spec.timing, "record wall-clock times (breaks reproducibility)");
    cmd->add_option("--threads", spec.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", opt.out_path, "output CSV path");
    cmd->add_option("--trace", opt.trace_path, "write per-iteration optimizer traces to a CSV");
}

void finalize_spec(CliOptions &opt) {
    if (opt.tx_power_db_set)
        opt.spec.cfg.p_budget = opt.spec.cfg.sigma2 * std::pow(10.0, opt.tx_power_db / 10.0);
    if (!opt.arch_names.empty()) {
        opt.spec.archs.clear();
        for (const auto &name : opt.arch_names)
            opt.spec.archs.push_back(architecture_from_string(name));
    }
    // mirror the shared inner settings onto the Phi step where not set apart
    opt.spec.algo.inner_phi.step0 = opt.spec.algo.inner_w.step0;
    opt.spec.algo.inner_phi.smoothing = opt.spec.algo.inner_w.smoothing;
}

void write_trace(const std::string &path, const std::vector<TrialResult> &details,
                 const ExperimentSpec &spec) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("trace: cannot open " + path);
    os << "architecture,seed,iter,min_rate,min_ee,min_see,objective,budget_violation,"
          "phi_violation,gnp_residual\n";
    char buf[256];
    for (const TrialResult &d : details) {
        for (const TraceRecord &r : d.state.trace) {
            std::snprintf(buf, sizeof(buf), "%s,%llu,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                          to_string(d.state.arch),
                          static_cast<unsigned long long>(d.row.seed), r.iter, r.min_rate,
                          r.min_ee, r.min_see, r.objective, r.budget_violation, r.phi_violation,
                          r.gnp_residual);
            os << buf;
        }
    }
    (void)spec;
}

int run_sweep_command(CliOptions &opt, SweepKind kind, std::vector<double> grid) {
    finalize_spec(opt);
    opt.spec.kind = kind;
    opt.spec.grid = std::move(grid);
    opt.spec.validate();
    std::vector<ResultRow> rows = sweep(opt.spec);
    emit_csv(rows, opt.out_path);
    std::fprintf(stderr, "wrote %zu rows to %s\n", rows.size(), opt.out_path.c_str());
    return 0;
}

int run_single_trial(CliOptions &opt) {
    finalize_spec(opt);
    ExperimentSpec &spec = opt.spec;
    spec.kind = SweepKind::Alpha;
    spec.grid = {opt.single_value};
    spec.cfg.alpha = {opt.single_value};
    spec.validate();

    std::uint64_t seed = trial_channel_seed(spec, 0, opt.trial_index);
    std::vector<TrialResult> details;
    std::vector<ResultRow> rows;
    if (!opt.load_channels_path.empty()) {
        ChannelSet ch = load_channels(opt.load_channels_path);
        for (Architecture arch : spec.archs) {
            details.push_back(run_trial_full(spec, opt.single_value, arch, seed, &ch));
            rows.push_back(details.back().row);
        }
    } else {
        rows = run_point_trial(spec, opt.single_value, seed, &details);
    }
    if (!opt.dump_channels_path.empty()) {
        auto [cfg, pm] = spec.materialize(opt.single_value);
        ScenarioGeometry geom = generate_scenario(cfg, derive_seed(seed, {1}));
        ChannelSet ch = generate_channels(geom, spec.fading, cfg, derive_seed(seed, {2}));
        save_channels(ch, opt.dump_channels_path);
        std::fprintf(stderr, "channels dumped to %s\n", opt.dump_channels_path.c_str());
    }
    emit_csv(rows, opt.out_path);
    for (const ResultRow &r : rows)
        std::printf("%-6s min-rate %.6g  min-EE %.6g  min-SEE %.6g  iters %d\n",
                    to_string(r.arch), r.min_rate, r.min_ee, r.min_see, r.iters);
    if (!opt.trace_path.empty()) write_trace(opt.trace_path, details, spec);
    return 0;
}

int run_selftest(CliOptions &opt) {
    finalize_spec(opt);
    int failures = 0;
    auto check = [&](const char *name, bool ok) {
        std::printf("[%s] %s\n", ok ? "ok" : "FAIL", name);
        if (!ok) ++failures;
    };

    check("inv_q(0.5) == 0", inv_q(0.5) == 0.0);
    check("Q(inv_q(1e-5)) roundtrip",
          std::abs(gaussian_q(inv_q(1e-5)) - 1e-5) < 1e-16 + 1e-12 * 1e-5);

    SystemConfig cfg;
    cfg.n_bs = 3;
    cfg.n_u = 2;
    cfg.k_users = 2;
    cfg.n_ris = 6;
    cfg.d_streams = 1;
    PowerModel pm;
    ScenarioGeometry geom = generate_scenario(cfg, 1);
    ChannelSet ch = generate_channels(geom, FadingParams{}, cfg, 2);

    IterateState st = init_state(ch, cfg, Architecture::GnpBd, 3);
    check("initial beamformers meet the budget",
          std::abs(st.w.trace_power() - cfg.p_budget) < 1e-9);

    SurrogateCoeffs sc = build_coeffs(ch, st.phi.phi, st.w, cfg, 0);
    double rate = fbl_rate(effective_channels(ch, st.phi.phi), st.w, cfg, 0);
    check("surrogate tangency at the expansion point",
          std::abs(eval_surrogate_w(sc, st.w, sc.h_ref) - rate) < 1e-7);

    AlgoParams params;
    params.max_outer_iters = 10;
    params.inner_w = {1.0, 80, 0.0};
    params.inner_phi = {1.0, 80, 0.0};
    IterateState run = run_algorithm_one(ch, cfg, pm, Architecture::GnpBd, params, 4);
    bool monotone = true;
    for (std::size_t i = 1; i < run.trace.size(); ++i)
        monotone = monotone && run.trace[i].objective >= run.trace[i - 1].objective - 1e-9;
    check("objective trace is monotone", monotone);
    check("final iterate is feasible", run.trace.back().budget_violation <= 1e-9 &&
                                           run.trace.back().phi_violation <= 1e-8);

    IterateState again = run_algorithm_one(ch, cfg, pm, Architecture::GnpBd, params, 4);
    check("runs are deterministic",
          again.trace.back().objective == run.trace.back().objective);

    std::printf(failures == 0 ? "selftest passed\n" : "selftest FAILED\n");
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"risee - max-min SE/EE tradeoff simulator for RIS-aided MIMO URLLC downlinks"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "TOML/INI options file with keys in a [subcommand] section; flags override");

    CliOptions opt;
    std::vector<double> grid;

    auto *pareto = app.add_subcommand("pareto", "sweep the SE/EE weight alpha over [0, 1]");
    add_common_flags(pareto, opt);
    pareto->add_option("--grid", grid, "alpha grid values")->expected(-1);

    auto *sp = app.add_subcommand("sweep-static-power", "sweep the per-element static power [W]");
    add_common_flags(sp, opt);
    sp->add_option("--grid", grid, "per-element powers [W]")->expected(-1);

    auto *sn = app.add_subcommand("sweep-nris", "sweep the RIS element count");
    add_common_flags(sn, opt);
    sn->add_option("--grid", grid, "element counts")->expected(-1);

    auto *spw = app.add_subcommand("sweep-power", "sweep the transmit power budget [dB]");
    add_common_flags(spw, opt);
    spw->add_option("--grid", grid, "budgets in dB over the noise floor")->expected(-1);

    auto *single = app.add_subcommand("single-trial", "run one seeded trial and print metrics");
    add_common_flags(single, opt);
    single->add_option("--alpha-value", opt.single_value, "tradeoff weight for the trial");
    single->add_option("--trial", opt.trial_index, "trial index under the master seed");
    single->add_option("--dump-channels", opt.dump_channels_path, "write the channel draw to a file");
    single->add_option("--channels", opt.load_channels_path, "replay a dumped channel file");

    auto *selftest = app.add_subcommand("selftest", "quick built-in consistency checks");
    add_common_flags(selftest, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (pareto->parsed())
            return run_sweep_command(opt, SweepKind::Alpha,
                                     grid.empty() ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}
                                                  : grid);
        if (sp->parsed())
            return run_sweep_command(opt, SweepKind::RisStaticPower,
                                     grid.empty() ? std::vector<double>{0.005, 0.01, 0.02, 0.04}
                                                  : grid);
        if (sn->parsed())
            return run_sweep_command(opt, SweepKind::NRis,
                                     grid.empty() ? std::vector<double>{4, 8, 12, 16, 20} : grid);
        if (spw->parsed())
            return run_sweep_command(opt, SweepKind::TxPower,
                                     grid.empty() ? std::vector<double>{0, 5, 10, 15, 20} : grid);
        if (single->parsed()) return run_single_trial(opt);
        if (selftest->parsed()) return run_selftest(opt);
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "invalid configuration: %s\n", e.what());
        return 1;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
