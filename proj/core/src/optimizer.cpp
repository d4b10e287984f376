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

#include "risee/optimizer.hpp"
#include "risee/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace risee {

void AlgoParams::validate() const {
    if (!(delta > 0.0))
        throw std::invalid_argument("AlgoParams: delta must be positive");
    if (max_outer_iters < 1 || inner_w.max_iters < 1 || inner_phi.max_iters < 1)
        throw std::invalid_argument("AlgoParams: iteration caps must be >= 1");
}

Vector pack_beamformers(const BeamformerSet &w) {
    Eigen::Index total = 0;
    for (const Matrix &m : w.w) total += m.size();
    Vector x(total);
    Eigen::Index off = 0;
    for (const Matrix &m : w.w) {
        x.segment(off, m.size()) = Eigen::Map<const Vector>(m.data(), m.size());
        off += m.size();
    }
    return x;
}

BeamformerSet unpack_beamformers(const Vector &x, int n_bs, int d_streams, int k_users) {
    BeamformerSet bf;
    bf.w.reserve(static_cast<std::size_t>(k_users));
    const Eigen::Index block = static_cast<Eigen::Index>(n_bs) * d_streams;
    if (x.size() != block * k_users)
        throw std::invalid_argument("unpack_beamformers: size mismatch");
    for (int k = 0; k < k_users; ++k)
        bf.w.push_back(Eigen::Map<const Matrix>(x.data() + k * block, n_bs, d_streams));
    return bf;
}

Vector pack_phi(const Matrix &phi) {
    return Eigen::Map<const Vector>(phi.data(), phi.size());
}

Matrix unpack_phi(const Vector &x, int n_ris) {
    if (x.size() != static_cast<Eigen::Index>(n_ris) * n_ris)
        throw std::invalid_argument("unpack_phi: size mismatch");
    return Eigen::Map<const Matrix>(x.data(), n_ris, n_ris);
}

InnerResult solve_inner_maxmin(const InnerProblem &problem, const InnerSettings &settings) {
    const std::size_t n_obj = problem.objectives.size();
    if (n_obj == 0 || problem.gradients.size() != n_obj)
        throw std::invalid_argument("solve_inner_maxmin: objective/gradient count mismatch");

    auto eval_all = [&](const Vector &x, std::vector<double> &vals) {
        double fmin = 0.0;
        int active = 0;
        for (std::size_t k = 0; k < n_obj; ++k) {
            vals[k] = problem.objectives[k](x);
            if (k == 0 || vals[k] < fmin - 1e-12) {
                fmin = vals[k];
                active = static_cast<int>(k);
            } else if (vals[k] < fmin) {
                fmin = vals[k]; // tie within 1e-12: keep the lower index
            }
        }
        return std::make_pair(fmin, active);
    };

    std::vector<double> vals(n_obj);
    Vector x = problem.start;
    auto [f, active] = eval_all(x, vals);
    Vector x_best = x;
    double f_best = f;

    Vector g = problem.gradients[static_cast<std::size_t>(active)](x);
    const double base_scale = settings.step0 * (1.0 + x.norm()) / (1.0 + g.norm());
    if (g.norm() < 1e-15) return {std::move(x_best), f_best, 0};

    // Restarted diminishing schedule: each round runs s_r / sqrt(t) steps from
    // the incumbent best with a smaller step scale, which adapts the scale
    // without abandoning the s0/sqrt(t) rule.
    const int rounds = settings.max_iters >= 30 ? 3 : 1;
    static const double kRoundScale[3] = {4.0, 1.0, 0.25};
    const int per_round = settings.max_iters / rounds;
    int iters_used = 0;

    const double trust_radius = 2.0 * (1.0 + problem.start.norm());
    const int stall_cap = 25;

    for (int round = 0; round < rounds; ++round) {
        x = x_best;
        std::tie(f, active) = eval_all(x, vals);
        const double scale = base_scale * kRoundScale[round];
        int stalled = 0;
        for (int t = 1; t <= per_round; ++t) {
            ++iters_used;
            if (settings.smoothing > 0.0) {
                // softmin-weighted combination of all gradients
                double tau = settings.smoothing;
                double wsum = 0.0;
                Vector mix = Vector::Zero(x.size());
                for (std::size_t k = 0; k < n_obj; ++k) {
                    double wk = std::exp(-(vals[k] - f) / tau);
                    mix += wk * problem.gradients[k](x);
                    wsum += wk;
                }
                g = mix / wsum;
            } else {
                g = problem.gradients[static_cast<std::size_t>(active)](x);
            }
            double gn = g.norm();
            if (gn < 1e-15) break;
            double step = scale / std::sqrt(static_cast<double>(t));
            // keep single moves bounded so flat directions cannot run away
            step = std::min(step, trust_radius / gn);
            x = problem.project(x + step * g);
            std::tie(f, active) = eval_all(x, vals);
            if (f > f_best) {
                f_best = f;
                x_best = x;
                stalled = 0;
            } else if (++stalled >= stall_cap) {
                break; // wandering; restart the next round from the best point
            }
        }
    }
    return {std::move(x_best), f_best, iters_used};
}

double min_see_raw(const ChannelSet &ch, const BeamformerSet &w, const Matrix &phi,
                   const SystemConfig &cfg, double p_c) {
    std::vector<Matrix> h = effective_channels(ch, phi);
    double fmin = 0.0;
    for (int k = 0; k < cfg.k_users; ++k) {
        double r = fbl_rate(h, w, cfg, k);
        double zeta = see_objective(r, w.w[static_cast<std::size_t>(k)], p_c, cfg, k);
        if (k == 0 || zeta < fmin) fmin = zeta;
    }
    return fmin;
}

IterateState init_state(const ChannelSet &ch, const SystemConfig &cfg, Architecture arch,
                        std::uint64_t seed) {
    cfg.validate();
    IterateState st;
    st.arch = arch;
    if (arch == Architecture::NoRis)
        st.phi = {Matrix::Zero(cfg.n_ris, cfg.n_ris), arch};
    else
        st.phi = random_feasible(arch, cfg, seed);

    const double power = cfg.p_budget / (cfg.k_users * cfg.d_streams);
    st.w.w.reserve(static_cast<std::size_t>(cfg.k_users));
    for (int k = 0; k < cfg.k_users; ++k) {
        const Matrix &f = ch.f_k.at(static_cast<std::size_t>(k));
        Eigen::JacobiSVD<Matrix> svd(f, Eigen::ComputeThinV);
        st.w.w.push_back(std::sqrt(power) * svd.matrixV().leftCols(cfg.d_streams));
    }
    return st;
}

IterateState init_state_from(const ChannelSet &ch, const SystemConfig &cfg,
                             Architecture arch, BeamformerSet w, Matrix phi) {
    cfg.validate();
    if (w.trace_power() > cfg.p_budget + 1e-6)
        throw std::invalid_argument("init_state_from: beamformers exceed the power budget");
    GnpWeight weight;
    const GnpWeight *wp = nullptr;
    if (is_gnp(arch)) {
        weight = gnp_weight(ch.g, w);
        wp = &weight;
    }
    if (arch != Architecture::NoRis) {
        auto c = contains(arch, phi, wp, 1e-6);
        if (!c.ok)
            throw std::invalid_argument("init_state_from: Phi infeasible for the architecture, violation " +
                                        std::to_string(c.violation));
    }
    IterateState st;
    st.arch = arch;
    st.w = std::move(w);
    st.phi = {std::move(phi), arch};
    return st;
}

namespace {

// Projection onto the power-coupling cone { sum_k Tr(W_k^H Q W_k) <= 0 } with
// Q Hermitian indefinite, done in the eigenbasis of Q. The set is a cone, so
// the subsequent trace-ball scaling preserves membership.
class ConeProjector {
  public:
    explicit ConeProjector(const Matrix &q) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(q);
        lam_ = es.eigenvalues();
        u_ = es.eigenvectors();
        active_ = lam_.cwiseAbs().maxCoeff() > 1e-12;
    }

    bool active() const { return active_; }

    void apply(BeamformerSet &bf) const {
        if (!active_) return;
        const Eigen::Index n = lam_.size();
        std::vector<Matrix> y;
        y.reserve(bf.w.size());
        RealVector row2 = RealVector::Zero(n);
        for (const Matrix &wk : bf.w) {
            y.push_back(u_.adjoint() * wk);
            for (Eigen::Index j = 0; j < n; ++j) row2(j) += y.back().row(j).squaredNorm();
        }
        auto excess = [&](double mu) {
            double s = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                double den = 1.0 + mu * lam_(j);
                s += lam_(j) * row2(j) / (den * den);
            }
            return s;
        };
        if (excess(0.0) <= 0.0) return;

        const double lam_min = lam_(0);
        double mu = 0.0;
        bool solved = false;
        if (lam_min < -1e-15) {
            // negative-curvature mass present: a root exists in (0, 1/|lam_min|)
            double mu_lim = 1.0 / (-lam_min);
            double hi = mu_lim * (1.0 - 1e-9);
            if (excess(hi) < 0.0) {
                double lo = 0.0;
                for (int it = 0; it < 200 && (hi - lo) > 1e-14 * mu_lim; ++it) {
                    double mid = 0.5 * (lo + hi);
                    (excess(mid) > 0.0 ? lo : hi) = mid;
                }
                mu = hi;
                solved = true;
            }
        } else {
            double hi = 1.0;
            int guard = 0;
            while (excess(hi) > 1e-14 && guard++ < 500) hi *= 2.0;
            if (guard < 500) {
                double lo = 0.0;
                for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++it) {
                    double mid = 0.5 * (lo + hi);
                    (excess(mid) > 1e-14 ? lo : hi) = mid;
                }
                mu = hi;
                solved = true;
            }
        }

        for (std::size_t k = 0; k < bf.w.size(); ++k) {
            if (solved) {
                for (Eigen::Index j = 0; j < n; ++j)
                    y[k].row(j) /= (1.0 + mu * lam_(j));
            } else {
                // hard case: no interior multiplier; zero the expanding directions
                for (Eigen::Index j = 0; j < n; ++j)
                    if (lam_(j) > 0.0) y[k].row(j).setZero();
            }
            bf.w[k] = u_ * y[k];
        }
    }

  private:
    RealVector lam_;
    Matrix u_;
    bool active_ = false;
};

void scale_to_budget(BeamformerSet &bf, double p_budget) {
    double p = bf.trace_power();
    if (p > p_budget) {
        double s = std::sqrt(p_budget / p);
        for (Matrix &wk : bf.w) wk *= s;
    }
}

} // namespace

namespace {

// Shared by the W-step closures so the problem object can be moved freely.
struct WStepContext {
    std::vector<SurrogateCoeffs> coeffs;
    std::vector<double> beta;
    std::vector<Matrix> h;
};

} // namespace

WStepProblem build_w_step(const IterateState &state, const ChannelSet &ch,
                          const SystemConfig &cfg, const PowerModel &pm,
                          Architecture arch) {
    WStepProblem prob;
    const double p_c = static_power(pm, arch, cfg.n_ris, cfg.k_users);

    auto ctx = std::make_shared<WStepContext>();
    ctx->h = effective_channels(ch, state.phi.phi);
    for (int k = 0; k < cfg.k_users; ++k)
        ctx->coeffs.push_back(build_coeffs(ch, state.phi.phi, state.w, cfg, k));

    ctx->beta.resize(static_cast<std::size_t>(cfg.k_users));
    for (int k = 0; k < cfg.k_users; ++k) {
        double r = ctx->coeffs[static_cast<std::size_t>(k)].rate_at_expansion;
        if (r < 0.0) {
            r = 0.0;
            ++prob.beta_clamps;
        }
        double pbar = p_c + cfg.eta * state.w.w[static_cast<std::size_t>(k)].squaredNorm();
        ctx->beta[static_cast<std::size_t>(k)] = std::sqrt(r) / pbar;
    }

    // GNP coupling: keep Tr(G C G^H (Phi^H Phi - I)) <= 0 while W moves.
    std::shared_ptr<ConeProjector> cone;
    if (is_gnp(arch)) {
        Matrix m = state.phi.phi.adjoint() * state.phi.phi - Matrix::Identity(cfg.n_ris, cfg.n_ris);
        Matrix q = ch.g.adjoint() * m * ch.g;
        q = 0.5 * (q + q.adjoint()).eval();
        cone = std::make_shared<ConeProjector>(q);
    }

    const int n_bs = cfg.n_bs, d = cfg.d_streams, kk = cfg.k_users;
    const double p_budget = cfg.p_budget;
    prob.inner.project = [cone, n_bs, d, kk, p_budget](const Vector &x) {
        BeamformerSet bf = unpack_beamformers(x, n_bs, d, kk);
        if (cone) cone->apply(bf);
        scale_to_budget(bf, p_budget);
        return pack_beamformers(bf);
    };

    for (int k = 0; k < kk; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double alpha = cfg.alpha_of(k);
        const double beta = ctx->beta[ku];
        const double eta = cfg.eta;

        prob.inner.objectives.push_back([ctx, ku, alpha, beta, p_c, eta, n_bs, d, kk](const Vector &x) {
            BeamformerSet bf = unpack_beamformers(x, n_bs, d, kk);
            double rt = eval_surrogate_w(ctx->coeffs[ku], bf, ctx->h[ku]);
            double pk = p_c + eta * bf.w[ku].squaredNorm();
            double u = std::sqrt(std::max(rt, 0.0));
            return alpha * rt + (1.0 - alpha) * (2.0 * beta * u - beta * beta * pk);
        });
        prob.inner.gradients.push_back([ctx, ku, alpha, beta, eta, n_bs, d, kk](const Vector &x) {
            BeamformerSet bf = unpack_beamformers(x, n_bs, d, kk);
            double rt = eval_surrogate_w(ctx->coeffs[ku], bf, ctx->h[ku]);
            std::vector<Matrix> gr = grad_surrogate_w(ctx->coeffs[ku], bf, ctx->h[ku]);
            double chain = alpha;
            if (rt > 1e-12) chain += (1.0 - alpha) * beta / std::sqrt(rt);
            BeamformerSet g;
            g.w.reserve(gr.size());
            for (std::size_t i = 0; i < gr.size(); ++i) {
                Matrix gi = chain * gr[i];
                if (i == ku) gi -= (1.0 - alpha) * beta * beta * eta * bf.w[i];
                g.w.push_back(std::move(gi));
            }
            return pack_beamformers(g);
        });
    }
    prob.inner.start = pack_beamformers(state.w);
    prob.coeffs = ctx->coeffs;
    prob.beta = ctx->beta;
    prob.h = ctx->h;
    return prob;
}

namespace {

struct PhiStepContext {
    std::vector<SurrogateCoeffs> coeffs;
    std::vector<double> theta;
    ChannelSet ch;
    BeamformerSet w;
    GnpWeight weight;
};

} // namespace

PhiStepProblem build_phi_step(const BeamformerSet &w_next, const Matrix &phi_l,
                              const ChannelSet &ch, const SystemConfig &cfg,
                              const PowerModel &pm, Architecture arch) {
    PhiStepProblem prob;
    const double p_c = static_power(pm, arch, cfg.n_ris, cfg.k_users);

    auto ctx = std::make_shared<PhiStepContext>();
    ctx->ch = ch;
    ctx->w = w_next;
    for (int k = 0; k < cfg.k_users; ++k)
        ctx->coeffs.push_back(build_coeffs(ch, phi_l, w_next, cfg, k));

    ctx->theta.resize(static_cast<std::size_t>(cfg.k_users));
    for (int k = 0; k < cfg.k_users; ++k) {
        double pk = p_c + cfg.eta * w_next.w[static_cast<std::size_t>(k)].squaredNorm();
        ctx->theta[static_cast<std::size_t>(k)] = cfg.alpha_of(k) + (1.0 - cfg.alpha_of(k)) / pk;
    }

    const bool gnp = is_gnp(arch);
    if (gnp) ctx->weight = gnp_weight(ch.g, w_next);

    const int n_ris = cfg.n_ris;
    prob.inner.project = [ctx, arch, gnp, n_ris](const Vector &x) {
        return pack_phi(project(arch, unpack_phi(x, n_ris),
                                gnp ? &ctx->weight : nullptr, 1e-9));
    };

    for (int k = 0; k < cfg.k_users; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        const double theta = ctx->theta[ku];
        prob.inner.objectives.push_back([ctx, ku, theta, n_ris](const Vector &x) {
            return theta * eval_surrogate_phi(ctx->coeffs[ku], unpack_phi(x, n_ris), ctx->ch, ctx->w);
        });
        prob.inner.gradients.push_back([ctx, ku, theta, n_ris](const Vector &x) {
            return Vector(theta *
                          pack_phi(grad_surrogate_phi(ctx->coeffs[ku], unpack_phi(x, n_ris), ctx->ch, ctx->w)));
        });
    }
    prob.inner.start = pack_phi(phi_l);
    prob.coeffs = ctx->coeffs;
    prob.theta = ctx->theta;
    prob.weight = ctx->weight;
    return prob;
}

void update_w(IterateState &state, const ChannelSet &ch, const SystemConfig &cfg,
              const PowerModel &pm, const AlgoParams &params, int outer_iter) {
    const double p_c = static_power(pm, state.arch, cfg.n_ris, cfg.k_users);
    WStepProblem prob = build_w_step(state, ch, cfg, pm, state.arch);
    state.beta_clamp_events += prob.beta_clamps;

    if (params.audit)
        for (int k = 0; k < cfg.k_users; ++k)
            params.audit({outer_iter, 'w', k, state.arch, &prob.coeffs[static_cast<std::size_t>(k)], &ch, &cfg});

    InnerResult res = solve_inner_maxmin(prob.inner, params.inner_w);
    BeamformerSet cand = unpack_beamformers(res.x, cfg.n_bs, cfg.d_streams, cfg.k_users);

    bool accept = true;
    if (params.safeguard) {
        double f_prev = min_see_raw(ch, state.w, state.phi.phi, cfg, p_c);
        double f_cand = min_see_raw(ch, cand, state.phi.phi, cfg, p_c);
        accept = f_cand >= f_prev - 1e-12;
    }
    if (accept) {
        state.w = std::move(cand);
    } else {
        ++state.safeguard_events;
    }

    // record the subproblem auxiliaries at the accepted iterate
    state.beta = prob.beta;
    state.u.assign(static_cast<std::size_t>(cfg.k_users), 0.0);
    state.p.assign(static_cast<std::size_t>(cfg.k_users), 0.0);
    for (int k = 0; k < cfg.k_users; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        double rt = eval_surrogate_w(prob.coeffs[ku], state.w, prob.h[ku]);
        state.u[ku] = std::sqrt(std::max(rt, 0.0));
        state.p[ku] = p_c + cfg.eta * state.w.w[ku].squaredNorm();
    }
}

void update_phi(IterateState &state, const ChannelSet &ch, const SystemConfig &cfg,
                const PowerModel &pm, const AlgoParams &params, int outer_iter) {
    if (!optimizes_phi(state.arch)) return;

    const double p_c = static_power(pm, state.arch, cfg.n_ris, cfg.k_users);
    PhiStepProblem prob = build_phi_step(state.w, state.phi.phi, ch, cfg, pm, state.arch);

    if (params.audit)
        for (int k = 0; k < cfg.k_users; ++k)
            params.audit({outer_iter, 'p', k, state.arch, &prob.coeffs[static_cast<std::size_t>(k)], &ch, &cfg});

    InnerResult res = solve_inner_maxmin(prob.inner, params.inner_phi);
    Matrix cand = unpack_phi(res.x, cfg.n_ris);

    bool accept = true;
    if (params.safeguard) {
        double f_prev = min_see_raw(ch, state.w, state.phi.phi, cfg, p_c);
        double f_cand = min_see_raw(ch, state.w, cand, cfg, p_c);
        accept = f_cand >= f_prev - 1e-12;
    }
    if (accept)
        state.phi.phi = std::move(cand);
    else
        ++state.safeguard_events;
}

namespace {

TraceRecord make_trace_record(int iter, const IterateState &state, const ChannelSet &ch,
                              const SystemConfig &cfg, double p_c) {
    TraceRecord rec;
    rec.iter = iter;
    std::vector<Matrix> h = effective_channels(ch, state.phi.phi);
    MetricsRecord m = evaluate_metrics(h, state.w, cfg, p_c);
    rec.min_rate = m.min_rate;
    rec.min_ee = m.min_ee;
    rec.min_see = m.min_see;
    rec.objective = min_see_raw(ch, state.w, state.phi.phi, cfg, p_c);
    rec.budget_violation = state.w.trace_power() - cfg.p_budget;
    if (state.arch == Architecture::NoRis) {
        rec.phi_violation = 0.0;
    } else {
        GnpWeight weight;
        const GnpWeight *wp = nullptr;
        if (is_gnp(state.arch)) {
            weight = gnp_weight(ch.g, state.w);
            wp = &weight;
            rec.gnp_residual = std::real((state.phi.phi * weight.d * state.phi.phi.adjoint()).trace()) -
                               weight.budget;
        }
        rec.phi_violation = contains(state.arch, state.phi.phi, wp).violation;
    }
    return rec;
}

IterateState run_loop(const ChannelSet &ch, const SystemConfig &cfg, const PowerModel &pm,
                      Architecture arch, const AlgoParams &params, IterateState state) {
    cfg.validate();
    pm.validate();
    params.validate();
    state.arch = arch;
    const double p_c = static_power(pm, arch, cfg.n_ris, cfg.k_users);

    state.trace.clear();
    state.trace.push_back(make_trace_record(0, state, ch, cfg, p_c));
    double f_prev = state.trace.back().objective;

    for (int l = 1; l <= params.max_outer_iters; ++l) {
        update_w(state, ch, cfg, pm, params, l);
        update_phi(state, ch, cfg, pm, params, l);
        TraceRecord rec = make_trace_record(l, state, ch, cfg, p_c);
        state.trace.push_back(rec);
        double improvement = (rec.objective - f_prev) / std::max(std::abs(f_prev), 1e-12);
        f_prev = rec.objective;
        if (improvement < params.delta) break;
    }
    return state;
}

} // namespace

IterateState run_algorithm_one(const ChannelSet &ch, const SystemConfig &cfg,
                               const PowerModel &pm, Architecture arch,
                               const AlgoParams &params, std::uint64_t seed) {
    return run_loop(ch, cfg, pm, arch, params, init_state(ch, cfg, arch, seed));
}

IterateState run_algorithm_one_from(const ChannelSet &ch, const SystemConfig &cfg,
                                    const PowerModel &pm, Architecture arch,
                                    const AlgoParams &params, IterateState start) {
    return run_loop(ch, cfg, pm, arch, params, std::move(start));
}

} // namespace risee
