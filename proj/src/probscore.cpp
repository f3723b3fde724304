// ============================================================================
// probscore.cpp: PA construction, emission fusion, matching probability
// ============================================================================

#include "actre/probscore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace actre {

void EmissionParams::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be > 0");
    if (!(clamp_eps > 0.0 && clamp_eps < 0.5)) {
        throw std::invalid_argument("clamp_eps must be in (0, 0.5)");
    }
}

// ── build_pa ────────────────────────────────────────────────────────────────

Pa build_pa(const Dfa& d, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
    if (!d.is_total()) {
        throw std::invalid_argument("build_pa requires a completed (total) machine");
    }

    const auto n = static_cast<Eigen::Index>(d.state_count);
    // delta is total, so every row of the indicator part sums to exactly one
    // and the smoothed denominator collapses to 1 + alpha |Q|.
    const double denom = 1.0 + alpha * static_cast<double>(n);
    const double hit = (1.0 + alpha) / denom;
    const double miss = alpha / denom;

    Pa pa;
    pa.alpha = alpha;
    pa.support = d.support;
    pa.rho = Eigen::RowVectorXd::Constant(n, miss);
    pa.rho[d.start] = hit;
    pa.finals = Eigen::VectorXd::Zero(n);
    for (Eigen::Index q = 0; q < n; ++q) {
        if (d.finals[static_cast<std::size_t>(q)]) pa.finals[q] = 1.0;
    }
    if (pa.finals.sum() == 0.0) {
        throw std::invalid_argument("build_pa requires at least one final state");
    }

    auto smoothed = [&](auto target_of) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Constant(n, n, miss);
        for (Eigen::Index i = 0; i < n; ++i) {
            m(i, target_of(static_cast<std::uint32_t>(i))) = hit;
        }
        return m;
    };

    pa.t_support.reserve(d.support.size());
    for (std::size_t c = 0; c < d.support.size(); ++c) {
        pa.t_support.push_back(smoothed([&](std::uint32_t q) { return d.trans[q][c]; }));
    }
    pa.t_bar = smoothed([&](std::uint32_t q) { return d.defaults[q]; });
    return pa;
}

// ── emission model ──────────────────────────────────────────────────────────

namespace {

double clamp_prob(double p, double eps) { return std::clamp(p, eps, 1.0 - eps); }

double log_add_exp(double a, double b) {
    const double hi = std::max(a, b);
    const double lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

// Per-frame log terms: with all actions absent the symbol log-probability is
// `base`; including action a adds `bonus[a]`.
struct FrameLogs {
    double base = 0.0;
    std::vector<double> bonus;
};

FrameLogs frame_logs(const FrameProbs& frame, const EmissionParams& params) {
    FrameLogs logs;
    logs.bonus.resize(frame.size());
    for (std::size_t a = 0; a < frame.size(); ++a) {
        const double p = clamp_prob(frame[a], params.clamp_eps);
        const double on = params.gamma * std::log(p);
        const double off = params.gamma * std::log1p(-p);
        logs.base += off - log_add_exp(on, off);
        logs.bonus[a] = on - off;
    }
    return logs;
}

double symbol_log_prob(const FrameLogs& logs, const SymbolSet& w) {
    double lp = logs.base;
    for (std::uint32_t a : w.members()) lp += logs.bonus[a];
    return lp;
}

void check_frame_covers(const FrameProbs& frame, const SymbolSet& w) {
    if (!w.empty() && w.max_index() >= frame.size()) {
        throw std::invalid_argument("symbol refers to an action index beyond the frame size");
    }
}

}  // namespace

double emission_prob(const FrameProbs& frame, const SymbolSet& w, const EmissionParams& params) {
    params.validate();
    check_frame_covers(frame, w);
    return std::exp(symbol_log_prob(frame_logs(frame, params), w));
}

std::vector<double> emission_probs(const FrameProbs& frame, std::span<const SymbolSet> symbols,
                                   const EmissionParams& params) {
    params.validate();
    const FrameLogs logs = frame_logs(frame, params);
    std::vector<double> out;
    out.reserve(symbols.size());
    for (const SymbolSet& w : symbols) {
        check_frame_covers(frame, w);
        out.push_back(std::exp(symbol_log_prob(logs, w)));
    }
    return out;
}

double support_mass(const FrameProbs& frame, std::span<const SymbolSet> support,
                    const EmissionParams& params) {
    double mass = 0.0;
    for (double p : emission_probs(frame, support, params)) mass += p;
    return mass;
}

// ── induced matrices ────────────────────────────────────────────────────────

Eigen::MatrixXd induced_matrix(const Pa& pa, const FrameProbs& frame,
                               const EmissionParams& params) {
    const std::vector<double> probs = emission_probs(frame, pa.support, params);
    double mass = 0.0;
    for (double p : probs) mass += p;
    const double residual = std::max(0.0, 1.0 - mass);

    Eigen::MatrixXd induced = residual * pa.t_bar;
    for (std::size_t c = 0; c < probs.size(); ++c) {
        induced.noalias() += probs[c] * pa.t_support[c];
    }
    return induced;
}

Eigen::MatrixXd naive_induced_matrix(const Pa& pa, const FrameProbs& frame,
                                     const EmissionParams& params) {
    params.validate();
    const std::size_t m = frame.size();
    if (m > 16) {
        throw std::invalid_argument("naive_induced_matrix refuses vocabularies above 16 actions");
    }
    Eigen::MatrixXd induced = Eigen::MatrixXd::Zero(pa.states(), pa.states());
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        std::vector<std::uint32_t> members;
        for (std::uint32_t a = 0; a < m; ++a) {
            if (mask & (1ull << a)) members.push_back(a);
        }
        const SymbolSet w{std::move(members)};
        const double p = emission_prob(frame, w, params);
        auto it = std::find(pa.support.begin(), pa.support.end(), w);
        if (it == pa.support.end()) {
            induced.noalias() += p * pa.t_bar;
        } else {
            induced.noalias() += p * pa.t_support[static_cast<std::size_t>(it - pa.support.begin())];
        }
    }
    return induced;
}

// ── match_prob ──────────────────────────────────────────────────────────────

namespace {

std::size_t checked_frame_count(const Pa& pa, const Video& v) {
    if (v.frames.empty()) throw std::invalid_argument("cannot score an empty video");
    std::size_t m = v.frames.front().size();
    for (const FrameProbs& f : v.frames) {
        if (f.size() != m) {
            throw std::invalid_argument("video '" + v.id + "' has frames of differing sizes");
        }
    }
    for (const SymbolSet& w : pa.support) {
        if (!w.empty() && w.max_index() >= m) {
            throw std::invalid_argument(
                "video '" + v.id + "' has fewer actions per frame than the pattern requires");
        }
    }
    return v.frames.size();
}

double final_mass_root(const Pa& pa, const Eigen::RowVectorXd& u, double log_scale,
                       double inv_n) {
    // score = sum over finals of exp((log u_q + log_scale) / n); entries of u
    // are strictly positive thanks to smoothing.
    double score = 0.0;
    for (Eigen::Index q = 0; q < pa.states(); ++q) {
        if (pa.finals[q] > 0.0) {
            score += std::exp((std::log(u[q]) + log_scale) * inv_n);
        }
    }
    return score;
}

}  // namespace

double match_prob(const Pa& pa, const Video& v, const EmissionParams& params) {
    params.validate();
    const std::size_t n = checked_frame_count(pa, v);

    Eigen::RowVectorXd u = pa.rho;
    double log_scale = 0.0;
    for (const FrameProbs& frame : v.frames) {
        u = u * induced_matrix(pa, frame, params);
        const double total = u.sum();
        log_scale += std::log(total);
        u /= total;
    }
    return final_mass_root(pa, u, log_scale, 1.0 / static_cast<double>(n));
}

double naive_match_prob(const Pa& pa, const Video& v, const EmissionParams& params) {
    params.validate();
    const std::size_t n = checked_frame_count(pa, v);
    const std::size_t m = v.frames.front().size();
    if (n > 6 || m > 3) {
        throw std::invalid_argument("naive_match_prob refuses videos above 6 frames or 3 actions");
    }

    // All 2^M symbols with their per-frame probabilities and matrices.
    std::vector<SymbolSet> alphabet;
    std::vector<const Eigen::MatrixXd*> matrix_of;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask) {
        std::vector<std::uint32_t> members;
        for (std::uint32_t a = 0; a < m; ++a) {
            if (mask & (1ull << a)) members.push_back(a);
        }
        alphabet.emplace_back(std::move(members));
        auto it = std::find(pa.support.begin(), pa.support.end(), alphabet.back());
        matrix_of.push_back(it == pa.support.end()
                                ? &pa.t_bar
                                : &pa.t_support[static_cast<std::size_t>(it - pa.support.begin())]);
    }
    std::vector<std::vector<double>> frame_probs;
    for (const FrameProbs& f : v.frames) {
        frame_probs.push_back(emission_probs(f, alphabet, params));
    }

    // Enumerate every symbol sequence, summing weight * (rho^T T_s1 ... T_sn)
    // leaf by leaf.
    Eigen::RowVectorXd total = Eigen::RowVectorXd::Zero(pa.states());
    struct Walker {
        const std::vector<const Eigen::MatrixXd*>& matrix_of;
        const std::vector<std::vector<double>>& frame_probs;
        std::size_t depth_max;
        Eigen::RowVectorXd* total;

        void walk(std::size_t depth, double weight, const Eigen::RowVectorXd& u) {
            if (depth == depth_max) {
                *total += weight * u;
                return;
            }
            for (std::size_t s = 0; s < matrix_of.size(); ++s) {
                walk(depth + 1, weight * frame_probs[depth][s], u * (*matrix_of[s]));
            }
        }
    };
    Walker{matrix_of, frame_probs, n, &total}.walk(0, 1.0, pa.rho);

    double score = 0.0;
    const double inv_n = 1.0 / static_cast<double>(n);
    for (Eigen::Index q = 0; q < pa.states(); ++q) {
        if (pa.finals[q] > 0.0) score += std::pow(total[q], inv_n);
    }
    return score;
}

}  // namespace actre
