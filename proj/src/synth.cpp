// ============================================================================
// synth.cpp: template expressions, length-exact walks, noise emulation
// ============================================================================

#include "actre/synth.hpp"

#include <algorithm>
#include <stdexcept>

namespace actre {

// ── parameters ──────────────────────────────────────────────────────────────

namespace {

// Count of size-k subsets of an m-element set, saturating at `cap`.  Uses
// the symmetric form so the intermediate sequence C(m,1..k) is increasing
// and capping early stays sound.
std::uint64_t subset_count_capped(std::uint32_t m, std::uint32_t k, std::uint64_t cap) {
    if (k > m) return 0;
    k = std::min(k, m - k);
    unsigned __int128 count = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
        count = count * (m - i) / (i + 1);
        if (count >= cap) return cap;
    }
    return static_cast<std::uint64_t>(count);
}

}  // namespace

void ExprParams::validate() const {
    if (vocab_size == 0) throw std::invalid_argument("vocab_size must be >= 1");
    if (symbol_size == 0 || symbol_size > vocab_size) {
        throw std::invalid_argument("symbol_size must be in [1, vocab_size]");
    }
    if (sequence_length == 0) throw std::invalid_argument("sequence_length must be >= 1");
    if (branch_start == 0 || branch_start > sequence_length) {
        throw std::invalid_argument("branch_start must be in [1, sequence_length]");
    }
    if (branch_count == 0) throw std::invalid_argument("branch_count must be >= 1");
    if (frames < sequence_length) {
        throw std::invalid_argument("frames must be >= sequence_length");
    }
    if (subset_count_capped(vocab_size, symbol_size, branch_count) < branch_count) {
        throw std::invalid_argument(
            "infeasible parameters: fewer distinct symbols than alternative branches");
    }
}

// ── sample_expression ───────────────────────────────────────────────────────

namespace {

SymbolSet random_symbol(std::uint32_t vocab_size, std::uint32_t symbol_size,
                        std::mt19937_64& rng) {
    // Partial Fisher-Yates draw of symbol_size distinct indices.
    std::vector<std::uint32_t> pool(vocab_size);
    for (std::uint32_t i = 0; i < vocab_size; ++i) pool[i] = i;
    std::vector<std::uint32_t> picked;
    picked.reserve(symbol_size);
    for (std::uint32_t i = 0; i < symbol_size; ++i) {
        std::uniform_int_distribution<std::uint32_t> dist(i, vocab_size - 1);
        std::swap(pool[i], pool[dist(rng)]);
        picked.push_back(pool[i]);
    }
    return SymbolSet{std::move(picked)};
}

}  // namespace

Pattern sample_expression(const ExprParams& params, const Vocabulary& vocab,
                          std::mt19937_64& rng) {
    params.validate();
    if (vocab.size() != params.vocab_size) {
        throw std::invalid_argument("vocabulary size does not match params.vocab_size");
    }
    const std::uint32_t n = params.sequence_length;
    const std::uint32_t s = params.branch_start;
    const std::uint32_t d = params.branch_count;

    std::vector<Pattern> items;
    for (std::uint32_t pos = 1; pos < s; ++pos) {
        items.push_back(Pattern::plus(
            Pattern::make_symbol(random_symbol(params.vocab_size, params.symbol_size, rng))));
    }

    // Branch symbols per position, pairwise distinct within the position.
    std::vector<std::vector<SymbolSet>> per_branch(d);
    for (std::uint32_t pos = s; pos <= n; ++pos) {
        std::vector<SymbolSet> chosen;
        for (std::uint32_t b = 0; b < d; ++b) {
            SymbolSet sym;
            int attempts = 0;
            do {
                if (++attempts > 1000) {
                    throw std::runtime_error("failed to draw distinct branch symbols");
                }
                sym = random_symbol(params.vocab_size, params.symbol_size, rng);
            } while (std::find(chosen.begin(), chosen.end(), sym) != chosen.end());
            chosen.push_back(sym);
            per_branch[b].push_back(std::move(sym));
        }
    }

    auto chain_of = [](std::vector<SymbolSet> symbols) {
        std::vector<Pattern> steps;
        steps.reserve(symbols.size());
        for (SymbolSet& w : symbols) {
            steps.push_back(Pattern::plus(Pattern::make_symbol(std::move(w))));
        }
        if (steps.size() == 1) return std::move(steps.front());
        return Pattern::concat(std::move(steps));
    };

    if (d == 1) {
        // Degenerate alternation: splice the single chain into the top level.
        for (SymbolSet& w : per_branch.front()) {
            items.push_back(Pattern::plus(Pattern::make_symbol(std::move(w))));
        }
    } else {
        std::vector<Pattern> branches;
        branches.reserve(d);
        for (std::uint32_t b = 0; b < d; ++b) {
            branches.push_back(chain_of(std::move(per_branch[b])));
        }
        items.push_back(Pattern::alt(std::move(branches)));
    }

    if (items.size() == 1) return std::move(items.front());
    return Pattern::concat(std::move(items));
}

// ── PositiveSampler ─────────────────────────────────────────────────────────

PositiveSampler::PositiveSampler(const Dfa& dfa, std::size_t length)
    : dfa_(&dfa), length_(length) {
    feasible_.assign(length + 1, std::vector<char>(dfa.state_count, 0));
    for (std::uint32_t q = 0; q < dfa.state_count; ++q) {
        feasible_[0][q] = dfa.finals[q];
    }
    auto usable = [&](std::int32_t t) {
        return t != Dfa::kNoState && !(dfa.reject && static_cast<std::uint32_t>(t) == *dfa.reject);
    };
    for (std::size_t r = 1; r <= length; ++r) {
        for (std::uint32_t q = 0; q < dfa.state_count; ++q) {
            if (dfa.reject && *dfa.reject == q) continue;
            for (std::int32_t t : dfa.trans[q]) {
                if (usable(t) && feasible_[r - 1][static_cast<std::uint32_t>(t)]) {
                    feasible_[r][q] = 1;
                    break;
                }
            }
        }
    }
}

std::vector<SymbolSet> PositiveSampler::sample(std::mt19937_64& rng) const {
    if (!feasible()) {
        throw std::runtime_error("no accepted string of length " + std::to_string(length_) +
                                 " exists for this pattern");
    }
    std::vector<SymbolSet> out;
    out.reserve(length_);
    std::uint32_t q = dfa_->start;
    for (std::size_t remaining = length_; remaining > 0; --remaining) {
        std::vector<std::pair<std::size_t, std::uint32_t>> moves;  // (support idx, target)
        for (std::size_t c = 0; c < dfa_->support.size(); ++c) {
            const std::int32_t t = dfa_->trans[q][c];
            if (t == Dfa::kNoState) continue;
            const auto target = static_cast<std::uint32_t>(t);
            if (dfa_->reject && *dfa_->reject == target) continue;
            if (feasible_[remaining - 1][target]) moves.emplace_back(c, target);
        }
        if (moves.empty()) {
            throw std::logic_error("feasibility table disagrees with the machine");
        }
        std::uniform_int_distribution<std::size_t> pick(0, moves.size() - 1);
        const auto [c, target] = moves[pick(rng)];
        out.push_back(dfa_->support[c]);
        q = target;
    }
    return out;
}

std::vector<SymbolSet> sample_positive(const Dfa& dfa, std::size_t frames,
                                       std::mt19937_64& rng) {
    return PositiveSampler(dfa, frames).sample(rng);
}

// ── sample_negative ─────────────────────────────────────────────────────────

std::vector<SymbolSet> sample_negative(std::span<const PositiveSampler> pool,
                                       std::size_t target_index, const Dfa& target,
                                       std::mt19937_64& rng) {
    if (pool.size() < 2) {
        throw std::invalid_argument("negative sampling needs a pool of at least two patterns");
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 2);
    for (int attempt = 0; attempt < 100; ++attempt) {
        std::size_t source = pick(rng);
        if (source >= target_index) ++source;  // skip the target pattern
        std::vector<SymbolSet> symbols = pool[source].sample(rng);
        if (!target.accepts(symbols)) return symbols;
    }
    throw std::runtime_error("negative sampling failed: 100 draws were all accepted by the target");
}

// ── emit_noisy ──────────────────────────────────────────────────────────────

Video emit_noisy(const LabeledClip& clip, double level, std::size_t vocab_size,
                 std::mt19937_64& rng) {
    if (level < 0.0) throw std::invalid_argument("noise level must be >= 0");
    constexpr double kClamp = 1e-6;
    Video v;
    v.id = clip.id;
    v.frames.reserve(clip.symbols.size());
    std::uniform_real_distribution<double> noise(-level, level);
    for (const SymbolSet& w : clip.symbols) {
        FrameProbs frame(vocab_size);
        for (std::uint32_t a = 0; a < vocab_size; ++a) {
            double p = w.contains(a) ? 1.0 : 0.0;
            if (level > 0.0) p += noise(rng);
            p = std::clamp(p, 0.0, 1.0);
            frame[a] = std::clamp(p, kClamp, 1.0 - kClamp);
        }
        v.frames.push_back(std::move(frame));
    }
    return v;
}

// ── dataset assembly ────────────────────────────────────────────────────────

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    // splitmix64 over a mixed key; any fixed scheme works, it only has to be
    // stable across runs.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1) + 0xBF58476D1CE4E5B9ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Vocabulary default_vocabulary(std::uint32_t size) {
    std::vector<std::string> names;
    names.reserve(size);
    for (std::uint32_t i = 0; i < size; ++i) names.push_back("a" + std::to_string(i));
    return Vocabulary{std::move(names)};
}

Expression make_expression(std::uint32_t id, Pattern pattern, const Vocabulary& vocab) {
    Expression e;
    e.id = id;
    e.text = format(pattern, vocab);
    e.machine = compile_pattern(pattern);
    e.pattern = std::move(pattern);
    return e;
}

namespace {

enum Stream : std::uint64_t { kExpressions = 1, kNegatives = 2, kNoise = 3 };

std::string clip_name(std::uint32_t expr, bool positive, std::uint32_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "e%03u_%s_%03u", expr, positive ? "pos" : "neg", index);
    return buf;
}

}  // namespace

Dataset generate_dataset(const GenConfig& config) {
    config.params.validate();
    if (config.expression_count == 0) {
        throw std::invalid_argument("expression_count must be >= 1");
    }
    if (config.negatives_per_expr > 0 && config.expression_count < 2) {
        throw std::invalid_argument("negative sampling needs at least two expressions");
    }

    Dataset ds;
    ds.config = config;
    ds.vocab = default_vocabulary(config.params.vocab_size);
    ds.expressions.reserve(config.expression_count);

    for (std::uint32_t e = 0; e < config.expression_count; ++e) {
        std::mt19937_64 rng(derive_seed(config.seed, kExpressions, e));
        Pattern pattern = sample_expression(config.params, ds.vocab, rng);
        ds.expressions.push_back(make_expression(e, std::move(pattern), ds.vocab));
        const PositiveSampler sampler(ds.expressions.back().machine.partial,
                                      config.params.frames);
        for (std::uint32_t i = 0; i < config.positives_per_expr; ++i) {
            LabeledClip clip;
            clip.id = clip_name(e, true, i);
            clip.expr_id = e;
            clip.positive = true;
            clip.symbols = sampler.sample(rng);
            ds.clips.push_back(std::move(clip));
        }
    }

    if (config.negatives_per_expr > 0) {
        // The pool references the finished expression vector; building it
        // only now keeps the sampler pointers stable.
        std::vector<PositiveSampler> samplers;
        samplers.reserve(ds.expressions.size());
        for (const Expression& expr : ds.expressions) {
            samplers.emplace_back(expr.machine.partial, config.params.frames);
        }
        std::vector<LabeledClip> negatives;
        for (std::uint32_t e = 0; e < config.expression_count; ++e) {
            std::mt19937_64 rng(derive_seed(config.seed, kNegatives, e));
            for (std::uint32_t i = 0; i < config.negatives_per_expr; ++i) {
                LabeledClip clip;
                clip.id = clip_name(e, false, i);
                clip.expr_id = e;
                clip.positive = false;
                clip.symbols = sample_negative(samplers, e, ds.expressions[e].machine.partial, rng);
                negatives.push_back(std::move(clip));
            }
        }
        // Interleave after each expression's positives, keeping clips
        // expression-major.
        std::vector<LabeledClip> merged;
        merged.reserve(ds.clips.size() + negatives.size());
        for (std::uint32_t e = 0; e < config.expression_count; ++e) {
            for (LabeledClip& c : ds.clips) {
                if (c.expr_id == e) merged.push_back(std::move(c));
            }
            for (LabeledClip& c : negatives) {
                if (c.expr_id == e) merged.push_back(std::move(c));
            }
        }
        ds.clips = std::move(merged);
    }

    ds.videos = emit_noisy_videos(ds.clips, {config.noise, derive_seed(config.seed, kNoise, 0)},
                                  config.params.vocab_size);
    return ds;
}

std::vector<Video> emit_noisy_videos(std::span<const LabeledClip> clips, const NoiseSpec& noise,
                                     std::size_t vocab_size) {
    std::mt19937_64 rng(noise.seed);
    std::vector<Video> videos;
    videos.reserve(clips.size());
    for (const LabeledClip& clip : clips) {
        videos.push_back(emit_noisy(clip, noise.level, vocab_size, rng));
    }
    return videos;
}

}  // namespace actre
