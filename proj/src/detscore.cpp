#include "actre/detscore.hpp"

#include <stdexcept>

namespace actre {

void validate_video(const Video& v, std::size_t vocab_size) {
    if (v.frames.empty()) {
        throw std::invalid_argument("video '" + v.id + "' has no frames");
    }
    for (const FrameProbs& f : v.frames) {
        if (f.size() != vocab_size) {
            throw std::invalid_argument("video '" + v.id + "': frame has " +
                                        std::to_string(f.size()) + " probabilities, expected " +
                                        std::to_string(vocab_size));
        }
        for (double p : f) {
            if (!(p >= 0.0 && p <= 1.0)) {
                throw std::invalid_argument("video '" + v.id + "': probability out of [0,1]");
            }
        }
    }
}

SymbolSet threshold_frame(const FrameProbs& frame, double tau) {
    std::vector<std::uint32_t> members;
    for (std::uint32_t a = 0; a < frame.size(); ++a) {
        if (frame[a] >= tau) members.push_back(a);
    }
    return SymbolSet{std::move(members)};
}

HaltReport simulate(const Dfa& d, std::span<const SymbolSet> symbols) {
    HaltReport report;
    std::uint32_t q = d.start;
    for (const SymbolSet& w : symbols) {
        std::int32_t t = d.step_symbol(q, w);
        if (t == Dfa::kNoState) break;
        if (d.reject && static_cast<std::uint32_t>(t) == *d.reject) break;
        q = static_cast<std::uint32_t>(t);
        ++report.steps_taken;
    }
    report.halted_state = q;
    return report;
}

HaltReport simulate(const Dfa& d, const Video& v, double tau) {
    std::vector<SymbolSet> symbols;
    symbols.reserve(v.frames.size());
    for (const FrameProbs& f : v.frames) symbols.push_back(threshold_frame(f, tau));
    return simulate(d, std::span<const SymbolSet>(symbols));
}

double det_score(const Dfa& d, const DistanceMaps& dist, std::span<const SymbolSet> symbols) {
    const HaltReport report = simulate(d, symbols);
    const std::uint32_t q = report.halted_state;
    if (d.is_final(q)) return 1.0;
    const std::uint32_t forward = dist.from_start[q];
    const std::uint32_t remaining = dist.to_final[q];
    if (remaining == DistanceMaps::kInfinity || forward == 0) return 0.0;
    return static_cast<double>(forward) / static_cast<double>(forward + remaining);
}

double det_score(const Dfa& d, const DistanceMaps& dist, const Video& v, double tau) {
    std::vector<SymbolSet> symbols;
    symbols.reserve(v.frames.size());
    for (const FrameProbs& f : v.frames) symbols.push_back(threshold_frame(f, tau));
    return det_score(d, dist, std::span<const SymbolSet>(symbols));
}

}  // namespace actre
