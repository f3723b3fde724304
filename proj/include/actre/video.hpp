#pragma once

#include <string>
#include <vector>

namespace actre {

// Per-frame probabilities p(a|x), one entry per vocabulary action.  The
// classifiers are multi-label, so entries need not sum to one.
using FrameProbs = std::vector<double>;

struct Video {
    std::string id;
    std::vector<FrameProbs> frames;
};

// Throws std::invalid_argument unless the video is non-empty, every frame
// has exactly `vocab_size` entries, and every entry lies in [0, 1].
void validate_video(const Video& v, std::size_t vocab_size);

}  // namespace actre
