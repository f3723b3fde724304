// ============================================================================
// actre/io.hpp: file formats
// ============================================================================
//
//   vocabulary : plain text, one action name per line ('#' comments allowed)
//   videos     : JSON Lines: first record {"vocab": [names...]}, then one
//                 {"id": ..., "frames": [[p_1..p_M], ...]} per video
//   manifest   : JSON: generation config, vocabulary, expression texts, and
//                 the labeled ground-truth symbol sequences of every clip
//   scores     : text: one "<video id>\t<score>" line per video, preceded
//                 by a '#' header embedding the scoring config as JSON
//
// Numbers inside JSON keep full precision; scores in the text format are
// printed with six significant digits.
//
// ============================================================================

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "actre/synth.hpp"
#include "actre/video.hpp"

namespace actre {

// ── vocabulary files ────────────────────────────────────────────────────────

Vocabulary read_vocab_file(const std::string& path);

// ── frame-probability files (JSON Lines) ────────────────────────────────────

struct VideoFile {
    Vocabulary vocab;
    std::vector<Video> videos;
};

VideoFile read_videos(std::istream& in);
VideoFile read_videos_file(const std::string& path);

void write_videos(std::ostream& out, const Vocabulary& vocab, std::span<const Video> videos);
void write_videos_file(const std::string& path, const Vocabulary& vocab,
                       std::span<const Video> videos);

// ── dataset manifests ───────────────────────────────────────────────────────

nlohmann::json manifest_json(const Dataset& ds);
void write_manifest_file(const std::string& path, const Dataset& ds);

// Rebuild a dataset (recompiling every expression) from a manifest.  Videos
// are not part of the manifest; load them separately or re-emit from the
// clips' ground truth.
Dataset read_manifest(const nlohmann::json& manifest);
Dataset read_manifest_file(const std::string& path);

// ── score files ─────────────────────────────────────────────────────────────

void write_scores(std::ostream& out, const nlohmann::json& config,
                  std::span<const std::pair<std::string, double>> scores);

// "%.6g" rendering used by the text outputs.
std::string format_sig6(double value);

}  // namespace actre
