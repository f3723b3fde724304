#include "actre/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace actre {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error(what); }

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) fail("cannot open '" + path + "' for writing");
    return out;
}

std::string trimmed(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

// ── vocabulary files ────────────────────────────────────────────────────────

Vocabulary read_vocab_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        std::string name = trimmed(line);
        if (name.empty() || name.front() == '#') continue;
        names.push_back(std::move(name));
    }
    if (names.empty()) fail("vocabulary file '" + path + "' lists no action names");
    return Vocabulary{std::move(names)};
}

// ── frame-probability files ─────────────────────────────────────────────────

namespace {

Vocabulary vocab_from_json(const nlohmann::json& names) {
    if (!names.is_array()) fail("'vocab' must be an array of action names");
    return Vocabulary{names.get<std::vector<std::string>>()};
}

}  // namespace

VideoFile read_videos(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    VideoFile file;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        nlohmann::json record;
        try {
            record = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            fail("videos line " + std::to_string(line_no) + ": " + e.what());
        }
        if (!have_header) {
            if (!record.contains("vocab")) {
                fail("videos line 1 must be a {\"vocab\": [...]} header record");
            }
            file.vocab = vocab_from_json(record["vocab"]);
            have_header = true;
            continue;
        }
        if (!record.contains("id") || !record.contains("frames")) {
            fail("videos line " + std::to_string(line_no) + ": expected 'id' and 'frames'");
        }
        Video v;
        v.id = record["id"].get<std::string>();
        for (const auto& row : record["frames"]) {
            v.frames.push_back(row.get<FrameProbs>());
        }
        try {
            validate_video(v, file.vocab.size());
        } catch (const std::invalid_argument& e) {
            fail("videos line " + std::to_string(line_no) + ": " + e.what());
        }
        file.videos.push_back(std::move(v));
    }
    if (!have_header) fail("videos input is empty");
    return file;
}

VideoFile read_videos_file(const std::string& path) {
    std::ifstream in = open_input(path);
    try {
        return read_videos(in);
    } catch (const std::invalid_argument& e) {
        fail(path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        fail(path + ": " + e.what());
    }
}

void write_videos(std::ostream& out, const Vocabulary& vocab, std::span<const Video> videos) {
    nlohmann::json header;
    header["vocab"] = vocab.names();
    out << header.dump() << '\n';
    for (const Video& v : videos) {
        nlohmann::json record;
        record["id"] = v.id;
        record["frames"] = v.frames;
        out << record.dump() << '\n';
    }
}

void write_videos_file(const std::string& path, const Vocabulary& vocab,
                       std::span<const Video> videos) {
    std::ofstream out = open_output(path);
    write_videos(out, vocab, videos);
}

// ── manifests ───────────────────────────────────────────────────────────────

nlohmann::json manifest_json(const Dataset& ds) {
    nlohmann::json j;
    j["config"] = {
        {"expressions", ds.config.expression_count},
        {"positives", ds.config.positives_per_expr},
        {"negatives", ds.config.negatives_per_expr},
        {"symbol_size", ds.config.params.symbol_size},
        {"sequence_length", ds.config.params.sequence_length},
        {"branches", ds.config.params.branch_count},
        {"branch_start", ds.config.params.branch_start},
        {"frames", ds.config.params.frames},
        {"vocab_size", ds.config.params.vocab_size},
        {"noise", ds.config.noise},
        {"seed", ds.config.seed},
    };
    j["vocab"] = ds.vocab.names();
    nlohmann::json exprs = nlohmann::json::array();
    for (const Expression& e : ds.expressions) {
        exprs.push_back({{"id", e.id}, {"pattern", e.text}});
    }
    j["expressions"] = std::move(exprs);
    nlohmann::json clips = nlohmann::json::array();
    for (const LabeledClip& c : ds.clips) {
        nlohmann::json symbols = nlohmann::json::array();
        for (const SymbolSet& w : c.symbols) {
            nlohmann::json names = nlohmann::json::array();
            for (std::uint32_t a : w.members()) names.push_back(ds.vocab.name(a));
            symbols.push_back(std::move(names));
        }
        clips.push_back({{"id", c.id},
                         {"expr", c.expr_id},
                         {"label", c.positive ? "positive" : "negative"},
                         {"symbols", std::move(symbols)}});
    }
    j["clips"] = std::move(clips);
    return j;
}

void write_manifest_file(const std::string& path, const Dataset& ds) {
    std::ofstream out = open_output(path);
    out << manifest_json(ds).dump(2) << '\n';
}

Dataset read_manifest(const nlohmann::json& manifest) {
    Dataset ds;
    const nlohmann::json& cfg = manifest.at("config");
    ds.config.expression_count = cfg.at("expressions").get<std::uint32_t>();
    ds.config.positives_per_expr = cfg.at("positives").get<std::uint32_t>();
    ds.config.negatives_per_expr = cfg.at("negatives").get<std::uint32_t>();
    ds.config.params.symbol_size = cfg.at("symbol_size").get<std::uint32_t>();
    ds.config.params.sequence_length = cfg.at("sequence_length").get<std::uint32_t>();
    ds.config.params.branch_count = cfg.at("branches").get<std::uint32_t>();
    ds.config.params.branch_start = cfg.at("branch_start").get<std::uint32_t>();
    ds.config.params.frames = cfg.at("frames").get<std::uint32_t>();
    ds.config.params.vocab_size = cfg.at("vocab_size").get<std::uint32_t>();
    ds.config.noise = cfg.at("noise").get<double>();
    ds.config.seed = cfg.at("seed").get<std::uint64_t>();

    ds.vocab = vocab_from_json(manifest.at("vocab"));
    for (const auto& e : manifest.at("expressions")) {
        ds.expressions.push_back(make_expression(e.at("id").get<std::uint32_t>(),
                                                 parse(e.at("pattern").get<std::string>(), ds.vocab),
                                                 ds.vocab));
    }
    for (const auto& c : manifest.at("clips")) {
        LabeledClip clip;
        clip.id = c.at("id").get<std::string>();
        clip.expr_id = c.at("expr").get<std::uint32_t>();
        if (clip.expr_id >= ds.expressions.size()) {
            fail("clip '" + clip.id + "' refers to expression " + std::to_string(clip.expr_id) +
                 " but the manifest lists " + std::to_string(ds.expressions.size()));
        }
        const std::string label = c.at("label").get<std::string>();
        if (label != "positive" && label != "negative") {
            fail("clip '" + clip.id + "' has unknown label '" + label + "'");
        }
        clip.positive = label == "positive";
        for (const auto& frame : c.at("symbols")) {
            std::vector<std::uint32_t> members;
            for (const auto& name : frame) {
                auto idx = ds.vocab.index_of(name.get<std::string>());
                if (!idx) fail("clip '" + clip.id + "' uses unknown action '" +
                               name.get<std::string>() + "'");
                members.push_back(*idx);
            }
            clip.symbols.emplace_back(std::move(members));
        }
        ds.clips.push_back(std::move(clip));
    }
    return ds;
}

Dataset read_manifest_file(const std::string& path) {
    std::ifstream in = open_input(path);
    nlohmann::json manifest;
    try {
        in >> manifest;
        return read_manifest(manifest);
    } catch (const nlohmann::json::exception& e) {
        fail(path + ": " + e.what());
    }
}

// ── score files ─────────────────────────────────────────────────────────────

std::string format_sig6(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", value);
    return buf;
}

void write_scores(std::ostream& out, const nlohmann::json& config,
                  std::span<const std::pair<std::string, double>> scores) {
    out << "# " << config.dump() << '\n';
    for (const auto& [id, score] : scores) {
        out << id << '\t' << format_sig6(score) << '\n';
    }
}

}  // namespace actre
