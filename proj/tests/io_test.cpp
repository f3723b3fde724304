#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "actre/io.hpp"

using namespace actre;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& contents)
        : path("io_test_" + name) {
        std::ofstream out(path);
        out << contents;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("vocabulary files skip blanks and comments") {
    TempFile f("vocab.txt", "# actions\n\n  gc  \nd\ntc\n");
    Vocabulary v = read_vocab_file(f.path);
    REQUIRE(v.size() == 3);
    CHECK(v.name(0) == "gc");
    CHECK(v.index_of("tc") == 2u);

    CHECK_THROWS_AS(read_vocab_file("does_not_exist.txt"), std::runtime_error);
    TempFile empty("empty.txt", "# nothing\n");
    CHECK_THROWS_AS(read_vocab_file(empty.path), std::runtime_error);
}

TEST_CASE("video files round-trip exactly through JSON lines") {
    Vocabulary vocab{{"a", "b"}};
    std::vector<Video> videos(2);
    videos[0].id = "x";
    videos[0].frames = {{0.125, 1.0}, {0.3333333333333333, 0.0}};
    videos[1].id = "y";
    videos[1].frames = {{1e-6, 0.999999}};

    std::stringstream buf;
    write_videos(buf, vocab, videos);

    VideoFile file = read_videos(buf);
    CHECK(file.vocab == vocab);
    REQUIRE(file.videos.size() == 2);
    CHECK(file.videos[0].id == "x");
    CHECK(file.videos[0].frames == videos[0].frames);  // bit-exact doubles
    CHECK(file.videos[1].frames == videos[1].frames);
}

TEST_CASE("malformed video files are rejected with clear errors") {
    {
        std::stringstream buf("{\"id\":\"x\",\"frames\":[[0.5]]}\n");
        CHECK_THROWS_WITH_AS(read_videos(buf), doctest::Contains("header"), std::runtime_error);
    }
    {
        std::stringstream buf;
        CHECK_THROWS_AS(read_videos(buf), std::runtime_error);
    }
    {
        std::stringstream buf("{\"vocab\":[\"a\",\"b\"]}\n{\"id\":\"x\",\"frames\":[[0.5]]}\n");
        CHECK_THROWS_AS(read_videos(buf), std::runtime_error);  // frame width 1 != 2
    }
    {
        std::stringstream buf("{\"vocab\":[\"a\"]}\n{\"id\":\"x\",\"frames\":[[1.5]]}\n");
        CHECK_THROWS_AS(read_videos(buf), std::runtime_error);  // probability out of range
    }
    {
        std::stringstream buf("{\"vocab\":[\"a\"]}\nnot json\n");
        CHECK_THROWS_AS(read_videos(buf), std::runtime_error);
    }
}

TEST_CASE("manifests round-trip datasets including machines") {
    GenConfig config;
    config.params = ExprParams{2, 2, 2, 1, 8, 6};
    config.expression_count = 4;
    config.positives_per_expr = 3;
    config.negatives_per_expr = 2;
    config.noise = 0.1;
    config.seed = 99;
    Dataset ds = generate_dataset(config);

    Dataset back = read_manifest(manifest_json(ds));
    CHECK(back.config.seed == ds.config.seed);
    CHECK(back.config.noise == ds.config.noise);
    CHECK(back.vocab == ds.vocab);
    REQUIRE(back.expressions.size() == ds.expressions.size());
    for (std::size_t e = 0; e < ds.expressions.size(); ++e) {
        CHECK(back.expressions[e].text == ds.expressions[e].text);
        CHECK(back.expressions[e].pattern == ds.expressions[e].pattern);
    }
    REQUIRE(back.clips.size() == ds.clips.size());
    for (std::size_t i = 0; i < ds.clips.size(); ++i) {
        CHECK(back.clips[i].id == ds.clips[i].id);
        CHECK(back.clips[i].positive == ds.clips[i].positive);
        REQUIRE(back.clips[i].symbols == ds.clips[i].symbols);
    }
    // Recompiled machines agree with the original labels.
    for (const LabeledClip& clip : back.clips) {
        CHECK(back.expressions[clip.expr_id].machine.partial.accepts(clip.symbols) ==
              clip.positive);
    }
}

TEST_CASE("score files carry a config header and six significant digits") {
    std::stringstream buf;
    nlohmann::json config = {{"scorer", "probabilistic"}, {"alpha", 0.001}};
    const std::pair<std::string, double> rows[] = {
        {"v1", 0.123456789},
        {"v2", 1.0},
    };
    write_scores(buf, config, rows);

    std::string line;
    std::getline(buf, line);
    CHECK(line.rfind("# {", 0) == 0);
    CHECK(line.find("\"alpha\":0.001") != std::string::npos);
    std::getline(buf, line);
    CHECK(line == "v1\t0.123457");
    std::getline(buf, line);
    CHECK(line == "v2\t1");
}

TEST_CASE("format_sig6 keeps six significant digits") {
    CHECK(format_sig6(0.123456789) == "0.123457");
    CHECK(format_sig6(1234567.0) == "1.23457e+06");
    CHECK(format_sig6(0.5) == "0.5");
}

}  // TEST_SUITE
