// ============================================================================
// main.cpp: the `actre` command-line tool
// ============================================================================

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "actre/cli.hpp"

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace actre;

    CLI::App app{"actre: compile temporal action patterns and score event-probability streams"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key-value config file mirroring the flags")
        ->envname("ACTRE_CONFIG");

    const std::map<std::string, ScorerKind> scorer_names{
        {"det", ScorerKind::Deterministic},  {"deterministic", ScorerKind::Deterministic},
        {"prob", ScorerKind::Probabilistic}, {"probabilistic", ScorerKind::Probabilistic}};
    const std::map<std::string, Protocol> protocol_names{
        {"auto", Protocol::Auto}, {"paired", Protocol::Paired}, {"cross", Protocol::Cross}};

    // ── compile ──
    cli::CompileConfig compile_cfg;
    std::string compile_pattern_file;
    auto* compile = app.add_subcommand("compile", "compile a pattern into a DFA")->configurable();
    compile->add_option("--vocab", compile_cfg.vocab_path, "vocabulary file (one name per line)")
        ->required();
    auto* cp = compile->add_option("--pattern", compile_cfg.pattern, "pattern text");
    compile->add_option("--pattern-file", compile_pattern_file, "read the pattern from a file")
        ->excludes(cp);
    compile->add_flag("--untrimmed", compile_cfg.untrimmed, "wrap the pattern as .* pattern .*");
    compile->add_option("--dump", compile_cfg.dump_path, "write the machine as JSON");
    compile->add_option("--dot", compile_cfg.dot_path, "write the machine as DOT");

    // ── score ──
    cli::ScoreConfig score_cfg;
    std::string score_pattern_file;
    auto* score = app.add_subcommand("score", "score videos against a pattern")->configurable();
    auto* sp = score->add_option("--pattern", score_cfg.pattern, "pattern text");
    score->add_option("--pattern-file", score_pattern_file, "read the pattern from a file")
        ->excludes(sp);
    score->add_option("--videos", score_cfg.videos_path, "frame-probability JSONL file")
        ->required();
    score->add_option("--vocab", score_cfg.vocab_path,
                      "optional vocabulary file to check against the videos header");
    score->add_option("--scorer", score_cfg.scorer, "det | prob")
        ->transform(CLI::CheckedTransformer(scorer_names, CLI::ignore_case))
        ->default_str("prob");
    score->add_option("--tau", score_cfg.tau, "threshold for the deterministic scorer");
    score->add_option("--alpha", score_cfg.alpha, "smoothing for the probabilistic scorer");
    score->add_option("--gamma", score_cfg.gamma, "emission exponent for the probabilistic scorer");
    score->add_flag("--untrimmed", score_cfg.untrimmed, "wrap the pattern as .* pattern .*");
    score->add_option("--out", score_cfg.out_path, "scores file (default: stdout)");

    // ── gen ──
    cli::GenCliConfig gen_cfg;
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset")->configurable();
    gen->add_option("--out-dir", gen_cfg.out_dir, "output directory")->required();
    gen->add_option("--expressions", gen_cfg.gen.expression_count, "number of expressions");
    gen->add_option("--positives", gen_cfg.gen.positives_per_expr, "positive clips per expression");
    gen->add_option("--negatives", gen_cfg.gen.negatives_per_expr,
                    "explicit negative clips per expression");
    gen->add_option("--symbol-size", gen_cfg.gen.params.symbol_size, "|w|: primitives per symbol");
    gen->add_option("--symbols", gen_cfg.gen.params.sequence_length, "n: sequential symbols");
    gen->add_option("--branches", gen_cfg.gen.params.branch_count, "d: alternative branches");
    gen->add_option("--branch-start", gen_cfg.gen.params.branch_start, "s: first branched position");
    gen->add_option("--frames", gen_cfg.gen.params.frames, "frames per clip");
    gen->add_option("--vocab-size", gen_cfg.gen.params.vocab_size, "M: vocabulary size");
    gen->add_option("--noise", gen_cfg.gen.noise, "uniform noise half-width x");
    gen->add_option("--seed", gen_cfg.gen.seed, "master seed");

    // ── eval ──
    cli::EvalConfig eval_cfg;
    ScorerKind eval_scorer = ScorerKind::Probabilistic;
    bool eval_compare = false;
    double eval_noise = -1.0;
    std::vector<double> grid_taus, grid_alphas, grid_gammas;
    auto* eval = app.add_subcommand("eval", "evaluate scorers on a generated dataset")->configurable();
    eval->add_option("--manifest", eval_cfg.manifest_path, "dataset manifest")->required();
    eval->add_option("--videos", eval_cfg.videos_path,
                     "score this emission verbatim (single repetition only)");
    auto* es = eval->add_option("--scorer", eval_scorer, "det | prob")
                   ->transform(CLI::CheckedTransformer(scorer_names, CLI::ignore_case))
                   ->default_str("prob");
    eval->add_flag("--compare", eval_compare, "evaluate both scorers")->excludes(es);
    eval->add_option("--tau", eval_cfg.hypers.tau, "deterministic threshold");
    eval->add_option("--alpha", eval_cfg.hypers.alpha, "probabilistic smoothing");
    eval->add_option("--gamma", eval_cfg.hypers.gamma, "probabilistic emission exponent");
    eval->add_option("--grid-tau", grid_taus, "tau grid (enables cross-validation)")
        ->delimiter(',');
    eval->add_option("--grid-alpha", grid_alphas, "alpha grid (enables cross-validation)")
        ->delimiter(',');
    eval->add_option("--grid-gamma", grid_gammas, "gamma grid (enables cross-validation)")
        ->delimiter(',');
    eval->add_option("--repetitions", eval_cfg.repetitions, "noise re-emissions to average over");
    eval->add_option("--protocol", eval_cfg.protocol, "auto | paired | cross")
        ->transform(CLI::CheckedTransformer(protocol_names, CLI::ignore_case))
        ->default_str("auto");
    eval->add_option("--noise", eval_noise, "override the manifest noise level");
    eval->add_option("--report", eval_cfg.report_path, "write the metrics report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (compile->parsed()) {
            if (!compile_pattern_file.empty()) {
                compile_cfg.pattern = read_text_file(compile_pattern_file);
            }
            if (compile_cfg.pattern.empty()) throw CLI::RequiredError("--pattern");
            return cli::cmd_compile(compile_cfg);
        }
        if (score->parsed()) {
            if (!score_pattern_file.empty()) {
                score_cfg.pattern = read_text_file(score_pattern_file);
            }
            if (score_cfg.pattern.empty()) throw CLI::RequiredError("--pattern");
            return cli::cmd_score(score_cfg);
        }
        if (gen->parsed()) {
            return cli::cmd_gen(gen_cfg);
        }
        if (eval->parsed()) {
            if (eval_compare) {
                eval_cfg.run_det = true;
                eval_cfg.run_prob = true;
            } else {
                eval_cfg.run_det = eval_scorer == ScorerKind::Deterministic;
                eval_cfg.run_prob = eval_scorer == ScorerKind::Probabilistic;
            }
            if (eval_noise >= 0.0) eval_cfg.noise_override = eval_noise;
            if (!grid_taus.empty() || !grid_alphas.empty() || !grid_gammas.empty()) {
                HyperGrid grid;
                if (!grid_taus.empty()) grid.taus = grid_taus;
                if (!grid_alphas.empty()) grid.alphas = grid_alphas;
                if (!grid_gammas.empty()) grid.gammas = grid_gammas;
                eval_cfg.grid = std::move(grid);
            }
            return cli::cmd_eval(eval_cfg);
        }
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const actre::ParseError& e) {
        std::cerr << "pattern error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
