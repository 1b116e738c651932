// Command-line driver: oracle building, learning experiments, transfer
// experiments and rule-file validation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "migo/errors.hpp"
#include "migo/harness.hpp"

using namespace migo;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Extracts {"pretrain": {...}} / {"target": {...}} sections without another
// JSON dependency here: ExperimentConfig::from_json tolerates a wrapper key.
std::string transfer_section(const std::string& text, const std::string& key) {
    const std::size_t at = text.find("\"" + key + "\"");
    if (at == std::string::npos)
        throw ValidationError("transfer config is missing the \"" + key + "\" section");
    const std::size_t open = text.find('{', at);
    if (open == std::string::npos) throw ValidationError("bad transfer config");
    int depth = 0;
    for (std::size_t i = open; i < text.size(); ++i) {
        if (text[i] == '{') ++depth;
        if (text[i] == '}' && --depth == 0) return text.substr(open, i - open + 1);
    }
    throw ValidationError("bad transfer config");
}

int cmd_oracle_build(const std::string& game, const std::string& out) {
    OracleTable table = OracleTable::solve(game_id_from_string(game));
    table.save(out);
    std::cout << "solved " << game << ": " << table.size() << " canonical states -> " << out
              << "\n";
    return 0;
}

struct RunFlags {
    std::string config_path, game, learner, oracle, out_prefix, rules_in, dump_rules;
    int episodes = -1, runs = -1, threads = -1;
    long long seed = -1;
    bool snapshot_rules = false;
};

ExperimentConfig merge_config(const RunFlags& f) {
    ExperimentConfig cfg;
    if (!f.config_path.empty()) {
        cfg = ExperimentConfig::from_json(slurp(f.config_path));
    } else {
        cfg.apply_game_defaults();
    }
    if (!f.game.empty()) {
        cfg.game = game_id_from_string(f.game);
        if (f.config_path.empty()) cfg.apply_game_defaults();
    }
    if (!f.learner.empty()) cfg.learner = learner_kind_from_string(f.learner);
    if (f.episodes >= 0) cfg.episodes = f.episodes;
    if (f.runs >= 0) cfg.runs = f.runs;
    if (f.seed >= 0) cfg.seed = static_cast<std::uint64_t>(f.seed);
    if (f.threads >= 0) cfg.threads = f.threads;
    if (!f.oracle.empty()) cfg.oracle_path = f.oracle;
    if (!f.out_prefix.empty()) cfg.out_prefix = f.out_prefix;
    if (!f.rules_in.empty()) cfg.rules_in = f.rules_in;
    if (!f.dump_rules.empty()) cfg.dump_rules = f.dump_rules;
    if (f.snapshot_rules) cfg.snapshot_rules = true;
    return cfg;
}

int cmd_run(const RunFlags& flags) {
    ExperimentConfig cfg = merge_config(flags);
    cfg.validate();
    OracleTable oracle = oracle_for(cfg);
    ExperimentResult result = run_experiment(cfg, oracle);
    emit_outputs(result);
    const std::size_t last = result.curve.mean.size() - 1;
    std::cout << game_id_string(cfg.game) << " " << learner_kind_string(cfg.learner) << ": "
              << cfg.runs << " runs x " << cfg.episodes
              << " episodes, mean final cumulative regret " << result.curve.mean[last] << "\n";
    if (!cfg.out_prefix.empty())
        std::cout << "wrote " << cfg.out_prefix << ".csv, .meta.json, .run*.jsonl\n";
    return 0;
}

int cmd_transfer(const std::string& config_path, const RunFlags& pre_flags,
                 const RunFlags& tgt_flags) {
    ExperimentConfig pre, tgt;
    if (!config_path.empty()) {
        // one file with {"pretrain": {...}, "target": {...}}
        const std::string text = slurp(config_path);
        pre = ExperimentConfig::from_json(transfer_section(text, "pretrain"));
        tgt = ExperimentConfig::from_json(transfer_section(text, "target"));
        RunFlags pf = pre_flags, tf = tgt_flags;
        if (!pf.game.empty()) pre.game = game_id_from_string(pf.game);
        if (pf.episodes >= 0) pre.episodes = pf.episodes;
        if (!tf.game.empty()) tgt.game = game_id_from_string(tf.game);
        if (tf.episodes >= 0) tgt.episodes = tf.episodes;
        if (tf.runs >= 0) { tgt.runs = tf.runs; pre.runs = tf.runs; }
        if (tf.seed >= 0) { tgt.seed = static_cast<std::uint64_t>(tf.seed); pre.seed = tgt.seed; }
        if (!tf.out_prefix.empty()) tgt.out_prefix = tf.out_prefix;
        if (tf.threads >= 0) { tgt.threads = tf.threads; pre.threads = tf.threads; }
    } else {
        pre = merge_config(pre_flags);
        tgt = merge_config(tgt_flags);
    }
    pre.validate();
    tgt.validate();
    TransferResult result = run_transfer(pre, tgt);
    emit_outputs(result.seeded);
    emit_outputs(result.unseeded);
    if (!tgt.out_prefix.empty()) {
        std::ofstream cfg(tgt.out_prefix + ".transfer.json", std::ios::binary);
        cfg << "{\n\"pretrain\": " << pre.to_json() << ",\n\"target\": " << tgt.to_json()
            << "\n}\n";
    }
    if (!tgt.out_prefix.empty()) {
        for (std::size_t r = 0; r < result.pretrained_rules.size(); ++r) {
            mil::Program p = mil::parse_rules(result.pretrained_rules[r]);
            mil::write_rules_file(tgt.out_prefix + ".pretrain.run" + std::to_string(r) + ".rules",
                                  p, pre.game);
        }
    }
    const std::size_t last = result.seeded.curve.mean.size() - 1;
    std::cout << "transfer " << game_id_string(pre.game) << " -> " << game_id_string(tgt.game)
              << ": final mean cumulative regret seeded " << result.seeded.curve.mean[last]
              << " vs unseeded " << result.unseeded.curve.mean[last] << "\n";
    return 0;
}

int cmd_rules_check(const std::string& path, const std::string& game) {
    std::optional<GameId> header;
    mil::Program p = mil::parse_rules(slurp(path), &header);
    if (!game.empty() && header && *header != game_id_from_string(game))
        throw ValidationError(path + " header names " + game_id_string(*header) + ", expected " +
                              game);
    std::cout << path << ": " << p.size() << " clauses, " << p.defined_predicates().size()
              << " predicates";
    if (header) std::cout << ", game " << game_id_string(*header);
    std::cout << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"game strategy learning workbench"};
    app.require_subcommand(1);

    // oracle build
    auto* oracle_cmd = app.add_subcommand("oracle", "minimax oracle utilities");
    oracle_cmd->require_subcommand(1);
    auto* build_cmd = oracle_cmd->add_subcommand("build", "solve a game and write the table");
    std::string build_game, build_out;
    build_cmd->add_option("--game", build_game, "ox | hexapawn3 | hexapawn4")->required();
    build_cmd->add_option("--out", build_out, "output path")->required();

    // run
    auto* run_cmd = app.add_subcommand("run", "run a learning experiment");
    RunFlags rf;
    run_cmd->add_option("--config", rf.config_path, "JSON config (flags override it)");
    run_cmd->add_option("--game", rf.game, "ox | hexapawn3 | hexapawn4");
    run_cmd->add_option("--learner", rf.learner,
                        "migo-mixed | migo-separated | menace | qlearning | dqn | random");
    run_cmd->add_option("--episodes", rf.episodes, "episodes per run");
    run_cmd->add_option("--runs", rf.runs, "independent runs");
    run_cmd->add_option("--seed", rf.seed, "master seed");
    run_cmd->add_option("--oracle", rf.oracle, "prebuilt oracle file");
    run_cmd->add_option("--out-prefix", rf.out_prefix, "output file prefix");
    run_cmd->add_option("--rules-in", rf.rules_in, "rule file loaded before learning (MIGO)");
    run_cmd->add_option("--dump-rules", rf.dump_rules, "write run 0's final rules here");
    run_cmd->add_flag("--snapshot-rules", rf.snapshot_rules, "write rules after every episode");
    run_cmd->add_option("--threads", rf.threads, "worker threads (0 = auto)");

    // transfer
    auto* tr_cmd = app.add_subcommand("transfer", "pretrain on one game, reuse on another");
    RunFlags pre_flags, tgt_flags;
    std::string tr_config;
    tr_cmd->add_option("--config", tr_config, "JSON config with pretrain/target sections");
    tr_cmd->add_option("--pretrain-game", pre_flags.game, "source game");
    tr_cmd->add_option("--pretrain-episodes", pre_flags.episodes, "pretraining episodes");
    tr_cmd->add_option("--target-game", tgt_flags.game, "target game");
    tr_cmd->add_option("--episodes", tgt_flags.episodes, "target episodes");
    tr_cmd->add_option("--runs", tgt_flags.runs, "independent runs");
    tr_cmd->add_option("--seed", tgt_flags.seed, "master seed");
    tr_cmd->add_option("--out-prefix", tgt_flags.out_prefix, "output file prefix");
    tr_cmd->add_option("--threads", tgt_flags.threads, "worker threads");

    // rules check
    auto* rules_cmd = app.add_subcommand("rules", "rule file utilities");
    rules_cmd->require_subcommand(1);
    auto* check_cmd = rules_cmd->add_subcommand("check", "parse and validate a rule file");
    std::string check_path, check_game;
    check_cmd->add_option("path", check_path, "rule file")->required();
    check_cmd->add_option("--game", check_game, "expected game id");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*build_cmd) return cmd_oracle_build(build_game, build_out);
        if (*run_cmd) return cmd_run(rf);
        if (*tr_cmd) {
            // transfer pretraining uses mixed learning unless configured otherwise
            pre_flags.learner = pre_flags.learner.empty() ? "migo-mixed" : pre_flags.learner;
            tgt_flags.learner = tgt_flags.learner.empty() ? "migo-mixed" : tgt_flags.learner;
            pre_flags.seed = tgt_flags.seed;
            pre_flags.runs = tgt_flags.runs;
            pre_flags.threads = tgt_flags.threads;
            return cmd_transfer(tr_config, pre_flags, tgt_flags);
        }
        if (*check_cmd) return cmd_rules_check(check_path, check_game);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
