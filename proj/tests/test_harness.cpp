#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "migo/errors.hpp"
#include "migo/harness.hpp"
#include "support/golden.hpp"

using namespace migo;

namespace {

const GameId kOx = GameId::NoughtsAndCrosses;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::filesystem::path temp_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("play_episode: traces are legal, values never exceed expectation") {
    OracleTable oracle = OracleTable::solve(kOx);
    ExperimentConfig cfg;
    cfg.learner = LearnerKind::Random;
    Rng init(1);
    auto agent = make_agent(cfg, init);
    Rng rng(2);
    auto boards = initial_board_set(kOx);
    for (int i = 0; i < 50; ++i) {
        const GameState& b = boards[rng.uniform(static_cast<std::uint32_t>(boards.size()))];
        auto [trace, actual] = play_episode(*agent, oracle, b, rng);
        CHECK(terminal(trace.back(), kOx));
        int prev = to_int(oracle.expected_outcome(trace.front()));
        for (std::size_t j = 1; j < trace.size(); ++j) {
            int now = to_int(oracle.expected_outcome(trace[j]));
            CHECK(now <= prev); // the expected outcome can only decrease
            prev = now;
        }
        CHECK(to_int(actual) <= to_int(oracle.expected_outcome(b)));
        int regret = oracle.minimax_regret(b, actual);
        CHECK(regret >= 0);
        CHECK(regret <= 2);
    }
}

TEST_CASE("run_experiment: byte-identical outputs for identical configs") {
    ExperimentConfig cfg;
    cfg.game = kOx;
    cfg.learner = LearnerKind::QLearning;
    cfg.episodes = 40;
    cfg.runs = 3;
    cfg.seed = 99;
    cfg.threads = 2;
    OracleTable oracle = oracle_for(cfg);
    ExperimentResult a = run_experiment(cfg, oracle);
    ExperimentResult b = run_experiment(cfg, oracle);
    CHECK(a.curve_csv() == b.curve_csv());
    CHECK(a.curve_csv().rfind("episode,mean_cum_regret,std_cum_regret\n", 0) == 0);
    for (int r = 0; r < 3; ++r) {
        CHECK(a.runs[r].board_fingerprint == b.runs[r].board_fingerprint);
        CHECK(a.runs[r].final_rules == b.runs[r].final_rules);
    }
}

TEST_CASE("run_experiment: cumulative regret is nondecreasing per run") {
    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn3;
    cfg.learner = LearnerKind::Random;
    cfg.episodes = 60;
    cfg.runs = 2;
    cfg.seed = 4;
    cfg.apply_game_defaults();
    OracleTable oracle = oracle_for(cfg);
    ExperimentResult r = run_experiment(cfg, oracle);
    for (const auto& run : r.curve.per_run) {
        for (std::size_t e = 1; e < run.size(); ++e) CHECK(run[e] >= run[e - 1]);
    }
}

TEST_CASE("board streams depend on the seed and run, not the learner") {
    ExperimentConfig a;
    a.game = kOx;
    a.learner = LearnerKind::Random;
    a.episodes = 25;
    a.runs = 2;
    a.seed = 31;
    ExperimentConfig b = a;
    b.learner = LearnerKind::QLearning;
    OracleTable oracle = oracle_for(a);
    ExperimentResult ra = run_experiment(a, oracle);
    ExperimentResult rb = run_experiment(b, oracle);
    for (int r = 0; r < 2; ++r) {
        CHECK(ra.runs[r].board_fingerprint == rb.runs[r].board_fingerprint);
        for (int e = 0; e < 25; ++e)
            CHECK(ra.runs[r].records[e].board == rb.runs[r].records[e].board);
    }
}

TEST_CASE("menace is rejected on hexapawn4") {
    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn4;
    cfg.learner = LearnerKind::Menace;
    CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("config json round-trips, metadata rerun reproduces the csv byte-for-byte") {
    auto dir = temp_dir("migo_harness_meta");
    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn3;
    cfg.learner = LearnerKind::MigoMixed;
    cfg.episodes = 30;
    cfg.runs = 2;
    cfg.seed = 12;
    cfg.apply_game_defaults();
    cfg.out_prefix = (dir / "exp").string();
    OracleTable oracle = oracle_for(cfg);
    ExperimentResult r = run_experiment(cfg, oracle);
    emit_outputs(r);

    ExperimentConfig reloaded = ExperimentConfig::from_json(slurp(cfg.out_prefix + ".meta.json"));
    CHECK(reloaded.to_json() == cfg.to_json());
    ExperimentResult again = run_experiment(reloaded, oracle_for(reloaded));
    CHECK(again.curve_csv() == slurp(cfg.out_prefix + ".csv"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("emit_outputs writes the documented files") {
    auto dir = temp_dir("migo_harness_emit");
    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn3;
    cfg.learner = LearnerKind::MigoMixed;
    cfg.episodes = 15;
    cfg.runs = 1;
    cfg.seed = 13;
    cfg.apply_game_defaults();
    cfg.out_prefix = (dir / "out").string();
    cfg.dump_rules = (dir / "final.rules").string();
    ExperimentResult r = run_experiment(cfg, oracle_for(cfg));
    emit_outputs(r);
    CHECK(std::filesystem::exists(dir / "out.csv"));
    CHECK(std::filesystem::exists(dir / "out.meta.json"));
    CHECK(std::filesystem::exists(dir / "out.run0.jsonl"));
    CHECK(std::filesystem::exists(dir / "out.run0.rules"));
    CHECK(std::filesystem::exists(dir / "final.rules"));
    // the rules dump parses and carries the game header
    mil::Program p = mil::read_rules_file((dir / "final.rules").string(), GameId::Hexapawn3);
    CHECK(!p.empty());
    std::filesystem::remove_all(dir);
}

TEST_CASE("an empty transferred rule file leaves the seeded arm identical to unseeded") {
    auto dir = temp_dir("migo_harness_empty_rules");
    const std::string empty_rules = (dir / "empty.rules").string();
    std::ofstream(empty_rules).close();

    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn3;
    cfg.learner = LearnerKind::MigoMixed;
    cfg.episodes = 25;
    cfg.runs = 2;
    cfg.seed = 14;
    cfg.apply_game_defaults();
    OracleTable oracle = oracle_for(cfg);
    ExperimentResult plain = run_experiment(cfg, oracle);
    ExperimentConfig seeded = cfg;
    seeded.rules_in = empty_rules;
    ExperimentResult with_empty = run_experiment(seeded, oracle);
    CHECK(plain.curve_csv() == with_empty.curve_csv());
    std::filesystem::remove_all(dir);
}

TEST_CASE("run_transfer: matched board streams across arms") {
    ExperimentConfig pre;
    pre.game = GameId::Hexapawn3;
    pre.learner = LearnerKind::MigoMixed;
    pre.episodes = 30;
    pre.runs = 2;
    pre.seed = 15;
    pre.apply_game_defaults();
    ExperimentConfig tgt;
    tgt.game = kOx;
    tgt.learner = LearnerKind::MigoMixed;
    tgt.episodes = 30;
    tgt.runs = 2;
    tgt.seed = 15;
    tgt.apply_game_defaults();
    TransferResult tr = run_transfer(pre, tgt);
    REQUIRE(tr.seeded.runs.size() == 2);
    for (int r = 0; r < 2; ++r)
        CHECK(tr.seeded.runs[r].board_fingerprint == tr.unseeded.runs[r].board_fingerprint);
    CHECK(tr.pretrained_rules.size() == 2);
}

TEST_CASE("learner kinds round-trip") {
    for (LearnerKind k : {LearnerKind::MigoMixed, LearnerKind::MigoSeparated, LearnerKind::Menace,
                          LearnerKind::QLearning, LearnerKind::Dqn, LearnerKind::Random})
        CHECK(learner_kind_from_string(learner_kind_string(k)) == k);
    CHECK_THROWS_AS(learner_kind_from_string("sarsa"), ValidationError);
}

TEST_CASE("the stability counter defaults follow the game") {
    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn3;
    cfg.apply_game_defaults();
    CHECK(cfg.migo.stability_counter == 5);
    cfg.game = kOx;
    cfg.apply_game_defaults();
    CHECK(cfg.migo.stability_counter == 10);
}

TEST_CASE("per-episode rule snapshots are written when the flag is set") {
    auto dir = temp_dir("migo_harness_snap");
    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn3;
    cfg.learner = LearnerKind::MigoMixed;
    cfg.episodes = 6;
    cfg.runs = 1;
    cfg.seed = 16;
    cfg.apply_game_defaults();
    cfg.out_prefix = (dir / "snap").string();
    cfg.snapshot_rules = true;
    ExperimentResult r = run_experiment(cfg, oracle_for(cfg));
    emit_outputs(r);
    for (int e = 1; e <= 6; ++e) {
        char name[64];
        std::snprintf(name, sizeof name, "snap.run0.ep%04d.rules", e);
        CHECK(std::filesystem::exists(dir / name));
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("results do not depend on the worker thread count") {
    ExperimentConfig cfg;
    cfg.game = GameId::Hexapawn3;
    cfg.learner = LearnerKind::MigoMixed;
    cfg.episodes = 30;
    cfg.runs = 4;
    cfg.seed = 17;
    cfg.apply_game_defaults();
    OracleTable oracle = oracle_for(cfg);
    cfg.threads = 1;
    ExperimentResult serial = run_experiment(cfg, oracle);
    cfg.threads = 4;
    ExperimentResult parallel = run_experiment(cfg, oracle);
    CHECK(serial.curve_csv() == parallel.curve_csv());
    for (int r = 0; r < 4; ++r)
        CHECK(serial.runs[r].final_rules == parallel.runs[r].final_rules);
}

TEST_CASE("run_experiment with rules_in seeds the learner from a file") {
    auto dir = temp_dir("migo_harness_rules_in");
    const std::string rules = (dir / "ox.rules").string();
    mil::write_rules_file(rules, testing_support::golden_program(kOx), kOx);
    ExperimentConfig cfg;
    cfg.game = kOx;
    cfg.learner = LearnerKind::MigoMixed;
    cfg.episodes = 40;
    cfg.runs = 2;
    cfg.seed = 18;
    cfg.apply_game_defaults();
    OracleTable oracle = oracle_for(cfg);
    ExperimentResult plain = run_experiment(cfg, oracle);
    cfg.rules_in = rules;
    ExperimentResult seeded = run_experiment(cfg, oracle);
    CHECK(seeded.curve.mean.back() < plain.curve.mean.back());
    std::filesystem::remove_all(dir);
}

TEST_CASE("a random learner's mean per-episode regret stays under the worst case") {
    ExperimentConfig cfg;
    cfg.game = kOx;
    cfg.learner = LearnerKind::Random;
    cfg.episodes = 300;
    cfg.runs = 4;
    cfg.seed = 19;
    ExperimentResult r = run_experiment(cfg, oracle_for(cfg));
    const double per_episode = r.curve.mean.back() / cfg.episodes;
    CHECK(per_episode <= 19.0 / 12.0); // the worst case of a random player
    CHECK(per_episode > 0.5);          // and it is nowhere near optimal
}
