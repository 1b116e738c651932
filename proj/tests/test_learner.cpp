#include <filesystem>
#include <fstream>
#include <set>

#include <doctest.h>

#include "migo/errors.hpp"
#include "migo/harness.hpp"
#include "migo/learner.hpp"
#include "support/golden.hpp"

using namespace migo;

namespace {

const GameId kOx = GameId::NoughtsAndCrosses;
const GameId kH3 = GameId::Hexapawn3;

const OracleTable& table(GameId g) {
    static OracleTable ox = OracleTable::solve(kOx);
    static OracleTable h3 = OracleTable::solve(kH3);
    return g == kOx ? ox : h3;
}

// a deterministic won trace: fast optimal play from an expected-win board
std::vector<GameState> won_trace(GameId g, bool delay_once) {
    const auto& t = table(g);
    for (const GameState& b : initial_board_set(g)) {
        if (t.expected_outcome(b) != GameValue::Won) continue;
        std::vector<GameState> trace{b};
        GameState s = b;
        bool delayed = false;
        while (!terminal(s, g)) {
            GameState next = t.best_reply(s);
            if (delay_once && !delayed && s.to_move == Mark::X) {
                for (const GameState& m : legal_moves(s, g)) {
                    if (won(m, Mark::X, g)) continue;
                    if (t.expected_outcome(m) == GameValue::Won) {
                        next = m;
                        delayed = true;
                        break;
                    }
                }
            }
            trace.push_back(next);
            s = next;
        }
        if (delay_once && !delayed) continue;
        if (won(s, Mark::X, g)) return trace;
    }
    return {};
}

std::vector<GameState> drawn_trace(GameId g) {
    const auto& t = table(g);
    for (const GameState& b : initial_board_set(g)) {
        if (t.expected_outcome(b) != GameValue::Drawn) continue;
        std::vector<GameState> trace{b};
        GameState s = b;
        while (!terminal(s, g)) {
            s = t.best_reply(s);
            trace.push_back(s);
        }
        if (drawn(s, g)) return trace;
    }
    return {};
}

} // namespace

TEST_CASE("label_episode: a two-full-move win labels depths 2 and 1") {
    auto trace = won_trace(kH3, true);
    REQUIRE(trace.size() == 4); // x, o, x wins
    auto labels = label_episode(trace, GameValue::Won, Strategy{}, kH3);
    REQUIRE(labels.size() == 2);
    CHECK(labels[0].family == TaskFamily::Win);
    CHECK(labels[0].depth == 2);
    CHECK(labels[1].depth == 1);
}

TEST_CASE("label_episode: losses label nothing") {
    // x hands o the game from a drawn board
    const auto& t = table(kOx);
    for (const GameState& b : initial_board_set(kOx)) {
        if (t.expected_outcome(b) != GameValue::Drawn) continue;
        std::vector<GameState> trace{b};
        GameState s = b;
        while (!terminal(s, kOx)) {
            if (s.to_move == Mark::X) {
                // pick the worst move on purpose
                GameState worst = legal_moves(s, kOx).front();
                for (const GameState& m : legal_moves(s, kOx))
                    if (to_int(t.expected_outcome(m)) < to_int(t.expected_outcome(worst)))
                        worst = m;
                s = worst;
            } else {
                s = t.best_reply(s);
            }
            trace.push_back(s);
        }
        if (!won(s, Mark::O, kOx)) continue;
        CHECK(label_episode(trace, GameValue::Lost, Strategy{}, kOx).empty());
        return;
    }
    FAIL("no lost game found");
}

TEST_CASE("label_episode: draws label both players while the win tier is silent") {
    auto trace = drawn_trace(kOx);
    REQUIRE(!trace.empty());
    auto labels = label_episode(trace, GameValue::Drawn, Strategy{}, kOx);
    CHECK(labels.size() == trace.size() - 1); // every move of both players
    for (const auto& ex : labels) CHECK(ex.family == TaskFamily::Draw);

    // with a win strategy firing from the initial board, no labels at all
    auto wtrace = won_trace(kOx, false);
    REQUIRE(!wtrace.empty());
    // replay the won board into a drawn finish is impossible against the
    // optimal opponent, so synthesize the gate directly: a drawn trace whose
    // origin fires win_1 cannot occur here, but the gate must also hold when
    // the strategy proves from the drawn trace's start
    Strategy fires_everywhere;
    fires_everywhere.program = mil::parse_rules("win_1(A,B) :- move(A,B), not(win_1_x(B,C)).\n"
                                                "win_1_x(A,B) :- move(A,B), won(B).\n");
    fires_everywhere.win_depths = {1};
    auto gated = label_episode(trace, GameValue::Drawn, fires_everywhere, kOx);
    CHECK(gated.empty());
}

TEST_CASE("label_episode rejects malformed traces") {
    auto trace = drawn_trace(kOx);
    REQUIRE(trace.size() > 3);
    std::vector<GameState> skipped{trace[0], trace[2]}; // skips a ply
    CHECK_THROWS_AS(label_episode(skipped, GameValue::Drawn, Strategy{}, kOx), ValidationError);
    std::vector<GameState> unfinished(trace.begin(), trace.end() - 1);
    CHECK_THROWS_AS(label_episode(unfinished, GameValue::Drawn, Strategy{}, kOx),
                    ValidationError);
    CHECK_THROWS_AS(label_episode(trace, GameValue::Won, Strategy{}, kOx), ValidationError);
}

TEST_CASE("example store dedups canonical pairs per task and depth") {
    ExampleStore store(kOx);
    GameState a = state_from_string("x../.o./... x", kOx);
    GameState b = legal_moves(a, kOx).front();
    MoveExample ex{a, b, TaskFamily::Win, 1};
    CHECK(store.add(ex, a));
    CHECK_FALSE(store.add(ex, a));
    // a symmetric image dedups onto the same canonical pair
    MoveExample mirrored{apply_symmetry(a, kOx, 4), apply_symmetry(b, kOx, 4), TaskFamily::Win, 1};
    CHECK_FALSE(store.add(mirrored, a));
    // same pair at another depth is a different bucket
    MoveExample deeper{a, b, TaskFamily::Win, 2};
    CHECK(store.add(deeper, a));
    CHECK(store.size() == 2);
}

TEST_CASE("migo_learn: a single depth-1 example produces the golden win_1 pair") {
    ExampleStore store(kOx);
    auto trace = won_trace(kOx, false);
    auto labels = label_episode(trace, GameValue::Won, Strategy{}, kOx);
    for (const auto& ex : labels)
        if (ex.depth == 1) store.add(ex, trace.front());
    Strategy s = migo_learn(store, LearnerMode::Mixed, kOx, MigoOptions{}, {}, true);
    CHECK(s.render() == "win_1_1_1(A,B) :- move(A,B), won(B).\n"
                        "win_1(A,B) :- win_1_1_1(A,B), won(B).\n");
    CHECK(s.win_depths == std::vector<int>{1});
    CHECK(s.draw_depths.empty());
}

TEST_CASE("migo_learn: the empty store yields the empty strategy") {
    ExampleStore store(kOx);
    Strategy s = migo_learn(store, LearnerMode::Mixed, kOx, MigoOptions{}, {}, true);
    CHECK(s.empty());
    CHECK(s.program.empty());
}

TEST_CASE("migo_learn: draw tasks are never learned before a win task") {
    ExampleStore store(kOx);
    auto trace = drawn_trace(kOx);
    for (const auto& ex : label_episode(trace, GameValue::Drawn, Strategy{}, kOx))
        store.add(ex, trace.front());
    REQUIRE(store.size() > 0);
    Strategy s = migo_learn(store, LearnerMode::Mixed, kOx, MigoOptions{}, {}, true);
    CHECK(s.empty()); // only draw examples present, so nothing may be learned
}

TEST_CASE("migo_learn: relearning is deterministic") {
    OracleTable oracle = OracleTable::solve(kH3);
    ExampleStore s1 = testing_support::curated_store(kH3, oracle);
    ExampleStore s2 = testing_support::curated_store(kH3, oracle);
    CHECK(s1.fingerprint() == s2.fingerprint());
    Strategy a = migo_learn(s1, LearnerMode::Mixed, kH3, MigoOptions{}, {}, true);
    Strategy b = migo_learn(s2, LearnerMode::Mixed, kH3, MigoOptions{}, {}, true);
    CHECK(a.render() == b.render());
}

TEST_CASE("select_move: win_1 takes the immediate win, empty strategies move at random") {
    MigoLearner learner(kOx, MigoOptions{});
    GameState s = state_from_string("xx./oo./... x", kOx);
    Rng rng(77);
    // empty strategy: uniform random legal move, reproducible under the seed
    Rng rng2(77);
    auto moves = legal_moves(s, kOx);
    CHECK(learner.select_move(s, rng) ==
          moves[rng2.uniform(static_cast<std::uint32_t>(moves.size()))]);

    MigoLearner taught(kOx, MigoOptions{});
    taught.transfer_in_program(testing_support::golden_program(kOx));
    GameState chosen = taught.select_move(s, rng);
    CHECK(won(chosen, Mark::X, kOx));
}

TEST_CASE("select_move: the golden strategy plays the double attack") {
    MigoLearner taught(kOx, MigoOptions{});
    taught.transfer_in_program(testing_support::golden_program(kOx));
    OracleTable oracle = OracleTable::solve(kOx);
    mil::Primitives prims(kOx);
    mil::Program p = testing_support::golden_program(kOx);
    mil::Engine eng({&p}, prims);
    Rng rng(78);
    int verified = 0;
    for (const GameState& b : reachable_canonical_states(kOx)) {
        if (terminal(b, kOx) || b.to_move != Mark::X) continue;
        if (!eng.first_solution("win_2", b) || eng.first_solution("win_1", b)) continue;
        GameState move = taught.select_move(b, rng);
        const auto& e = oracle.entry(move);
        CHECK(e.value == GameValue::Won);
        CHECK(e.distance <= 3);
        if (++verified >= 20) break;
    }
    CHECK(verified > 0);
}

TEST_CASE("transfer_in: empty file yields the empty strategy, rules load and play") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "migo_learner_test";
    fs::create_directories(dir);
    const std::string empty_path = (dir / "empty.rules").string();
    std::ofstream(empty_path).close();
    MigoLearner learner(kOx, MigoOptions{});
    learner.transfer_in(empty_path);
    CHECK(learner.strategy().empty());

    const std::string rules_path = (dir / "h3.rules").string();
    mil::write_rules_file(rules_path, testing_support::golden_program(kH3), kH3);
    MigoLearner cross(kOx, MigoOptions{});
    cross.transfer_in(rules_path); // hexapawn rules drive noughts-and-crosses play
    GameState s = state_from_string("xx./oo./... x", kOx);
    Rng rng(79);
    CHECK(won(cross.select_move(s, rng), Mark::X, kOx));
    CHECK(cross.strategy().win_depths == std::vector<int>{1, 2});
    CHECK(cross.strategy().draw_depths.empty()); // draw tiers wait for this game's evidence
    fs::remove_all(dir);
}

TEST_CASE("finish_episode grows the store and relearns; the cache skips no-op relearns") {
    MigoLearner learner(kH3, MigoOptions{});
    auto trace = won_trace(kH3, false);
    auto labels = learner.finish_episode(trace, GameValue::Won);
    CHECK(!labels.empty());
    CHECK(learner.strategy_changed_last());
    CHECK(!learner.strategy().win_depths.empty());
    const std::string once = learner.strategy().render();
    auto again = learner.finish_episode(trace, GameValue::Won); // same game, nothing new
    CHECK(!learner.strategy_changed_last());
    CHECK(learner.strategy().render() == once);
}

TEST_CASE("separated learning ignores draw examples until the win tier is stable") {
    MigoOptions opts;
    opts.mode = LearnerMode::Separated;
    opts.stability_counter = 3;
    MigoLearner learner(kH3, opts);
    auto wtrace = won_trace(kH3, false);
    auto dtrace = drawn_trace(kH3);
    learner.finish_episode(dtrace, GameValue::Drawn);
    CHECK(learner.store().depths(TaskFamily::Draw).empty()); // wasted pre-stability
    learner.finish_episode(wtrace, GameValue::Won);
    for (int i = 0; i < 3; ++i) learner.finish_episode(wtrace, GameValue::Won);
    CHECK(learner.draws_enabled());
    learner.finish_episode(dtrace, GameValue::Drawn);
    CHECK(!learner.store().depths(TaskFamily::Draw).empty());
    CHECK(!learner.strategy().draw_depths.empty());
}

TEST_CASE("mixed stores dominate separated stores on identical traces") {
    MigoOptions mopts;
    MigoOptions sopts;
    sopts.mode = LearnerMode::Separated;
    sopts.stability_counter = 2;
    MigoLearner mixed(kH3, mopts);
    MigoLearner separated(kH3, sopts);

    std::vector<std::pair<std::vector<GameState>, GameValue>> episodes;
    episodes.emplace_back(drawn_trace(kH3), GameValue::Drawn);
    episodes.emplace_back(won_trace(kH3, false), GameValue::Won);
    episodes.emplace_back(won_trace(kH3, true), GameValue::Won);
    episodes.emplace_back(drawn_trace(kH3), GameValue::Drawn);
    for (auto& [trace, outcome] : episodes) {
        mixed.finish_episode(trace, outcome);
        separated.finish_episode(trace, outcome);
    }

    for (TaskFamily f : {TaskFamily::Win, TaskFamily::Draw}) {
        for (int d : separated.store().depths(f)) {
            std::set<std::pair<std::uint64_t, std::uint64_t>> in_mixed;
            for (const auto& e : mixed.store().examples(f, d))
                in_mixed.emplace(e.from.key(), e.to.key());
            for (const auto& e : separated.store().examples(f, d))
                CHECK(in_mixed.count({e.from.key(), e.to.key()}) == 1);
        }
    }
}

TEST_CASE("theorem-1 labels hold against the oracle in live play") {
    const auto& t = table(kH3);
    MigoLearner learner(kH3, MigoOptions{});
    Rng rng(91);
    auto boards = initial_board_set(kH3);
    for (int episode = 0; episode < 40; ++episode) {
        GameState b = boards[rng.uniform(static_cast<std::uint32_t>(boards.size()))];
        std::vector<GameState> trace{b};
        GameState s = b;
        while (!terminal(s, kH3)) {
            s = (s.to_move == Mark::X) ? learner.select_move(s, rng) : t.best_reply(s);
            trace.push_back(s);
        }
        GameValue actual = won(s, Mark::X, kH3)   ? GameValue::Won
                           : won(s, Mark::O, kH3) ? GameValue::Lost
                                                  : GameValue::Drawn;
        for (const MoveExample& ex : learner.finish_episode(trace, actual)) {
            if (ex.family != TaskFamily::Win) continue;
            CHECK(t.expected_outcome(ex.from) == GameValue::Won);
            CHECK(t.expected_outcome(ex.to) == GameValue::Won);
        }
    }
}
