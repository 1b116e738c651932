#include <benchmark/benchmark.h>

#include "migo/harness.hpp"
#include "support/golden.hpp"

using namespace migo;

static void BM_CanonicalFormOx(benchmark::State& state) {
    Rng rng(1);
    std::vector<GameState> states;
    GameState s = initial_state(GameId::NoughtsAndCrosses);
    while (!terminal(s, GameId::NoughtsAndCrosses)) {
        states.push_back(s);
        auto moves = legal_moves(s, GameId::NoughtsAndCrosses);
        s = moves[rng.uniform(static_cast<std::uint32_t>(moves.size()))];
    }
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonical_form(states[i % states.size()],
                                                GameId::NoughtsAndCrosses));
        ++i;
    }
}
BENCHMARK(BM_CanonicalFormOx);

static void BM_OracleSolveOx(benchmark::State& state) {
    for (auto _ : state) {
        OracleTable t = OracleTable::solve(GameId::NoughtsAndCrosses);
        benchmark::DoNotOptimize(t.size());
    }
}
BENCHMARK(BM_OracleSolveOx)->Unit(benchmark::kMillisecond);

static void BM_OracleSolveHexapawn4(benchmark::State& state) {
    for (auto _ : state) {
        OracleTable t = OracleTable::solve(GameId::Hexapawn4);
        benchmark::DoNotOptimize(t.size());
    }
}
BENCHMARK(BM_OracleSolveHexapawn4)->Unit(benchmark::kMillisecond);

static void BM_ProveWin2(benchmark::State& state) {
    const GameId g = GameId::NoughtsAndCrosses;
    mil::Primitives prims(g);
    mil::Program p = testing_support::golden_program(g);
    mil::Engine eng({&p}, prims);
    auto boards = initial_board_set(g);
    for (auto _ : state) {
        for (const GameState& b : boards)
            benchmark::DoNotOptimize(eng.first_solution("win_2", b));
    }
}
BENCHMARK(BM_ProveWin2)->Unit(benchmark::kMicrosecond);

static void BM_MigoRelearn(benchmark::State& state) {
    const GameId g = GameId::NoughtsAndCrosses;
    OracleTable oracle = OracleTable::solve(g);
    ExampleStore store = testing_support::curated_store(g, oracle);
    for (auto _ : state) {
        Strategy s = migo_learn(store, LearnerMode::Mixed, g, MigoOptions{}, {}, true);
        benchmark::DoNotOptimize(s.win_depths.size());
    }
}
BENCHMARK(BM_MigoRelearn)->Unit(benchmark::kMillisecond);

static void BM_ConvergedEpisode(benchmark::State& state) {
    const GameId g = GameId::NoughtsAndCrosses;
    OracleTable oracle = OracleTable::solve(g);
    MigoLearner learner(g, MigoOptions{});
    learner.transfer_in_program(testing_support::golden_program(g));
    auto boards = initial_board_set(g);
    Rng rng(7);
    std::size_t i = 0;
    for (auto _ : state) {
        GameState s = boards[i++ % boards.size()];
        while (!terminal(s, g))
            s = (s.to_move == Mark::X) ? learner.select_move(s, rng) : oracle.best_reply(s);
        benchmark::DoNotOptimize(s.key());
    }
}
BENCHMARK(BM_ConvergedEpisode)->Unit(benchmark::kMicrosecond);

static void BM_DqnTrainStep(benchmark::State& state) {
    const GameId g = GameId::NoughtsAndCrosses;
    Rng init(3);
    Dqn agent(g, DqnConfig{}, init);
    Rng rng(4);
    GameState s = initial_state(g);
    auto moves = legal_moves(s, g);
    for (auto _ : state) {
        const GameState& m = moves[rng.uniform(static_cast<std::uint32_t>(moves.size()))];
        agent.observe(s, m, 0.0, m, false, rng);
    }
}
BENCHMARK(BM_DqnTrainStep)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
