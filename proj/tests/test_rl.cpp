#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <doctest.h>

#include "migo/dqn.hpp"
#include "migo/errors.hpp"
#include "migo/menace.hpp"
#include "migo/mlp.hpp"
#include "migo/qlearn.hpp"
#include "migo/rng.hpp"

using namespace migo;

namespace {
const GameId kOx = GameId::NoughtsAndCrosses;
}

TEST_CASE("menace: fresh boxes select legal moves with equal beads") {
    BeadBox box(kOx, MenaceOptions{});
    GameState s = initial_state(kOx);
    Rng rng(21);
    std::map<std::uint64_t, int> picks;
    for (int i = 0; i < 300; ++i) picks[box.select(s, rng).key()]++;
    for (const GameState& m : legal_moves(s, kOx)) CHECK(box.beads(s, m) == 3);
    CHECK(picks.size() > 1);
}

TEST_CASE("menace: wins add beads along the played trace only") {
    BeadBox box(kOx, MenaceOptions{});
    GameState s0 = initial_state(kOx);
    auto moves = legal_moves(s0, kOx);
    GameState s1 = moves[4]; // centre
    GameState s2 = legal_moves(s1, kOx).front();
    GameState s3 = legal_moves(s2, kOx).front();
    box.update({s0, s1, s2, s3}, GameValue::Won);
    CHECK(box.beads(s0, s1) == 6);
    CHECK(box.beads(s2, s3) == 6);
    bool others_untouched = true;
    for (const GameState& m : moves)
        if (!(m == s1) && box.beads(s0, m) != 3) others_untouched = false;
    CHECK(others_untouched);

    box.update({s0, s1}, GameValue::Lost);
    CHECK(box.beads(s0, s1) == 5);
    box.update({s0, s1}, GameValue::Drawn);
    CHECK(box.beads(s0, s1) == 6);
}

TEST_CASE("menace: a box drained to zero falls back to uniform selection") {
    MenaceOptions opts;
    opts.initial_beads = 1;
    opts.delta_loss = 1;
    BeadBox box(kOx, opts);
    GameState s = initial_state(kOx);
    for (const GameState& m : legal_moves(s, kOx)) box.update({s, m}, GameValue::Lost);
    for (const GameState& m : legal_moves(s, kOx)) CHECK(box.beads(s, m) == 0);
    Rng rng(22);
    GameState pick = box.select(s, rng);
    auto legal = legal_moves(s, kOx);
    CHECK(std::find(legal.begin(), legal.end(), pick) != legal.end());
}

TEST_CASE("q-learning: unseen pairs read the optimistic initial value") {
    QTable q(kOx, QOptions{});
    CHECK(q.q(initial_state(kOx), 0) == doctest::Approx(1.0));
}

TEST_CASE("q-learning: terminal updates reproduce the hand arithmetic") {
    QTable q(kOx, QOptions{});
    GameState s = initial_state(kOx);
    GameState t = legal_moves(s, kOx).front();
    q.update(s, 0, 1.0, t, true); // win: 1 + 0.3*(1 + 0 - 1) = 1.0
    CHECK(q.q(s, 0) == doctest::Approx(1.0));
    q.update(s, 1, -1.0, t, true); // loss: 1 + 0.3*(-1 - 1) = 0.4
    CHECK(q.q(s, 1) == doctest::Approx(0.4));
    q.update(s, 2, 0.0, t, true); // draw: 1 + 0.3*(0 - 1) = 0.7
    CHECK(q.q(s, 2) == doctest::Approx(0.7));
}

TEST_CASE("q-learning: greedy selection is invariant under positive affine maps") {
    // one terminal update with reward v leaves Q = 0.7 + 0.3 v, so rewards
    // 3v+2 produce an affine image of the first table's values
    QOptions opts;
    QTable a(kOx, opts), b(kOx, opts);
    GameState s = initial_state(kOx);
    Rng fill(23);
    auto moves = legal_moves(s, kOx);
    for (std::size_t i = 0; i < moves.size(); ++i) {
        double v = fill.uniform01();
        a.update(s, static_cast<int>(i), v, moves[0], true);
        b.update(s, static_cast<int>(i), 3.0 * v + 2.0, moves[0], true);
    }
    for (int trial = 0; trial < 20; ++trial) {
        Rng r1(100 + trial), r2(100 + trial);
        CHECK(a.select(s, r1).move == b.select(s, r2).move);
    }
}

TEST_CASE("q-learning: canonical keying shares values across symmetric states") {
    QTable q(kOx, QOptions{});
    GameState s = state_from_string("x../.o./... x", kOx);
    GameState image = apply_symmetry(s, kOx, 2);
    q.update(s, 0, -1.0, s, true);
    CHECK(q.q(image, 0) == doctest::Approx(q.q(s, 0)));

    QOptions raw;
    raw.canonical = false;
    QTable q2(kOx, raw);
    q2.update(s, 0, -1.0, s, true);
    CHECK(q2.q(image, 0) == doctest::Approx(1.0)); // ablation: no sharing
}

TEST_CASE("q-learning: selected moves are always legal successors") {
    QTable q(kOx, QOptions{});
    Rng rng(24);
    GameState s = state_from_string("xo./.x./..o x", kOx);
    for (int i = 0; i < 50; ++i) {
        auto sel = q.select(s, rng);
        auto legal = legal_moves(s, kOx);
        CHECK(std::find(legal.begin(), legal.end(), sel.move) != legal.end());
    }
}

TEST_CASE("dqn: epsilon anneals linearly between its endpoints") {
    DqnConfig cfg;
    CHECK(Dqn::epsilon_at(cfg, 0) == doctest::Approx(0.6));
    CHECK(Dqn::epsilon_at(cfg, cfg.eps_decay_steps) == doctest::Approx(0.1));
    CHECK(Dqn::epsilon_at(cfg, cfg.eps_decay_steps * 10) == doctest::Approx(0.1));
    CHECK(Dqn::epsilon_at(cfg, cfg.eps_decay_steps / 2) == doctest::Approx(0.35));
}

TEST_CASE("dqn: soft target update has the online network as a fixed point") {
    Rng rng(25);
    MlpParams p = MlpParams::init(4, 8, 3, rng);
    MlpParams t = p;
    soft_update(t, p, 0.01);
    for (std::size_t i = 0; i < p.parameter_count(); ++i)
        CHECK(t.parameter(i) == doctest::Approx(p.parameter(i)));
}

TEST_CASE("dqn: selections are always legal moves") {
    Rng init(26);
    Dqn agent(GameId::Hexapawn3, DqnConfig{}, init);
    Rng rng(27);
    GameState s = initial_state(GameId::Hexapawn3);
    for (int i = 0; i < 40; ++i) {
        GameState m = agent.select(s, rng);
        auto legal = legal_moves(s, GameId::Hexapawn3);
        CHECK(std::find(legal.begin(), legal.end(), m) != legal.end());
    }
}

TEST_CASE("dqn: action ids are distinct and reversible per state") {
    for (GameId g : {kOx, GameId::Hexapawn3, GameId::Hexapawn4}) {
        GameState s = initial_state(g);
        std::map<int, int> seen;
        for (const GameState& m : legal_moves(s, g)) {
            int a = move_action_id(s, m, g);
            CHECK(a >= 0);
            CHECK(a < action_space_size(g));
            seen[a]++;
        }
        for (auto& [a, n] : seen) CHECK(n == 1);
    }
}

TEST_CASE("dqn: backprop gradients match central finite differences") {
    Rng rng(28);
    for (int trial = 0; trial < 3; ++trial) {
        const int in = 5 + static_cast<int>(rng.uniform(4));
        const int hidden = 6 + static_cast<int>(rng.uniform(5));
        const int out = 3 + static_cast<int>(rng.uniform(3));
        MlpParams p = MlpParams::init(in, hidden, out, rng);
        std::vector<QBatchItem> batch;
        for (int i = 0; i < 7; ++i) {
            QBatchItem item;
            for (int j = 0; j < in; ++j) item.input.push_back(rng.uniform01() * 2.0 - 1.0);
            item.action = static_cast<int>(rng.uniform(static_cast<std::uint32_t>(out)));
            item.target = rng.uniform01() * 2.0 - 1.0;
            batch.push_back(std::move(item));
        }
        const double l2 = 0.01;
        MlpGradients g;
        g.zero(p);
        q_loss(p, batch, l2, &g);
        const double eps = 1e-6;
        for (std::size_t k = 0; k < p.parameter_count(); k += 1 + k / 7) {
            MlpParams plus = p, minus = p;
            plus.parameter(k) += eps;
            minus.parameter(k) -= eps;
            const double fd = (q_loss(plus, batch, l2, nullptr) -
                               q_loss(minus, batch, l2, nullptr)) /
                              (2.0 * eps);
            const double an = g.parameter(k);
            const double rel = std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-8});
            CHECK(rel < 1e-4);
        }
    }
}

TEST_CASE("dqn: a non-finite loss raises a training error") {
    Rng init(29);
    Dqn agent(kOx, DqnConfig{}, init);
    GameState s = initial_state(kOx);
    GameState m = legal_moves(s, kOx).front();
    Rng rng(30);
    // poison a transition with an infinite reward: the squared error blows up
    CHECK_THROWS_AS(
        agent.observe(s, m, std::numeric_limits<double>::infinity(), m, true, rng),
        InvariantViolation);
}

TEST_CASE("checkpoints carry versioned headers and board serializations") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "migo_rl_ckpt";
    fs::create_directories(dir);

    QTable q(kOx, QOptions{});
    GameState s = initial_state(kOx);
    q.update(s, 0, 1.0, s, true);
    const std::string qpath = (dir / "q.txt").string();
    q.save(qpath);
    std::ifstream qin(qpath);
    std::string header, row;
    std::getline(qin, header);
    std::getline(qin, row);
    CHECK(header == "qtable ox v1");
    CHECK(row.find(".../.../... x") != std::string::npos);

    BeadBox box(kOx, MenaceOptions{});
    box.update({s, legal_moves(s, kOx).front()}, GameValue::Won);
    const std::string mpath = (dir / "m.txt").string();
    box.save(mpath);
    std::ifstream min(mpath);
    std::getline(min, header);
    CHECK(header == "menace ox v1");

    Rng init(5);
    Dqn agent(kOx, DqnConfig{}, init);
    const std::string dpath = (dir / "d.txt").string();
    agent.save(dpath);
    std::ifstream din(dpath);
    std::getline(din, header);
    CHECK(header.find("\"format\":\"mlp v1\"") != std::string::npos);
    CHECK(header.find("\"hidden\":64") != std::string::npos);
    fs::remove_all(dir);
}
