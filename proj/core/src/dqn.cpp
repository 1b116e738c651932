#include "migo/dqn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "migo/errors.hpp"

namespace migo {

int action_space_size(GameId g) {
    const GameInfo& info = game_info(g);
    return g == GameId::NoughtsAndCrosses ? info.cells : info.cells * 3;
}

int move_action_id(const GameState& s, const GameState& move, GameId g) {
    const GameInfo& info = game_info(g);
    if (g == GameId::NoughtsAndCrosses) {
        for (int i = 0; i < info.cells; ++i)
            if (s.at(i) == Mark::Empty && move.at(i) == s.to_move) return i;
        throw InvariantViolation("move does not place a mark");
    }
    int src = -1, dst = -1;
    for (int i = 0; i < info.cells; ++i) {
        if (s.at(i) == s.to_move && move.at(i) != s.to_move) src = i;
        if (s.at(i) != s.to_move && move.at(i) == s.to_move) dst = i;
    }
    if (src < 0 || dst < 0) throw InvariantViolation("move does not push a pawn");
    const int dc = dst % info.width - src % info.width;
    const int kind = dc == 0 ? 0 : (dc < 0 ? 1 : 2);
    return src * 3 + kind;
}

std::vector<double> encode_state(const GameState& s, GameId g) {
    const GameInfo& info = game_info(g);
    std::vector<double> x(static_cast<std::size_t>(info.cells) * 3 + 1, 0.0);
    for (int i = 0; i < info.cells; ++i)
        x[static_cast<std::size_t>(i * 3 + static_cast<int>(s.at(i)))] = 1.0;
    x.back() = (s.to_move == Mark::X) ? 1.0 : 0.0;
    return x;
}

Dqn::Dqn(GameId g, DqnConfig cfg, Rng& init_rng) : game_(g), cfg_(cfg) {
    const int in = game_info(g).cells * 3 + 1;
    online_ = MlpParams::init(in, cfg.hidden, action_space_size(g), init_rng);
    target_ = online_;
}

double Dqn::epsilon_at(const DqnConfig& cfg, long long step) {
    if (step >= cfg.eps_decay_steps) return cfg.eps_final;
    const double frac = static_cast<double>(step) / static_cast<double>(cfg.eps_decay_steps);
    return cfg.eps_initial + (cfg.eps_final - cfg.eps_initial) * frac;
}

double Dqn::epsilon() const { return epsilon_at(cfg_, step_); }

GameState Dqn::select(const GameState& s, Rng& rng) {
    const auto moves = legal_moves(s, game_);
    if (moves.empty()) throw InvariantViolation("dqn_select on a state without moves");
    const double eps = epsilon();
    ++step_;
    if (rng.uniform01() < eps)
        return moves[rng.uniform(static_cast<std::uint32_t>(moves.size()))];

    const auto q = online_.forward(encode_state(s, game_));
    std::size_t best = 0;
    double best_q = -1e300; // illegal actions are masked out entirely
    for (std::size_t i = 0; i < moves.size(); ++i) {
        const int a = move_action_id(s, moves[i], game_);
        if (q[static_cast<std::size_t>(a)] > best_q) {
            best_q = q[static_cast<std::size_t>(a)];
            best = i;
        }
    }
    return moves[best];
}

void Dqn::observe(const GameState& s, const GameState& move, double reward,
                  const GameState& next, bool next_terminal, Rng& rng) {
    Transition t;
    t.s = encode_state(s, game_);
    t.action = move_action_id(s, move, game_);
    t.reward = reward;
    t.terminal = next_terminal;
    t.next = encode_state(next, game_);
    if (!next_terminal)
        for (const GameState& m : legal_moves(next, game_))
            t.next_legal.push_back(move_action_id(next, m, game_));
    replay_.push_back(std::move(t));
    while (replay_.size() > static_cast<std::size_t>(cfg_.buffer)) replay_.pop_front();
    train_step(rng);
}

void Dqn::train_step(Rng& rng) {
    std::vector<QBatchItem> batch;
    const int n = std::min<int>(cfg_.batch, static_cast<int>(replay_.size()));
    batch.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const Transition& t = replay_[rng.uniform(static_cast<std::uint32_t>(replay_.size()))];
        double target = t.reward;
        if (!t.terminal) {
            const auto q = target_.forward(t.next);
            double best = -1e300;
            for (int a : t.next_legal) best = std::max(best, q[static_cast<std::size_t>(a)]);
            target += cfg_.discount * best;
        }
        batch.push_back(QBatchItem{t.s, t.action, target});
    }
    MlpGradients grads;
    grads.zero(online_);
    const double loss = q_loss(online_, batch, cfg_.l2_strength, &grads);
    if (!std::isfinite(loss))
        throw InvariantViolation("dqn training diverged: loss=" + std::to_string(loss) +
                                 " at step " + std::to_string(step_));
    sgd_step(online_, grads, cfg_.lr);
    soft_update(target_, online_, cfg_.target_update_rate);
}

void Dqn::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << "{\"format\":\"mlp v1\",\"game\":\"" << game_id_string(game_) << "\",\"in\":" << online_.in
        << ",\"hidden\":" << online_.hidden << ",\"out\":" << online_.out << "}\n";
    out.precision(17);
    for (std::size_t i = 0; i < online_.parameter_count(); ++i) out << online_.parameter(i) << '\n';
}

} // namespace migo
