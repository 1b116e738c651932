#include "migo/qlearn.hpp"

#include <algorithm>
#include <fstream>
#include <vector>

#include "migo/errors.hpp"

namespace migo {

GameState QTable::keyed_state(const GameState& s) const {
    return opts_.canonical ? canonical_form(s, game_) : s;
}

double QTable::q(const GameState& s, int action) const {
    auto it = table_.find({keyed_state(s).key(), action});
    return it == table_.end() ? opts_.initial_q : it->second;
}

double QTable::max_q(const GameState& s) const {
    const GameState keyed = keyed_state(s);
    const auto moves = legal_moves(keyed, game_);
    double best = -1e300;
    for (std::size_t i = 0; i < moves.size(); ++i)
        best = std::max(best, q(keyed, static_cast<int>(i)));
    return moves.empty() ? 0.0 : best;
}

QTable::SelectedMove QTable::select(const GameState& s, Rng& rng) const {
    const auto real_moves = legal_moves(s, game_);
    if (real_moves.empty()) throw InvariantViolation("q_select on a state without moves");

    const int sym = opts_.canonical ? canonicalizing_symmetry(s, game_) : 0;
    const GameState keyed = apply_symmetry(s, game_, sym);
    const auto keyed_moves = legal_moves(keyed, game_);

    int action;
    if (opts_.epsilon > 0.0 && rng.uniform01() < opts_.epsilon) {
        action = static_cast<int>(rng.uniform(static_cast<std::uint32_t>(keyed_moves.size())));
    } else {
        double best = -1e300;
        std::vector<int> argmax;
        for (std::size_t i = 0; i < keyed_moves.size(); ++i) {
            double v = q(keyed, static_cast<int>(i));
            if (v > best + 1e-12) {
                best = v;
                argmax.assign(1, static_cast<int>(i));
            } else if (v > best - 1e-12) {
                argmax.push_back(static_cast<int>(i));
            }
        }
        action = argmax[rng.uniform(static_cast<std::uint32_t>(argmax.size()))];
    }

    GameState chosen = keyed_moves[static_cast<std::size_t>(action)];
    if (opts_.canonical) chosen = apply_symmetry(chosen, game_, inverse_symmetry(game_, sym));
    // symmetry commutes with move generation, so `chosen` is legal in s
    return SelectedMove{chosen, action};
}

void QTable::update(const GameState& s, int action, double reward, const GameState& next,
                    bool next_terminal) {
    const GameState keyed = keyed_state(s);
    const double old_q = q(keyed, action);
    const double target = reward + (next_terminal ? 0.0 : opts_.gamma * max_q(next));
    table_[{keyed.key(), action}] = old_q + opts_.alpha * (target - old_q);
}

void QTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << "qtable " << game_id_string(game_) << " v1\n";
    out.precision(17);
    for (const auto& [key, v] : table_)
        out << to_string(state_from_key(key.first, game_)) << ' ' << key.second << ' ' << v
            << '\n';
}

} // namespace migo
