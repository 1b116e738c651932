#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "migo/game.hpp"
#include "migo/oracle.hpp"
#include "migo/rng.hpp"

namespace migo {

struct QOptions {
    double alpha = 0.3;
    double gamma = 0.9;
    double initial_q = 1.0;
    double epsilon = 0.0;    // greedy; optimistic initialization drives exploration
    bool canonical = true;   // key states by canonical form (off for ablation)
};

/// Tabular Q-learning over (state key, move index). Unseen pairs read the
/// optimistic initial value. With canonical keying, actions index the
/// canonical state's move list and selected moves are mapped back through the
/// inverse symmetry.
class QTable {
public:
    struct SelectedMove {
        GameState move; // legal successor of the queried state
        int action;     // index in keyed space, for the update
    };

    QTable(GameId g, QOptions opts) : game_(g), opts_(opts) {}

    double q(const GameState& s, int action) const;

    /// Epsilon-greedy over legal moves; ties broken uniformly among argmax.
    SelectedMove select(const GameState& s, Rng& rng) const;

    /// Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)); the max term
    /// is zero on terminal s'.
    void update(const GameState& s, int action, double reward, const GameState& next,
                bool next_terminal);

    std::size_t size() const { return table_.size(); }
    void save(const std::string& path) const;

private:
    double max_q(const GameState& s) const;
    GameState keyed_state(const GameState& s) const;

    GameId game_;
    QOptions opts_;
    std::map<std::pair<std::uint64_t, int>, double> table_;
};

} // namespace migo
