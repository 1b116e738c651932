#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "migo/game.hpp"

namespace migo {

/// Game value from the learner's (X's) perspective: won > drawn > lost.
enum class GameValue : std::int8_t { Lost = -1, Drawn = 0, Won = 1 };

inline int to_int(GameValue v) { return static_cast<int>(v); }
GameValue value_from_int(int v); // throws ValidationError outside {-1,0,1}

struct OracleEntry {
    GameValue value;  // from X's perspective
    int distance;     // plies to the outcome: wins forced fast, losses and draws delayed
};

/// Exhaustive minimax solution over canonical states. Immutable once built;
/// safe for concurrent readers.
class OracleTable {
public:
    static OracleTable solve(GameId g);
    static OracleTable load(const std::string& path);
    void save(const std::string& path) const;

    GameId game() const { return game_; }
    std::size_t size() const { return entries_.size(); }

    /// Value of canonical_form(s); throws InvariantViolation for unknown states.
    GameValue expected_outcome(const GameState& s) const { return entry(s).value; }
    const OracleEntry& entry(const GameState& s) const;

    /// Deterministic best move for the side to move: best value first, then
    /// fastest win / slowest loss / slowest draw, then earliest in move order.
    /// Throws InvariantViolation on terminal states.
    GameState best_reply(const GameState& s) const;

    /// expected_outcome(initial) - actual, in {0,1,2}. Throws InvariantViolation
    /// if actual exceeds the expectation (the opponent was not optimal).
    int minimax_regret(const GameState& initial, GameValue actual) const;

    struct Row {
        GameState state;
        OracleEntry entry;
    };
    const std::vector<Row>& rows() const { return rows_; } // sorted by state key

private:
    GameId game_ = GameId::NoughtsAndCrosses;
    std::vector<Row> rows_;
    std::unordered_map<std::uint64_t, OracleEntry> entries_;

    void index_rows();
};

} // namespace migo
