#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace migo {

enum class Mark : std::uint8_t { Empty = 0, O = 1, X = 2 };

enum class GameId { NoughtsAndCrosses, Hexapawn3, Hexapawn4 };

Mark opponent_of(Mark m);
char mark_char(Mark m);

/// A position: board cells (row-major from the top-left) plus the side to move.
/// X is always the learner and always moves first.
///
/// Hexapawn orientation: O's pawns start on row 0 and advance downwards,
/// X's pawns start on the bottom row and advance towards row 0.
struct GameState {
    std::array<Mark, 16> cells{};
    std::uint8_t cell_count = 9;
    Mark to_move = Mark::X;

    Mark at(int i) const { return cells[static_cast<std::size_t>(i)]; }
    void set(int i, Mark m) { cells[static_cast<std::size_t>(i)] = m; }

    // Total order consistent with the textual serialization ('.' < 'o' < 'x',
    // cell 0 most significant, side to move last).
    std::uint64_t key() const;

    bool operator==(const GameState& o) const { return key() == o.key(); }
    bool operator!=(const GameState& o) const { return !(*this == o); }
    bool operator<(const GameState& o) const { return key() < o.key(); }
};

struct GameInfo {
    GameId id;
    int width;
    int height;
    int cells;
    int symmetry_count; // 8 dihedral transforms for OX, identity + vertical mirror for hexapawn
};

const GameInfo& game_info(GameId g);
const char* game_id_string(GameId g);
GameId game_id_from_string(const std::string& s); // throws ValidationError

GameState initial_state(GameId g);

// Throws ValidationError on wrong vector length or impossible mark counts.
void validate_state(const GameState& s, GameId g);

/// Successors of `s` by one legal move of `to_move`, with the mover flipped.
/// Deterministic order: ascending cell index for OX; ascending source cell,
/// then push, capture-left, capture-right for hexapawn (left = lower column).
std::vector<GameState> legal_moves(const GameState& s, GameId g);

bool won(const GameState& s, Mark player, GameId g);
bool drawn(const GameState& s, GameId g);
bool terminal(const GameState& s, GameId g);

GameState apply_symmetry(const GameState& s, GameId g, int sym);
int inverse_symmetry(GameId g, int sym);

/// Smallest element of the symmetry orbit under GameState::key() order.
GameState canonical_form(const GameState& s, GameId g);
/// Index of the transform that maps `s` to its canonical form (lowest index wins ties).
int canonicalizing_symmetry(const GameState& s, GameId g);

/// Symmetry-reduced states reachable by exactly one move of each player from
/// the game's start, learner to move, sorted ascending by key.
std::vector<GameState> initial_board_set(GameId g);

/// All states reachable from the start, terminal states included. Successors
/// are expanded from non-terminal states only.
std::vector<GameState> reachable_states(GameId g);
std::vector<GameState> reachable_canonical_states(GameId g);

/// "xo./.x./... o": one char per cell, rows joined by '/', then the mover.
std::string to_string(const GameState& s);
/// Accepts the slashed form and the bare cell string; throws ValidationError.
GameState state_from_string(const std::string& text, GameId g);
/// Inverse of GameState::key() for a known game.
GameState state_from_key(std::uint64_t key, GameId g);

} // namespace migo
