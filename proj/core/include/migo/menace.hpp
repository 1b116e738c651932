#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "migo/game.hpp"
#include "migo/oracle.hpp"
#include "migo/rng.hpp"

namespace migo {

struct MenaceOptions {
    int initial_beads = 3;
    int delta_win = 3;
    int delta_draw = 1;
    int delta_loss = 1;
};

/// Matchbox learner: one box per canonical position, beads per canonical
/// successor. Symmetric moves share beads. A box with every bead removed
/// falls back to uniform selection.
class BeadBox {
public:
    BeadBox(GameId g, MenaceOptions opts) : game_(g), opts_(opts) {}

    GameState select(const GameState& s, Rng& rng) const;
    /// Adjusts beads along the learner's moves of `trace` by the outcome
    /// delta, flooring at zero.
    void update(const std::vector<GameState>& trace, GameValue outcome);

    int beads(const GameState& s, const GameState& move) const;
    std::size_t box_count() const { return boxes_.size(); }

    void save(const std::string& path) const;

private:
    struct Box {
        std::map<std::uint64_t, int> beads; // canonical successor -> count
    };
    Box& box_for(const GameState& s);
    const Box* find_box(const GameState& s) const;

    GameId game_;
    MenaceOptions opts_;
    std::map<std::uint64_t, Box> boxes_;
};

} // namespace migo
