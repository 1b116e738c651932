#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "migo/mil.hpp"
#include "migo/oracle.hpp"
#include "migo/rng.hpp"

namespace migo {

enum class TaskFamily : std::uint8_t { Win, Draw };
const char* family_name(TaskFamily f);

/// A positively labeled move. `depth` is the number of full moves from `from`
/// until the end of the observed game: ceil(remaining plies / 2).
struct MoveExample {
    GameState from;
    GameState to;
    TaskFamily family;
    int depth;
};

/// Per-task, per-depth example sets, deduplicated on canonical (from, to)
/// pairs and kept in insertion order. Draw examples remember the initial
/// board of the game that produced them so they can be re-validated when the
/// win strategy changes.
class ExampleStore {
public:
    struct Entry {
        GameState from;
        GameState to;
        GameState origin; // meaningful for draw examples
    };

    explicit ExampleStore(GameId g) : game_(g) {}
    GameId game() const { return game_; }

    /// Returns true when the example was new for its task-depth bucket.
    bool add(const MoveExample& ex, const GameState& origin);

    std::vector<int> depths(TaskFamily f) const;
    const std::vector<Entry>& examples(TaskFamily f, int depth) const;
    std::size_t size() const;
    bool empty() const { return size() == 0; }

    /// Drops draw examples whose origin satisfies `fires`; returns how many.
    std::size_t prune_draws(const std::function<bool(const GameState&)>& fires);

    /// Order-sensitive content hash; relearning is keyed on it.
    std::uint64_t fingerprint() const;

private:
    GameId game_;
    std::map<int, std::vector<Entry>> buckets_[2];
    std::unordered_set<std::uint64_t> seen_[2]; // keyed on (depth, from, to)
};

/// An executable strategy: the full program (background chain included) plus
/// the learned task depths. Execution tries win_i for ascending i, then
/// draw_i for ascending i, then falls back to a uniform random legal move.
struct Strategy {
    mil::Program program;
    std::vector<int> win_depths;
    std::vector<int> draw_depths;

    bool empty() const { return win_depths.empty() && draw_depths.empty(); }
    std::string render() const { return mil::render_rules(program); }
};

enum class LearnerMode { Mixed, Separated };

struct MigoOptions {
    LearnerMode mode = LearnerMode::Mixed;
    /// Games the win strategy must stay unchanged before Separated mode
    /// starts collecting draw examples (10 for OX, 5 for Hexapawn3).
    int stability_counter = 10;
    int max_clauses = 2;
    int depth_bound = mil::kDefaultDepthBound;
};

/// Labels an episode trace per the credit-assignment rules: a won game labels
/// every learner move as a win example; a drawn game labels every move of
/// both players as a draw example provided the win tier of `win_strategy`
/// proves nothing from the initial board; a lost game labels nothing.
std::vector<MoveExample> label_episode(const std::vector<GameState>& trace, GameValue outcome,
                                       const Strategy& win_strategy, GameId game);

/// Relearns the whole strategy from scratch from the store: for each depth k
/// present, one-shot learn an invented predicate per example, add it to the
/// background, then learn the task over all its examples. Win tasks first;
/// draw tasks are skipped while no win task exists.
Strategy migo_learn(const ExampleStore& store, LearnerMode mode, GameId game,
                    const MigoOptions& opts, const mil::Program& transferred,
                    bool draws_enabled);

class MigoLearner {
public:
    MigoLearner(GameId g, MigoOptions opts);

    GameId game() const { return game_; }
    const Strategy& strategy() const { return strategy_; }
    const ExampleStore& store() const { return store_; }
    bool strategy_changed_last() const { return changed_last_; }
    bool draws_enabled() const { return draws_enabled_; }

    /// Loads a rule file as initial background and initial strategy.
    void transfer_in(const std::string& path);
    void transfer_in_program(const mil::Program& rules);

    GameState select_move(const GameState& s, Rng& rng) const;

    /// Label, store, relearn, re-validate. Returns the labels as emitted.
    std::vector<MoveExample> finish_episode(const std::vector<GameState>& trace,
                                            GameValue outcome);

    bool win_tier_fires(const GameState& s) const;

private:
    Strategy relearn();
    std::string win_section(const Strategy& s) const;

    GameId game_;
    MigoOptions opts_;
    mil::Primitives prims_;
    ExampleStore store_;
    mil::Program transferred_;
    Strategy strategy_;
    bool draws_enabled_ = false;
    int win_stable_games_ = 0;
    bool changed_last_ = false;
    std::uint64_t cached_fingerprint_ = 0;
    bool has_cache_ = false;
};

} // namespace migo
