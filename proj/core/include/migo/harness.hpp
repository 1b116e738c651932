#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "migo/dqn.hpp"
#include "migo/learner.hpp"
#include "migo/menace.hpp"
#include "migo/oracle.hpp"
#include "migo/qlearn.hpp"
#include "migo/rng.hpp"

namespace migo {

enum class LearnerKind { MigoMixed, MigoSeparated, Menace, QLearning, Dqn, Random };
const char* learner_kind_string(LearnerKind k);
LearnerKind learner_kind_from_string(const std::string& s);

/// A learner playing X against the deterministic minimax opponent.
class Agent {
public:
    virtual ~Agent() = default;
    virtual GameState choose(const GameState& s, Rng& rng) = 0;
    /// Called after each learner decision once the next decision point (or the
    /// terminal state) is known. `reward` is the terminal game value, 0 else.
    virtual void on_transition(const GameState& s, const GameState& move, const GameState& next,
                               bool next_terminal, double reward, Rng& rng) {
        (void)s; (void)move; (void)next; (void)next_terminal; (void)reward; (void)rng;
    }
    virtual void end_episode(const std::vector<GameState>& trace, GameValue outcome) {
        (void)trace; (void)outcome;
    }
    virtual bool strategy_changed() const { return false; }
    virtual std::string rules_render() const { return {}; }
    virtual const MigoLearner* migo() const { return nullptr; }
    virtual const std::vector<MoveExample>* last_labels() const { return nullptr; }
};

struct ExperimentConfig {
    GameId game = GameId::NoughtsAndCrosses;
    LearnerKind learner = LearnerKind::Random;
    int episodes = 100;
    int runs = 1;
    std::uint64_t seed = 1;
    std::string oracle_path;   // loaded when present, otherwise solved in memory
    std::string out_prefix;    // outputs are skipped when empty
    std::string rules_in;      // MIGO transfer input
    std::string dump_rules;    // final rules of run 0 are also written here
    bool snapshot_rules = false;
    int threads = 0;           // 0 = hardware concurrency

    MigoOptions migo;
    MenaceOptions menace;
    QOptions qlearn;
    DqnConfig dqn;

    void validate() const; // throws ValidationError (menace is undefined on hexapawn4)
    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);

    /// Defaults that follow the game: the stability counter is 10 for OX and
    /// 5 for Hexapawn3 unless set explicitly.
    void apply_game_defaults();
};

std::unique_ptr<Agent> make_agent(const ExperimentConfig& cfg, Rng& init_rng);

struct EpisodeRecord {
    int episode = 0;                 // 1-based
    std::string board;
    int expected = 0;
    int actual = 0;
    int regret = 0;
    long long cum_regret = 0;
    bool strategy_changed = false;
    double wall_ms = 0.0;
};

struct RegretCurve {
    std::vector<std::vector<long long>> per_run; // [run][episode] cumulative regret
    std::vector<double> mean;                    // per episode
    std::vector<double> stddev;                  // population std dev per episode
    void aggregate();
};

struct RunResult {
    std::uint64_t derived_seed = 0;
    std::uint64_t board_fingerprint = 0;
    int convergence_episode = 0; // last episode whose strategy changed (MIGO)
    std::vector<EpisodeRecord> records;
    std::string final_rules; // MIGO only
};

struct ExperimentResult {
    ExperimentConfig config;
    RegretCurve curve;
    std::vector<RunResult> runs;
    std::string metadata_json() const;
    std::string curve_csv() const; // episode,mean_cum_regret,std_cum_regret
};

/// One game: the learner moves first, the oracle answers with best_reply.
/// Returns the full state trace and the outcome for the learner. Throws
/// InvariantViolation when the agent produces an illegal move.
std::pair<std::vector<GameState>, GameValue> play_episode(Agent& agent, const OracleTable& oracle,
                                                          const GameState& initial, Rng& agent_rng);

using EpisodeObserver = std::function<void(int run, const EpisodeRecord&,
                                           const std::vector<MoveExample>& labels)>;
using AgentInspector = std::function<void(int run, Agent&)>;

ExperimentResult run_experiment(const ExperimentConfig& config, const OracleTable& oracle,
                                const EpisodeObserver& observer = {},
                                const AgentInspector& inspector = {});

/// Loads the oracle from config.oracle_path or solves the game.
OracleTable oracle_for(const ExperimentConfig& config);

struct TransferResult {
    ExperimentResult seeded;
    ExperimentResult unseeded;
    std::vector<std::string> pretrained_rules; // per run
};

/// Pretrains a mixed MIGO learner per run, then runs the target game twice
/// with matched board streams: once seeded with the learned rules, once from
/// scratch.
TransferResult run_transfer(const ExperimentConfig& pretrain, const ExperimentConfig& target);

/// Writes <prefix>.csv, <prefix>.meta.json, <prefix>.run<k>.jsonl and, for
/// MIGO learners, <prefix>.run<k>.rules.
void emit_outputs(const ExperimentResult& result);

} // namespace migo
