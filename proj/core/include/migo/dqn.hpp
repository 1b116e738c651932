#pragma once

#include <deque>
#include <string>
#include <vector>

#include "migo/game.hpp"
#include "migo/mlp.hpp"
#include "migo/oracle.hpp"
#include "migo/rng.hpp"

namespace migo {

struct DqnConfig {
    double discount = 0.8;
    double l2_strength = 0.01;
    double target_update_rate = 0.01;
    double eps_initial = 0.6;
    double eps_final = 0.1;
    int eps_decay_steps = 2000; // linear anneal horizon, in decisions
    int hidden = 64;
    int batch = 32;
    int buffer = 10000;
    double lr = 0.01;
};

/// Action ids: the target cell for OX; source cell * 3 + {push, capture-left,
/// capture-right} for hexapawn.
int action_space_size(GameId g);
int move_action_id(const GameState& s, const GameState& move, GameId g);
std::vector<double> encode_state(const GameState& s, GameId g); // 3 channels/cell + side

/// Deep Q-learning from scratch: replay buffer, soft-updated target network,
/// linear epsilon annealing, illegal actions masked before the argmax.
class Dqn {
public:
    Dqn(GameId g, DqnConfig cfg, Rng& init_rng);

    double epsilon() const; // at the current step
    static double epsilon_at(const DqnConfig& cfg, long long step);

    GameState select(const GameState& s, Rng& rng); // advances the step counter
    void observe(const GameState& s, const GameState& move, double reward, const GameState& next,
                 bool next_terminal, Rng& rng);

    const MlpParams& params() const { return online_; }
    const MlpParams& target_params() const { return target_; }
    long long steps() const { return step_; }
    void save(const std::string& path) const; // flat array with a JSON shape header

private:
    struct Transition {
        std::vector<double> s;
        int action;
        double reward;
        std::vector<double> next;
        std::vector<int> next_legal; // action ids legal in `next`
        bool terminal;
    };

    void train_step(Rng& rng);

    GameId game_;
    DqnConfig cfg_;
    MlpParams online_, target_;
    std::deque<Transition> replay_;
    long long step_ = 0;
};

} // namespace migo
