#include "migo/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "migo/errors.hpp"

namespace migo {

using nlohmann::json;

const char* learner_kind_string(LearnerKind k) {
    switch (k) {
    case LearnerKind::MigoMixed: return "migo-mixed";
    case LearnerKind::MigoSeparated: return "migo-separated";
    case LearnerKind::Menace: return "menace";
    case LearnerKind::QLearning: return "qlearning";
    case LearnerKind::Dqn: return "dqn";
    case LearnerKind::Random: return "random";
    }
    return "?";
}

LearnerKind learner_kind_from_string(const std::string& s) {
    for (LearnerKind k : {LearnerKind::MigoMixed, LearnerKind::MigoSeparated, LearnerKind::Menace,
                          LearnerKind::QLearning, LearnerKind::Dqn, LearnerKind::Random})
        if (s == learner_kind_string(k)) return k;
    throw ValidationError("unknown learner '" + s + "'");
}

namespace {

GameValue outcome_of(const GameState& last, GameId g) {
    if (won(last, Mark::X, g)) return GameValue::Won;
    if (won(last, Mark::O, g)) return GameValue::Lost;
    return GameValue::Drawn;
}

class RandomAgent : public Agent {
public:
    explicit RandomAgent(GameId g) : game_(g) {}
    GameState choose(const GameState& s, Rng& rng) override {
        auto moves = legal_moves(s, game_);
        if (moves.empty()) throw InvariantViolation("no legal moves");
        return moves[rng.uniform(static_cast<std::uint32_t>(moves.size()))];
    }

private:
    GameId game_;
};

class MigoAgent : public Agent {
public:
    MigoAgent(GameId g, MigoOptions opts, const std::string& rules_in) : learner_(g, opts) {
        if (!rules_in.empty()) learner_.transfer_in(rules_in);
    }
    MigoAgent(GameId g, MigoOptions opts, const mil::Program& rules) : learner_(g, opts) {
        if (!rules.empty()) learner_.transfer_in_program(rules);
    }
    GameState choose(const GameState& s, Rng& rng) override { return learner_.select_move(s, rng); }
    void end_episode(const std::vector<GameState>& trace, GameValue outcome) override {
        labels_ = learner_.finish_episode(trace, outcome);
    }
    bool strategy_changed() const override { return learner_.strategy_changed_last(); }
    std::string rules_render() const override { return learner_.strategy().render(); }
    const MigoLearner* migo() const override { return &learner_; }
    const std::vector<MoveExample>* last_labels() const override { return &labels_; }

private:
    MigoLearner learner_;
    std::vector<MoveExample> labels_;
};

class MenaceAgent : public Agent {
public:
    MenaceAgent(GameId g, MenaceOptions opts) : box_(g, opts) {}
    GameState choose(const GameState& s, Rng& rng) override { return box_.select(s, rng); }
    void end_episode(const std::vector<GameState>& trace, GameValue outcome) override {
        box_.update(trace, outcome);
    }

private:
    BeadBox box_;
};

class QAgent : public Agent {
public:
    QAgent(GameId g, QOptions opts) : table_(g, opts) {}
    GameState choose(const GameState& s, Rng& rng) override {
        auto sel = table_.select(s, rng);
        pending_action_ = sel.action;
        return sel.move;
    }
    void on_transition(const GameState& s, const GameState&, const GameState& next,
                       bool next_terminal, double reward, Rng&) override {
        table_.update(s, pending_action_, reward, next, next_terminal);
    }

private:
    QTable table_;
    int pending_action_ = 0;
};

class DqnAgent : public Agent {
public:
    DqnAgent(GameId g, DqnConfig cfg, Rng& init_rng) : dqn_(g, cfg, init_rng) {}
    GameState choose(const GameState& s, Rng& rng) override { return dqn_.select(s, rng); }
    void on_transition(const GameState& s, const GameState& move, const GameState& next,
                       bool next_terminal, double reward, Rng& rng) override {
        dqn_.observe(s, move, reward, next, next_terminal, rng);
    }

private:
    Dqn dqn_;
};

} // namespace

std::unique_ptr<Agent> make_agent(const ExperimentConfig& cfg, Rng& init_rng) {
    switch (cfg.learner) {
    case LearnerKind::MigoMixed: {
        MigoOptions o = cfg.migo;
        o.mode = LearnerMode::Mixed;
        return std::make_unique<MigoAgent>(cfg.game, o, cfg.rules_in);
    }
    case LearnerKind::MigoSeparated: {
        MigoOptions o = cfg.migo;
        o.mode = LearnerMode::Separated;
        return std::make_unique<MigoAgent>(cfg.game, o, cfg.rules_in);
    }
    case LearnerKind::Menace: return std::make_unique<MenaceAgent>(cfg.game, cfg.menace);
    case LearnerKind::QLearning: return std::make_unique<QAgent>(cfg.game, cfg.qlearn);
    case LearnerKind::Dqn: return std::make_unique<DqnAgent>(cfg.game, cfg.dqn, init_rng);
    case LearnerKind::Random: return std::make_unique<RandomAgent>(cfg.game);
    }
    throw ValidationError("unknown learner kind");
}

// ---------------------------------------------------------------------------
// Config

void ExperimentConfig::apply_game_defaults() {
    migo.stability_counter = (game == GameId::Hexapawn3) ? 5 : 10;
}

void ExperimentConfig::validate() const {
    if (episodes < 1) throw ValidationError("episodes must be >= 1");
    if (runs < 1) throw ValidationError("runs must be >= 1");
    if (learner == LearnerKind::Menace && game == GameId::Hexapawn4)
        throw ValidationError("menace is only defined for the 3x3 games, not hexapawn4");
    if (migo.stability_counter < 1) throw ValidationError("stability counter must be positive");
    if (migo.max_clauses < 1) throw ValidationError("max_clauses must be positive");
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(dqn.discount) || !in_unit(dqn.l2_strength) || !in_unit(dqn.target_update_rate) ||
        !in_unit(dqn.eps_initial) || !in_unit(dqn.eps_final))
        throw ValidationError("dqn rates must lie in [0, 1]");
    if (dqn.hidden < 1 || dqn.batch < 1 || dqn.buffer < 1 || dqn.eps_decay_steps < 1)
        throw ValidationError("dqn sizes must be positive");
    if (!in_unit(qlearn.epsilon) || qlearn.alpha <= 0.0 || qlearn.alpha > 1.0 ||
        qlearn.gamma < 0.0 || qlearn.gamma > 1.0)
        throw ValidationError("q-learning constants out of range");
}

std::string ExperimentConfig::to_json() const {
    json j;
    j["game"] = game_id_string(game);
    j["learner"] = learner_kind_string(learner);
    j["episodes"] = episodes;
    j["runs"] = runs;
    j["seed"] = seed;
    j["oracle_path"] = oracle_path;
    j["out_prefix"] = out_prefix;
    j["rules_in"] = rules_in;
    j["dump_rules"] = dump_rules;
    j["snapshot_rules"] = snapshot_rules;
    j["threads"] = threads;
    j["migo"] = {{"mode", migo.mode == LearnerMode::Mixed ? "mixed" : "separated"},
                 {"stability_counter", migo.stability_counter},
                 {"max_clauses", migo.max_clauses},
                 {"depth_bound", migo.depth_bound}};
    j["menace"] = {{"initial_beads", menace.initial_beads},
                   {"delta_win", menace.delta_win},
                   {"delta_draw", menace.delta_draw},
                   {"delta_loss", menace.delta_loss}};
    j["qlearning"] = {{"alpha", qlearn.alpha},
                      {"gamma", qlearn.gamma},
                      {"initial_q", qlearn.initial_q},
                      {"epsilon", qlearn.epsilon},
                      {"canonical", qlearn.canonical}};
    j["dqn"] = {{"discount", dqn.discount},
                {"l2_strength", dqn.l2_strength},
                {"target_update_rate", dqn.target_update_rate},
                {"eps_initial", dqn.eps_initial},
                {"eps_final", dqn.eps_final},
                {"eps_decay_steps", dqn.eps_decay_steps},
                {"hidden", dqn.hidden},
                {"batch", dqn.batch},
                {"buffer", dqn.buffer},
                {"lr", dqn.lr}};
    return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("bad config JSON: ") + e.what());
    }
    if (j.contains("config")) j = j["config"]; // metadata files embed the config
    ExperimentConfig c;
    if (j.contains("game")) c.game = game_id_from_string(j["game"].get<std::string>());
    c.apply_game_defaults();
    if (j.contains("learner")) c.learner = learner_kind_from_string(j["learner"].get<std::string>());
    if (j.contains("episodes")) c.episodes = j["episodes"].get<int>();
    if (j.contains("runs")) c.runs = j["runs"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("oracle_path")) c.oracle_path = j["oracle_path"].get<std::string>();
    if (j.contains("out_prefix")) c.out_prefix = j["out_prefix"].get<std::string>();
    if (j.contains("rules_in")) c.rules_in = j["rules_in"].get<std::string>();
    if (j.contains("dump_rules")) c.dump_rules = j["dump_rules"].get<std::string>();
    if (j.contains("snapshot_rules")) c.snapshot_rules = j["snapshot_rules"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<int>();
    if (j.contains("migo")) {
        const auto& m = j["migo"];
        if (m.contains("mode"))
            c.migo.mode = m["mode"].get<std::string>() == "separated" ? LearnerMode::Separated
                                                                      : LearnerMode::Mixed;
        if (m.contains("stability_counter")) c.migo.stability_counter = m["stability_counter"].get<int>();
        if (m.contains("max_clauses")) c.migo.max_clauses = m["max_clauses"].get<int>();
        if (m.contains("depth_bound")) c.migo.depth_bound = m["depth_bound"].get<int>();
    }
    if (j.contains("menace")) {
        const auto& m = j["menace"];
        if (m.contains("initial_beads")) c.menace.initial_beads = m["initial_beads"].get<int>();
        if (m.contains("delta_win")) c.menace.delta_win = m["delta_win"].get<int>();
        if (m.contains("delta_draw")) c.menace.delta_draw = m["delta_draw"].get<int>();
        if (m.contains("delta_loss")) c.menace.delta_loss = m["delta_loss"].get<int>();
    }
    if (j.contains("qlearning")) {
        const auto& q = j["qlearning"];
        if (q.contains("alpha")) c.qlearn.alpha = q["alpha"].get<double>();
        if (q.contains("gamma")) c.qlearn.gamma = q["gamma"].get<double>();
        if (q.contains("initial_q")) c.qlearn.initial_q = q["initial_q"].get<double>();
        if (q.contains("epsilon")) c.qlearn.epsilon = q["epsilon"].get<double>();
        if (q.contains("canonical")) c.qlearn.canonical = q["canonical"].get<bool>();
    }
    if (j.contains("dqn")) {
        const auto& d = j["dqn"];
        if (d.contains("discount")) c.dqn.discount = d["discount"].get<double>();
        if (d.contains("l2_strength")) c.dqn.l2_strength = d["l2_strength"].get<double>();
        if (d.contains("target_update_rate"))
            c.dqn.target_update_rate = d["target_update_rate"].get<double>();
        if (d.contains("eps_initial")) c.dqn.eps_initial = d["eps_initial"].get<double>();
        if (d.contains("eps_final")) c.dqn.eps_final = d["eps_final"].get<double>();
        if (d.contains("eps_decay_steps")) c.dqn.eps_decay_steps = d["eps_decay_steps"].get<int>();
        if (d.contains("hidden")) c.dqn.hidden = d["hidden"].get<int>();
        if (d.contains("batch")) c.dqn.batch = d["batch"].get<int>();
        if (d.contains("buffer")) c.dqn.buffer = d["buffer"].get<int>();
        if (d.contains("lr")) c.dqn.lr = d["lr"].get<double>();
    }
    return c;
}

// ---------------------------------------------------------------------------
// Episodes and experiments

std::pair<std::vector<GameState>, GameValue> play_episode(Agent& agent, const OracleTable& oracle,
                                                          const GameState& initial,
                                                          Rng& agent_rng) {
    const GameId g = oracle.game();
    std::vector<GameState> trace{initial};
    GameState s = initial;
    for (;;) {
        const GameState move = agent.choose(s, agent_rng);
        const auto legal = legal_moves(s, g);
        if (std::find(legal.begin(), legal.end(), move) == legal.end())
            throw InvariantViolation("agent played an illegal move " + to_string(move) + " from " +
                                     to_string(s));
        trace.push_back(move);
        if (terminal(move, g)) {
            const GameValue outcome = outcome_of(move, g);
            agent.on_transition(s, move, move, true, to_int(outcome), agent_rng);
            agent.end_episode(trace, outcome);
            return {trace, outcome};
        }
        const GameState reply = oracle.best_reply(move);
        trace.push_back(reply);
        if (terminal(reply, g)) {
            const GameValue outcome = outcome_of(reply, g);
            agent.on_transition(s, move, reply, true, to_int(outcome), agent_rng);
            agent.end_episode(trace, outcome);
            return {trace, outcome};
        }
        agent.on_transition(s, move, reply, false, 0.0, agent_rng);
        s = reply;
    }
}

void RegretCurve::aggregate() {
    mean.clear();
    stddev.clear();
    if (per_run.empty()) return;
    const std::size_t episodes = per_run.front().size();
    mean.resize(episodes, 0.0);
    stddev.resize(episodes, 0.0);
    for (std::size_t e = 0; e < episodes; ++e) {
        double m = 0.0;
        for (const auto& run : per_run) m += static_cast<double>(run[e]);
        m /= static_cast<double>(per_run.size());
        double var = 0.0;
        for (const auto& run : per_run) {
            const double d = static_cast<double>(run[e]) - m;
            var += d * d;
        }
        var /= static_cast<double>(per_run.size());
        mean[e] = m;
        stddev[e] = std::sqrt(var);
    }
}

OracleTable oracle_for(const ExperimentConfig& config) {
    if (!config.oracle_path.empty()) {
        std::ifstream probe(config.oracle_path);
        if (!probe) throw ValidationError("oracle file " + config.oracle_path +
                                          " does not exist (run `oracle build` first)");
        OracleTable t = OracleTable::load(config.oracle_path);
        if (t.game() != config.game)
            throw ValidationError("oracle file is for " + std::string(game_id_string(t.game())) +
                                  ", experiment is " + game_id_string(config.game));
        return t;
    }
    return OracleTable::solve(config.game);
}

using AgentFactory = std::function<std::unique_ptr<Agent>(int run, Rng& init_rng)>;

static ExperimentResult run_experiment_impl(const ExperimentConfig& config,
                                            const OracleTable& oracle,
                                            const EpisodeObserver& observer,
                                            const AgentInspector& inspector,
                                            const AgentFactory& factory) {
    config.validate();
    const auto boards = initial_board_set(config.game);
    if (boards.empty()) throw InvariantViolation("empty initial board set");

    ExperimentResult result;
    result.config = config;
    result.runs.resize(static_cast<std::size_t>(config.runs));
    result.curve.per_run.resize(static_cast<std::size_t>(config.runs));

    std::mutex observer_mutex;
    const std::uint64_t game_tag = Rng::tag(game_id_string(config.game));

    auto worker = [&](int run) {
        Rng boards_rng = Rng(config.seed).split("boards").split(game_tag).split(
            static_cast<std::uint64_t>(run));
        Rng agent_rng = Rng(config.seed).split("agent").split(game_tag).split(
            static_cast<std::uint64_t>(run));
        Rng init_rng = Rng(config.seed).split("agent-init").split(game_tag).split(
            static_cast<std::uint64_t>(run));

        RunResult& rr = result.runs[static_cast<std::size_t>(run)];
        rr.derived_seed = Rng::mix(config.seed, static_cast<std::uint64_t>(run));
        std::unique_ptr<Agent> agent = factory(run, init_rng);

        std::uint64_t fingerprint = 0x811c9dc5ull;
        long long cum = 0;
        auto& cum_curve = result.curve.per_run[static_cast<std::size_t>(run)];
        cum_curve.reserve(static_cast<std::size_t>(config.episodes));

        for (int e = 1; e <= config.episodes; ++e) {
            const GameState initial =
                boards[boards_rng.uniform(static_cast<std::uint32_t>(boards.size()))];
            fingerprint = Rng::mix(fingerprint, initial.key());

            const auto t0 = std::chrono::steady_clock::now();
            auto [trace, actual] = play_episode(*agent, oracle, initial, agent_rng);
            const auto t1 = std::chrono::steady_clock::now();

            EpisodeRecord rec;
            rec.episode = e;
            rec.board = to_string(initial);
            rec.expected = to_int(oracle.expected_outcome(initial));
            rec.actual = to_int(actual);
            rec.regret = oracle.minimax_regret(initial, actual);
            cum += rec.regret;
            rec.cum_regret = cum;
            rec.strategy_changed = agent->strategy_changed();
            rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (rec.strategy_changed) rr.convergence_episode = e;
            cum_curve.push_back(cum);

            if (config.snapshot_rules && !config.out_prefix.empty() && agent->migo()) {
                char name[64];
                std::snprintf(name, sizeof name, ".run%d.ep%04d.rules", run, e);
                mil::write_rules_file(config.out_prefix + name,
                                      agent->migo()->strategy().program, config.game);
            }

            if (observer) {
                static const std::vector<MoveExample> no_labels;
                const std::vector<MoveExample>* labels = agent->last_labels();
                std::lock_guard<std::mutex> lock(observer_mutex);
                observer(run, rec, labels ? *labels : no_labels);
            }
            rr.records.push_back(std::move(rec));
        }
        rr.board_fingerprint = fingerprint;
        rr.final_rules = agent->rules_render();
        if (inspector) {
            std::lock_guard<std::mutex> lock(observer_mutex);
            inspector(run, *agent);
        }
    };

    int threads = config.threads > 0 ? config.threads
                                     : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = std::min(threads, config.runs);
    if (threads <= 1) {
        for (int r = 0; r < config.runs; ++r) worker(r);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (;;) {
                        const int r = next.fetch_add(1);
                        if (r >= config.runs) break;
                        worker(r);
                    }
                } catch (...) {
                    errors[static_cast<std::size_t>(t)] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& err : errors)
            if (err) std::rethrow_exception(err);
    }

    result.curve.aggregate();
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config, const OracleTable& oracle,
                                const EpisodeObserver& observer, const AgentInspector& inspector) {
    return run_experiment_impl(config, oracle, observer, inspector,
                               [&](int, Rng& init_rng) { return make_agent(config, init_rng); });
}

// ---------------------------------------------------------------------------
// Output files

std::string ExperimentResult::curve_csv() const {
    std::string out = "episode,mean_cum_regret,std_cum_regret\n";
    char line[96];
    for (std::size_t e = 0; e < curve.mean.size(); ++e) {
        std::snprintf(line, sizeof line, "%zu,%.6f,%.6f\n", e + 1, curve.mean[e],
                      curve.stddev[e]);
        out += line;
    }
    return out;
}

std::string ExperimentResult::metadata_json() const {
    json meta;
    meta["config"] = json::parse(config.to_json());
    meta["format_versions"] = {{"oracle", "v1"}, {"rules", "v1"}, {"metadata", "v1"}};
    json runs_json = json::array();
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const RunResult& rr = runs[r];
        json jr;
        jr["run"] = r;
        jr["derived_seed"] = rr.derived_seed;
        jr["board_fingerprint"] = rr.board_fingerprint;
        jr["convergence_episode"] = rr.convergence_episode;
        if (!rr.final_rules.empty()) {
            const mil::Program p = mil::parse_rules(rr.final_rules);
            json tasks = json::array();
            for (const std::string& pred : p.defined_predicates()) tasks.push_back(pred);
            jr["predicates"] = tasks;
        }
        double wall = 0.0;
        for (const EpisodeRecord& rec : rr.records) wall += rec.wall_ms;
        jr["wall_ms_total"] = wall;
        jr["final_cum_regret"] = rr.records.empty() ? 0 : rr.records.back().cum_regret;
        runs_json.push_back(jr);
    }
    meta["runs"] = runs_json;
    return meta.dump(2);
}

static void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw ValidationError("failed writing " + path);
}

void emit_outputs(const ExperimentResult& result) {
    const std::string& prefix = result.config.out_prefix;
    if (prefix.empty()) return;
    write_text(prefix + ".csv", result.curve_csv());
    write_text(prefix + ".meta.json", result.metadata_json());
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
        const RunResult& rr = result.runs[r];
        std::string jsonl;
        for (const EpisodeRecord& rec : rr.records) {
            json j;
            j["episode"] = rec.episode;
            j["board"] = rec.board;
            j["expected"] = rec.expected;
            j["actual"] = rec.actual;
            j["regret"] = rec.regret;
            j["cum_regret"] = rec.cum_regret;
            j["strategy_changed"] = rec.strategy_changed;
            j["wall_ms"] = rec.wall_ms;
            jsonl += j.dump();
            jsonl += '\n';
        }
        write_text(prefix + ".run" + std::to_string(r) + ".jsonl", jsonl);
        if (!rr.final_rules.empty()) {
            mil::Program p = mil::parse_rules(rr.final_rules);
            mil::write_rules_file(prefix + ".run" + std::to_string(r) + ".rules", p,
                                  result.config.game);
        }
    }
    if (!result.config.dump_rules.empty() && !result.runs.empty() &&
        !result.runs.front().final_rules.empty()) {
        mil::Program p = mil::parse_rules(result.runs.front().final_rules);
        mil::write_rules_file(result.config.dump_rules, p, result.config.game);
    }
}

// ---------------------------------------------------------------------------
// Transfer

TransferResult run_transfer(const ExperimentConfig& pretrain, const ExperimentConfig& target) {
    if (pretrain.learner != LearnerKind::MigoMixed &&
        pretrain.learner != LearnerKind::MigoSeparated)
        throw ValidationError("transfer pretraining requires a MIGO learner");
    ExperimentConfig pre = pretrain;
    pre.runs = target.runs;
    pre.out_prefix.clear();
    const OracleTable pre_oracle = oracle_for(pre);
    ExperimentResult pre_result = run_experiment(pre, pre_oracle);

    TransferResult out;
    for (const RunResult& rr : pre_result.runs) out.pretrained_rules.push_back(rr.final_rules);

    const OracleTable target_oracle = oracle_for(target);
    std::vector<mil::Program> programs;
    programs.reserve(out.pretrained_rules.size());
    for (const std::string& text : out.pretrained_rules) programs.push_back(mil::parse_rules(text));

    ExperimentConfig seeded_cfg = target;
    if (!seeded_cfg.out_prefix.empty()) seeded_cfg.out_prefix += ".seeded";
    ExperimentConfig unseeded_cfg = target;
    if (!unseeded_cfg.out_prefix.empty()) unseeded_cfg.out_prefix += ".unseeded";

    MigoOptions seeded_opts = target.migo;
    seeded_opts.mode = (target.learner == LearnerKind::MigoSeparated) ? LearnerMode::Separated
                                                                      : LearnerMode::Mixed;

    out.seeded = run_experiment_impl(
        seeded_cfg, target_oracle, {}, {}, [&](int run, Rng&) -> std::unique_ptr<Agent> {
            return std::make_unique<MigoAgent>(target.game, seeded_opts,
                                               programs[static_cast<std::size_t>(run)]);
        });
    out.unseeded = run_experiment_impl(
        unseeded_cfg, target_oracle, {}, {}, [&](int, Rng&) -> std::unique_ptr<Agent> {
            return std::make_unique<MigoAgent>(target.game, seeded_opts, mil::Program{});
        });
    return out;
}

} // namespace migo
