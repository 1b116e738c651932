#include "migo/learner.hpp"

#include <algorithm>
#include <cctype>

#include "migo/errors.hpp"

namespace migo {

const char* family_name(TaskFamily f) { return f == TaskFamily::Win ? "win" : "draw"; }

namespace {

// Canonical representative of a move pair: the symmetry minimizing
// (from.key, to.key). Keeps `to` a legal move of `from`.
std::pair<GameState, GameState> canonical_pair(const GameState& from, const GameState& to,
                                               GameId g) {
    const int n = game_info(g).symmetry_count;
    GameState bf = from, bt = to;
    bool first = true;
    for (int sym = 0; sym < n; ++sym) {
        GameState f2 = apply_symmetry(from, g, sym);
        GameState t2 = apply_symmetry(to, g, sym);
        if (first || f2.key() < bf.key() || (f2.key() == bf.key() && t2.key() < bt.key())) {
            bf = f2;
            bt = t2;
            first = false;
        }
    }
    return {bf, bt};
}

struct TaskRef {
    std::string name;
    TaskFamily family;
    int depth;
    bool from_store = false; // learned (or re-validated) on this game, not just transferred
};

struct InventionRef {
    std::string name;
    std::string owner; // task name, empty when unknown
};

bool parse_task_name(const std::string& name, TaskFamily* family, int* depth) {
    std::string rest;
    TaskFamily f;
    if (name.rfind("win_", 0) == 0) {
        f = TaskFamily::Win;
        rest = name.substr(4);
    } else if (name.rfind("draw_", 0) == 0) {
        f = TaskFamily::Draw;
        rest = name.substr(5);
    } else {
        return false;
    }
    if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) return false;
    if (family) *family = f;
    if (depth) *depth = std::stoi(rest);
    return true;
}

std::string invention_owner(const std::string& name) {
    // win_2_1_1 is owned by win_2
    for (const char* prefix : {"win_", "draw_"}) {
        if (name.rfind(prefix, 0) != 0) continue;
        std::size_t i = std::string(prefix).size();
        std::size_t digits = 0;
        while (i + digits < name.size() && std::isdigit(static_cast<unsigned char>(name[i + digits])))
            ++digits;
        if (digits > 0 && i + digits < name.size() && name[i + digits] == '_')
            return name.substr(0, i + digits);
    }
    return {};
}

// Candidate order for predicate variables: the task's own inventions newest
// first, then tasks of the same family newest first, then tasks of the other
// family oldest first, then foreign inventions oldest first, then move/2.
std::vector<std::string> candidate_order(const std::string& task, TaskFamily family,
                                         const std::vector<TaskRef>& tasks,
                                         const std::vector<InventionRef>& inventions) {
    std::vector<std::string> out;
    for (auto it = inventions.rbegin(); it != inventions.rend(); ++it)
        if (it->owner == task) out.push_back(it->name);
    for (auto it = tasks.rbegin(); it != tasks.rend(); ++it)
        if (it->family == family && it->name != task) out.push_back(it->name);
    for (const TaskRef& t : tasks)
        if (t.family != family) out.push_back(t.name);
    for (const InventionRef& inv : inventions)
        if (inv.owner != task) out.push_back(inv.name);
    out.push_back("move");
    return out;
}

GameValue actual_value(const GameState& last, GameId g) {
    if (won(last, Mark::X, g)) return GameValue::Won;
    if (won(last, Mark::O, g)) return GameValue::Lost;
    return GameValue::Drawn;
}

bool strategy_win_tier_fires(const Strategy& strategy, const GameState& s,
                             const mil::Primitives& prims, int depth_bound) {
    mil::Engine eng({&strategy.program}, prims, depth_bound);
    for (int k : strategy.win_depths) {
        if (eng.first_solution("win_" + std::to_string(k), s)) return true;
    }
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// ExampleStore

bool ExampleStore::add(const MoveExample& ex, const GameState& origin) {
    if (ex.depth < 1) throw ValidationError("example depth must be >= 1");
    auto [cf, ct] = canonical_pair(ex.from, ex.to, game_);
    const int f = static_cast<int>(ex.family);
    std::uint64_t k = Rng::mix(Rng::mix(static_cast<std::uint64_t>(ex.depth), cf.key()), ct.key());
    if (!seen_[f].insert(k).second) return false;
    buckets_[f][ex.depth].push_back(Entry{cf, ct, origin});
    return true;
}

std::vector<int> ExampleStore::depths(TaskFamily f) const {
    std::vector<int> out;
    for (const auto& [d, v] : buckets_[static_cast<int>(f)])
        if (!v.empty()) out.push_back(d);
    return out;
}

const std::vector<ExampleStore::Entry>& ExampleStore::examples(TaskFamily f, int depth) const {
    static const std::vector<Entry> empty;
    auto it = buckets_[static_cast<int>(f)].find(depth);
    return it == buckets_[static_cast<int>(f)].end() ? empty : it->second;
}

std::size_t ExampleStore::size() const {
    std::size_t n = 0;
    for (const auto& side : buckets_)
        for (const auto& [d, v] : side) n += v.size();
    return n;
}

std::size_t ExampleStore::prune_draws(const std::function<bool(const GameState&)>& fires) {
    std::size_t removed = 0;
    auto& draw = buckets_[static_cast<int>(TaskFamily::Draw)];
    for (auto& [depth, entries] : draw) {
        std::vector<Entry> kept;
        for (const Entry& e : entries) {
            if (fires(e.origin)) {
                std::uint64_t k = Rng::mix(
                    Rng::mix(static_cast<std::uint64_t>(depth), e.from.key()), e.to.key());
                seen_[static_cast<int>(TaskFamily::Draw)].erase(k);
                ++removed;
            } else {
                kept.push_back(e);
            }
        }
        entries = std::move(kept);
    }
    return removed;
}

std::uint64_t ExampleStore::fingerprint() const {
    std::uint64_t h = 0x9ae16a3b2f90404full;
    for (int f = 0; f < 2; ++f) {
        for (const auto& [depth, entries] : buckets_[f]) {
            h = Rng::mix(h, static_cast<std::uint64_t>(f * 1000 + depth));
            for (const Entry& e : entries) {
                h = Rng::mix(h, e.from.key());
                h = Rng::mix(h, e.to.key());
            }
        }
    }
    return h;
}

// ---------------------------------------------------------------------------
// Credit assignment

std::vector<MoveExample> label_episode(const std::vector<GameState>& trace, GameValue outcome,
                                       const Strategy& win_strategy, GameId game) {
    if (trace.size() < 2) throw ValidationError("a trace needs at least one move");
    if (trace.front().to_move != Mark::X)
        throw ValidationError("traces start with the learner to move");
    for (std::size_t j = 0; j + 1 < trace.size(); ++j) {
        const auto moves = legal_moves(trace[j], game);
        if (std::find(moves.begin(), moves.end(), trace[j + 1]) == moves.end())
            throw ValidationError("illegal transition at ply " + std::to_string(j));
    }
    if (!terminal(trace.back(), game))
        throw ValidationError("trace does not end in a terminal state");
    if (actual_value(trace.back(), game) != outcome)
        throw ValidationError("stated outcome disagrees with the final state");

    const int total = static_cast<int>(trace.size()) - 1;
    auto depth_of = [&](int j) { return (total - j + 1) / 2; };

    std::vector<MoveExample> out;
    if (outcome == GameValue::Won) {
        for (int j = 0; j < total; j += 2)
            out.push_back(MoveExample{trace[static_cast<std::size_t>(j)],
                                      trace[static_cast<std::size_t>(j + 1)], TaskFamily::Win,
                                      depth_of(j)});
        return out;
    }
    if (outcome == GameValue::Drawn) {
        mil::Primitives prims(game);
        if (!strategy_win_tier_fires(win_strategy, trace.front(), prims, mil::kDefaultDepthBound)) {
            for (int j = 0; j < total; ++j)
                out.push_back(MoveExample{trace[static_cast<std::size_t>(j)],
                                          trace[static_cast<std::size_t>(j + 1)], TaskFamily::Draw,
                                          depth_of(j)});
        }
        return out;
    }
    return out; // losses label nothing
}

// ---------------------------------------------------------------------------
// The MIGO relearning procedure

Strategy migo_learn(const ExampleStore& store, LearnerMode mode, GameId game,
                    const MigoOptions& opts, const mil::Program& transferred,
                    bool draws_enabled) {
    mil::Primitives prims(game);
    mil::Program bk = transferred;
    std::vector<TaskRef> tasks;
    std::vector<InventionRef> inventions;
    for (const std::string& pred : transferred.defined_predicates()) {
        TaskFamily f;
        int d;
        if (parse_task_name(pred, &f, &d)) {
            // Transferred win tasks are executable immediately; transferred
            // draw definitions stay in the background until this game's own
            // drawn episodes validate them (through the covered-task path
            // below). Activating them blindly would lock the learner into
            // draw-tier moves on boards it has not yet learned to win.
            if (f == TaskFamily::Win) tasks.push_back(TaskRef{pred, f, d, false});
            else inventions.push_back(InventionRef{pred, invention_owner(pred)});
        } else {
            inventions.push_back(InventionRef{pred, invention_owner(pred)});
        }
    }

    auto covered = [&](const std::string& task, const std::vector<ExampleStore::Entry>& exs) {
        mil::Engine eng({&bk}, prims, opts.depth_bound);
        for (const auto& e : exs)
            if (!eng.check(task, e.from, e.to)) return false;
        return true;
    };

    for (TaskFamily family : {TaskFamily::Win, TaskFamily::Draw}) {
        if (family == TaskFamily::Draw) {
            // draw/2 cannot be learned before win/2: learning to draw first
            // would make the learner always draw and never win. Transferred
            // win definitions do not count; the win must come from this game.
            bool any_win = std::any_of(tasks.begin(), tasks.end(), [](const TaskRef& t) {
                return t.family == TaskFamily::Win && t.from_store;
            });
            if (!any_win) break;
            if (mode == LearnerMode::Separated && !draws_enabled) break;
        }
        for (int k : store.depths(family)) {
            const std::string task = std::string(family_name(family)) + "_" + std::to_string(k);
            const auto& entries = store.examples(family, k);

            mil::LearnOptions lopts;
            lopts.max_clauses = opts.max_clauses;
            lopts.depth_bound = opts.depth_bound;

            if (bk.defines(task) && covered(task, entries)) {
                auto it = std::find_if(tasks.begin(), tasks.end(),
                                       [&](const TaskRef& t) { return t.name == task; });
                if (it == tasks.end()) tasks.push_back(TaskRef{task, family, k, true});
                else it->from_store = true;
                continue;
            }

            // one-shot learn an invented predicate per example; an example an
            // earlier invention of this task already proves adds nothing new
            int example_index = 0;
            for (const auto& e : entries) {
                ++example_index;
                const std::string head = task + "_" + std::to_string(example_index) + "_1";
                if (bk.defines(head)) continue;
                bool already_abstracted = false;
                {
                    mil::Engine eng({&bk}, prims, opts.depth_bound);
                    for (const InventionRef& inv : inventions)
                        if (inv.owner == task && eng.check(inv.name, e.from, e.to)) {
                            already_abstracted = true;
                            break;
                        }
                }
                if (already_abstracted) continue;
                int counter = 1;
                lopts.q_candidates = candidate_order(task, family, tasks, inventions);
                lopts.r_candidates = lopts.q_candidates;
                lopts.fresh_name = [&, head]() {
                    return head + "_" + std::to_string(++counter);
                };
                auto delta = mil::learn({{e.from, e.to}}, head, bk, prims, lopts);
                if (!delta || delta->empty()) continue;
                // skip when an invention of this task already has the same body
                bool duplicate = false;
                if (delta->size() == 1) {
                    const auto& body = delta->clauses().front().body;
                    for (const InventionRef& inv : inventions) {
                        if (inv.owner != task) continue;
                        const auto* idxs = bk.clause_indices(inv.name);
                        if (idxs && idxs->size() == 1 &&
                            bk.clauses()[static_cast<std::size_t>((*idxs)[0])].body == body) {
                            duplicate = true;
                            break;
                        }
                    }
                }
                if (duplicate) continue;
                bk.append(*delta);
                for (const std::string& pred : delta->defined_predicates())
                    inventions.push_back(InventionRef{pred, task});
            }

            // learn the task over all of its examples
            std::vector<mil::Example> exs;
            exs.reserve(entries.size());
            for (const auto& e : entries) exs.emplace_back(e.from, e.to);
            int task_counter = 1;
            lopts.q_candidates = candidate_order(task, family, tasks, inventions);
            lopts.r_candidates = lopts.q_candidates;
            lopts.fresh_name = [&, task]() {
                std::string name;
                do {
                    name = task + "_1_" + std::to_string(++task_counter);
                } while (bk.defines(name));
                return name;
            };
            auto delta = mil::learn(exs, task, bk, prims, lopts);
            if (!delta) continue; // task omitted, learning continues
            bk.append(*delta);
            for (const std::string& pred : delta->defined_predicates())
                if (pred != task) inventions.push_back(InventionRef{pred, task});
            {
                auto it = std::find_if(tasks.begin(), tasks.end(),
                                       [&](const TaskRef& t) { return t.name == task; });
                if (it == tasks.end()) tasks.push_back(TaskRef{task, family, k, true});
                else it->from_store = true;
            }
        }
    }

    Strategy out;
    out.program = std::move(bk);
    for (const TaskRef& t : tasks) {
        auto& depths = (t.family == TaskFamily::Win) ? out.win_depths : out.draw_depths;
        if (std::find(depths.begin(), depths.end(), t.depth) == depths.end())
            depths.push_back(t.depth);
    }
    std::sort(out.win_depths.begin(), out.win_depths.end());
    std::sort(out.draw_depths.begin(), out.draw_depths.end());
    return out;
}

// ---------------------------------------------------------------------------
// MigoLearner

MigoLearner::MigoLearner(GameId g, MigoOptions opts)
    : game_(g), opts_(opts), prims_(g), store_(g) {
    draws_enabled_ = (opts_.mode == LearnerMode::Mixed);
    strategy_ = Strategy{};
}

void MigoLearner::transfer_in(const std::string& path) {
    transfer_in_program(mil::read_rules_file(path));
}

void MigoLearner::transfer_in_program(const mil::Program& rules) {
    transferred_ = rules;
    has_cache_ = false;
    strategy_ = relearn();
}

GameState MigoLearner::select_move(const GameState& s, Rng& rng) const {
    const auto moves = prims_.moves(s);
    if (moves.empty()) throw InvariantViolation("select_move on a state without moves");
    mil::Engine eng({&strategy_.program}, prims_, opts_.depth_bound);
    for (int k : strategy_.win_depths)
        if (auto b = eng.first_solution("win_" + std::to_string(k), s)) return *b;
    for (int k : strategy_.draw_depths)
        if (auto b = eng.first_solution("draw_" + std::to_string(k), s)) return *b;
    return moves[rng.uniform(static_cast<std::uint32_t>(moves.size()))];
}

bool MigoLearner::win_tier_fires(const GameState& s) const {
    return strategy_win_tier_fires(strategy_, s, prims_, opts_.depth_bound);
}

std::string MigoLearner::win_section(const Strategy& s) const {
    std::string out;
    for (const auto& c : s.program.clauses())
        if (c.head.pred.rfind("win", 0) == 0) {
            out += mil::render_clause(c);
            out += '\n';
        }
    return out;
}

Strategy MigoLearner::relearn() {
    std::uint64_t fp = store_.fingerprint();
    fp = Rng::mix(fp, draws_enabled_ ? 1 : 0);
    fp = Rng::mix(fp, opts_.mode == LearnerMode::Mixed ? 17 : 23);
    fp = Rng::mix(fp, Rng::tag(mil::render_rules(transferred_)));
    if (has_cache_ && fp == cached_fingerprint_) return strategy_;
    Strategy s = migo_learn(store_, opts_.mode, game_, opts_, transferred_, draws_enabled_);
    cached_fingerprint_ = fp;
    has_cache_ = true;
    return s;
}

std::vector<MoveExample> MigoLearner::finish_episode(const std::vector<GameState>& trace,
                                                     GameValue outcome) {
    const auto labels = label_episode(trace, outcome, strategy_, game_);
    bool added = false;
    for (const MoveExample& ex : labels) {
        if (ex.family == TaskFamily::Draw && opts_.mode == LearnerMode::Separated &&
            !draws_enabled_)
            continue; // pre-stability draw examples are wasted
        added |= store_.add(ex, trace.front());
    }

    const std::string prev_render = strategy_.render();
    const std::string prev_win = win_section(strategy_);

    if (added || !has_cache_) strategy_ = relearn();

    // Re-validate stored draw examples whenever the win strategy changes: the
    // draw labels were only valid while the win tier stayed silent on their
    // initial boards.
    std::string win_now = win_section(strategy_);
    for (int guard = 0; guard < 8 && win_now != prev_win; ++guard) {
        std::size_t pruned = store_.prune_draws([&](const GameState& origin) {
            return win_tier_fires(origin);
        });
        if (pruned == 0) break;
        const std::string before = win_now;
        strategy_ = relearn();
        win_now = win_section(strategy_);
        if (win_now == before) break;
    }

    // stability bookkeeping for separated learning
    if (!strategy_.win_depths.empty() && win_now == prev_win) {
        ++win_stable_games_;
    } else {
        win_stable_games_ = 0;
    }
    if (opts_.mode == LearnerMode::Separated && !draws_enabled_ &&
        win_stable_games_ >= opts_.stability_counter)
        draws_enabled_ = true; // one-way gate

    changed_last_ = strategy_.render() != prev_render;
    return labels;
}

} // namespace migo
