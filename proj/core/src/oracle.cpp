#include "migo/oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "migo/errors.hpp"

namespace migo {

GameValue value_from_int(int v) {
    if (v < -1 || v > 1) throw ValidationError("game value must be -1, 0 or +1");
    return static_cast<GameValue>(v);
}

namespace {

struct Solver {
    GameId game;
    // value from the mover's perspective, distance in plies
    std::unordered_map<std::uint64_t, std::pair<int, int>> memo;

    std::pair<int, int> solve(const GameState& s) {
        const GameState c = canonical_form(s, game);
        auto it = memo.find(c.key());
        if (it != memo.end()) return it->second;

        std::pair<int, int> result;
        if (won(c, opponent_of(c.to_move), game)) {
            result = {-1, 0};
        } else if (won(c, c.to_move, game)) {
            result = {1, 0}; // not reachable by play; kept for robustness
        } else {
            auto moves = legal_moves(c, game);
            if (moves.empty()) {
                result = {0, 0};
            } else {
                int best_v = -2, best_d = 0;
                for (const GameState& n : moves) {
                    auto [cv, cd] = solve(n);
                    const int v = -cv;
                    const int d = cd + 1;
                    if (v > best_v) {
                        best_v = v;
                        best_d = d;
                    } else if (v == best_v) {
                        // win fast, lose slow, draw slow
                        if ((v > 0 && d < best_d) || (v < 0 && d > best_d) || (v == 0 && d > best_d))
                            best_d = d;
                    }
                }
                result = {best_v, best_d};
            }
        }
        memo.emplace(c.key(), result);
        return result;
    }
};

} // namespace

void OracleTable::index_rows() {
    entries_.clear();
    entries_.reserve(rows_.size() * 2);
    for (const Row& r : rows_) entries_.emplace(r.state.key(), r.entry);
}

OracleTable OracleTable::solve(GameId g) {
    OracleTable t;
    t.game_ = g;
    Solver solver{g, {}};
    for (const GameState& s : reachable_canonical_states(g)) {
        auto [v, d] = solver.solve(s);
        const int vx = (s.to_move == Mark::X) ? v : -v;
        t.rows_.push_back(Row{s, OracleEntry{static_cast<GameValue>(vx), d}});
    }
    std::sort(t.rows_.begin(), t.rows_.end(),
              [](const Row& a, const Row& b) { return a.state < b.state; });
    t.index_rows();
    return t;
}

const OracleEntry& OracleTable::entry(const GameState& s) const {
    const GameState c = canonical_form(s, game_);
    auto it = entries_.find(c.key());
    if (it == entries_.end())
        throw InvariantViolation("state " + to_string(s) + " is not in the " +
                                 game_id_string(game_) + " oracle");
    return it->second;
}

GameState OracleTable::best_reply(const GameState& s) const {
    auto moves = legal_moves(s, game_);
    if (terminal(s, game_) || moves.empty())
        throw InvariantViolation("best_reply called on a terminal state " + to_string(s));
    const GameState* best = nullptr;
    int best_v = -2, best_d = 0;
    for (const GameState& n : moves) {
        const OracleEntry& e = entry(n);
        const int vx = to_int(e.value);
        const int v = (s.to_move == Mark::X) ? vx : -vx; // mover's perspective
        const int d = e.distance + 1;
        bool better = false;
        if (!best || v > best_v) {
            better = true;
        } else if (v == best_v) {
            if (v > 0) better = d < best_d;
            else if (v < 0) better = d > best_d;
            else better = d > best_d;
        }
        if (better) {
            best = &n;
            best_v = v;
            best_d = d;
        }
    }
    return *best;
}

int OracleTable::minimax_regret(const GameState& initial, GameValue actual) const {
    const int expected = to_int(expected_outcome(initial));
    const int got = to_int(actual);
    if (got > expected)
        throw InvariantViolation("actual outcome " + std::to_string(got) + " exceeds expectation " +
                                 std::to_string(expected) + " from " + to_string(initial) +
                                 "; the opponent was not optimal or the oracle is wrong");
    return expected - got;
}

void OracleTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << "oracle " << game_id_string(game_) << " v1\n";
    for (const Row& r : rows_) {
        const int v = to_int(r.entry.value);
        out << to_string(r.state) << ' ' << (v > 0 ? "+1" : v < 0 ? "-1" : "0") << ' '
            << r.entry.distance << '\n';
    }
    if (!out) throw ValidationError("failed writing " + path);
}

OracleTable OracleTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw ValidationError(path + " is empty");
    std::istringstream hs(header);
    std::string word, id, version;
    hs >> word >> id >> version;
    if (word != "oracle" || version != "v1")
        throw ValidationError(path + ": bad header '" + header + "'");
    OracleTable t;
    t.game_ = game_id_from_string(id);
    std::string line;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string board, mover, value;
        int distance;
        if (!(ls >> board >> mover >> value >> distance))
            throw ParseError(path + ": bad oracle row", lineno, 1);
        GameState s = state_from_string(board + " " + mover, t.game_);
        int v;
        if (value == "+1") v = 1;
        else if (value == "-1") v = -1;
        else if (value == "0") v = 0;
        else throw ParseError(path + ": bad value '" + value + "'", lineno, 1);
        t.rows_.push_back(Row{s, OracleEntry{static_cast<GameValue>(v), distance}});
    }
    std::sort(t.rows_.begin(), t.rows_.end(),
              [](const Row& a, const Row& b) { return a.state < b.state; });
    t.index_rows();
    return t;
}

} // namespace migo
