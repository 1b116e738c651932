#include "migo/game.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "migo/errors.hpp"

namespace migo {

Mark opponent_of(Mark m) {
    if (m == Mark::X) return Mark::O;
    if (m == Mark::O) return Mark::X;
    throw ValidationError("Empty has no opponent");
}

char mark_char(Mark m) {
    switch (m) {
    case Mark::Empty: return '.';
    case Mark::O: return 'o';
    case Mark::X: return 'x';
    }
    return '?';
}

static Mark mark_from_char(char c) {
    switch (c) {
    case '.': return Mark::Empty;
    case 'o': return Mark::O;
    case 'x': return Mark::X;
    default: throw ValidationError(std::string("invalid board character '") + c + "'");
    }
}

std::uint64_t GameState::key() const {
    std::uint64_t k = 0;
    for (int i = 0; i < cell_count; ++i)
        k = (k << 2) | static_cast<std::uint64_t>(cells[static_cast<std::size_t>(i)]);
    k = (k << 1) | (to_move == Mark::X ? 1u : 0u);
    return k;
}

const GameInfo& game_info(GameId g) {
    static const GameInfo infos[] = {
        {GameId::NoughtsAndCrosses, 3, 3, 9, 8},
        {GameId::Hexapawn3, 3, 3, 9, 2},
        {GameId::Hexapawn4, 4, 4, 16, 2},
    };
    return infos[static_cast<int>(g)];
}

const char* game_id_string(GameId g) {
    switch (g) {
    case GameId::NoughtsAndCrosses: return "ox";
    case GameId::Hexapawn3: return "hexapawn3";
    case GameId::Hexapawn4: return "hexapawn4";
    }
    return "?";
}

GameId game_id_from_string(const std::string& s) {
    if (s == "ox") return GameId::NoughtsAndCrosses;
    if (s == "hexapawn3") return GameId::Hexapawn3;
    if (s == "hexapawn4") return GameId::Hexapawn4;
    throw ValidationError("unknown game id '" + s + "' (expected ox, hexapawn3 or hexapawn4)");
}

GameState initial_state(GameId g) {
    const GameInfo& info = game_info(g);
    GameState s;
    s.cell_count = static_cast<std::uint8_t>(info.cells);
    s.to_move = Mark::X;
    if (g != GameId::NoughtsAndCrosses) {
        for (int c = 0; c < info.width; ++c) {
            s.set(c, Mark::O);
            s.set((info.height - 1) * info.width + c, Mark::X);
        }
    }
    return s;
}

void validate_state(const GameState& s, GameId g) {
    const GameInfo& info = game_info(g);
    if (s.cell_count != info.cells)
        throw ValidationError("board has " + std::to_string(s.cell_count) + " cells, expected " +
                              std::to_string(info.cells));
    if (s.to_move != Mark::X && s.to_move != Mark::O)
        throw ValidationError("side to move must be x or o");
    int nx = 0, no = 0;
    for (int i = 0; i < info.cells; ++i) {
        if (s.at(i) == Mark::X) ++nx;
        else if (s.at(i) == Mark::O) ++no;
    }
    if (g == GameId::NoughtsAndCrosses) {
        // X moves on equal counts, so counts fix the side to move.
        if (nx - no != 0 && nx - no != 1)
            throw ValidationError("mark counts " + std::to_string(nx) + "x/" + std::to_string(no) +
                                  "o are unreachable");
        Mark expected = (nx == no) ? Mark::X : Mark::O;
        if (s.to_move != expected)
            throw ValidationError("side to move inconsistent with mark counts");
    } else {
        if (nx > info.width || no > info.width)
            throw ValidationError("each side has at most " + std::to_string(info.width) + " pawns");
    }
}

namespace {

struct SymmetryTables {
    // src_of[sym][i] = source cell of destination cell i
    std::vector<std::array<int, 16>> src_of;
    std::vector<int> inverse;
};

std::array<int, 16> make_perm(GameId g, int sym) {
    const GameInfo& info = game_info(g);
    const int w = info.width, h = info.height;
    std::array<int, 16> src{};
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            int sr = r, sc = c;
            if (g == GameId::NoughtsAndCrosses) {
                const int n = w;
                int rot = sym & 3;
                bool flip = sym & 4;
                // walk backwards: destination (r,c) came from...
                int rr = r, cc = c;
                if (flip) cc = n - 1 - cc;
                for (int k = 0; k < rot; ++k) {
                    int nr = n - 1 - cc, nc = rr; // inverse of rot90 cw
                    rr = nr;
                    cc = nc;
                }
                sr = rr;
                sc = cc;
            } else {
                // identity or vertical-axis mirror
                sc = (sym == 0) ? c : (w - 1 - c);
            }
            src[static_cast<std::size_t>(r * w + c)] = sr * w + sc;
        }
    }
    return src;
}

const SymmetryTables& symmetry_tables(GameId g) {
    static SymmetryTables tabs[3];
    SymmetryTables& t = tabs[static_cast<int>(g)];
    if (t.src_of.empty()) {
        const int n = game_info(g).symmetry_count;
        for (int sym = 0; sym < n; ++sym) t.src_of.push_back(make_perm(g, sym));
        t.inverse.resize(static_cast<std::size_t>(n), -1);
        const int cells = game_info(g).cells;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                bool id = true;
                for (int i = 0; i < cells && id; ++i)
                    id = t.src_of[static_cast<std::size_t>(a)]
                                 [static_cast<std::size_t>(t.src_of[static_cast<std::size_t>(b)]
                                                               [static_cast<std::size_t>(i)])] == i;
                if (id) {
                    t.inverse[static_cast<std::size_t>(a)] = b;
                    break;
                }
            }
        }
    }
    return t;
}

const std::array<std::array<int, 3>, 8>& ox_lines() {
    static const std::array<std::array<int, 3>, 8> lines = {{{0, 1, 2},
                                                             {3, 4, 5},
                                                             {6, 7, 8},
                                                             {0, 3, 6},
                                                             {1, 4, 7},
                                                             {2, 5, 8},
                                                             {0, 4, 8},
                                                             {2, 4, 6}}};
    return lines;
}

} // namespace

std::vector<GameState> legal_moves(const GameState& s, GameId g) {
    validate_state(s, g);
    const GameInfo& info = game_info(g);
    std::vector<GameState> out;
    const Mark me = s.to_move;
    if (g == GameId::NoughtsAndCrosses) {
        for (int i = 0; i < info.cells; ++i) {
            if (s.at(i) != Mark::Empty) continue;
            GameState n = s;
            n.set(i, me);
            n.to_move = opponent_of(me);
            out.push_back(n);
        }
        return out;
    }
    const int w = info.width, h = info.height;
    const int dir = (me == Mark::X) ? -1 : 1;
    const Mark opp = opponent_of(me);
    for (int src = 0; src < info.cells; ++src) {
        if (s.at(src) != me) continue;
        const int r = src / w, c = src % w;
        const int nr = r + dir;
        if (nr < 0 || nr >= h) continue;
        auto push_move = [&](int dst) {
            GameState n = s;
            n.set(src, Mark::Empty);
            n.set(dst, me);
            n.to_move = opp;
            out.push_back(n);
        };
        if (s.at(nr * w + c) == Mark::Empty) push_move(nr * w + c);
        if (c - 1 >= 0 && s.at(nr * w + c - 1) == opp) push_move(nr * w + c - 1);
        if (c + 1 < w && s.at(nr * w + c + 1) == opp) push_move(nr * w + c + 1);
    }
    return out;
}

bool won(const GameState& s, Mark player, GameId g) {
    if (player != Mark::X && player != Mark::O)
        throw ValidationError("won/2 expects a player mark");
    const GameInfo& info = game_info(g);
    if (g == GameId::NoughtsAndCrosses) {
        for (const auto& line : ox_lines())
            if (s.at(line[0]) == player && s.at(line[1]) == player && s.at(line[2]) == player)
                return true;
        return false;
    }
    // a pawn on the opposite back rank
    const int w = info.width, h = info.height;
    const int rank = (player == Mark::X) ? 0 : h - 1;
    for (int c = 0; c < w; ++c)
        if (s.at(rank * w + c) == player) return true;
    return false;
}

bool drawn(const GameState& s, GameId g) {
    if (won(s, Mark::X, g) || won(s, Mark::O, g)) return false;
    return legal_moves(s, g).empty();
}

bool terminal(const GameState& s, GameId g) {
    if (won(s, Mark::X, g) || won(s, Mark::O, g)) return true;
    return legal_moves(s, g).empty();
}

GameState apply_symmetry(const GameState& s, GameId g, int sym) {
    const auto& t = symmetry_tables(g);
    GameState out = s;
    const int cells = game_info(g).cells;
    for (int i = 0; i < cells; ++i)
        out.set(i, s.at(t.src_of[static_cast<std::size_t>(sym)][static_cast<std::size_t>(i)]));
    return out;
}

int inverse_symmetry(GameId g, int sym) { return symmetry_tables(g).inverse[static_cast<std::size_t>(sym)]; }

GameState canonical_form(const GameState& s, GameId g) {
    return apply_symmetry(s, g, canonicalizing_symmetry(s, g));
}

int canonicalizing_symmetry(const GameState& s, GameId g) {
    const int n = game_info(g).symmetry_count;
    int best = 0;
    std::uint64_t best_key = apply_symmetry(s, g, 0).key();
    for (int sym = 1; sym < n; ++sym) {
        std::uint64_t k = apply_symmetry(s, g, sym).key();
        if (k < best_key) {
            best_key = k;
            best = sym;
        }
    }
    return best;
}

std::vector<GameState> initial_board_set(GameId g) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<GameState> out;
    const GameState start = initial_state(g);
    for (const GameState& a : legal_moves(start, g)) {
        if (terminal(a, g)) continue;
        for (const GameState& b : legal_moves(a, g)) {
            GameState c = canonical_form(b, g);
            if (seen.insert(c.key()).second) out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<GameState> reachable_states(GameId g) {
    std::vector<GameState> out;
    std::unordered_set<std::uint64_t> seen;
    std::deque<GameState> queue;
    queue.push_back(initial_state(g));
    seen.insert(queue.front().key());
    while (!queue.empty()) {
        GameState s = queue.front();
        queue.pop_front();
        out.push_back(s);
        if (won(s, Mark::X, g) || won(s, Mark::O, g)) continue;
        for (const GameState& n : legal_moves(s, g))
            if (seen.insert(n.key()).second) queue.push_back(n);
    }
    return out;
}

std::vector<GameState> reachable_canonical_states(GameId g) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<GameState> out;
    for (const GameState& s : reachable_states(g)) {
        GameState c = canonical_form(s, g);
        if (seen.insert(c.key()).second) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const GameState& s) {
    const int w = (s.cell_count == 16) ? 4 : 3;
    std::string out;
    for (int i = 0; i < s.cell_count; ++i) {
        if (i > 0 && i % w == 0) out += '/';
        out += mark_char(s.at(i));
    }
    out += ' ';
    out += mark_char(s.to_move);
    return out;
}

GameState state_from_key(std::uint64_t key, GameId g) {
    const GameInfo& info = game_info(g);
    GameState s;
    s.cell_count = static_cast<std::uint8_t>(info.cells);
    s.to_move = (key & 1) ? Mark::X : Mark::O;
    key >>= 1;
    for (int i = info.cells - 1; i >= 0; --i) {
        s.set(i, static_cast<Mark>(key & 3));
        key >>= 2;
    }
    return s;
}

GameState state_from_string(const std::string& text, GameId g) {
    const GameInfo& info = game_info(g);
    const std::size_t space = text.find_last_of(' ');
    if (space == std::string::npos || space + 2 != text.size())
        throw ValidationError("expected '<board> <side-to-move>' in \"" + text + "\"");
    const std::string board = text.substr(0, space);
    GameState s;
    s.cell_count = static_cast<std::uint8_t>(info.cells);
    Mark mover = mark_from_char(text[space + 1]);
    if (mover == Mark::Empty) throw ValidationError("side to move must be x or o");
    s.to_move = mover;

    int cell = 0;
    int col = 0;
    bool slashed = board.find('/') != std::string::npos;
    for (char ch : board) {
        if (ch == '/') {
            if (slashed && col != info.width)
                throw ValidationError("row of length " + std::to_string(col) + ", expected " +
                                      std::to_string(info.width));
            col = 0;
            continue;
        }
        if (cell >= info.cells)
            throw ValidationError("board string too long for " + std::string(game_id_string(g)));
        s.set(cell++, mark_from_char(ch));
        ++col;
    }
    if (cell != info.cells)
        throw ValidationError("board string has " + std::to_string(cell) + " cells, expected " +
                              std::to_string(info.cells));
    validate_state(s, g);
    return s;
}

} // namespace migo
