#include "migo/mil.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "migo/errors.hpp"

namespace migo::mil {

const char* metarule_name(MetaruleKind k) {
    return k == MetaruleKind::Postcond ? "postcond" : "negation";
}

Clause project(const MetaSub& sub) {
    Clause c;
    c.head = Literal{sub.p, 2, {Var::A, Var::B}, false};
    if (sub.kind == MetaruleKind::Postcond) {
        c.body.push_back(Literal{sub.q, 2, {Var::A, Var::B}, false});
        c.body.push_back(Literal{sub.r, 1, {Var::B, Var::B}, false});
    } else {
        c.body.push_back(Literal{sub.q, 2, {Var::A, Var::B}, false});
        c.body.push_back(Literal{sub.r, 2, {Var::B, Var::C}, true});
    }
    return c;
}

// ---------------------------------------------------------------------------
// Program

namespace {

void validate_clause(const Clause& c, const std::unordered_map<std::string, int>& arities) {
    if (c.head.negated) throw ValidationError("clause head must not be negated");
    if (c.head.arity < 1 || c.head.arity > 2)
        throw ValidationError("predicate arity must be 1 or 2 (H2,2)");
    if (c.body.size() > 2) throw ValidationError("at most 2 body literals (H2,2)");
    if (c.head.arity == 2 && (c.head.args[0] != Var::A || c.head.args[1] != Var::B))
        throw ValidationError("dyadic clause heads must be written over (A,B)");
    if (c.head.arity == 1 && c.head.args[0] != Var::A)
        throw ValidationError("monadic clause heads must be written over (A)");

    auto check_arity = [&](const Literal& l) {
        if (l.arity < 1 || l.arity > 2) throw ValidationError("predicate arity must be 1 or 2");
        int expected = -1;
        if (Primitives::is_primitive(l.pred)) expected = l.pred == "move" ? 2 : 1;
        auto it = arities.find(l.pred);
        if (it != arities.end()) expected = it->second;
        if (expected != -1 && expected != l.arity)
            throw ValidationError("arity mismatch for " + l.pred + "/" + std::to_string(l.arity));
    };
    check_arity(c.head);

    for (const Literal& l : c.body) check_arity(l);
    for (int i = 0; i < c.head.arity; ++i) {
        Var v = c.head.args[static_cast<std::size_t>(i)];
        bool in_body = false;
        for (const Literal& l : c.body)
            for (int j = 0; j < l.arity; ++j)
                if (!l.negated && l.args[static_cast<std::size_t>(j)] == v) in_body = true;
        if (!c.body.empty() && !in_body)
            throw ValidationError("head variable not bound by a positive body literal (safety)");
        if (c.body.empty())
            throw ValidationError("facts over variables are not range-restricted");
    }
    // negated literals: first argument groundable, second argument fresh
    bool groundable[3] = {false, false, false};
    for (int i = 0; i < c.head.arity; ++i) groundable[static_cast<int>(c.head.args[static_cast<std::size_t>(i)])] = true;
    for (const Literal& l : c.body) {
        if (l.negated) {
            if (!groundable[static_cast<int>(l.args[0])])
                throw ValidationError("negated literal would flounder: " + l.pred +
                                      " has an unbound first argument");
            if (l.arity == 2) {
                Var fresh = l.args[1];
                bool used_elsewhere = false;
                for (int i = 0; i < c.head.arity; ++i)
                    if (c.head.args[static_cast<std::size_t>(i)] == fresh) used_elsewhere = true;
                for (const Literal& o : c.body)
                    if (&o != &l)
                        for (int j = 0; j < o.arity; ++j)
                            if (o.args[static_cast<std::size_t>(j)] == fresh) used_elsewhere = true;
                if (used_elsewhere)
                    throw ValidationError("the existential variable of not(" + l.pred +
                                          "(..)) must be fresh");
            }
        } else {
            for (int i = 0; i < l.arity; ++i) groundable[static_cast<int>(l.args[static_cast<std::size_t>(i)])] = true;
        }
    }
}

} // namespace

void Program::add(const Clause& c) {
    std::unordered_map<std::string, int> arities;
    for (const Clause& existing : clauses_) {
        arities[existing.head.pred] = existing.head.arity;
        for (const Literal& l : existing.body) arities[l.pred] = l.arity;
    }
    validate_clause(c, arities);
    for (const Clause& existing : clauses_)
        if (existing == c) throw ValidationError("duplicate clause: " + render_clause(c));
    by_pred_[c.head.pred].push_back(static_cast<int>(clauses_.size()));
    clauses_.push_back(c);
}

void Program::append(const Program& p) {
    for (const Clause& c : p.clauses()) add(c);
}

const std::vector<int>* Program::clause_indices(const std::string& pred) const {
    auto it = by_pred_.find(pred);
    return it == by_pred_.end() ? nullptr : &it->second;
}

std::vector<std::string> Program::defined_predicates() const {
    std::vector<std::string> out;
    for (const Clause& c : clauses_)
        if (std::find(out.begin(), out.end(), c.head.pred) == out.end()) out.push_back(c.head.pred);
    return out;
}

void Program::clear() {
    clauses_.clear();
    by_pred_.clear();
}

// ---------------------------------------------------------------------------
// Primitives

bool Primitives::holds_unary(const std::string& pred, const GameState& s) const {
    if (pred == "won") return won(s, opponent_of(s.to_move), game_);
    if (pred == "drawn") return migo::drawn(s, game_);
    throw InvariantViolation("unknown monadic primitive " + pred);
}

bool Primitives::check_move(const GameState& a, const GameState& b) const {
    for (const GameState& m : moves(a))
        if (m == b) return true;
    return false;
}

const std::vector<GameState>& Primitives::moves(const GameState& a) const {
    auto it = move_cache_.find(a.key());
    if (it != move_cache_.end()) return it->second;
    return move_cache_.emplace(a.key(), legal_moves(a, game_)).first->second;
}

// ---------------------------------------------------------------------------
// Engine

struct Engine::Env {
    std::optional<GameState> slot[3];
    std::optional<GameState>& operator[](Var v) { return slot[static_cast<int>(v)]; }
};

Engine::Engine(std::vector<const Program*> programs, const Primitives& prims, int depth_bound)
    : programs_(std::move(programs)), prims_(prims), depth_bound_(depth_bound) {}

bool Engine::check(const std::string& pred, const GameState& a, const GameState& b) const {
    return check_depth(pred, a, b, depth_bound_);
}

bool Engine::check_unary(const std::string& pred, const GameState& s) const {
    return check_unary_depth(pred, s, depth_bound_);
}

bool Engine::enumerate(const std::string& pred, const GameState& a,
                       const std::function<bool(const GameState&)>& yield) const {
    return enumerate_depth(pred, a, depth_bound_, yield);
}

std::optional<GameState> Engine::first_solution(const std::string& pred,
                                                const GameState& a) const {
    std::optional<GameState> out;
    enumerate(pred, a, [&](const GameState& b) {
        out = b;
        return true;
    });
    return out;
}

std::vector<GameState> Engine::solutions(const std::string& pred, const GameState& a) const {
    std::vector<GameState> out;
    enumerate(pred, a, [&](const GameState& b) {
        if (std::find(out.begin(), out.end(), b) == out.end()) out.push_back(b);
        return false;
    });
    return out;
}

bool Engine::solve_body(const Clause& c, std::size_t idx, Env& env, int depth,
                        const std::function<bool(Env&)>& k) const {
    if (idx == c.body.size()) return k(env);
    const Literal& lit = c.body[idx];
    if (lit.negated) {
        const auto& v0 = env[lit.args[0]];
        if (!v0)
            throw InvariantViolation("floundering: not(" + lit.pred +
                                     "(..)) reached with an unbound argument");
        bool exists;
        if (lit.arity == 1) {
            exists = check_unary_depth(lit.pred, *v0, depth);
        } else if (env[lit.args[1]]) {
            exists = check_depth(lit.pred, *v0, *env[lit.args[1]], depth);
        } else {
            exists = enumerate_depth(lit.pred, *v0, depth, [](const GameState&) { return true; });
        }
        if (exists) return false;
        return solve_body(c, idx + 1, env, depth, k);
    }
    if (lit.arity == 1) {
        const auto& v0 = env[lit.args[0]];
        if (!v0) throw InvariantViolation("goal mode unsupported: unbound " + lit.pred + "/1");
        if (!check_unary_depth(lit.pred, *v0, depth)) return false;
        return solve_body(c, idx + 1, env, depth, k);
    }
    const auto& v0 = env[lit.args[0]];
    if (!v0) throw InvariantViolation("goal mode unsupported: unbound first argument of " + lit.pred);
    auto& v1 = env[lit.args[1]];
    if (v1) {
        if (!check_depth(lit.pred, *v0, *v1, depth)) return false;
        return solve_body(c, idx + 1, env, depth, k);
    }
    const GameState ground0 = *v0;
    return enumerate_depth(lit.pred, ground0, depth, [&](const GameState& b) {
        env[lit.args[1]] = b;
        bool stop = solve_body(c, idx + 1, env, depth, k);
        env[lit.args[1]].reset();
        return stop;
    });
}

bool Engine::check_depth(const std::string& pred, const GameState& a, const GameState& b,
                         int depth) const {
    if (depth <= 0) return false;
    if (pred == "move") return prims_.check_move(a, b);
    if (Primitives::is_primitive(pred))
        throw InvariantViolation(pred + "/1 used with two arguments");
    bool found = false;
    for (const Program* p : programs_) {
        const auto* idxs = p->clause_indices(pred);
        if (!idxs) continue;
        for (int i : *idxs) {
            const Clause& c = p->clauses()[static_cast<std::size_t>(i)];
            if (c.head.arity != 2) continue;
            Env env;
            env[Var::A] = a;
            if (env[c.head.args[1]] && !(*env[c.head.args[1]] == b)) continue;
            env[c.head.args[1]] = b;
            if (solve_body(c, 0, env, depth - 1, [](Env&) { return true; })) {
                found = true;
                break;
            }
        }
        if (found) break;
    }
    return found;
}

bool Engine::check_unary_depth(const std::string& pred, const GameState& s, int depth) const {
    if (depth <= 0) return false;
    if (pred == "won" || pred == "drawn") return prims_.holds_unary(pred, s);
    for (const Program* p : programs_) {
        const auto* idxs = p->clause_indices(pred);
        if (!idxs) continue;
        for (int i : *idxs) {
            const Clause& c = p->clauses()[static_cast<std::size_t>(i)];
            if (c.head.arity != 1) continue;
            Env env;
            env[c.head.args[0]] = s;
            if (solve_body(c, 0, env, depth - 1, [](Env&) { return true; })) return true;
        }
    }
    return false;
}

bool Engine::enumerate_depth(const std::string& pred, const GameState& a, int depth,
                             const std::function<bool(const GameState&)>& yield) const {
    if (depth <= 0) return false;
    if (pred == "move") {
        for (const GameState& m : prims_.moves(a))
            if (yield(m)) return true;
        return false;
    }
    if (Primitives::is_primitive(pred))
        throw InvariantViolation(pred + "/1 cannot bind a second argument");
    for (const Program* p : programs_) {
        const auto* idxs = p->clause_indices(pred);
        if (!idxs) continue;
        for (int i : *idxs) {
            const Clause& c = p->clauses()[static_cast<std::size_t>(i)];
            if (c.head.arity != 2) continue;
            Env env;
            env[Var::A] = a;
            const Var out = c.head.args[1];
            bool stop = solve_body(c, 0, env, depth - 1, [&](Env& e) {
                if (!e[out])
                    throw InvariantViolation("clause head variable left unbound in " + pred);
                return yield(*e[out]);
            });
            if (stop) return true;
        }
    }
    return false;
}

bool prove(const std::string& pred, const GameState& a, const GameState& b,
           const Program& program, const Primitives& prims, int depth_bound) {
    Engine eng({&program}, prims, depth_bound);
    return eng.check(pred, a, b);
}

// ---------------------------------------------------------------------------
// Learning

namespace {

struct Searcher {
    const std::vector<Example>& examples;
    const std::string& task;
    const Program& bk;
    const Primitives& prims;
    const LearnOptions& opts;
    Program delta;

    bool covered() {
        Engine eng({&bk, &delta}, prims, opts.depth_bound);
        for (const auto& [a, b] : examples)
            if (!eng.check(task, a, b)) return false;
        return true;
    }

    bool defined(const std::string& pred) const {
        return pred == "move" || bk.defines(pred) || delta.defines(pred);
    }

    bool has_clause(const Clause& c) const {
        for (const Clause& e : bk.clauses())
            if (e == c) return true;
        for (const Clause& e : delta.clauses())
            if (e == c) return true;
        return false;
    }

    void pop_to(std::size_t n) {
        Program rebuilt;
        for (std::size_t i = 0; i < n; ++i) rebuilt.add(delta.clauses()[i]);
        delta = std::move(rebuilt);
    }

    bool q_plausible(const std::string& q) {
        // a body Q(A,B) must at least prove the first example pair
        Engine eng({&bk, &delta}, prims, opts.depth_bound);
        return eng.check(q, examples.front().first, examples.front().second);
    }

    bool search_clause(const std::string& head, int budget) {
        if (budget <= 0) return false;
        static const std::vector<std::string> monadic = {"won", "drawn"};
        for (MetaruleKind kind : {MetaruleKind::Postcond, MetaruleKind::Negation}) {
            for (const std::string& q : opts.q_candidates) {
                if (q == head || !defined(q)) continue;
                if (!q_plausible(q)) continue;
                const auto& rs = (kind == MetaruleKind::Postcond) ? monadic : opts.r_candidates;
                for (const std::string& r : rs) {
                    if (kind == MetaruleKind::Negation && (r == head || !defined(r))) continue;
                    Clause c = project(MetaSub{kind, head, q, r});
                    if (has_clause(c)) continue;
                    const std::size_t mark = delta.size();
                    delta.add(c);
                    if (covered()) return true;
                    pop_to(mark);
                }
            }
        }
        if (opts.allow_invention && budget >= 2 && opts.fresh_name) {
            const std::string f = opts.fresh_name();
            static const std::vector<std::string> monadic2 = {"won", "drawn"};
            for (MetaruleKind kind : {MetaruleKind::Postcond, MetaruleKind::Negation}) {
                const auto& rs = (kind == MetaruleKind::Postcond) ? monadic2 : opts.r_candidates;
                for (const std::string& r : rs) {
                    if (kind == MetaruleKind::Negation && (r == head || !defined(r))) continue;
                    Clause c = project(MetaSub{kind, head, f, r});
                    const std::size_t mark = delta.size();
                    delta.add(c);
                    if (search_clause(f, budget - 1)) return true;
                    pop_to(mark);
                }
            }
        }
        return false;
    }
};

} // namespace

std::optional<Program> learn(const std::vector<Example>& examples, const std::string& task,
                             const Program& background, const Primitives& prims,
                             const LearnOptions& opts) {
    if (examples.empty()) throw ValidationError("learn requires at least one positive example");
    Searcher s{examples, task, background, prims, opts, {}};
    if (background.defines(task) && s.covered()) return Program{};
    for (int budget = 1; budget <= opts.max_clauses; ++budget) {
        s.delta.clear();
        if (s.search_clause(task, budget)) return s.delta;
    }
    return std::nullopt;
}

Program add_to_background(const Program& background, const Program& learned) {
    for (const std::string& pred : learned.defined_predicates())
        if (background.defines(pred))
            throw InvariantViolation("predicate " + pred + " is already defined in the background");
    Program out = background;
    out.append(learned);
    return out;
}

// ---------------------------------------------------------------------------
// Rendering and parsing

static const char* var_name(Var v) {
    switch (v) {
    case Var::A: return "A";
    case Var::B: return "B";
    case Var::C: return "C";
    }
    return "?";
}

static std::string render_atom(const Literal& l) {
    std::string out = l.pred;
    out += '(';
    out += var_name(l.args[0]);
    if (l.arity == 2) {
        out += ',';
        out += var_name(l.args[1]);
    }
    out += ')';
    return out;
}

static std::string render_literal(const Literal& l) {
    if (l.negated) return "not(" + render_atom(l) + ")";
    return render_atom(l);
}

std::string render_clause(const Clause& c) {
    std::string out = render_atom(c.head);
    if (!c.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i) {
            if (i) out += ", ";
            out += render_literal(c.body[i]);
        }
    }
    out += '.';
    return out;
}

std::string render_rules(const Program& p) {
    std::string out;
    for (const Clause& c : p.clauses()) {
        out += render_clause(c);
        out += '\n';
    }
    return out;
}

namespace {

struct RuleParser {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;
    int col = 1;

    explicit RuleParser(const std::string& t) : text(t) {}

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    char advance() {
        char c = text[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void skip_space() {
        while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n'))
            advance();
    }

    void skip_inline_space() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) advance();
    }

    void expect(char c) {
        if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    std::string ident() {
        if (eof() || !std::islower(static_cast<unsigned char>(peek())))
            fail("expected an identifier");
        std::string out;
        while (!eof()) {
            char c = peek();
            if (std::islower(static_cast<unsigned char>(c)) ||
                std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
                out += advance();
            } else {
                break;
            }
        }
        return out;
    }

    Var var() {
        if (eof()) fail("expected a variable");
        char c = peek();
        if (c != 'A' && c != 'B' && c != 'C') fail("variables are A, B or C");
        advance();
        return c == 'A' ? Var::A : (c == 'B' ? Var::B : Var::C);
    }

    Literal atom() {
        Literal l;
        l.pred = ident();
        skip_inline_space();
        expect('(');
        skip_inline_space();
        l.args[0] = var();
        skip_inline_space();
        l.arity = 1;
        if (!eof() && peek() == ',') {
            advance();
            skip_inline_space();
            l.args[1] = var();
            l.arity = 2;
            skip_inline_space();
        }
        expect(')');
        return l;
    }

    Literal literal() {
        if (!eof() && peek() == 'n' && text.compare(pos, 4, "not(") == 0) {
            pos += 4;
            col += 4;
            skip_inline_space();
            Literal l = atom();
            l.negated = true;
            skip_inline_space();
            expect(')');
            return l;
        }
        return atom();
    }

    Clause clause() {
        Clause c;
        c.head = atom();
        skip_inline_space();
        if (!eof() && peek() == ':') {
            advance();
            expect('-');
            for (;;) {
                skip_inline_space();
                c.body.push_back(literal());
                skip_inline_space();
                if (!eof() && peek() == ',') {
                    advance();
                    continue;
                }
                break;
            }
        }
        expect('.');
        return c;
    }
};

} // namespace

Program parse_rules(const std::string& text, std::optional<GameId>* header_game) {
    if (header_game) header_game->reset();
    Program p;
    RuleParser parser(text);
    parser.skip_space();
    if (!parser.eof() && text.compare(parser.pos, 6, "rules ") == 0) {
        std::size_t eol = text.find('\n', parser.pos);
        std::string header = text.substr(parser.pos, eol == std::string::npos ? std::string::npos
                                                                              : eol - parser.pos);
        std::istringstream hs(header);
        std::string word, version, gamekv;
        hs >> word >> version >> gamekv;
        if (version != "v1" || gamekv.rfind("game=", 0) != 0)
            throw ParseError("bad rules header '" + header + "'", parser.line, parser.col);
        GameId g = game_id_from_string(gamekv.substr(5));
        if (header_game) *header_game = g;
        while (!parser.eof() && parser.peek() != '\n') parser.advance();
    }
    for (;;) {
        parser.skip_space();
        if (parser.eof()) break;
        try {
            p.add(parser.clause());
        } catch (const ValidationError& e) {
            if (dynamic_cast<const ParseError*>(&e)) throw;
            throw ParseError(e.what(), parser.line, parser.col);
        }
    }
    return p;
}

Program parse_rules(const std::string& text) { return parse_rules(text, nullptr); }

void write_rules_file(const std::string& path, const Program& p, GameId game) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << "rules v1 game=" << game_id_string(game) << '\n';
    out << render_rules(p);
    if (!out) throw ValidationError("failed writing " + path);
}

Program read_rules_file(const std::string& path, std::optional<GameId> expected_game) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    bool blank = text.find_first_not_of(" \t\r\n") == std::string::npos;
    if (blank) return Program{};
    std::optional<GameId> header;
    Program p = parse_rules(text, &header);
    if (expected_game && header && *header != *expected_game)
        throw ValidationError(path + " was written for " + game_id_string(*header) + ", not " +
                              game_id_string(*expected_game));
    return p;
}

} // namespace migo::mil
