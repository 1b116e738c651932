#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "migo/game.hpp"

namespace migo::mil {

/// First-order variables of the H2,2 metarules.
enum class Var : std::uint8_t { A = 0, B = 1, C = 2 };

struct PredicateSymbol {
    std::string name;
    int arity; // 1 or 2
    bool operator==(const PredicateSymbol& o) const { return name == o.name && arity == o.arity; }
};

struct Literal {
    std::string pred;
    int arity = 2;
    std::array<Var, 2> args{Var::A, Var::B};
    bool negated = false;

    bool operator==(const Literal& o) const {
        return pred == o.pred && arity == o.arity && args == o.args && negated == o.negated;
    }
};

enum class MetaruleKind { Postcond, Negation };
const char* metarule_name(MetaruleKind k);

/// postcond: P(A,B) :- Q(A,B), R(B).
/// negation: P(A,B) :- Q(A,B), not(R(B,C)).
struct MetaSub {
    MetaruleKind kind;
    std::string p, q, r;
};

struct Clause {
    Literal head;               // never negated, arity 2
    std::vector<Literal> body;  // at most 2 literals

    bool operator==(const Clause& o) const { return head == o.head && body == o.body; }
};

Clause project(const MetaSub& sub);

/// An ordered set of H2,2 clauses. Duplicate clauses are rejected; every body
/// predicate must be a primitive, defined here, or defined in a background
/// program consulted alongside.
class Program {
public:
    void add(const Clause& c);                 // throws ValidationError on malformed clauses
    void append(const Program& p);             // add() for every clause
    bool empty() const { return clauses_.empty(); }
    std::size_t size() const { return clauses_.size(); }
    const std::vector<Clause>& clauses() const { return clauses_; }
    bool defines(const std::string& pred) const { return by_pred_.count(pred) > 0; }
    const std::vector<int>* clause_indices(const std::string& pred) const;
    std::vector<std::string> defined_predicates() const; // in first-definition order
    void clear();

    bool operator==(const Program& o) const { return clauses_ == o.clauses_; }

private:
    std::vector<Clause> clauses_;
    std::unordered_map<std::string, std::vector<int>> by_pred_;
};

/// Game-backed evaluation of move/2, won/1 and drawn/1. States are opaque
/// ground constants to the interpreter; won/1 holds when the player who just
/// moved has won, drawn/1 when the position is drawn.
class Primitives {
public:
    explicit Primitives(GameId g) : game_(g) {}
    GameId game() const { return game_; }

    static bool is_primitive(const std::string& pred) {
        return pred == "move" || pred == "won" || pred == "drawn";
    }
    static bool is_primitive_dyadic(const std::string& pred) { return pred == "move"; }

    bool holds_unary(const std::string& pred, const GameState& s) const;
    bool check_move(const GameState& a, const GameState& b) const;
    const std::vector<GameState>& moves(const GameState& a) const; // memoized

private:
    GameId game_;
    mutable std::unordered_map<std::uint64_t, std::vector<GameState>> move_cache_;
};

constexpr int kDefaultDepthBound = 96;

/// SLD resolution with negation as failure over `programs` (consulted in
/// order) plus the primitives. Returns false on depth exhaustion. Throws
/// InvariantViolation if a negated goal is reached with an unbound argument.
class Engine {
public:
    Engine(std::vector<const Program*> programs, const Primitives& prims,
           int depth_bound = kDefaultDepthBound);

    bool check(const std::string& pred, const GameState& a, const GameState& b) const;
    bool check_unary(const std::string& pred, const GameState& s) const;
    /// Enumerates bindings of B for pred(a, B) in deterministic order; stops
    /// when `yield` returns true. Returns whether any call did.
    bool enumerate(const std::string& pred, const GameState& a,
                   const std::function<bool(const GameState&)>& yield) const;
    std::optional<GameState> first_solution(const std::string& pred, const GameState& a) const;
    std::vector<GameState> solutions(const std::string& pred, const GameState& a) const;

private:
    struct Env;
    bool solve_body(const Clause& c, std::size_t idx, Env& env, int depth,
                    const std::function<bool(Env&)>& k) const;
    bool enumerate_depth(const std::string& pred, const GameState& a, int depth,
                         const std::function<bool(const GameState&)>& yield) const;
    bool check_depth(const std::string& pred, const GameState& a, const GameState& b,
                     int depth) const;
    bool check_unary_depth(const std::string& pred, const GameState& s, int depth) const;

    std::vector<const Program*> programs_;
    const Primitives& prims_;
    int depth_bound_;
};

/// Convenience wrapper matching the prove/1 contract: true iff pred(a, b) has
/// a proof under program + primitives within the depth bound.
bool prove(const std::string& pred, const GameState& a, const GameState& b,
           const Program& program, const Primitives& prims, int depth_bound = kDefaultDepthBound);

using Example = std::pair<GameState, GameState>;

struct LearnOptions {
    int max_clauses = 2;
    int depth_bound = kDefaultDepthBound;
    /// Ordered candidate predicates for Q and for R of the negation metarule.
    /// The caller controls enumeration order; learning picks the first program
    /// (fewest metasubs, then candidate order) covering every example.
    std::vector<std::string> q_candidates;
    std::vector<std::string> r_candidates;
    /// Names for invented predicates; must yield fresh names on each call.
    std::function<std::string()> fresh_name;
    bool allow_invention = true;
};

/// Metagol-style induction from positive examples: iterative deepening on the
/// number of new metasubs; returns only the newly learned clauses, or nullopt
/// when no program within max_clauses covers all examples.
std::optional<Program> learn(const std::vector<Example>& examples, const std::string& task,
                             const Program& background, const Primitives& prims,
                             const LearnOptions& opts);

/// Union of background and learned. Throws InvariantViolation when `learned`
/// defines a predicate already defined in `background`.
Program add_to_background(const Program& background, const Program& learned);

std::string render_clause(const Clause& c);
std::string render_rules(const Program& p);

/// Parses the rule grammar; a leading `rules v1 game=<id>` header is allowed
/// and validated. Throws ParseError with line/column on bad input.
Program parse_rules(const std::string& text);
Program parse_rules(const std::string& text, std::optional<GameId>* header_game);

void write_rules_file(const std::string& path, const Program& p, GameId game);
Program read_rules_file(const std::string& path, std::optional<GameId> expected_game = {});

} // namespace migo::mil
