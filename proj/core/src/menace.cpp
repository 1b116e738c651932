#include "migo/menace.hpp"

#include <fstream>

#include "migo/errors.hpp"

namespace migo {

BeadBox::Box& BeadBox::box_for(const GameState& s) {
    const GameState c = canonical_form(s, game_);
    auto it = boxes_.find(c.key());
    if (it != boxes_.end()) return it->second;
    Box box;
    for (const GameState& m : legal_moves(c, game_))
        box.beads[canonical_form(m, game_).key()] = opts_.initial_beads;
    return boxes_.emplace(c.key(), std::move(box)).first->second;
}

const BeadBox::Box* BeadBox::find_box(const GameState& s) const {
    auto it = boxes_.find(canonical_form(s, game_).key());
    return it == boxes_.end() ? nullptr : &it->second;
}

GameState BeadBox::select(const GameState& s, Rng& rng) const {
    const auto moves = legal_moves(s, game_);
    if (moves.empty()) throw InvariantViolation("menace_select on a state without moves");
    const Box* box = find_box(s);
    long long total = 0;
    std::vector<long long> weights(moves.size(), 1);
    if (box) {
        for (std::size_t i = 0; i < moves.size(); ++i) {
            auto it = box->beads.find(canonical_form(moves[i], game_).key());
            weights[i] = (it == box->beads.end()) ? 0 : it->second;
        }
    }
    for (long long w : weights) total += w;
    if (total == 0) {
        // all beads gone: uniform fallback
        return moves[rng.uniform(static_cast<std::uint32_t>(moves.size()))];
    }
    long long pick = static_cast<long long>(rng.uniform(static_cast<std::uint32_t>(total)));
    for (std::size_t i = 0; i < moves.size(); ++i) {
        pick -= weights[i];
        if (pick < 0) return moves[i];
    }
    return moves.back();
}

void BeadBox::update(const std::vector<GameState>& trace, GameValue outcome) {
    int delta = 0;
    switch (outcome) {
    case GameValue::Won: delta = opts_.delta_win; break;
    case GameValue::Drawn: delta = opts_.delta_draw; break;
    case GameValue::Lost: delta = -opts_.delta_loss; break;
    }
    for (std::size_t j = 0; j + 1 < trace.size(); j += 2) {
        Box& box = box_for(trace[j]);
        auto key = canonical_form(trace[j + 1], game_).key();
        auto it = box.beads.find(key);
        if (it == box.beads.end()) continue;
        it->second = std::max(0, it->second + delta);
    }
}

int BeadBox::beads(const GameState& s, const GameState& move) const {
    const Box* box = find_box(s);
    if (!box) return opts_.initial_beads;
    auto it = box->beads.find(canonical_form(move, game_).key());
    return it == box->beads.end() ? 0 : it->second;
}

void BeadBox::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open " + path + " for writing");
    out << "menace " << game_id_string(game_) << " v1\n";
    for (const auto& [key, box] : boxes_) {
        const std::string state = to_string(state_from_key(key, game_));
        for (const auto& [succ, count] : box.beads)
            out << state << " -> " << to_string(state_from_key(succ, game_)) << ' ' << count
                << '\n';
    }
}

} // namespace migo
