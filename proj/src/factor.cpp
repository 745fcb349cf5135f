#include <algorithm>
#include <sstream>

#include "gbs/canonical.hpp"
#include "gbs/errors.hpp"
#include "gbs/whitehead.hpp"

namespace gbs {

LabeledGraph WhiteheadMove::source() const { return collapse_forest(peak, {e}); }

LabeledGraph WhiteheadMove::target() const {
    return collapse_forest(peak, Forest(collapse_set.begin(), collapse_set.end()));
}

namespace {

std::string describe(const WhiteheadMove& wm) {
    std::ostringstream os;
    os << "type " << wm.type() << (wm.reversed ? " reversed" : "") << " peak " << to_string(wm.peak) << " e" << wm.e
       << " collapsing";
    for (EdgeId x : wm.collapse_set) os << " e" << x;
    return os.str();
}

// Replays `moves`; true iff every graph along the way is reduced and the
// last one is equivalent to `target`.
bool verify(const LabeledGraph& start, const std::vector<Move>& moves, const LabeledGraph& target) {
    LabeledGraph g = start;
    try {
        for (const auto& m : moves) {
            g = apply_move(g, m).graph;
            if (!is_reduced(g)) return false;
        }
    } catch (const PreconditionError&) {
        return false;
    }
    return equivalent(g, target);
}

std::vector<EndRef> other_ends(const LabeledGraph& g, VertexId v, std::initializer_list<EdgeId> skip) {
    std::vector<EndRef> out;
    for (EndRef r : g.ends_at(v)) {
        if (std::find(skip.begin(), skip.end(), r.edge) == skip.end()) out.push_back(r);
    }
    return out;
}

Factorization invert(const Factorization& fwd) {
    std::vector<LabeledGraph> graphs{fwd.start};
    for (const auto& m : fwd.moves) graphs.push_back(apply_move(graphs.back(), m).graph);
    Factorization out{graphs.back(), {}};
    for (std::size_t i = fwd.moves.size(); i-- > 0;) out.moves.push_back(inverse(graphs[i], fwd.moves[i]));
    return out;
}

}  // namespace

Factorization factor_whitehead_I(const WhiteheadMove& wm) {
    if (wm.type() != 1) throw PreconditionError("not-type-I", describe(wm));
    if (wm.reversed) {
        WhiteheadMove swapped{wm.peak, wm.collapse_set.front(), {wm.e}, false};
        return factor_whitehead_I(swapped);
    }
    const LabeledGraph& q = wm.peak;
    const EdgeId e = wm.e;
    const EdgeId ep = wm.collapse_set.front();
    if (!q.has_edge(e) || !q.has_edge(ep) || e == ep) throw PreconditionError("bad-whitehead-move", describe(wm));
    const LabeledGraph target = wm.target();

    for (int se = 0; se < 2; ++se) {
        if (!is_unit(q.label({e, se}))) continue;
        const VertexId v = q.vertex({e, se});
        for (int sp = 0; sp < 2; ++sp) {
            if (q.vertex({ep, sp}) != v) continue;
            const bool cycle = q.vertex({e, 1 - se}) == q.vertex({ep, 1 - sp});
            const auto f = other_ends(q, v, {e, ep});
            LabeledGraph gamma;
            try {
                gamma = collapse(q, {e, se}).graph;
            } catch (const PreconditionError&) {
                continue;
            }
            std::vector<Move> moves;
            if (is_unit(q.label({ep, sp}))) {
                // e and e' both "=" at v: slide the rest of v over e'.
                if (!f.empty()) moves.push_back(Slide{f, {ep, sp}, std::nullopt});
            } else if (cycle && is_unit(q.label({ep, 1 - sp}))) {
                // e' became a strict ascending loop: pass to the subgroup of
                // index |d| first, then slide over the loop.
                const Label d = q.label({e, 1 - se});
                moves.push_back(Induction{ep, 1 - sp, d < 0 ? -d : d, {}, Direction::Forward});
                if (!f.empty()) moves.push_back(Slide{f, {ep, sp}, std::nullopt});
            } else {
                continue;
            }
            if (verify(gamma, moves, target)) return {gamma, moves};
        }
    }
    throw InternalError("type I factorization failed: " + describe(wm));
}

Factorization factor_whitehead_II(const WhiteheadMove& wm) {
    if (wm.type() != 2) throw PreconditionError("not-type-II", describe(wm));
    if (wm.reversed) {
        WhiteheadMove fwd = wm;
        fwd.reversed = false;
        return invert(factor_whitehead_II(fwd));
    }
    const LabeledGraph& q = wm.peak;
    const EdgeId e = wm.e;
    const LabeledGraph target = wm.target();
    const std::array<std::pair<EdgeId, EdgeId>, 2> roles{
        {{wm.collapse_set[0], wm.collapse_set[1]}, {wm.collapse_set[1], wm.collapse_set[0]}}};

    for (auto [ep, fp] : roles) {
        for (int pe = 0; pe < 2; ++pe) {
            if (!is_unit(q.label({e, pe}))) continue;
            const VertexId p = q.vertex({e, pe});
            const VertexId qv = q.vertex({e, 1 - pe});
            int sep = -1;
            int sfp = -1;
            for (int s = 0; s < 2; ++s) {
                if (q.vertex({ep, s}) == p && is_unit(q.label({ep, s}))) sep = s;
                if (q.vertex({fp, s}) == p && is_unit(q.label({fp, s}))) sfp = s;
            }
            if (sep < 0 || sfp < 0) continue;
            const VertexId r = q.vertex({ep, 1 - sep});
            if (r == p || r == qv) continue;
            if (q.vertex({fp, 1 - sfp}) != qv || !is_unit(q.label({fp, 1 - sfp}))) continue;

            const LabeledGraph gamma = collapse(q, {e, pe}).graph;
            const auto h = other_ends(q, p, {e, ep, fp});
            const auto g = other_ends(q, qv, {e, fp});
            std::vector<Move> moves;
            if (!h.empty()) moves.push_back(Slide{h, {ep, sep}, std::nullopt});
            if (!g.empty()) moves.push_back(Slide{g, {fp, 1 - sfp}, EndRef{ep, sep}});
            moves.push_back(AInverseMove{fp, ep});
            if (verify(gamma, moves, target)) return {gamma, moves};
        }
    }
    throw InternalError("type II factorization failed: " + describe(wm));
}

Factorization factor_whitehead(const WhiteheadMove& wm) {
    return wm.type() == 1 ? factor_whitehead_I(wm) : factor_whitehead_II(wm);
}

namespace {

// Applies moves written for `x` to the equivalent running graph `r`.
void run_transported(LabeledGraph x, const std::vector<Move>& moves, LabeledGraph& r, std::vector<Move>& out,
                     std::vector<LabeledGraph>* graphs) {
    for (const auto& m : moves) {
        auto iso = find_isomorphism(x, r);
        if (!iso) throw InternalError("replay lost track: " + to_string(x) + " vs " + to_string(r));
        Move tm = transport(m, x, r, *iso);
        r = apply_move(r, tm).graph;
        x = apply_move(x, m).graph;
        out.push_back(std::move(tm));
        if (graphs) graphs->push_back(r);
    }
}

}  // namespace

MoveSequence replay_whitehead(const LabeledGraph& start, const std::vector<WhiteheadMove>& moves) {
    MoveSequence seq;
    seq.graphs.push_back(start);
    LabeledGraph r = start;
    for (const auto& wm : moves) {
        Factorization fac = factor_whitehead(wm);
        run_transported(fac.start, fac.moves, r, seq.moves, &seq.graphs);
    }
    return seq;
}

ElementaryDeformation make_deformation(const LabeledGraph& start, const std::vector<Move>& steps) {
    require_valid(start);
    ElementaryDeformation d{start, steps, {start}};
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const Move& m = steps[i];
        if (!std::holds_alternative<Collapse>(m) && !std::holds_alternative<Expansion>(m)) {
            throw PreconditionError("not-elementary", "step " + std::to_string(i) + " is a " + move_kind(m));
        }
        d.graphs.push_back(apply_move(d.graphs.back(), m).graph);
    }
    return d;
}

std::vector<Peak> deformation_peaks(const ElementaryDeformation& d, const std::set<EdgeId>& avoid) {
    if (!is_reduced(d.start) || !is_reduced(d.end())) {
        throw PreconditionError("not-reduced", "deformation endpoints must be reduced");
    }
    struct Raw {
        Peak peak;
        LabeledGraph valley;  // after the collapses
    };
    std::vector<Raw> raw;
    std::size_t i = 0;
    while (i < d.steps.size()) {
        Raw cur;
        while (i < d.steps.size() && std::holds_alternative<Expansion>(d.steps[i])) {
            cur.peak.left.insert(std::get<Expansion>(d.steps[i]).new_edge);
            ++i;
        }
        cur.peak.top = d.graphs[i];
        while (i < d.steps.size() && std::holds_alternative<Collapse>(d.steps[i])) {
            cur.peak.right.insert(std::get<Collapse>(d.steps[i]).edge.edge);
            ++i;
        }
        cur.valley = d.graphs[i];
        raw.push_back(std::move(cur));
    }

    // Reduce every interior valley, charging the collapses to both neighbours.
    for (std::size_t k = 0; k + 1 < raw.size(); ++k) {
        if (is_reduced(raw[k].valley)) continue;
        for (const auto& c : reduce(raw[k].valley, avoid).collapses) {
            raw[k].peak.right.insert(c.edge.edge);
            raw[k + 1].peak.left.insert(c.edge.edge);
        }
    }

    std::vector<Peak> out;
    for (auto& r : raw) {
        Peak p = std::move(r.peak);
        Forest shared;
        std::set_intersection(p.left.begin(), p.left.end(), p.right.begin(), p.right.end(),
                              std::inserter(shared, shared.end()));
        if (!shared.empty()) {
            p.top = collapse_forest(p.top, shared);
            for (EdgeId e : shared) {
                p.left.erase(e);
                p.right.erase(e);
            }
        }
        if (p.left.empty() && p.right.empty()) continue;
        if (p.left.empty() || p.right.empty()) throw InternalError("peak with a reduced side: " + to_string(p.top));
        out.push_back(std::move(p));
    }
    return out;
}

ElementaryDeformation normalize_deformation(const ElementaryDeformation& d, const std::set<EdgeId>& avoid) {
    ElementaryDeformation out{d.start, {}, {d.start}};
    LabeledGraph r = d.start;
    for (const auto& p : deformation_peaks(d, avoid)) {
        // Expansions up to the top: the left collapses undone in reverse.
        std::vector<LabeledGraph> down{p.top};
        const auto left = is_collapsible_forest(p.top, p.left).order;
        for (const auto& c : left) down.push_back(collapse(down.back(), c.edge).graph);
        std::vector<Move> up;
        for (std::size_t k = left.size(); k-- > 0;) up.push_back(undo_collapse(down[k], left[k].edge));
        run_transported(down.back(), up, r, out.steps, &out.graphs);

        std::vector<Move> right;
        for (const auto& c : is_collapsible_forest(p.top, p.right).order) right.push_back(c);
        run_transported(p.top, right, r, out.steps, &out.graphs);
    }
    return out;
}

std::vector<WhiteheadMove> deformation_to_whitehead(const ElementaryDeformation& d, const std::set<EdgeId>& avoid) {
    std::vector<WhiteheadMove> out;
    for (const auto& p : deformation_peaks(d, avoid)) {
        auto part = peak_to_whitehead(p);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

MoveSequence deformation_to_moves(const ElementaryDeformation& d, std::optional<EdgeId> tracked) {
    std::set<EdgeId> avoid;
    if (tracked) avoid.insert(*tracked);
    MoveSequence seq = replay_whitehead(d.start, deformation_to_whitehead(d, avoid));
    for (const auto& g : seq.graphs) {
        if (!is_reduced(g)) throw InternalError("unreduced intermediate graph " + to_string(g));
    }
    if (!equivalent(seq.graphs.back(), d.end())) {
        throw InternalError("replay ended at " + to_string(seq.graphs.back()) + " instead of " + to_string(d.end()));
    }
    return seq;
}

}  // namespace gbs
