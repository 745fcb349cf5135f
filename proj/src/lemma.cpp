#include <map>
#include <sstream>

#include "gbs/errors.hpp"
#include "gbs/whitehead.hpp"

namespace gbs {

namespace {

Forest without(Forest f, EdgeId e) {
    f.erase(e);
    return f;
}

bool collapsible_somehow(const LabeledGraph& g, EdgeId e) {
    if (!g.has_edge(e) || g.is_loop(e)) return false;
    return is_unit(g.label({e, 0})) || is_unit(g.label({e, 1}));
}

// Core step: if e' is collapsible once F - e is collapsed,
// then collapsing e' (and possibly one more edge f') gives a reduced graph.
std::optional<LemmaOutcome> try_claim(const LabeledGraph& peak, const Forest& f, EdgeId e, EdgeId e_prime) {
    LabeledGraph ge = collapse_forest(peak, without(f, e));
    if (!collapsible_somehow(ge, e_prime)) return std::nullopt;
    LabeledGraph ge1 = collapse_forest(ge, {e_prime});
    if (is_reduced(ge1)) return LemmaOutcome{1, e, e_prime, std::nullopt, {}};
    std::set<EdgeId> tried;
    for (EndRef r : collapsible_edges(ge1)) {
        if (r.edge == e || !tried.insert(r.edge).second) continue;
        Forest pair{e_prime, r.edge};
        if (!is_forest(ge, pair) || !is_collapsible_forest(ge, pair).collapsible) continue;
        if (is_reduced(collapse_forest(ge, pair))) return LemmaOutcome{2, e, e_prime, r.edge, {}};
    }
    return std::nullopt;
}

int component_of(const std::vector<std::set<VertexId>>& comps, VertexId v) {
    for (std::size_t i = 0; i < comps.size(); ++i) {
        if (comps[i].count(v)) return static_cast<int>(i);
    }
    return -1;
}

Forest edges_within(const LabeledGraph& g, const Forest& f, const std::set<VertexId>& comp) {
    Forest out;
    for (EdgeId e : f) {
        if (comp.count(g.vertex({e, 0}))) out.insert(e);
    }
    return out;
}

// Scan of the "="-edges of `other` that do not become loops once `f` is
// collapsed.
std::optional<LemmaOutcome> scan_non_loops(const LabeledGraph& peak, const Forest& f, const Forest& other) {
    const auto comps = forest_components(peak, f);
    for (EdgeId e_prime : other) {
        for (int s = 0; s < 2; ++s) {
            if (!is_unit(peak.label({e_prime, s}))) continue;
            const VertexId u = peak.vertex({e_prime, s});
            const VertexId x = peak.vertex({e_prime, 1 - s});
            const int cu = component_of(comps, u);
            if (cu >= 0 && cu == component_of(comps, x)) continue;
            if (cu < 0) continue;  // e' would already be collapsible in the valley
            const Forest f0 = edges_within(peak, f, comps[static_cast<std::size_t>(cu)]);
            const StableSubtree f1 = maximal_stable_subtree(peak, f0);
            if (f1.vertices.count(u)) continue;
            const auto path = forest_path(peak, f0, u, *f1.vertices.begin());
            if (auto out = try_claim(peak, f, path.front().edge, e_prime)) return out;
        }
    }
    return std::nullopt;
}

std::optional<LemmaOutcome> scan_all_loops(const LabeledGraph& peak, const Forest& f, const Forest& other) {
    for (const auto& comp : forest_components(peak, f)) {
        const Forest f0 = edges_within(peak, f, comp);
        const StableSubtree f1 = maximal_stable_subtree(peak, f0);
        for (VertexId v : f1.vertices) {
            for (EdgeId e_prime : other) {
                for (int s = 0; s < 2; ++s) {
                    if (peak.vertex({e_prime, s}) != v) continue;
                    const VertexId t = peak.vertex({e_prime, 1 - s});
                    if (!comp.count(t)) continue;
                    const auto path = forest_path(peak, f0, v, t);
                    if (auto out = try_claim(peak, f, path.back().edge, e_prime)) return out;
                }
            }
        }
    }
    return std::nullopt;
}

std::optional<LemmaOutcome> exhaustive(const LabeledGraph& peak, const Forest& f, const Forest& other) {
    for (EdgeId e : f) {
        for (EdgeId e_prime : other) {
            if (auto out = try_claim(peak, f, e, e_prime)) return out;
        }
    }
    return std::nullopt;
}

LemmaOutcome mirrored(LemmaOutcome o) {
    // Found with the roles of F and F' exchanged.
    std::swap(o.e, o.e_prime);
    o.conclusion += 2;
    return o;
}

std::string describe(const LabeledGraph& peak, const Forest& f, const Forest& fp) {
    std::ostringstream os;
    os << "peak " << to_string(peak) << " F {";
    for (EdgeId e : f) os << " e" << e;
    os << " } F' {";
    for (EdgeId e : fp) os << " e" << e;
    os << " }";
    return os.str();
}

}  // namespace

LemmaOutcome find_whitehead_pair(const LabeledGraph& peak, const Forest& f, const Forest& f_prime) {
    for (EdgeId e : f) {
        if (f_prime.count(e)) throw PreconditionError("forests-share-edge", "e" + std::to_string(e) + " is in both forests");
    }
    if (f.empty() || f_prime.empty()) throw PreconditionError("trivial-forest", "both forests need an edge");
    if (!is_forest(peak, f) || !is_forest(peak, f_prime)) throw PreconditionError("not-a-forest", describe(peak, f, f_prime));
    if (!is_collapsible_forest(peak, f).collapsible || !is_collapsible_forest(peak, f_prime).collapsible) {
        throw PreconditionError("forest-not-collapsible", describe(peak, f, f_prime));
    }
    if (!is_reduced(collapse_forest(peak, f)) || !is_reduced(collapse_forest(peak, f_prime))) {
        throw PreconditionError("not-reduced", "both collapses must be reduced: " + describe(peak, f, f_prime));
    }

    if (auto o = scan_non_loops(peak, f, f_prime)) {
        o->stage = "scan-F'";
        return *o;
    }
    if (auto o = scan_non_loops(peak, f_prime, f)) {
        auto m = mirrored(*o);
        m.stage = "scan-F";
        return m;
    }
    if (auto o = scan_all_loops(peak, f, f_prime)) {
        o->stage = "all-loops";
        return *o;
    }
    if (auto o = scan_all_loops(peak, f_prime, f)) {
        auto m = mirrored(*o);
        m.stage = "all-loops";
        return m;
    }
    if (auto o = exhaustive(peak, f, f_prime)) {
        o->stage = "exhaustive";
        return *o;
    }
    if (auto o = exhaustive(peak, f_prime, f)) {
        auto m = mirrored(*o);
        m.stage = "exhaustive";
        return m;
    }
    throw InternalError("no Whitehead pair found: " + describe(peak, f, f_prime));
}

std::vector<WhiteheadMove> peak_to_whitehead(const Peak& start) {
    std::vector<WhiteheadMove> forward;
    std::vector<WhiteheadMove> backward;
    LabeledGraph peak = start.top;
    Forest f = start.left;
    Forest fp = start.right;

    while (!f.empty() || !fp.empty()) {
        if (f.empty() || fp.empty()) throw InternalError("one-sided peak: " + describe(peak, f, fp));
        const LemmaOutcome o = find_whitehead_pair(peak, f, fp);
        const bool left_side = o.conclusion <= 2;
        // Collapse set Y, on the side opposite to the single edge.
        Forest y{left_side ? o.e_prime : o.e};
        if (o.extra) y.insert(*o.extra);
        const EdgeId single = left_side ? o.e : o.e_prime;
        Forest& near = left_side ? f : fp;   // forest containing `single`
        Forest& far = left_side ? fp : f;    // forest containing most of Y

        WhiteheadMove wm;
        wm.peak = collapse_forest(peak, without(near, single));
        wm.e = single;
        wm.collapse_set.assign(y.begin(), y.end());
        wm.reversed = !left_side;
        (left_side ? forward : backward).push_back(std::move(wm));

        Forest shared;
        for (EdgeId x : y) {
            if (far.count(x)) shared.insert(x);
        }
        peak = collapse_forest(peak, shared);
        near.erase(single);
        for (EdgeId x : y) {
            if (!far.count(x)) near.insert(x);
        }
        for (EdgeId x : shared) far.erase(x);
    }
    forward.insert(forward.end(), backward.rbegin(), backward.rend());
    return forward;
}

}  // namespace gbs
