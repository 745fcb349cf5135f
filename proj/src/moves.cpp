#include "gbs/moves.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

Label mag(Label x) { return x < 0 ? -x : x; }

void require_edge(const LabeledGraph& g, EdgeId e, const char* what) {
    if (!g.has_edge(e)) throw PreconditionError("unknown-edge", std::string(what) + " e" + std::to_string(e));
}

void require_end(const LabeledGraph& g, EndRef r, const char* what) {
    if (!g.has_end(r)) throw PreconditionError("unknown-end", std::string(what) + " " + to_string(r));
}

void require_distinct(const std::vector<EndRef>& ends, const char* what) {
    std::set<EndRef> seen(ends.begin(), ends.end());
    if (seen.size() != ends.size()) throw PreconditionError("duplicate-end", std::string(what) + " repeats an end");
}

std::map<EndRef, EndRef> identity_tracking(const LabeledGraph& before, const LabeledGraph& after) {
    std::map<EndRef, EndRef> out;
    for (EndRef r : before.all_ends()) {
        if (after.has_edge(r.edge)) out.emplace(r, r);
    }
    return out;
}

MoveReport finish(const LabeledGraph& before, LabeledGraph after) {
    MoveReport rep;
    rep.tracking = identity_tracking(before, after);
    rep.graph = std::move(after);
    return rep;
}

bool is_single_loop_graph(const LabeledGraph& g) {
    return g.vertex_count() == 1 && g.edge_count() == 1;
}

}  // namespace

MoveBounds MoveBounds::unbounded() {
    return {std::numeric_limits<Label>::max(), std::numeric_limits<std::size_t>::max(),
            std::numeric_limits<std::size_t>::max()};
}

std::vector<Label> divisors(Label n) {
    n = mag(n);
    std::vector<Label> small, large;
    for (Label d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

std::vector<EndRef> collapsible_edges(const LabeledGraph& g) {
    std::vector<EndRef> out;
    for (const auto& [id, e] : g.edges()) {
        if (e.is_loop()) continue;
        for (int s = 0; s < 2; ++s) {
            if (is_unit(e.ends[static_cast<std::size_t>(s)].label)) out.push_back({id, s});
        }
    }
    return out;
}

bool is_reduced(const LabeledGraph& g) { return collapsible_edges(g).empty(); }

MoveReport collapse(const LabeledGraph& g, EndRef r) {
    require_end(g, r, "collapse of");
    if (g.is_loop(r.edge)) throw PreconditionError("not-collapsible", "e" + std::to_string(r.edge) + " is a loop");
    if (!is_unit(g.label(r))) {
        throw PreconditionError("not-collapsible",
                                to_string(r) + " has label " + std::to_string(g.label(r)) + ", not a unit");
    }
    const VertexId u = g.vertex(r);
    const VertexId w = g.vertex(r.opposite());
    const Label factor = checked_mul(g.label(r), g.label(r.opposite()));

    LabeledGraph out = g;
    out.remove_edge(r.edge);
    for (EndRef x : out.ends_at(u)) out.set_end(x, {w, checked_mul(out.label(x), factor)});
    out.remove_vertex(u);
    return finish(g, std::move(out));
}

MoveReport expand(const LabeledGraph& g, const Expansion& spec) {
    if (!g.has_vertex(spec.vertex)) {
        throw PreconditionError("unknown-vertex", "expansion at v" + std::to_string(spec.vertex));
    }
    if (!is_unit(spec.unit)) throw PreconditionError("bad-unit", "expansion unit must be +-1");
    if (spec.multiplier == 0) throw PreconditionError("zero-label", "expansion multiplier is 0");
    if (g.has_vertex(spec.new_vertex)) {
        throw PreconditionError("duplicate-vertex", "v" + std::to_string(spec.new_vertex) + " already exists");
    }
    if (g.has_edge(spec.new_edge)) {
        throw PreconditionError("duplicate-edge", "e" + std::to_string(spec.new_edge) + " already exists");
    }
    if (spec.new_side != 0 && spec.new_side != 1) throw PreconditionError("bad-side", "new_side must be 0 or 1");
    require_distinct(spec.pulled, "expansion pull set");

    const Label divisor = spec.unit * spec.multiplier;
    for (EndRef x : spec.pulled) {
        require_end(g, x, "pulled end");
        if (g.vertex(x) != spec.vertex) {
            throw PreconditionError("pulled-not-at-vertex",
                                    to_string(x) + " is not at v" + std::to_string(spec.vertex));
        }
        if (g.label(x) % divisor != 0) {
            throw PreconditionError("divisibility", to_string(x) + " label " + std::to_string(g.label(x)) +
                                                        " not divisible by " + std::to_string(spec.multiplier));
        }
    }

    LabeledGraph out = g;
    out.add_vertex(spec.new_vertex);
    for (EndRef x : spec.pulled) out.set_end(x, {spec.new_vertex, g.label(x) / divisor});
    End near{spec.new_vertex, spec.unit};
    End far{spec.vertex, spec.multiplier};
    if (spec.new_side == 0) {
        out.add_edge(spec.new_edge, near, far);
    } else {
        out.add_edge(spec.new_edge, far, near);
    }
    return finish(g, std::move(out));
}

namespace {

// One stage of a slide; also reports whether it is the trivial slide over
// an equal unit loop.
LabeledGraph slide_stage(const LabeledGraph& g, const std::vector<EndRef>& slid, EndRef over, bool* trivial) {
    require_end(g, over, "slide over");
    const VertexId v = g.vertex(over);
    const Label a = g.label(over);
    const Label a_far = g.label(over.opposite());
    const VertexId w = g.vertex(over.opposite());

    for (EndRef x : slid) {
        require_end(g, x, "slid end");
        if (x.edge == over.edge) {
            throw PreconditionError("self-slide", to_string(x) + " lies on the edge it slides over");
        }
        if (g.vertex(x) != v) {
            throw PreconditionError("different-vertices", to_string(x) + " is not at the vertex of " + to_string(over));
        }
        if (g.label(x) % a != 0) {
            throw PreconditionError("divisibility", to_string(x) + " label " + std::to_string(g.label(x)) +
                                                        " not divisible by " + std::to_string(a));
        }
    }

    LabeledGraph out = g;
    for (EndRef x : slid) out.set_end(x, {w, checked_mul(g.label(x) / a, a_far)});

    if (trivial) {
        *trivial = false;
        if (g.is_loop(over.edge) && is_unit(a) && a == a_far) {
            std::set<EndRef> others;
            for (EndRef x : g.ends_at(v)) {
                if (x.edge != over.edge) others.insert(x);
            }
            *trivial = others == std::set<EndRef>(slid.begin(), slid.end());
        }
    }
    return out;
}

}  // namespace

MoveReport slide(const LabeledGraph& g, const Slide& spec) {
    if (spec.slid.empty()) throw PreconditionError("empty-slide", "no ends to slide");
    require_distinct(spec.slid, "slid set");
    bool trivial = false;
    LabeledGraph out = slide_stage(g, spec.slid, spec.over, &trivial);
    if (spec.then_over) {
        out = slide_stage(out, spec.slid, *spec.then_over, nullptr);
        trivial = false;
    }
    MoveReport rep = finish(g, std::move(out));
    rep.trivial = trivial;
    return rep;
}

namespace {

struct LoopData {
    VertexId vertex;
    Label m;          // monodromy after normalizing the unit end to +1
    bool normalized;  // the unit end was -1
};

LoopData ascending_loop(const LabeledGraph& g, EdgeId loop, int unit_side) {
    require_edge(g, loop, "loop");
    if (!g.is_loop(loop)) throw PreconditionError("not-a-loop", "e" + std::to_string(loop) + " is not a loop");
    if (unit_side != 0 && unit_side != 1) throw PreconditionError("bad-side", "unit side must be 0 or 1");
    EndRef u{loop, unit_side};
    if (!is_unit(g.label(u))) {
        throw PreconditionError("not-ascending", "loop e" + std::to_string(loop) + " has no unit end on side " +
                                                     std::to_string(unit_side));
    }
    return {g.vertex(u), g.label(u) * g.label(u.opposite()), g.label(u) == -1};
}

void check_loop_vertex_ends(const LabeledGraph& g, const std::vector<EndRef>& pulled, EdgeId loop, VertexId v) {
    require_distinct(pulled, "pull set");
    for (EndRef x : pulled) {
        require_end(g, x, "pulled end");
        if (x.edge == loop) throw PreconditionError("pulled-loop-end", "the loop's own ends cannot be pulled");
        if (g.vertex(x) != v) throw PreconditionError("pulled-not-at-vertex", to_string(x));
    }
}

}  // namespace

MoveReport induction(const LabeledGraph& g, const Induction& spec) {
    const LoopData loop = ascending_loop(g, spec.loop, spec.unit_side);
    if (spec.k < 1) throw PreconditionError("bad-k", "k must be >= 1");
    if (loop.m % spec.k != 0) {
        throw PreconditionError("divisibility", "k = " + std::to_string(spec.k) + " does not divide monodromy " +
                                                    std::to_string(loop.m));
    }
    check_loop_vertex_ends(g, spec.pulled, spec.loop, loop.vertex);
    const std::set<EndRef> pulled(spec.pulled.begin(), spec.pulled.end());
    const Label cofactor = loop.m / spec.k;

    LabeledGraph out = g;
    out.set_label({spec.loop, spec.unit_side}, 1);
    out.set_label({spec.loop, 1 - spec.unit_side}, loop.m);
    for (EndRef x : g.ends_at(loop.vertex)) {
        if (x.edge == spec.loop) continue;
        const Label n = g.label(x);
        const bool is_pulled = pulled.count(x) != 0;
        Label next = 0;
        if (spec.direction == Direction::Forward) {
            if (is_pulled) {
                if (n % spec.k != 0) {
                    throw PreconditionError("divisibility", to_string(x) + " label " + std::to_string(n) +
                                                                " not divisible by k = " + std::to_string(spec.k));
                }
                next = n / spec.k;
            } else {
                next = checked_mul(n, cofactor);
            }
        } else {
            if (is_pulled) {
                next = checked_mul(n, spec.k);
            } else {
                if (n % cofactor != 0) {
                    throw PreconditionError("divisibility", to_string(x) + " label " + std::to_string(n) +
                                                                " not divisible by m/k = " + std::to_string(cofactor));
                }
                next = n / cofactor;
            }
        }
        out.set_label(x, next);
    }

    MoveReport rep = finish(g, std::move(out));
    rep.normalized = loop.normalized;
    rep.trivial = is_single_loop_graph(g);
    rep.unmarked_identity = !rep.trivial && equivalent(rep.graph, g);
    return rep;
}

MoveReport a_move(const LabeledGraph& g, const AMove& spec) {
    require_edge(g, spec.loop, "A-move loop");
    if (!g.is_loop(spec.loop)) throw PreconditionError("not-a-loop", "e" + std::to_string(spec.loop));
    if (spec.small_side != 0 && spec.small_side != 1) throw PreconditionError("bad-side", "small side must be 0 or 1");
    const EndRef small{spec.loop, spec.small_side};
    const Label c = g.label(small);
    const Label c_big = g.label(small.opposite());
    if (c_big % c != 0) {
        throw PreconditionError("no-strict-divisibility", std::to_string(c) + " does not divide " + std::to_string(c_big));
    }
    const Label m = c_big / c;
    if (mag(c) < 2) throw PreconditionError("not-proper", "edge group is the whole vertex group (|c| = 1)");
    if (mag(m) < 2) throw PreconditionError("no-strict-divisibility", "containment of the loop ends is not strict");
    if (mag(spec.b) < 2) throw PreconditionError("bad-b", "|b| must be at least 2");
    if (m % spec.b != 0) {
        throw PreconditionError("bad-b", "b = " + std::to_string(spec.b) + " does not divide m = " + std::to_string(m));
    }
    if (g.has_vertex(spec.new_vertex)) throw PreconditionError("duplicate-vertex", "v" + std::to_string(spec.new_vertex));
    if (g.has_edge(spec.new_edge)) throw PreconditionError("duplicate-edge", "e" + std::to_string(spec.new_edge));

    const VertexId w = g.vertex(small);
    LabeledGraph out = g;
    out.add_vertex(spec.new_vertex);
    out.set_end(small, {spec.new_vertex, 1});
    out.set_end(small.opposite(), {spec.new_vertex, m});
    out.add_edge(spec.new_edge, {spec.new_vertex, spec.b}, {w, c});
    return finish(g, std::move(out));
}

MoveReport a_inverse(const LabeledGraph& g, const AInverseMove& spec) {
    require_edge(g, spec.loop, "A^-1 loop");
    require_edge(g, spec.edge, "A^-1 edge");
    if (!g.is_loop(spec.loop)) throw PreconditionError("not-a-loop", "e" + std::to_string(spec.loop));
    int unit_side = -1;
    for (int s = 0; s < 2; ++s) {
        if (is_unit(g.label({spec.loop, s})) && !is_unit(g.label({spec.loop, 1 - s}))) unit_side = s;
    }
    if (unit_side < 0) throw PreconditionError("not-strict-ascending", "loop e" + std::to_string(spec.loop));
    const LoopData loop = ascending_loop(g, spec.loop, unit_side);
    const VertexId v = loop.vertex;

    if (g.is_loop(spec.edge)) throw PreconditionError("edge-is-loop", "attached edge must join two vertices");
    int near_side = -1;
    for (int s = 0; s < 2; ++s) {
        if (g.vertex({spec.edge, s}) == v) near_side = s;
    }
    if (near_side < 0) throw PreconditionError("edge-not-at-loop", "e" + std::to_string(spec.edge));
    const EndRef near{spec.edge, near_side};
    const Label b = g.label(near);
    const Label c = g.label(near.opposite());
    const VertexId w = g.vertex(near.opposite());
    if (mag(b) < 2) throw PreconditionError("B-not-proper-in-A", "|b| = 1");
    if (loop.m % b != 0) throw PreconditionError("phi-A-not-in-B", std::to_string(b) + " does not divide m = " + std::to_string(loop.m));
    if (mag(c) < 2) throw PreconditionError("B-not-proper-in-C", "|c| = 1");
    if (g.ends_at(v).size() != 3) throw PreconditionError("extra-edges-at-loop", "loop vertex has other edges");

    LabeledGraph out = g;
    out.remove_edge(spec.edge);
    out.set_end({spec.loop, unit_side}, {w, c});
    out.set_end({spec.loop, 1 - unit_side}, {w, checked_mul(c, loop.m)});
    out.remove_vertex(v);
    return finish(g, std::move(out));
}

MoveReport apply_move(const LabeledGraph& g, const Move& m) {
    return std::visit(
        [&](const auto& mv) -> MoveReport {
            using T = std::decay_t<decltype(mv)>;
            if constexpr (std::is_same_v<T, Collapse>) return collapse(g, mv.edge);
            if constexpr (std::is_same_v<T, Expansion>) return expand(g, mv);
            if constexpr (std::is_same_v<T, Slide>) return slide(g, mv);
            if constexpr (std::is_same_v<T, Induction>) return induction(g, mv);
            if constexpr (std::is_same_v<T, AMove>) return a_move(g, mv);
            if constexpr (std::is_same_v<T, AInverseMove>) return a_inverse(g, mv);
        },
        m);
}

Reduction reduce(const LabeledGraph& g, const std::set<EdgeId>& avoid) {
    Reduction out{g, {}};
    for (;;) {
        auto candidates = collapsible_edges(out.graph);
        if (candidates.empty()) break;
        EndRef pick = candidates.front();
        for (EndRef r : candidates) {
            if (!avoid.count(r.edge)) {
                pick = r;
                break;
            }
        }
        out.graph = collapse(out.graph, pick).graph;
        out.collapses.push_back({pick});
    }
    return out;
}

Expansion undo_collapse(const LabeledGraph& before, EndRef r) {
    Expansion ex;
    ex.vertex = before.vertex(r.opposite());
    ex.multiplier = before.label(r.opposite());
    ex.unit = before.label(r);
    ex.new_vertex = before.vertex(r);
    ex.new_edge = r.edge;
    ex.new_side = r.side;
    for (EndRef x : before.ends_at(ex.new_vertex)) {
        if (x.edge != r.edge) ex.pulled.push_back(x);
    }
    return ex;
}

Move inverse(const LabeledGraph& before, const Move& m) {
    return std::visit(
        [&](const auto& mv) -> Move {
            using T = std::decay_t<decltype(mv)>;
            if constexpr (std::is_same_v<T, Collapse>) {
                return undo_collapse(before, mv.edge);
            } else if constexpr (std::is_same_v<T, Expansion>) {
                return Collapse{{mv.new_edge, mv.new_side}};
            } else if constexpr (std::is_same_v<T, Slide>) {
                if (mv.then_over) return Slide{mv.slid, mv.then_over->opposite(), mv.over.opposite()};
                return Slide{mv.slid, mv.over.opposite(), std::nullopt};
            } else if constexpr (std::is_same_v<T, Induction>) {
                Induction inv = mv;
                inv.direction = mv.direction == Direction::Forward ? Direction::Reverse : Direction::Forward;
                return inv;
            } else if constexpr (std::is_same_v<T, AMove>) {
                return AInverseMove{mv.loop, mv.new_edge};
            } else {
                const VertexId v = before.vertex({mv.loop, 0});
                int near_side = before.vertex({mv.edge, 0}) == v ? 0 : 1;
                int unit_side = is_unit(before.label({mv.loop, 0})) ? 0 : 1;
                return AMove{mv.loop, unit_side, before.label({mv.edge, near_side}), v, mv.edge};
            }
        },
        m);
}

Move transport(const Move& m, const LabeledGraph& from, const LabeledGraph& to, const Isomorphism& iso) {
    (void)from;
    auto map_ends = [&](const std::vector<EndRef>& ends) {
        std::vector<EndRef> out;
        out.reserve(ends.size());
        for (EndRef r : ends) out.push_back(iso(r));
        return out;
    };
    auto fresh_vertex = [&](VertexId wanted) { return to.has_vertex(wanted) ? to.next_vertex_id() : wanted; };
    auto fresh_edge = [&](EdgeId wanted) { return to.has_edge(wanted) ? to.next_edge_id() : wanted; };

    return std::visit(
        [&](const auto& mv) -> Move {
            using T = std::decay_t<decltype(mv)>;
            if constexpr (std::is_same_v<T, Collapse>) {
                return Collapse{iso(mv.edge)};
            } else if constexpr (std::is_same_v<T, Expansion>) {
                Expansion out = mv;
                out.vertex = iso.vertices.at(mv.vertex);
                out.pulled = map_ends(mv.pulled);
                out.new_vertex = fresh_vertex(mv.new_vertex);
                out.new_edge = fresh_edge(mv.new_edge);
                return out;
            } else if constexpr (std::is_same_v<T, Slide>) {
                Slide out{map_ends(mv.slid), iso(mv.over), std::nullopt};
                if (mv.then_over) out.then_over = iso(*mv.then_over);
                return out;
            } else if constexpr (std::is_same_v<T, Induction>) {
                Induction out = mv;
                EndRef unit = iso({mv.loop, mv.unit_side});
                out.loop = unit.edge;
                out.unit_side = unit.side;
                out.pulled = map_ends(mv.pulled);
                return out;
            } else if constexpr (std::is_same_v<T, AMove>) {
                AMove out = mv;
                EndRef small = iso({mv.loop, mv.small_side});
                out.loop = small.edge;
                out.small_side = small.side;
                out.new_vertex = fresh_vertex(mv.new_vertex);
                out.new_edge = fresh_edge(mv.new_edge);
                return out;
            } else {
                return AInverseMove{iso.edge(mv.loop), iso.edge(mv.edge)};
            }
        },
        m);
}

std::string move_kind(const Move& m) {
    static const char* names[] = {"collapse", "expansion", "slide", "induction", "a_move", "a_inverse"};
    return names[m.index()];
}

std::string to_string(const Move& m) {
    std::ostringstream os;
    auto ends = [&](const std::vector<EndRef>& v) {
        os << "{";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << to_string(v[i]);
        os << "}";
    };
    std::visit(
        [&](const auto& mv) {
            using T = std::decay_t<decltype(mv)>;
            if constexpr (std::is_same_v<T, Collapse>) {
                os << "collapse " << to_string(mv.edge);
            } else if constexpr (std::is_same_v<T, Expansion>) {
                os << "expand v" << mv.vertex << " d=" << mv.multiplier << " unit=" << mv.unit << " pull ";
                ends(mv.pulled);
                os << " -> v" << mv.new_vertex << " e" << mv.new_edge;
            } else if constexpr (std::is_same_v<T, Slide>) {
                os << "slide ";
                ends(mv.slid);
                os << " over " << to_string(mv.over);
                if (mv.then_over) os << " then " << to_string(*mv.then_over);
            } else if constexpr (std::is_same_v<T, Induction>) {
                os << "induction e" << mv.loop << " unit side " << mv.unit_side << " k=" << mv.k
                   << (mv.direction == Direction::Forward ? " forward" : " reverse") << " pull ";
                ends(mv.pulled);
            } else if constexpr (std::is_same_v<T, AMove>) {
                os << "A e" << mv.loop << " small side " << mv.small_side << " b=" << mv.b << " -> v" << mv.new_vertex
                   << " e" << mv.new_edge;
            } else {
                os << "A^-1 loop e" << mv.loop << " edge e" << mv.edge;
            }
        },
        m);
    return os.str();
}

namespace {

template <class Fn>
void for_each_subset(const std::vector<EndRef>& items, Fn&& fn) {
    // Exhaustive up to 10 items; beyond that only the empty set, singletons
    // and the full set.
    if (items.size() <= 10) {
        const std::uint32_t combos = 1U << items.size();
        for (std::uint32_t mask = 0; mask < combos; ++mask) {
            std::vector<EndRef> pick;
            for (std::size_t i = 0; i < items.size(); ++i) {
                if ((mask >> i) & 1U) pick.push_back(items[i]);
            }
            fn(pick);
        }
        return;
    }
    fn(std::vector<EndRef>{});
    for (EndRef r : items) fn(std::vector<EndRef>{r});
    fn(items);
}

}  // namespace

std::vector<EnumeratedMove> enumerate_moves(const LabeledGraph& g, const MoveBounds& bounds, std::size_t* rejected) {
    require_valid(g);
    if (!is_reduced(g)) throw PreconditionError("not-reduced", "move enumeration needs a reduced graph");
    if (rejected) *rejected = 0;

    std::vector<EnumeratedMove> out;
    auto offer = [&](Move m) {
        try {
            MoveReport rep = apply_move(g, m);
            if (!bounds.admits(rep.graph)) {
                if (rejected) ++*rejected;
                return;
            }
            out.push_back(EnumeratedMove{std::move(m), rep.trivial, rep.unmarked_identity, is_reduced(rep.graph), std::move(rep.graph)});
        } catch (const PreconditionError& err) {
            if (rejected && err.code() == "label-overflow") ++*rejected;
        }
    };

    // Slides.
    for (VertexId v : g.vertices()) {
        const auto at_v = g.ends_at(v);
        for (EndRef over : at_v) {
            std::vector<EndRef> eligible;
            for (EndRef x : at_v) {
                if (x.edge != over.edge && g.label(x) % g.label(over) == 0) eligible.push_back(x);
            }
            for (EndRef x : eligible) offer(Slide{{x}, over, std::nullopt});
            if (eligible.size() >= 2) offer(Slide{eligible, over, std::nullopt});
        }
    }

    // Inductions on strict ascending loops.  A loop with unit monodromy only
    // admits B = A, which changes nothing.
    for (const auto& [id, e] : g.edges()) {
        if (!is_strict_ascending_loop(g, id)) continue;
        const int unit_side = is_unit(e.ends[0].label) ? 0 : 1;
        const VertexId v = e.ends[0].vertex;
        const Label m = g.label({id, unit_side}) * g.label({id, 1 - unit_side});
        std::vector<EndRef> others;
        for (EndRef x : g.ends_at(v)) {
            if (x.edge != id) others.push_back(x);
        }
        for (Label k : divisors(m)) {
            std::vector<EndRef> pullable;
            for (EndRef x : others) {
                if (g.label(x) % k == 0) pullable.push_back(x);
            }
            for_each_subset(pullable, [&](const std::vector<EndRef>& pick) {
                offer(Induction{id, unit_side, k, pick, Direction::Forward});
            });
            for_each_subset(others, [&](const std::vector<EndRef>& pick) {
                offer(Induction{id, unit_side, k, pick, Direction::Reverse});
            });
        }
    }

    // A-moves.
    const VertexId nv = g.next_vertex_id();
    const EdgeId ne = g.next_edge_id();
    for (const auto& [id, e] : g.edges()) {
        if (!e.is_loop()) continue;
        for (int s = 0; s < 2; ++s) {
            const Label c = e.ends[static_cast<std::size_t>(s)].label;
            const Label c_big = e.ends[static_cast<std::size_t>(1 - s)].label;
            if (mag(c) < 2 || c_big % c != 0 || mag(c_big / c) < 2) continue;
            for (Label b : divisors(c_big / c)) {
                if (b >= 2) offer(AMove{id, s, b, nv, ne});
            }
        }
    }

    // Inverse A-moves.
    for (const auto& [id, e] : g.edges()) {
        if (!is_strict_ascending_loop(g, id)) continue;
        for (EndRef x : g.ends_at(e.ends[0].vertex)) {
            if (x.edge != id) offer(AInverseMove{id, x.edge});
        }
    }
    return out;
}

}  // namespace gbs
