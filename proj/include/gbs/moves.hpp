#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gbs/canonical.hpp"
#include "gbs/labeled_graph.hpp"

namespace gbs {

/// Collapse an oriented edge: `edge` names the initial end, which must carry
/// a unit label on a non-loop edge.  The initial vertex merges into the
/// terminal one.
struct Collapse {
    EndRef edge;
    bool operator==(const Collapse&) const = default;
};

/// Expansion at `vertex`: a new vertex joined by a new edge whose labels are
/// `unit` (+-1) at the new vertex and `multiplier` at `vertex`.  Each pulled
/// end with label n moves to the new vertex with label n / (unit *
/// multiplier).  The new edge's unit end sits on `new_side`.
///
/// The user-facing form has unit = +1 and multiplier >= 1; signed values let
/// an expansion undo any collapse exactly.
struct Expansion {
    VertexId vertex = 0;
    Label multiplier = 1;
    Label unit = 1;
    std::vector<EndRef> pulled;
    VertexId new_vertex = 0;
    EdgeId new_edge = 0;
    int new_side = 0;
    bool operator==(const Expansion&) const = default;
};

/// Slide the ends in `slid` over the edge carrying `over`: each end moves to
/// the far vertex of that edge, label n -> n * a' / a.  When `then_over` is
/// set the ends continue over a second edge from where the first stage left
/// them (a path slide, recorded as one move).
struct Slide {
    std::vector<EndRef> slid;
    EndRef over;
    std::optional<EndRef> then_over;
    bool operator==(const Slide&) const = default;
};

enum class Direction { Forward, Reverse };

/// Induction along the ascending loop `loop` whose unit end is `unit_side`.
/// With monodromy m (loop normalized to (1, m)), forward sends pulled ends
/// n -> n / k and the rest n -> n * m / k; reverse undoes that arithmetic.
struct Induction {
    EdgeId loop = 0;
    int unit_side = 0;
    Label k = 1;
    std::vector<EndRef> pulled;
    Direction direction = Direction::Forward;
    bool operator==(const Induction&) const = default;
};

/// A-move on the loop `loop` at w with labels (c, c*m) where c sits on
/// `small_side`: splits off a new vertex carrying a strict ascending loop
/// (1, m) and a new edge (b at the new vertex, c at w).  The loop keeps its id.
struct AMove {
    EdgeId loop = 0;
    int small_side = 0;
    Label b = 2;
    VertexId new_vertex = 0;
    EdgeId new_edge = 0;
    bool operator==(const AMove&) const = default;
};

/// Inverse A-move: removes the strict ascending loop `loop` at v together
/// with the edge `edge` from v to w, leaving loop (c, c*m) at w.
struct AInverseMove {
    EdgeId loop = 0;
    EdgeId edge = 0;
    bool operator==(const AInverseMove&) const = default;
};

using Move = std::variant<Collapse, Expansion, Slide, Induction, AMove, AInverseMove>;

std::string move_kind(const Move& m);
std::string to_string(const Move& m);

struct MoveReport {
    LabeledGraph graph;
    bool trivial = false;
    /// Labels unchanged up to equivalence although the move is not trivial as
    /// a move of trees (induction with k = m and nothing pulled, say).
    bool unmarked_identity = false;
    /// True when the loop of an induction or A-move was sign-normalized so
    /// that its unit end is +1.
    bool normalized = false;
    /// Surviving input end -> its end in the result.  Ends keep their ids, so
    /// this is the identity on the ends that still exist.
    std::map<EndRef, EndRef> tracking;
};

/// Oriented edges (initial ends) that may be collapsed.  Empty iff reduced.
std::vector<EndRef> collapsible_edges(const LabeledGraph& g);
bool is_reduced(const LabeledGraph& g);

MoveReport collapse(const LabeledGraph& g, EndRef oriented);
MoveReport expand(const LabeledGraph& g, const Expansion& spec);
MoveReport slide(const LabeledGraph& g, const Slide& spec);
MoveReport induction(const LabeledGraph& g, const Induction& spec);
MoveReport a_move(const LabeledGraph& g, const AMove& spec);
MoveReport a_inverse(const LabeledGraph& g, const AInverseMove& spec);
MoveReport apply_move(const LabeledGraph& g, const Move& m);

/// Greedy reduction, always collapsing the first collapsible edge.  Edges in
/// `avoid` are only collapsed when nothing else is collapsible.
struct Reduction {
    LabeledGraph graph;
    std::vector<Collapse> collapses;
};
Reduction reduce(const LabeledGraph& g, const std::set<EdgeId>& avoid = {});

/// A move that undoes `m` when applied to apply_move(before, m).graph.
Move inverse(const LabeledGraph& before, const Move& m);

/// Re-expresses a move on `from` as the corresponding move on `to` through
/// an isomorphism from -> to.  Fresh vertex/edge ids are drawn from `to`.
Move transport(const Move& m, const LabeledGraph& from, const LabeledGraph& to, const Isomorphism& iso);

/// Collapse that is undone exactly (ids included) by the returned expansion.
Expansion undo_collapse(const LabeledGraph& before, EndRef oriented);

struct MoveBounds {
    Label max_label = 64;
    std::size_t max_vertices = 12;
    std::size_t max_edges = 16;

    bool admits(const LabeledGraph& g) const {
        return g.max_abs_label() <= max_label && g.vertex_count() <= max_vertices && g.edge_count() <= max_edges;
    }
    static MoveBounds unbounded();
};

struct EnumeratedMove {
    Move move;
    bool trivial = false;
    bool unmarked_identity = false;
    bool reduced_result = false;
    LabeledGraph result;
};

/// Every slide (single end and full eligible collection), induction (every
/// k and pull set, both directions, on strict ascending loops), A-move
/// (positive b) and inverse A-move applicable to a reduced graph whose
/// result respects `bounds`, in a deterministic order.  When `rejected` is
/// given it receives the number of applicable moves dropped by the bounds.
std::vector<EnumeratedMove> enumerate_moves(const LabeledGraph& g, const MoveBounds& bounds,
                                            std::size_t* rejected = nullptr);

/// Positive divisors of |n|, ascending.
std::vector<Label> divisors(Label n);

}  // namespace gbs
