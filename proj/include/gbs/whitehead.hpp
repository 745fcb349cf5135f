#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gbs/labeled_graph.hpp"
#include "gbs/moves.hpp"

namespace gbs {

/// A set of geometric edges of a host graph containing no cycle (and no loop).
using Forest = std::set<EdgeId>;

bool is_forest(const LabeledGraph& g, const Forest& f);

/// Vertex sets of the connected components of a forest that carry at least
/// one edge, ordered by smallest vertex.
std::vector<std::set<VertexId>> forest_components(const LabeledGraph& g, const Forest& f);

/// Oriented edges along the unique forest path from `from` to `to` (empty
/// when from == to).  Throws if the two vertices lie in different components.
std::vector<EndRef> forest_path(const LabeledGraph& g, const Forest& f, VertexId from, VertexId to);

struct ForestCollapse {
    bool collapsible = false;
    /// A valid iterated-collapse order when collapsible.
    std::vector<Collapse> order;
    /// When not collapsible: a component none of whose vertices can serve
    /// as the surviving vertex.
    std::set<VertexId> blocking_component;
};

/// Decides whether the edges of `f` can be collapsed one after another.  A
/// forest is collapsible iff each component has a root such that every edge
/// has a unit label at the end away from the root; the order returned
/// collapses leaves first toward that root.
ForestCollapse is_collapsible_forest(const LabeledGraph& g, const Forest& f);

/// The graph with `f` collapsed.  Throws PreconditionError if `f` is not a
/// collapsible forest.
LabeledGraph collapse_forest(const LabeledGraph& g, const Forest& f);

struct StableSubtree {
    std::set<VertexId> vertices;
    Forest edges;
};

/// Largest subtree F1 of the forest component spanned by `f0` whose edges
/// have unit labels at both ends and whose entering edges have a unit label
/// at the outer end.  Ties are broken toward the smallest vertex list.
StableSubtree maximal_stable_subtree(const LabeledGraph& g, const Forest& f0);

/// Type of a collapsible edge f next to the unreduced edge e (both given as
/// oriented edges with unit label at the shared initial vertex).
int classify_collapsible_edge(const LabeledGraph& g, EndRef e, EndRef f);

struct LemmaOutcome {
    /// 1 or 2: the new graph is (Gamma'')^e collapsed along e' (and f').
    /// 3 or 4: the symmetric statement on the F' side.
    int conclusion = 0;
    EdgeId e = 0;
    EdgeId e_prime = 0;
    /// f' for conclusion 2, f for conclusion 4.
    std::optional<EdgeId> extra;
    /// Which scan produced the pair: "scan-F'", "scan-F", "all-loops", or
    /// "exhaustive" when the targeted scans all failed and every pair was tried.
    std::string stage;
};

/// Given a peak graph and disjoint nontrivial forests whose collapses are
/// reduced, returns edges realizing one of the four conclusions.  The scan
/// order is: "="-edges of F' not becoming loops, then
/// the same for F, then the all-loops case.
LemmaOutcome find_whitehead_pair(const LabeledGraph& peak, const Forest& f, const Forest& f_prime);

/// A Whitehead move: `source` = peak collapsed along e, `target` = peak
/// collapsed along `collapse_set` (one edge: type I, two edges: type II).
/// When `reversed` is set the move is traversed from target to source.
struct WhiteheadMove {
    LabeledGraph peak;
    EdgeId e = 0;
    std::vector<EdgeId> collapse_set;
    bool reversed = false;

    int type() const { return collapse_set.size() == 1 ? 1 : 2; }
    LabeledGraph source() const;
    LabeledGraph target() const;
    /// Start and end of the move in traversal order.
    LabeledGraph from() const { return reversed ? target() : source(); }
    LabeledGraph to() const { return reversed ? source() : target(); }
};

/// A sequence of moves together with the exact graph it applies to.
struct Factorization {
    LabeledGraph start;
    std::vector<Move> moves;
};

/// Slides and at most one induction turning source() into a graph
/// equivalent to target(): no cycle through the pair, a cycle, or an
/// ascending loop needing an induction.  Reversed moves are handled by exchanging the two collapses.
Factorization factor_whitehead_I(const WhiteheadMove& wm);

/// Slide of the ends at the shared vertex over e', path slide of the ends
/// at t(e) over (f', e'), then an inverse A-move.  A reversed move yields
/// the inverse sequence (an A-move followed by the inverse slides).
Factorization factor_whitehead_II(const WhiteheadMove& wm);

Factorization factor_whitehead(const WhiteheadMove& wm);

/// A finite sequence of collapses and expansions with every intermediate graph.
struct ElementaryDeformation {
    LabeledGraph start;
    std::vector<Move> steps;
    /// graphs[0] = start, graphs[i + 1] = after steps[i].
    std::vector<LabeledGraph> graphs;

    const LabeledGraph& end() const { return graphs.back(); }
};

/// Replays `steps` (collapses and expansions only) from `start`.
ElementaryDeformation make_deformation(const LabeledGraph& start, const std::vector<Move>& steps);

/// One peak of a deformation in peak form: the valleys are top collapsed
/// along `left` and along `right`.
struct Peak {
    LabeledGraph top;
    Forest left;
    Forest right;
};

/// Peaks of `d` with every valley reduced and the two forests of each peak
/// disjoint.  Collapses inserted at unreduced valleys avoid `avoid` edges
/// whenever possible.
std::vector<Peak> deformation_peaks(const ElementaryDeformation& d, const std::set<EdgeId>& avoid = {});

/// The deformation rebuilt from its normalized peaks.  The end is
/// equivalent to d.end() (ids and signs may differ).
ElementaryDeformation normalize_deformation(const ElementaryDeformation& d, const std::set<EdgeId>& avoid = {});

/// Whitehead moves for one peak, by induction on |F| + |F'|.
std::vector<WhiteheadMove> peak_to_whitehead(const Peak& peak);

std::vector<WhiteheadMove> deformation_to_whitehead(const ElementaryDeformation& d,
                                                    const std::set<EdgeId>& avoid = {});

struct MoveSequence {
    std::vector<Move> moves;
    /// graphs[0] = start, graphs[i + 1] = after moves[i].
    std::vector<LabeledGraph> graphs;
};

/// Slides, inductions and A-moves carrying d.start to a graph equivalent to
/// d.end(), every intermediate graph reduced.  When `tracked` is given the
/// edge is kept out of inserted collapses and no emitted slide goes over it.
MoveSequence deformation_to_moves(const ElementaryDeformation& d, std::optional<EdgeId> tracked = std::nullopt);

/// Replays moves from `start`, transporting each factorization onto the
/// running graph.
MoveSequence replay_whitehead(const LabeledGraph& start, const std::vector<WhiteheadMove>& moves);

struct DeformationBounds {
    Label max_label = 12;
    std::size_t max_vertices = 6;
    std::size_t max_edges = 8;
    std::size_t max_steps = 8;
};

/// Seeded random reduced graph within bounds.
LabeledGraph random_reduced_graph(std::uint64_t seed, const DeformationBounds& bounds);

/// Seeded random alternation of expansions and collapses from a reduced
/// graph, followed by collapses down to a reduced graph.  The tracked edge,
/// if any, is never collapsed and never given a unit label.
ElementaryDeformation random_deformation(std::uint64_t seed, const DeformationBounds& bounds,
                                         const LabeledGraph& start, std::optional<EdgeId> tracked = std::nullopt);

}  // namespace gbs
