#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gbs/canonical.hpp"
#include "gbs/moves.hpp"

namespace gbs {

/// Limits for exploring the move graph on reduced graphs.
struct Bounds {
    Label max_label = 64;
    std::size_t max_vertices = 12;
    std::size_t max_edges = 16;
    std::size_t max_depth = 8;
    std::size_t max_frontier = 100000;

    MoveBounds move_bounds() const { return {max_label, max_vertices, max_edges}; }
    bool admits(const LabeledGraph& g) const { return move_bounds().admits(g); }
};

/// Throws PreconditionError unless every bound is positive (depth may be 0).
void require_valid_bounds(const Bounds& b);

struct Orbit {
    /// Canonical keys reached, sorted.
    std::vector<CanonicalKey> keys;
    /// True iff no bound cut the search short.
    bool exhausted = false;
};

/// BFS closure of `g` under nontrivial slides, inductions and A-moves with
/// reduced results inside the bounds.  `jobs` > 1 expands each level on that
/// many threads; the result does not depend on it.
Orbit reduced_orbit(const LabeledGraph& g, const Bounds& b, unsigned jobs = 1);

struct PathResult {
    bool found = false;
    /// Moves applicable to g1 one after another; the last graph is
    /// equivalent to g2.
    std::vector<Move> moves;
    std::vector<LabeledGraph> graphs;
};

/// Bidirectional BFS between two reduced graphs.  found = false means
/// nothing was found within the bounds, not that no path exists.
PathResult find_path(const LabeledGraph& g1, const LabeledGraph& g2, const Bounds& b, unsigned jobs = 1);

enum class RigidStatus { Rigid, NotRigid, AscendingHnnExcluded, UnitUnitLoopExcluded };

std::string to_string(RigidStatus s);

struct RigidityVerdict {
    RigidStatus status = RigidStatus::Rigid;
    /// Failing pair (epsilon, phi) of the condition scan.
    std::optional<std::pair<EndRef, EndRef>> pair;
    /// Nontrivial move found by the move scan.
    std::optional<EnumeratedMove> move;
};

/// Rigidity from the local conditions on pairs of ends at each vertex.
RigidityVerdict is_rigid_conditions(const LabeledGraph& g);

/// Rigidity by looking for a nontrivial move.  Refuses graphs with a loop
/// whose labels are both units and single ascending loops.
RigidityVerdict is_rigid_moves(const LabeledGraph& g);

struct AscendingWitness {
    bool found = false;
    /// Graph carrying the strict ascending loop `loop`, reached from the
    /// input by `moves` (the last one may be an expansion).
    LabeledGraph graph;
    EdgeId loop = 0;
    std::vector<Move> moves;
};

/// Looks for a strict ascending loop in the bounded orbit of `g`, including
/// graphs one expansion away from it.  Not finding one is inconclusive.
AscendingWitness ascending_witness(const LabeledGraph& g, const Bounds& b);

}  // namespace gbs
