#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gbs {

using VertexId = int;
using EdgeId = int;
using Label = std::int64_t;

/// One end of a geometric edge: (edge id, side 0|1).  An end also serves as
/// an oriented edge whose initial vertex is the vertex carrying that end.
struct EndRef {
    EdgeId edge = 0;
    int side = 0;

    EndRef opposite() const { return {edge, 1 - side}; }
    auto operator<=>(const EndRef&) const = default;
};

struct End {
    VertexId vertex = 0;
    Label label = 1;

    auto operator<=>(const End&) const = default;
};

struct Edge {
    std::array<End, 2> ends;

    bool is_loop() const { return ends[0].vertex == ends[1].vertex; }
    auto operator<=>(const Edge&) const = default;
};

/// Finite multigraph whose edge ends carry nonzero integer labels.  This is
/// the quotient graph of groups of a cocompact GBS tree: every vertex and
/// edge group is Z and an end label is the multiplier of the inclusion of
/// the edge group into the vertex group.
///
/// The class only enforces referential integrity (ends point at existing
/// vertices).  Label and connectivity invariants are checked by validate().
class LabeledGraph {
public:
    LabeledGraph() = default;

    void add_vertex(VertexId v);
    void remove_vertex(VertexId v);
    void add_edge(EdgeId id, End a, End b);
    void remove_edge(EdgeId id);
    void set_end(EndRef end, End value);
    void set_label(EndRef end, Label label);

    bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
    bool has_edge(EdgeId e) const { return edges_.count(e) != 0; }
    bool has_end(EndRef r) const { return has_edge(r.edge) && (r.side == 0 || r.side == 1); }

    const std::set<VertexId>& vertices() const { return vertices_; }
    const std::map<EdgeId, Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const;

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t edge_count() const { return edges_.size(); }

    Label label(EndRef r) const { return end(r).label; }
    VertexId vertex(EndRef r) const { return end(r).vertex; }
    const End& end(EndRef r) const;
    bool is_loop(EdgeId e) const { return edge(e).is_loop(); }

    /// All ends incident to v, in (edge, side) order.
    std::vector<EndRef> ends_at(VertexId v) const;
    /// Every end of the graph, in (edge, side) order.
    std::vector<EndRef> all_ends() const;

    VertexId next_vertex_id() const;
    EdgeId next_edge_id() const;

    Label max_abs_label() const;

    bool operator==(const LabeledGraph&) const = default;

private:
    std::set<VertexId> vertices_;
    std::map<EdgeId, Edge> edges_;
};

/// Multiplies two labels, throwing PreconditionError on int64 overflow.
Label checked_mul(Label a, Label b);

/// True iff |label| == 1, i.e. the inclusion is surjective.
inline bool is_unit(Label l) { return l == 1 || l == -1; }

enum class EndClass { Equal, NotEqual };

/// "=" iff the inclusion at the initial vertex of the oriented edge is
/// surjective.
EndClass end_label_class(const LabeledGraph& g, EndRef oriented);

/// Diagnostics for a graph; an empty list means valid.
std::vector<std::string> validate(const LabeledGraph& g);
bool is_valid(const LabeledGraph& g);
/// Throws PreconditionError("invalid-graph") listing every violation.
void require_valid(const LabeledGraph& g);

bool is_connected(const LabeledGraph& g);

/// First Betti number of the underlying graph: E - V + 1.
long betti(const LabeledGraph& g);

/// Loop whose one end is a unit and other end is not: the monodromy is a
/// proper inclusion.
bool is_strict_ascending_loop(const LabeledGraph& g, EdgeId e);
bool has_strict_ascending_loop(const LabeledGraph& g);

/// Compact human-readable rendering, e.g. "V{0,1} e0:(2@0,3@1)".
std::string to_string(const LabeledGraph& g);
std::string to_string(EndRef r);

/// Builders used throughout tests and examples.
LabeledGraph single_loop(Label a, Label b);

}  // namespace gbs
