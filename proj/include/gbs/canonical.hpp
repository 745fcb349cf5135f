#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbs/labeled_graph.hpp"

namespace gbs {

/// Canonical representative of a labeled graph modulo id relabeling, end
/// swaps, and sign changes (negating every label at a vertex, or both
/// labels of an edge).
///
/// `code` is the full serialized representative and is what equality and
/// ordering compare; `digest` is a 128-bit FNV-1a hash of it, used for
/// display and as a hash-table key.
struct CanonicalKey {
    LabeledGraph graph;
    std::vector<std::int64_t> code;
    std::array<std::uint8_t, 16> digest{};

    std::string hex() const;

    bool operator==(const CanonicalKey& o) const { return code == o.code; }
    bool operator<(const CanonicalKey& o) const { return code < o.code; }
};

CanonicalKey canonical_form(const LabeledGraph& g);

bool equivalent(const LabeledGraph& a, const LabeledGraph& b);

/// 128-bit FNV-1a over raw bytes.
std::array<std::uint8_t, 16> fnv1a_128(const std::uint8_t* data, std::size_t size);

/// An isomorphism a -> b up to sign changes: ends map to ends, vertices to
/// vertices, and label_b(ends[r]) = vertex_sign[vertex_a(r)] *
/// edge_sign[r.edge] * label_a(r).
struct Isomorphism {
    std::map<EndRef, EndRef> ends;
    std::map<VertexId, VertexId> vertices;
    std::map<VertexId, int> vertex_sign;
    std::map<EdgeId, int> edge_sign;

    EndRef operator()(EndRef r) const { return ends.at(r); }
    EdgeId edge(EdgeId e) const { return ends.at({e, 0}).edge; }
};

/// Backtracking search for an isomorphism with sign changes.  Candidates
/// that keep an edge's id (and sides) are tried first, so graphs that share
/// ids get the identity-like match whenever one exists.
std::optional<Isomorphism> find_isomorphism(const LabeledGraph& a, const LabeledGraph& b);

}  // namespace gbs
