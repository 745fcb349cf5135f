#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "gbs/labeled_graph.hpp"

namespace gbs::testing {

// Uniform integer in [lo, hi]; plain modulo so results do not depend on the
// standard library's distribution implementation.
inline std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng() % span);
}

inline Label nonzero_label(std::mt19937_64& rng, Label max_abs) {
    Label v = pick(rng, 1, max_abs);
    return pick(rng, 0, 1) ? v : -v;
}

// Connected graph: a random spanning tree plus extra edges (loops and
// parallel edges allowed).
inline LabeledGraph random_graph(std::mt19937_64& rng, int max_vertices, int max_edges, Label max_abs) {
    LabeledGraph g;
    const int nv = static_cast<int>(pick(rng, 1, max_vertices));
    for (int v = 0; v < nv; ++v) g.add_vertex(v);
    int id = 0;
    for (int v = 1; v < nv; ++v) {
        const auto u = static_cast<VertexId>(pick(rng, 0, v - 1));
        g.add_edge(id++, {u, nonzero_label(rng, max_abs)}, {v, nonzero_label(rng, max_abs)});
    }
    const int target = static_cast<int>(pick(rng, std::max(nv - 1, 1), std::max(max_edges, nv - 1)));
    while (id < target) {
        const auto a = static_cast<VertexId>(pick(rng, 0, nv - 1));
        const auto b = static_cast<VertexId>(pick(rng, 0, nv - 1));
        g.add_edge(id++, {a, nonzero_label(rng, max_abs)}, {b, nonzero_label(rng, max_abs)});
    }
    return g;
}

inline LabeledGraph two_vertex(std::vector<std::array<std::int64_t, 4>> edges) {
    // Each entry: (vertex, label, vertex, label) on vertices 0 and 1.
    LabeledGraph g;
    g.add_vertex(0);
    g.add_vertex(1);
    int id = 0;
    for (auto [u, a, w, b] : edges) {
        g.add_edge(id++, {static_cast<VertexId>(u), a}, {static_cast<VertexId>(w), b});
    }
    return g;
}

}  // namespace gbs::testing
