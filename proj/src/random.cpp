#include <random>

#include "gbs/errors.hpp"
#include "gbs/whitehead.hpp"

namespace gbs {

namespace {

// Uniform value in [lo, hi] by plain modulo: the same sequence on every
// platform, unlike std::uniform_int_distribution.
std::int64_t pick(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<std::int64_t>(rng() % span);
}

bool coin(std::mt19937_64& rng) { return rng() % 2 == 1; }

template <class T>
const T& choose(std::mt19937_64& rng, const std::vector<T>& items) {
    return items[static_cast<std::size_t>(pick(rng, 0, static_cast<std::int64_t>(items.size()) - 1))];
}

bool within(const LabeledGraph& g, const DeformationBounds& b) {
    return g.max_abs_label() <= b.max_label && g.vertex_count() <= b.max_vertices && g.edge_count() <= b.max_edges;
}

Expansion random_expansion(std::mt19937_64& rng, const LabeledGraph& g, std::optional<EdgeId> tracked) {
    std::vector<VertexId> verts(g.vertices().begin(), g.vertices().end());
    Expansion ex;
    ex.vertex = choose(rng, verts);
    const auto at = g.ends_at(ex.vertex);
    std::vector<Label> options{1};
    for (EndRef r : at) {
        for (Label d : divisors(g.label(r))) options.push_back(d);
    }
    ex.multiplier = choose(rng, options) * (coin(rng) ? -1 : 1);
    ex.unit = coin(rng) ? -1 : 1;
    for (EndRef r : at) {
        const Label n = g.label(r);
        if (n % ex.multiplier != 0 || !coin(rng)) continue;
        if (tracked && r.edge == *tracked && is_unit(n / ex.multiplier)) continue;
        ex.pulled.push_back(r);
    }
    ex.new_vertex = g.next_vertex_id();
    ex.new_edge = g.next_edge_id();
    ex.new_side = static_cast<int>(pick(rng, 0, 1));
    return ex;
}

}  // namespace

LabeledGraph random_reduced_graph(std::uint64_t seed, const DeformationBounds& bounds) {
    std::mt19937_64 rng(seed);
    const auto max_v = static_cast<std::int64_t>(std::max<std::size_t>(bounds.max_vertices, 1));
    const auto max_e = static_cast<std::int64_t>(std::max<std::size_t>(bounds.max_edges, 1));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        LabeledGraph g;
        const auto nv = static_cast<VertexId>(pick(rng, 1, std::min<std::int64_t>(max_v, 3)));
        for (VertexId v = 0; v < nv; ++v) g.add_vertex(v);
        auto label = [&](bool loop) {
            const Label lo = loop ? 1 : 2;
            const Label mag = pick(rng, lo, std::max(lo, bounds.max_label));
            return coin(rng) ? -mag : mag;
        };
        EdgeId id = 0;
        for (VertexId v = 1; v < nv; ++v) {
            const auto u = static_cast<VertexId>(pick(rng, 0, v - 1));
            g.add_edge(id++, {u, label(false)}, {v, label(false)});
        }
        const auto extra = pick(rng, nv == 1 ? 1 : 0, 2);
        for (std::int64_t k = 0; k < extra && id < max_e; ++k) {
            const auto a = static_cast<VertexId>(pick(rng, 0, nv - 1));
            const auto b = static_cast<VertexId>(pick(rng, 0, nv - 1));
            g.add_edge(id++, {a, label(a == b)}, {b, label(a == b)});
        }
        if (is_valid(g) && is_reduced(g) && within(g, bounds)) return g;
    }
    throw PreconditionError("bounds-too-tight", "could not generate a reduced graph");
}

ElementaryDeformation random_deformation(std::uint64_t seed, const DeformationBounds& bounds,
                                         const LabeledGraph& start, std::optional<EdgeId> tracked) {
    require_valid(start);
    if (!is_reduced(start)) throw PreconditionError("not-reduced", "start graph must be reduced");
    if (!within(start, bounds)) throw PreconditionError("out-of-bounds", "start graph exceeds bounds");
    if (tracked && (!start.has_edge(*tracked) || (!start.is_loop(*tracked) && (is_unit(start.label({*tracked, 0})) ||
                                                                                is_unit(start.label({*tracked, 1})))))) {
        throw PreconditionError("bad-tracked-edge", "tracked edge must exist and have no unit label");
    }
    if (bounds.max_steps == 0) return make_deformation(start, {});

    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 200; ++attempt) {
        const auto budget = static_cast<std::size_t>(pick(rng, 1, static_cast<std::int64_t>(bounds.max_steps)));
        std::vector<Move> steps;
        LabeledGraph g = start;
        while (steps.size() < budget) {
            std::vector<EndRef> down;
            for (EndRef r : collapsible_edges(g)) {
                if (tracked && r.edge == *tracked) continue;
                if (within(collapse(g, r).graph, bounds)) down.push_back(r);
            }
            const bool room = g.vertex_count() < bounds.max_vertices && g.edge_count() < bounds.max_edges;
            if (down.empty() && !room) break;
            if (!down.empty() && (!room || coin(rng))) {
                const EndRef r = choose(rng, down);
                steps.push_back(Collapse{r});
                g = collapse(g, r).graph;
            } else {
                Expansion ex = random_expansion(rng, g, tracked);
                steps.push_back(ex);
                g = expand(g, ex).graph;
            }
        }
        std::set<EdgeId> avoid;
        if (tracked) avoid.insert(*tracked);
        for (const auto& c : reduce(g, avoid).collapses) {
            steps.push_back(c);
            g = collapse(g, c.edge).graph;
        }
        if (steps.size() <= bounds.max_steps && within(g, bounds)) return make_deformation(start, steps);
    }
    throw PreconditionError("bounds-too-tight", "no deformation within bounds found");
}

}  // namespace gbs
