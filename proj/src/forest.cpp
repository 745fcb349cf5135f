#include <algorithm>
#include <map>
#include <queue>

#include "gbs/errors.hpp"
#include "gbs/whitehead.hpp"

namespace gbs {

namespace {

using Adjacency = std::map<VertexId, std::vector<EndRef>>;

// Ends of forest edges, keyed by the vertex carrying them.
Adjacency forest_adjacency(const LabeledGraph& g, const Forest& f) {
    Adjacency adj;
    for (EdgeId e : f) {
        for (int s = 0; s < 2; ++s) adj[g.vertex({e, s})].push_back({e, s});
    }
    return adj;
}

void require_forest(const LabeledGraph& g, const Forest& f) {
    if (!is_forest(g, f)) throw PreconditionError("not-a-forest", "edge set contains a cycle or unknown edge");
}

}  // namespace

bool is_forest(const LabeledGraph& g, const Forest& f) {
    std::map<VertexId, VertexId> parent;
    auto find = [&](VertexId v) {
        while (parent.count(v) && parent[v] != v) v = parent[v];
        return v;
    };
    for (EdgeId e : f) {
        if (!g.has_edge(e) || g.is_loop(e)) return false;
        VertexId a = find(g.vertex({e, 0}));
        VertexId b = find(g.vertex({e, 1}));
        if (a == b) return false;
        parent[a] = b;
        parent.emplace(b, b);
    }
    return true;
}

std::vector<std::set<VertexId>> forest_components(const LabeledGraph& g, const Forest& f) {
    require_forest(g, f);
    Adjacency adj = forest_adjacency(g, f);
    std::vector<std::set<VertexId>> out;
    std::set<VertexId> seen;
    for (const auto& [start, ends] : adj) {
        if (seen.count(start)) continue;
        std::set<VertexId> comp{start};
        std::queue<VertexId> todo;
        todo.push(start);
        while (!todo.empty()) {
            VertexId v = todo.front();
            todo.pop();
            for (EndRef r : adj[v]) {
                VertexId w = g.vertex(r.opposite());
                if (comp.insert(w).second) todo.push(w);
            }
        }
        seen.insert(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<EndRef> forest_path(const LabeledGraph& g, const Forest& f, VertexId from, VertexId to) {
    require_forest(g, f);
    Adjacency adj = forest_adjacency(g, f);
    std::map<VertexId, EndRef> via;  // vertex -> oriented edge arriving at it
    std::set<VertexId> seen{from};
    std::queue<VertexId> todo;
    todo.push(from);
    while (!todo.empty() && !seen.count(to)) {
        VertexId v = todo.front();
        todo.pop();
        for (EndRef r : adj[v]) {
            VertexId w = g.vertex(r.opposite());
            if (seen.insert(w).second) {
                via[w] = r;
                todo.push(w);
            }
        }
    }
    if (!seen.count(to)) {
        throw PreconditionError("no-forest-path",
                                "v" + std::to_string(from) + " and v" + std::to_string(to) + " are not joined");
    }
    std::vector<EndRef> path;
    for (VertexId v = to; v != from;) {
        EndRef r = via.at(v);
        path.push_back(r);
        v = g.vertex(r);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

ForestCollapse is_collapsible_forest(const LabeledGraph& g, const Forest& f) {
    ForestCollapse out;
    Adjacency adj = forest_adjacency(g, f);
    struct Item {
        std::size_t depth;
        EndRef child_end;
    };
    std::vector<Item> items;
    for (const auto& comp : forest_components(g, f)) {
        bool rooted = false;
        for (VertexId root : comp) {
            std::vector<Item> local;
            std::map<VertexId, std::size_t> depth{{root, 0}};
            std::queue<VertexId> todo;
            todo.push(root);
            bool ok = true;
            while (!todo.empty() && ok) {
                VertexId v = todo.front();
                todo.pop();
                for (EndRef r : adj[v]) {
                    EndRef child_end = r.opposite();
                    VertexId w = g.vertex(child_end);
                    if (depth.count(w)) continue;
                    if (!is_unit(g.label(child_end))) {
                        ok = false;
                        break;
                    }
                    depth[w] = depth[v] + 1;
                    local.push_back({depth[w], child_end});
                    todo.push(w);
                }
            }
            if (ok) {
                items.insert(items.end(), local.begin(), local.end());
                rooted = true;
                break;
            }
        }
        if (!rooted) {
            out.blocking_component = comp;
            return out;
        }
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.depth != b.depth) return a.depth > b.depth;
        return a.child_end < b.child_end;
    });
    out.collapsible = true;
    for (const auto& it : items) out.order.push_back({it.child_end});
    return out;
}

LabeledGraph collapse_forest(const LabeledGraph& g, const Forest& f) {
    ForestCollapse fc = is_collapsible_forest(g, f);
    if (!fc.collapsible) {
        std::string comp;
        for (VertexId v : fc.blocking_component) comp += (comp.empty() ? "v" : ",v") + std::to_string(v);
        throw PreconditionError("forest-not-collapsible", "no surviving vertex for component {" + comp + "}");
    }
    LabeledGraph out = g;
    for (const auto& c : fc.order) out = collapse(out, c.edge).graph;
    return out;
}

StableSubtree maximal_stable_subtree(const LabeledGraph& g, const Forest& f0) {
    auto comps = forest_components(g, f0);
    if (comps.size() != 1) throw PreconditionError("not-a-component", "stable subtree needs one forest component");
    const std::set<VertexId>& verts = comps.front();

    // Components of the subforest of edges with unit labels at both ends.
    Forest both;
    for (EdgeId e : f0) {
        if (is_unit(g.label({e, 0})) && is_unit(g.label({e, 1}))) both.insert(e);
    }
    // A vertex is unusable if some F0 edge leaving its unit component has a
    // non-unit label at the outer end.
    std::set<VertexId> bad;
    std::map<VertexId, int> unit_comp;
    int next = 0;
    for (const auto& c : forest_components(g, both)) {
        for (VertexId v : c) unit_comp[v] = next;
        ++next;
    }
    for (VertexId v : verts) {
        if (!unit_comp.count(v)) unit_comp[v] = next++;
    }
    for (EdgeId e : f0) {
        if (both.count(e)) continue;
        for (int s = 0; s < 2; ++s) {
            if (!is_unit(g.label({e, 1 - s}))) bad.insert(g.vertex({e, s}));
        }
    }

    // Largest connected piece of the unit subforest avoiding bad vertices.
    Forest usable;
    for (EdgeId e : both) {
        if (!bad.count(g.vertex({e, 0})) && !bad.count(g.vertex({e, 1}))) usable.insert(e);
    }
    std::vector<std::set<VertexId>> candidates = forest_components(g, usable);
    for (VertexId v : verts) {
        if (bad.count(v)) continue;
        bool covered = false;
        for (const auto& c : candidates) covered = covered || c.count(v);
        if (!covered) candidates.push_back({v});
    }
    if (candidates.empty()) throw InternalError("collapsible forest component without a stable vertex");
    auto best = std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() > b.size();
        return a < b;
    });
    StableSubtree out;
    out.vertices = *best;
    for (EdgeId e : usable) {
        if (out.vertices.count(g.vertex({e, 0}))) out.edges.insert(e);
    }
    return out;
}

int classify_collapsible_edge(const LabeledGraph& g, EndRef e, EndRef f) {
    if (!g.has_end(e) || !g.has_end(f)) throw PreconditionError("unknown-end", "classify: unknown edge");
    if (!is_unit(g.label(e))) throw PreconditionError("not-collapsible", to_string(e) + " has label !=");
    if (f.edge == e.edge || g.is_loop(f.edge) || !is_unit(g.label(f))) {
        throw PreconditionError("not-collapsible", to_string(f) + " is not a collapsible edge");
    }
    if (g.vertex(f) != g.vertex(e)) throw PreconditionError("not-at-vertex", to_string(f) + " does not start at i(e)");
    if (g.vertex(f.opposite()) != g.vertex(e.opposite())) return 1;
    return is_unit(g.label(f.opposite())) ? 3 : 2;
}

}  // namespace gbs
