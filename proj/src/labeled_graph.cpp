#include "gbs/labeled_graph.hpp"

#include <cstdlib>
#include <queue>
#include <sstream>

#include "gbs/errors.hpp"

namespace gbs {

void LabeledGraph::add_vertex(VertexId v) {
    if (!vertices_.insert(v).second) {
        throw PreconditionError("duplicate-vertex", "vertex " + std::to_string(v) + " already exists");
    }
}

void LabeledGraph::remove_vertex(VertexId v) {
    if (!has_vertex(v)) {
        throw PreconditionError("unknown-vertex", "vertex " + std::to_string(v));
    }
    for (const auto& [id, e] : edges_) {
        if (e.ends[0].vertex == v || e.ends[1].vertex == v) {
            throw PreconditionError("vertex-in-use",
                                    "vertex " + std::to_string(v) + " still carries edge " + std::to_string(id));
        }
    }
    vertices_.erase(v);
}

void LabeledGraph::add_edge(EdgeId id, End a, End b) {
    if (has_edge(id)) {
        throw PreconditionError("duplicate-edge", "edge " + std::to_string(id) + " already exists");
    }
    if (!has_vertex(a.vertex) || !has_vertex(b.vertex)) {
        throw PreconditionError("unknown-vertex", "edge " + std::to_string(id) + " references a missing vertex");
    }
    edges_.emplace(id, Edge{{a, b}});
}

void LabeledGraph::remove_edge(EdgeId id) {
    if (edges_.erase(id) == 0) {
        throw PreconditionError("unknown-edge", "edge " + std::to_string(id));
    }
}

void LabeledGraph::set_end(EndRef r, End value) {
    if (!has_vertex(value.vertex)) {
        throw PreconditionError("unknown-vertex", "vertex " + std::to_string(value.vertex));
    }
    auto it = edges_.find(r.edge);
    if (it == edges_.end() || (r.side != 0 && r.side != 1)) {
        throw PreconditionError("unknown-end", to_string(r));
    }
    it->second.ends[static_cast<std::size_t>(r.side)] = value;
}

void LabeledGraph::set_label(EndRef r, Label label) {
    End e = end(r);
    e.label = label;
    set_end(r, e);
}

const Edge& LabeledGraph::edge(EdgeId e) const {
    auto it = edges_.find(e);
    if (it == edges_.end()) {
        throw PreconditionError("unknown-edge", "edge " + std::to_string(e));
    }
    return it->second;
}

const End& LabeledGraph::end(EndRef r) const {
    if (r.side != 0 && r.side != 1) {
        throw PreconditionError("unknown-end", to_string(r));
    }
    return edge(r.edge).ends[static_cast<std::size_t>(r.side)];
}

std::vector<EndRef> LabeledGraph::ends_at(VertexId v) const {
    std::vector<EndRef> out;
    for (const auto& [id, e] : edges_) {
        for (int s = 0; s < 2; ++s) {
            if (e.ends[static_cast<std::size_t>(s)].vertex == v) out.push_back({id, s});
        }
    }
    return out;
}

std::vector<EndRef> LabeledGraph::all_ends() const {
    std::vector<EndRef> out;
    out.reserve(edges_.size() * 2);
    for (const auto& [id, e] : edges_) {
        out.push_back({id, 0});
        out.push_back({id, 1});
    }
    return out;
}

VertexId LabeledGraph::next_vertex_id() const {
    return vertices_.empty() ? 0 : *vertices_.rbegin() + 1;
}

EdgeId LabeledGraph::next_edge_id() const {
    return edges_.empty() ? 0 : edges_.rbegin()->first + 1;
}

Label LabeledGraph::max_abs_label() const {
    Label m = 0;
    for (const auto& [id, e] : edges_) {
        for (const auto& end : e.ends) m = std::max(m, end.label < 0 ? -end.label : end.label);
    }
    return m;
}

Label checked_mul(Label a, Label b) {
    Label out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw PreconditionError("label-overflow",
                                "label product " + std::to_string(a) + " * " + std::to_string(b) + " overflows");
    }
    return out;
}

EndClass end_label_class(const LabeledGraph& g, EndRef oriented) {
    return is_unit(g.label(oriented)) ? EndClass::Equal : EndClass::NotEqual;
}

bool is_connected(const LabeledGraph& g) {
    if (g.vertices().empty()) return false;
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const auto& [id, e] : g.edges()) {
        adj[e.ends[0].vertex].push_back(e.ends[1].vertex);
        adj[e.ends[1].vertex].push_back(e.ends[0].vertex);
    }
    std::set<VertexId> seen{*g.vertices().begin()};
    std::queue<VertexId> todo;
    todo.push(*g.vertices().begin());
    while (!todo.empty()) {
        VertexId v = todo.front();
        todo.pop();
        for (VertexId w : adj[v]) {
            if (seen.insert(w).second) todo.push(w);
        }
    }
    return seen.size() == g.vertex_count();
}

std::vector<std::string> validate(const LabeledGraph& g) {
    std::vector<std::string> out;
    if (g.vertices().empty()) {
        out.emplace_back("empty: graph has no vertices");
        return out;
    }
    for (const auto& [id, e] : g.edges()) {
        for (int s = 0; s < 2; ++s) {
            const End& end = e.ends[static_cast<std::size_t>(s)];
            if (end.label == 0) {
                out.push_back("zero label: edge " + std::to_string(id) + " side " + std::to_string(s));
            }
            if (!g.has_vertex(end.vertex)) {
                out.push_back("dangling end: edge " + std::to_string(id) + " side " + std::to_string(s));
            }
        }
    }
    if (!is_connected(g)) out.emplace_back("disconnected: graph is not connected");
    return out;
}

bool is_valid(const LabeledGraph& g) { return validate(g).empty(); }

void require_valid(const LabeledGraph& g) {
    auto problems = validate(g);
    if (problems.empty()) return;
    std::string msg;
    for (const auto& p : problems) {
        if (!msg.empty()) msg += "; ";
        msg += p;
    }
    throw PreconditionError("invalid-graph", msg);
}

long betti(const LabeledGraph& g) {
    require_valid(g);
    return static_cast<long>(g.edge_count()) - static_cast<long>(g.vertex_count()) + 1;
}

bool is_strict_ascending_loop(const LabeledGraph& g, EdgeId id) {
    const Edge& e = g.edge(id);
    if (!e.is_loop()) return false;
    bool u0 = is_unit(e.ends[0].label);
    bool u1 = is_unit(e.ends[1].label);
    return u0 != u1;
}

bool has_strict_ascending_loop(const LabeledGraph& g) {
    for (const auto& [id, e] : g.edges()) {
        if (is_strict_ascending_loop(g, id)) return true;
    }
    return false;
}

std::string to_string(EndRef r) {
    return "e" + std::to_string(r.edge) + "." + std::to_string(r.side);
}

std::string to_string(const LabeledGraph& g) {
    std::ostringstream os;
    os << "V{";
    bool first = true;
    for (VertexId v : g.vertices()) {
        os << (first ? "" : ",") << v;
        first = false;
    }
    os << "}";
    for (const auto& [id, e] : g.edges()) {
        os << " e" << id << ":(" << e.ends[0].label << "@" << e.ends[0].vertex << "," << e.ends[1].label << "@"
           << e.ends[1].vertex << ")";
    }
    return os.str();
}

LabeledGraph single_loop(Label a, Label b) {
    LabeledGraph g;
    g.add_vertex(0);
    g.add_edge(0, {0, a}, {0, b});
    return g;
}

}  // namespace gbs
