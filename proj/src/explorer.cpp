#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "gbs/errors.hpp"
#include "gbs/explorer.hpp"

namespace gbs {

namespace {

struct Node {
    CanonicalKey key;
    LabeledGraph graph;
    long parent = -1;
    std::optional<Move> move;
    std::size_t depth = 0;
};

struct Step {
    Move move;
    LabeledGraph graph;
    CanonicalKey key;
};

// One BFS tree over canonical keys.
struct Search {
    std::vector<Node> nodes;
    std::map<std::vector<std::int64_t>, std::size_t> index;
    std::size_t level_begin = 0;
    std::size_t level_end = 0;

    explicit Search(const LabeledGraph& seed) {
        nodes.push_back(Node{canonical_form(seed), seed, -1, std::nullopt, 0});
        index.emplace(nodes[0].key.code, 0);
        level_end = 1;
    }

    std::size_t level_size() const { return level_end - level_begin; }
    std::size_t depth() const { return nodes[level_begin].depth; }

    std::optional<std::size_t> find(const CanonicalKey& k) const {
        auto it = index.find(k.code);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    // Moves from the seed to nodes[i].
    std::vector<Move> moves_to(std::size_t i) const {
        std::vector<Move> out;
        for (long at = static_cast<long>(i); nodes[static_cast<std::size_t>(at)].parent >= 0;
             at = nodes[static_cast<std::size_t>(at)].parent) {
            out.push_back(*nodes[static_cast<std::size_t>(at)].move);
        }
        std::reverse(out.begin(), out.end());
        return out;
    }
};

std::vector<Step> neighbours(const LabeledGraph& g, const Bounds& b, bool& bound_hit) {
    std::size_t rejected = 0;
    std::vector<Step> out;
    for (auto& em : enumerate_moves(g, b.move_bounds(), &rejected)) {
        if (em.trivial || !em.reduced_result) continue;
        CanonicalKey key = canonical_form(em.result);
        out.push_back(Step{std::move(em.move), std::move(em.result), std::move(key)});
    }
    bound_hit = rejected > 0;
    return out;
}

// Neighbours of every frontier node, computed on `jobs` threads and
// returned in frontier order.
std::vector<std::vector<Step>> expand_level(const Search& s, const Bounds& b, unsigned jobs, bool& bound_hit) {
    const std::size_t n = s.level_size();
    std::vector<std::vector<Step>> out(n);
    std::vector<char> hit(n, 0);
    auto work = [&](std::size_t i) {
        bool h = false;
        out[i] = neighbours(s.nodes[s.level_begin + i].graph, b, h);
        hit[i] = h;
    };
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (unsigned t = 0; t < std::min<std::size_t>(jobs, n); ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) {
                    try {
                        work(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }
    bound_hit = bound_hit || std::any_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
    return out;
}

// Expands the current level and makes the new nodes the next level.
// Returns the indices of the new nodes.
std::vector<std::size_t> grow(Search& s, const Bounds& b, unsigned jobs, std::size_t node_limit, bool& bound_hit) {
    auto steps = expand_level(s, b, jobs, bound_hit);
    const std::size_t first_new = s.nodes.size();
    std::vector<std::size_t> added;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const std::size_t parent = s.level_begin + i;
        for (auto& st : steps[i]) {
            if (s.index.count(st.key.code)) continue;
            if (s.nodes.size() >= node_limit) {
                bound_hit = true;
                continue;
            }
            s.index.emplace(st.key.code, s.nodes.size());
            added.push_back(s.nodes.size());
            s.nodes.push_back(Node{std::move(st.key), std::move(st.graph), static_cast<long>(parent), std::move(st.move),
                                   s.nodes[parent].depth + 1});
        }
    }
    s.level_begin = first_new;
    s.level_end = s.nodes.size();
    return added;
}

void require_input(const LabeledGraph& g, const Bounds& b) {
    require_valid(g);
    if (!is_reduced(g)) throw PreconditionError("not-reduced", "exploration needs a reduced graph");
    if (!b.admits(g)) throw PreconditionError("out-of-bounds", "graph exceeds the exploration bounds");
}

// Applies `moves` written for `x` to the equivalent graph `r`.
void run_transported(LabeledGraph x, const std::vector<Move>& moves, PathResult& out) {
    for (const auto& m : moves) {
        LabeledGraph& r = out.graphs.back();
        auto iso = find_isomorphism(x, r);
        if (!iso) throw InternalError("path replay lost track: " + to_string(x) + " vs " + to_string(r));
        Move tm = transport(m, x, r, *iso);
        LabeledGraph next = apply_move(r, tm).graph;
        x = apply_move(x, m).graph;
        out.moves.push_back(std::move(tm));
        out.graphs.push_back(std::move(next));
    }
}

PathResult join(const Search& from, std::size_t a, const Search& to, std::size_t b) {
    PathResult out;
    out.found = true;
    out.graphs.push_back(from.nodes[0].graph);
    run_transported(from.nodes[0].graph, from.moves_to(a), out);

    // The other half, walked backwards.
    const auto back = to.moves_to(b);
    std::vector<LabeledGraph> chain{to.nodes[0].graph};
    for (const auto& m : back) chain.push_back(apply_move(chain.back(), m).graph);
    std::vector<Move> undo;
    for (std::size_t i = back.size(); i-- > 0;) undo.push_back(inverse(chain[i], back[i]));
    run_transported(chain.back(), undo, out);
    return out;
}

bool is_single_ascending_loop(const LabeledGraph& g) {
    if (g.vertex_count() != 1 || g.edge_count() != 1) return false;
    const auto& [id, e] = *g.edges().begin();
    return is_unit(e.ends[0].label) || is_unit(e.ends[1].label);
}

bool is_unit_loop(const LabeledGraph& g, EdgeId id) {
    return g.is_loop(id) && is_unit(g.label({id, 0})) && is_unit(g.label({id, 1}));
}

Label mag(Label x) { return x < 0 ? -x : x; }

}  // namespace

void require_valid_bounds(const Bounds& b) {
    if (b.max_label < 1 || b.max_vertices < 1 || b.max_edges < 1 || b.max_frontier < 1) {
        throw PreconditionError("bad-bounds", "label, vertex, edge and frontier bounds must be positive");
    }
}

Orbit reduced_orbit(const LabeledGraph& g, const Bounds& b, unsigned jobs) {
    require_valid_bounds(b);
    require_input(g, b);
    Search s(g);
    bool bound_hit = false;
    while (s.level_size() > 0) {
        if (s.depth() >= b.max_depth) {
            // Probe one level further to learn whether the depth bound mattered.
            const std::size_t keep = s.nodes.size();
            if (!grow(s, b, jobs, b.max_frontier + 1, bound_hit).empty()) bound_hit = true;
            s.nodes.resize(keep);
            break;
        }
        grow(s, b, jobs, b.max_frontier, bound_hit);
    }
    Orbit out;
    for (auto& n : s.nodes) out.keys.push_back(std::move(n.key));
    std::sort(out.keys.begin(), out.keys.end());
    out.exhausted = !bound_hit;
    return out;
}

PathResult find_path(const LabeledGraph& g1, const LabeledGraph& g2, const Bounds& b, unsigned jobs) {
    require_valid_bounds(b);
    require_input(g1, b);
    require_input(g2, b);
    Search fwd(g1);
    Search bwd(g2);
    if (fwd.nodes[0].key == bwd.nodes[0].key) {
        PathResult out;
        out.found = true;
        out.graphs.push_back(g1);
        return out;
    }
    bool bound_hit = false;
    for (std::size_t length = 0; length < b.max_depth; ++length) {
        if (fwd.level_size() == 0 || bwd.level_size() == 0) break;
        const bool forward = fwd.level_size() <= bwd.level_size();
        Search& side = forward ? fwd : bwd;
        Search& other = forward ? bwd : fwd;
        const std::size_t limit = b.max_frontier > other.nodes.size() ? b.max_frontier - other.nodes.size() : 0;
        const auto added = grow(side, b, jobs, limit, bound_hit);

        std::optional<std::pair<std::size_t, std::size_t>> best;
        std::size_t best_len = 0;
        for (std::size_t i : added) {
            auto j = other.find(side.nodes[i].key);
            if (!j) continue;
            const std::size_t len = side.nodes[i].depth + other.nodes[*j].depth;
            if (!best || len < best_len) {
                best = {i, *j};
                best_len = len;
            }
        }
        if (best) {
            return forward ? join(fwd, best->first, bwd, best->second) : join(fwd, best->second, bwd, best->first);
        }
    }
    return {};
}

std::string to_string(RigidStatus s) {
    switch (s) {
        case RigidStatus::Rigid: return "RIGID";
        case RigidStatus::NotRigid: return "NOT_RIGID";
        case RigidStatus::AscendingHnnExcluded: return "ASCENDING_HNN_EXCLUDED";
        case RigidStatus::UnitUnitLoopExcluded: return "UNIT_UNIT_LOOP_EXCLUDED";
    }
    return "?";
}

RigidityVerdict is_rigid_conditions(const LabeledGraph& g) {
    require_valid(g);
    if (!is_reduced(g)) throw PreconditionError("not-reduced", "rigidity needs a reduced graph");
    RigidityVerdict out;
    if (is_single_ascending_loop(g)) {
        out.status = RigidStatus::AscendingHnnExcluded;
        return out;
    }
    for (VertexId v : g.vertices()) {
        const auto at = g.ends_at(v);
        for (EndRef eps : at) {
            for (EndRef phi : at) {
                if (eps == phi || g.label(eps) % g.label(phi) != 0) continue;
                const bool same_loop = eps.edge == phi.edge && mag(g.label(eps)) == mag(g.label(phi));
                const bool unit_loop = is_unit_loop(g, phi.edge) && at.size() == 3;
                if (same_loop || unit_loop) continue;
                out.status = RigidStatus::NotRigid;
                out.pair = {eps, phi};
                return out;
            }
        }
    }
    return out;
}

RigidityVerdict is_rigid_moves(const LabeledGraph& g) {
    require_valid(g);
    if (!is_reduced(g)) throw PreconditionError("not-reduced", "rigidity needs a reduced graph");
    RigidityVerdict out;
    if (is_single_ascending_loop(g)) {
        out.status = RigidStatus::AscendingHnnExcluded;
        return out;
    }
    for (const auto& [id, e] : g.edges()) {
        if (is_unit_loop(g, id)) {
            out.status = RigidStatus::UnitUnitLoopExcluded;
            return out;
        }
    }
    for (auto& em : enumerate_moves(g, MoveBounds::unbounded())) {
        if (em.trivial) continue;
        out.status = RigidStatus::NotRigid;
        out.move = std::move(em);
        return out;
    }
    return out;
}

AscendingWitness ascending_witness(const LabeledGraph& g, const Bounds& b) {
    require_valid_bounds(b);
    require_input(g, b);
    Search s(g);
    bool bound_hit = false;
    std::size_t checked = 0;
    while (true) {
        for (; checked < s.nodes.size(); ++checked) {
            const LabeledGraph& h = s.nodes[checked].graph;
            for (const auto& [id, e] : h.edges()) {
                if (is_strict_ascending_loop(h, id)) return {true, h, id, s.moves_to(checked)};
            }
            // A loop (a, a*m) becomes strict ascending once both ends are
            // pulled onto a new vertex with multiplier a.
            for (const auto& [id, e] : h.edges()) {
                if (!e.is_loop()) continue;
                for (int side = 0; side < 2; ++side) {
                    const Label a = h.label({id, side});
                    const Label c = h.label({id, 1 - side});
                    if (mag(a) < 2 || c % a != 0 || mag(c / a) < 2) continue;
                    Expansion ex{e.ends[0].vertex, a, 1, {{id, 0}, {id, 1}}, h.next_vertex_id(), h.next_edge_id(), 0};
                    auto moves = s.moves_to(checked);
                    moves.push_back(ex);
                    return {true, expand(h, ex).graph, id, moves};
                }
            }
        }
        if (s.level_size() == 0 || s.depth() >= b.max_depth) break;
        grow(s, b, 1, b.max_frontier, bound_hit);
    }
    return {};
}

}  // namespace gbs
