#include "gbs/canonical.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <tuple>

#include "gbs/errors.hpp"

namespace gbs {

namespace {

using Code = std::vector<std::int64_t>;
using Tuple = std::array<std::int64_t, 4>;

struct CompactEdge {
    EdgeId id;
    std::size_t u, w;  // vertex indices
    Label a, b;        // labels at u and w
};

struct Compact {
    std::vector<VertexId> vertex_ids;
    std::vector<CompactEdge> edges;
};

Compact compact(const LabeledGraph& g) {
    Compact c;
    std::map<VertexId, std::size_t> index;
    for (VertexId v : g.vertices()) {
        index.emplace(v, c.vertex_ids.size());
        c.vertex_ids.push_back(v);
    }
    for (const auto& [id, e] : g.edges()) {
        c.edges.push_back({id, index.at(e.ends[0].vertex), index.at(e.ends[1].vertex), e.ends[0].label,
                           e.ends[1].label});
    }
    return c;
}

Label mag(Label x) { return x < 0 ? -x : x; }

// Iterated color refinement; colors are ranks of sorted signatures, so the
// result is invariant under relabeling and sign changes.
std::vector<int> refine_colors(const Compact& c) {
    const std::size_t n = c.vertex_ids.size();
    std::vector<int> color(n, 0);
    std::size_t classes = 1;
    for (int round = 0; round <= static_cast<int>(n) + 1; ++round) {
        std::vector<std::vector<std::int64_t>> sig(n);
        for (std::size_t v = 0; v < n; ++v) sig[v].push_back(color[v]);
        std::vector<std::vector<Tuple>> incident(n);
        for (const auto& e : c.edges) {
            bool loop = e.u == e.w;
            incident[e.u].push_back({mag(e.a), mag(e.b), loop ? 1 : 0, color[e.w]});
            incident[e.w].push_back({mag(e.b), mag(e.a), loop ? 1 : 0, color[e.u]});
        }
        for (std::size_t v = 0; v < n; ++v) {
            std::sort(incident[v].begin(), incident[v].end());
            sig[v].push_back(static_cast<std::int64_t>(incident[v].size()));
            for (const auto& t : incident[v]) sig[v].insert(sig[v].end(), t.begin(), t.end());
        }
        auto sorted = sig;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (std::size_t v = 0; v < n; ++v) {
            color[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), sig[v]) - sorted.begin());
        }
        if (sorted.size() == classes) break;
        classes = sorted.size();
    }
    return color;
}

Tuple best_tuple(std::int64_t pu, Label a, std::int64_t pw, Label b, int* variant) {
    std::array<Tuple, 4> cand{{{pu, a, pw, b}, {pw, b, pu, a}, {pu, -a, pw, -b}, {pw, -b, pu, -a}}};
    int best = 0;
    for (int i = 1; i < 4; ++i) {
        if (cand[static_cast<std::size_t>(i)] < cand[static_cast<std::size_t>(best)]) best = i;
    }
    if (variant) *variant = best;
    return cand[static_cast<std::size_t>(best)];
}

struct Labeling {
    Code code;
    std::vector<std::size_t> position;  // vertex index -> canonical position
    std::vector<int> flip;              // vertex index -> +-1
};

Code encode(const Compact& c, const std::vector<std::size_t>& pos, const std::vector<int>& flip) {
    std::vector<Tuple> tuples;
    tuples.reserve(c.edges.size());
    for (const auto& e : c.edges) {
        tuples.push_back(best_tuple(static_cast<std::int64_t>(pos[e.u]), e.a * flip[e.u],
                                    static_cast<std::int64_t>(pos[e.w]), e.b * flip[e.w], nullptr));
    }
    std::sort(tuples.begin(), tuples.end());
    Code code;
    code.reserve(2 + 4 * tuples.size());
    code.push_back(static_cast<std::int64_t>(c.vertex_ids.size()));
    code.push_back(static_cast<std::int64_t>(c.edges.size()));
    for (const auto& t : tuples) code.insert(code.end(), t.begin(), t.end());
    return code;
}

Labeling best_labeling(const Compact& c) {
    const std::size_t n = c.vertex_ids.size();
    std::vector<int> color = refine_colors(c);

    // Cells in color order; each cell's members are permuted independently.
    std::map<int, std::vector<std::size_t>> cells_by_color;
    for (std::size_t v = 0; v < n; ++v) cells_by_color[color[v]].push_back(v);
    std::vector<std::vector<std::size_t>> cells;
    for (auto& [col, members] : cells_by_color) cells.push_back(members);

    Labeling best;
    std::vector<std::size_t> pos(n, 0);
    std::vector<int> flip(n, 1);

    auto try_flips = [&]() {
        // The vertex at position 0 keeps its sign: a global flip equals
        // flipping every non-loop edge, which the tuple choice absorbs.
        std::size_t anchor = 0;
        for (std::size_t v = 0; v < n; ++v) {
            if (pos[v] == 0) anchor = v;
        }
        std::vector<std::size_t> free_vertices;
        for (std::size_t v = 0; v < n; ++v) {
            if (v != anchor) free_vertices.push_back(v);
        }
        const std::uint64_t combos = std::uint64_t{1} << free_vertices.size();
        for (std::uint64_t mask = 0; mask < combos; ++mask) {
            for (std::size_t i = 0; i < free_vertices.size(); ++i) {
                flip[free_vertices[i]] = ((mask >> i) & 1U) ? -1 : 1;
            }
            flip[anchor] = 1;
            Code code = encode(c, pos, flip);
            if (best.code.empty() || code < best.code) {
                best.code = std::move(code);
                best.position = pos;
                best.flip = flip;
            }
        }
    };

    std::function<void(std::size_t, std::size_t)> assign = [&](std::size_t cell, std::size_t offset) {
        if (cell == cells.size()) {
            try_flips();
            return;
        }
        auto members = cells[cell];
        std::sort(members.begin(), members.end());
        do {
            for (std::size_t i = 0; i < members.size(); ++i) pos[members[i]] = offset + i;
            assign(cell + 1, offset + members.size());
        } while (std::next_permutation(members.begin(), members.end()));
    };
    assign(0, 0);
    return best;
}

}  // namespace

std::array<std::uint8_t, 16> fnv1a_128(const std::uint8_t* data, std::size_t size) {
    using u128 = unsigned __int128;
    const u128 prime = (static_cast<u128>(0x0000000001000000ULL) << 64) | 0x000000000000013BULL;
    u128 hash = (static_cast<u128>(0x6c62272e07bb0142ULL) << 64) | 0x62b821756295c58dULL;
    for (std::size_t i = 0; i < size; ++i) {
        hash ^= data[i];
        hash *= prime;
    }
    std::array<std::uint8_t, 16> out{};
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(hash & 0xFF);
        hash >>= 8;
    }
    return out;
}

std::string CanonicalKey::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (auto b : digest) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

CanonicalKey canonical_form(const LabeledGraph& g) {
    require_valid(g);
    Compact c = compact(g);
    Labeling lab = best_labeling(c);

    CanonicalKey key;
    key.code = lab.code;
    for (std::size_t i = 0; i < c.vertex_ids.size(); ++i) key.graph.add_vertex(static_cast<VertexId>(i));
    const std::size_t edges = c.edges.size();
    for (std::size_t i = 0; i < edges; ++i) {
        const auto* t = &lab.code[2 + 4 * i];
        key.graph.add_edge(static_cast<EdgeId>(i), {static_cast<VertexId>(t[0]), t[1]},
                           {static_cast<VertexId>(t[2]), t[3]});
    }

    // Fixed little-endian byte layout of the code, so digests agree across
    // platforms.
    std::vector<std::uint8_t> bytes;
    bytes.reserve(key.code.size() * 8);
    for (std::int64_t x : key.code) {
        auto u = static_cast<std::uint64_t>(x);
        for (int i = 0; i < 8; ++i) bytes.push_back(static_cast<std::uint8_t>((u >> (8 * i)) & 0xFF));
    }
    key.digest = fnv1a_128(bytes.data(), bytes.size());
    return key;
}

bool equivalent(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
    return canonical_form(a) == canonical_form(b);
}

namespace {

// Sign bookkeeping for the isomorphism search: each a-vertex has a sign
// and a component; components are sets of vertices whose relative signs are
// already forced.
struct SignState {
    std::map<VertexId, int> sign;
    std::map<VertexId, int> comp;

    // Require sign(u) * sign(w) == product.
    bool constrain(VertexId u, VertexId w, int product) {
        auto iu = sign.find(u);
        auto iw = sign.find(w);
        if (iu == sign.end() && iw == sign.end()) {
            int c = next_comp();
            sign[u] = 1;
            comp[u] = c;
            sign[w] = product;
            comp[w] = c;
            return u != w || product == 1;
        }
        if (iu == sign.end()) {
            sign[u] = product * iw->second;
            comp[u] = comp[w];
            return true;
        }
        if (iw == sign.end()) {
            sign[w] = product * iu->second;
            comp[w] = comp[u];
            return true;
        }
        if (iu->second * iw->second == product) return true;
        int cu = comp[u], cw = comp[w];
        if (cu == cw) return false;
        for (auto& [v, c] : comp) {
            if (c == cw) {
                sign[v] = -sign[v];
                c = cu;
            }
        }
        return true;
    }

    int next_comp() const {
        int m = 0;
        for (const auto& [v, c] : comp) m = std::max(m, c + 1);
        return m;
    }
};

int sgn(Label x) { return x < 0 ? -1 : 1; }

}  // namespace

std::optional<Isomorphism> find_isomorphism(const LabeledGraph& a, const LabeledGraph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return std::nullopt;
    if (a.vertices().empty()) return std::nullopt;
    if (a.edge_count() == 0) {
        Isomorphism iso;
        iso.vertices[*a.vertices().begin()] = *b.vertices().begin();
        iso.vertex_sign[*a.vertices().begin()] = 1;
        return iso;
    }

    // Visit a's edges so each one touches an already-mapped vertex when
    // possible (BFS over the graph), which prunes early.
    std::vector<EdgeId> order;
    {
        std::set<EdgeId> placed;
        std::set<VertexId> reached{a.edges().begin()->second.ends[0].vertex};
        while (order.size() < a.edge_count()) {
            bool progressed = false;
            for (const auto& [id, e] : a.edges()) {
                if (placed.count(id)) continue;
                if (reached.count(e.ends[0].vertex) || reached.count(e.ends[1].vertex)) {
                    order.push_back(id);
                    placed.insert(id);
                    reached.insert(e.ends[0].vertex);
                    reached.insert(e.ends[1].vertex);
                    progressed = true;
                }
            }
            if (!progressed) {
                for (const auto& [id, e] : a.edges()) {
                    if (!placed.count(id)) {
                        order.push_back(id);
                        placed.insert(id);
                        reached.insert(e.ends[0].vertex);
                        break;
                    }
                }
            }
        }
    }

    std::vector<EdgeId> b_edges;
    for (const auto& [id, e] : b.edges()) b_edges.push_back(id);

    struct Frame {
        std::map<VertexId, VertexId> vmap, vinv;
        SignState signs;
        std::map<EdgeId, std::pair<EdgeId, bool>> emap;  // a-edge -> (b-edge, swapped)
        std::set<EdgeId> used;
    };

    std::optional<Isomorphism> result;

    std::function<bool(std::size_t, Frame&)> search = [&](std::size_t k, Frame& f) -> bool {
        if (k == order.size()) {
            Isomorphism iso;
            iso.vertices = f.vmap;
            iso.vertex_sign = f.signs.sign;
            for (const auto& [ea, m] : f.emap) {
                const auto& [eb, swapped] = m;
                for (int s = 0; s < 2; ++s) {
                    EndRef ra{ea, s};
                    EndRef rb{eb, swapped ? 1 - s : s};
                    iso.ends[ra] = rb;
                }
                const End& end0 = a.end({ea, 0});
                Label lb = b.label(iso.ends[{ea, 0}]);
                iso.edge_sign[ea] = sgn(lb) * sgn(end0.label) * f.signs.sign.at(end0.vertex);
            }
            result = std::move(iso);
            return true;
        }
        EdgeId ea = order[k];
        const Edge& A = a.edge(ea);

        std::vector<std::pair<EdgeId, bool>> candidates;
        if (b.has_edge(ea) && !f.used.count(ea)) {
            candidates.push_back({ea, false});
            candidates.push_back({ea, true});
        }
        for (EdgeId eb : b_edges) {
            if (eb == ea || f.used.count(eb)) continue;
            candidates.push_back({eb, false});
            candidates.push_back({eb, true});
        }

        for (const auto& [eb, swapped] : candidates) {
            const Edge& B = b.edge(eb);
            if (A.is_loop() != B.is_loop()) continue;
            const End& b0 = B.ends[swapped ? 1 : 0];
            const End& b1 = B.ends[swapped ? 0 : 1];
            if (mag(A.ends[0].label) != mag(b0.label) || mag(A.ends[1].label) != mag(b1.label)) continue;

            Frame next = f;
            bool ok = true;
            for (auto [va, vb] : {std::pair{A.ends[0].vertex, b0.vertex}, std::pair{A.ends[1].vertex, b1.vertex}}) {
                auto it = next.vmap.find(va);
                auto jt = next.vinv.find(vb);
                if (it == next.vmap.end() && jt == next.vinv.end()) {
                    next.vmap[va] = vb;
                    next.vinv[vb] = va;
                } else if (it == next.vmap.end() || jt == next.vinv.end() || it->second != vb || jt->second != va) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            int r0 = sgn(A.ends[0].label) * sgn(b0.label);
            int r1 = sgn(A.ends[1].label) * sgn(b1.label);
            if (!next.signs.constrain(A.ends[0].vertex, A.ends[1].vertex, r0 * r1)) continue;
            next.emap[ea] = {eb, swapped};
            next.used.insert(eb);
            if (search(k + 1, next)) return true;
        }
        return false;
    };

    Frame root;
    search(0, root);
    return result;
}

}  // namespace gbs
