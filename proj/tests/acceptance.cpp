// Acceptance harness: one PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "gbs/abelian.hpp"
#include "gbs/canonical.hpp"
#include "gbs/document.hpp"
#include "gbs/errors.hpp"
#include "gbs/explorer.hpp"
#include "gbs/whitehead.hpp"
#include "support.hpp"

using namespace gbs;

namespace {

struct Tally {
    std::size_t cases = 0;
    std::size_t passed = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++cases;
        if (ok) {
            ++passed;
        } else if (first_failure.empty()) {
            first_failure = what;
        }
    }
    bool ok() const { return cases > 0 && passed == cases; }
};

// Every move applied in criteria 1-3 is checked against the invariants of
// the graph it started from.
struct InvariantLedger {
    std::size_t moves = 0;
    std::size_t violations = 0;
    std::string first;

    void check(const LabeledGraph& before, const LabeledGraph& after, const std::string& where) {
        ++moves;
        if (abelianization(before) == abelianization(after) && betti(before) == betti(after)) return;
        if (violations++ == 0) first = where + ": " + to_string(before) + " -> " + to_string(after);
    }
    void chain(const std::vector<LabeledGraph>& graphs, const std::string& where) {
        for (std::size_t i = 0; i + 1 < graphs.size(); ++i) check(graphs[i], graphs[i + 1], where);
    }
    // Every move offered at the reduced graphs along the way.
    void neighbourhood(const std::vector<LabeledGraph>& graphs, const std::string& where) {
        for (const auto& g : graphs) {
            if (!is_reduced(g)) {
                for (EndRef r : collapsible_edges(g)) check(g, collapse(g, r).graph, where + " (collapse)");
                continue;
            }
            for (const auto& em : enumerate_moves(g, MoveBounds{})) {
                check(g, em.result, where);
                const LabeledGraph back = apply_move(em.result, inverse(g, em.move)).graph;
                check(em.result, back, where + " (inverse)");
                if (!equivalent(back, g) && violations++ == 0) first = where + ": inverse of " + to_string(em.move);
            }
        }
    }
};

bool report(int n, const std::string& name, bool ok, const std::string& detail) {
    std::cout << "criterion " << n << " (" << name << "): " << (ok ? "PASS" : "FAIL") << " - " << detail << std::endl;
    return ok;
}

std::string summary(const Tally& t) {
    std::string s = std::to_string(t.passed) + "/" + std::to_string(t.cases);
    if (!t.first_failure.empty()) s += "; first failure: " + t.first_failure;
    return s;
}

LabeledGraph graph_of(int vertices, std::vector<std::array<std::int64_t, 4>> edges) {
    LabeledGraph g;
    for (int v = 0; v < vertices; ++v) g.add_vertex(v);
    int id = 0;
    for (auto [u, a, w, b] : edges) g.add_edge(id++, {static_cast<VertexId>(u), a}, {static_cast<VertexId>(w), b});
    return g;
}

Expansion random_expansion(std::mt19937_64& rng, const LabeledGraph& g) {
    std::vector<VertexId> verts(g.vertices().begin(), g.vertices().end());
    Expansion ex;
    ex.vertex = verts[static_cast<std::size_t>(testing::pick(rng, 0, static_cast<std::int64_t>(verts.size()) - 1))];
    std::vector<Label> options{1};
    for (EndRef r : g.ends_at(ex.vertex)) {
        for (Label d : divisors(g.label(r))) options.push_back(d);
    }
    ex.multiplier = options[static_cast<std::size_t>(testing::pick(rng, 0, static_cast<std::int64_t>(options.size()) - 1))];
    if (testing::pick(rng, 0, 1)) ex.multiplier = -ex.multiplier;
    ex.unit = testing::pick(rng, 0, 1) ? 1 : -1;
    for (EndRef r : g.ends_at(ex.vertex)) {
        if (g.label(r) % ex.multiplier == 0 && testing::pick(rng, 0, 1)) ex.pulled.push_back(r);
    }
    ex.new_vertex = g.next_vertex_id();
    ex.new_edge = g.next_edge_id();
    ex.new_side = static_cast<int>(testing::pick(rng, 0, 1));
    return ex;
}

bool criterion1(InvariantLedger& inv) {
    Tally t;
    std::mt19937_64 rng(1);
    while (t.cases < 1000) {
        LabeledGraph g = testing::random_graph(rng, 6, 8, 12);
        if (!is_valid(g)) continue;
        const Expansion ex = random_expansion(rng, g);
        const LabeledGraph up = expand(g, ex).graph;
        const LabeledGraph down = collapse(up, {ex.new_edge, ex.new_side}).graph;
        inv.check(g, up, "expansion");
        inv.check(up, down, "collapse");
        t.record(down == g, to_string(g));
    }
    return report(1, "expansion/collapse round trip", t.ok(), summary(t));
}

bool criterion2_3(InvariantLedger& inv) {
    const DeformationBounds b;
    Tally pipeline;
    Tally slides_only;
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        const std::string tag = "seed " + std::to_string(seed);
        const LabeledGraph start = random_reduced_graph(seed, b);
        const ElementaryDeformation d = random_deformation(seed * 7919, b, start);
        inv.chain(d.graphs, "deformation " + tag);
        MoveSequence seq;
        try {
            seq = deformation_to_moves(d);
        } catch (const std::exception& e) {
            pipeline.record(false, tag + ": " + e.what());
            continue;
        }
        inv.chain(seq.graphs, "factor " + tag);
        inv.neighbourhood(d.graphs, "neighbour " + tag);
        inv.neighbourhood(seq.graphs, "neighbour " + tag);
        bool ok = true;
        for (const auto& m : seq.moves) {
            ok = ok && !std::holds_alternative<Collapse>(m) && !std::holds_alternative<Expansion>(m);
        }
        for (const auto& g : seq.graphs) ok = ok && is_reduced(g);

        // Replay through the script format, as `apply` does.
        const MoveScript script = make_script(named(d.start), seq.moves);
        const Replay r = apply_script(named(d.start), parse_script(script_to_json(script).dump()));
        for (std::size_t i = 0; i + 1 < r.graphs.size(); ++i) inv.check(r.graphs[i].graph, r.graphs[i + 1].graph, "replay " + tag);
        ok = ok && canonical_form(r.graphs.back().graph) == canonical_form(d.end());
        pipeline.record(ok, tag);

        const bool ascending = std::any_of(d.graphs.begin(), d.graphs.end(),
                                           [](const LabeledGraph& g) { return has_strict_ascending_loop(g); });
        if (!ascending) {
            const bool all_slides = std::all_of(seq.moves.begin(), seq.moves.end(),
                                                [](const Move& m) { return std::holds_alternative<Slide>(m); });
            slides_only.record(all_slides, tag);
        }
    }
    const bool ok2 = report(2, "deformation to slides, inductions and A-moves", pipeline.ok(), summary(pipeline));

    Tally tracked_ok;
    for (std::uint64_t seed = 1; tracked_ok.cases < 50 && seed < 5000; ++seed) {
        const LabeledGraph start = random_reduced_graph(seed, b);
        std::optional<EdgeId> tracked;
        for (const auto& [id, e] : start.edges()) {
            if (!is_unit(e.ends[0].label) && !is_unit(e.ends[1].label)) {
                tracked = id;
                break;
            }
        }
        if (!tracked) continue;
        const std::string tag = "tracked seed " + std::to_string(seed);
        const ElementaryDeformation d = random_deformation(seed, b, start, tracked);
        inv.chain(d.graphs, tag);
        bool ok = true;
        try {
            const MoveSequence seq = deformation_to_moves(d, tracked);
            inv.chain(seq.graphs, tag);
            inv.neighbourhood(seq.graphs, tag);
            for (std::size_t i = 0; i < seq.moves.size(); ++i) {
                ok = ok && seq.graphs[i].has_edge(*tracked) && seq.graphs[i + 1].has_edge(*tracked);
                if (const auto* s = std::get_if<Slide>(&seq.moves[i])) {
                    ok = ok && s->over.edge != *tracked && (!s->then_over || s->then_over->edge != *tracked);
                }
            }
            ok = ok && equivalent(seq.graphs.back(), d.end());
        } catch (const std::exception& e) {
            tracked_ok.record(false, tag + ": " + e.what());
            continue;
        }
        tracked_ok.record(ok, tag);
    }
    const bool ok3 = slides_only.ok() && tracked_ok.ok();
    report(3, "slides only without ascending loops; tracked edge avoided", ok3,
           "no ascending loop: " + summary(slides_only) + "; tracked: " + summary(tracked_ok));
    return ok2 && ok3;
}

bool criterion4(const InvariantLedger& inv) {
    const bool ok = inv.violations == 0 && inv.moves >= 10000;
    std::string detail = std::to_string(inv.moves) + " moves checked, " + std::to_string(inv.violations) + " violations";
    if (!inv.first.empty()) detail += "; first: " + inv.first;
    return report(4, "abelianization and betti preserved", ok, detail);
}

bool criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    using Pair = std::array<Label, 2>;
    std::vector<Pair> loops;
    std::vector<Pair> links;
    // Loops up to reversal and a common sign change; links up to a sign change.
    for (Label a = 1; a <= 6; ++a) {
        for (Label c = -6; c <= 6; ++c) {
            if (c == 0 || (is_unit(a) && is_unit(c)) || a > (c < 0 ? -c : c)) continue;
            loops.push_back({a, c});
        }
    }
    for (Label a = 2; a <= 6; ++a) {
        for (Label c = -6; c <= 6; ++c) {
            if (c < -1 || c > 1) links.push_back({a, c});
        }
    }
    std::vector<LabeledGraph> family;
    auto add = [&](int nv, std::vector<std::pair<int, Pair>> ls, std::vector<Pair> ks) {
        LabeledGraph g;
        for (int v = 0; v < nv; ++v) g.add_vertex(v);
        EdgeId id = 0;
        for (auto& [v, l] : ls) g.add_edge(id++, {v, l[0]}, {v, l[1]});
        for (auto& k : ks) g.add_edge(id++, {0, k[0]}, {1, k[1]});
        family.push_back(std::move(g));
    };
    const std::size_t n = loops.size();
    const std::size_t m = links.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_unit(loops[i][0]) && !is_unit(loops[i][1])) add(1, {{0, loops[i]}}, {});
        for (std::size_t j = i; j < n; ++j) {
            add(1, {{0, loops[i]}, {0, loops[j]}}, {});
            for (std::size_t k = j; k < n; ++k) add(1, {{0, loops[i]}, {0, loops[j]}, {0, loops[k]}}, {});
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        if (links[i][1] < 0) continue;  // the sign at the second vertex is free
        add(2, {}, {links[i]});
        for (std::size_t j = i; j < m; ++j) {
            add(2, {}, {links[i], links[j]});
            for (std::size_t k = j; k < m; ++k) add(2, {}, {links[i], links[j], links[k]});
            for (int v = 0; v < 2; ++v) {
                for (const auto& l : loops) add(2, {{v, l}}, {links[i], links[j]});
            }
        }
        for (int v = 0; v < 2; ++v) {
            for (std::size_t a = 0; a < n; ++a) {
                add(2, {{v, loops[a]}}, {links[i]});
                for (int w = v; w < 2; ++w) {
                    for (std::size_t c = (w == v ? a : 0); c < n; ++c) add(2, {{v, loops[a]}, {w, loops[c]}}, {links[i]});
                }
            }
        }
    }
    Tally t;
    std::set<std::vector<std::int64_t>> classes;
    for (const auto& g : family) {
        classes.insert(canonical_form(g).code);
        const RigidityVerdict c = is_rigid_conditions(g);
        const RigidityVerdict mv = is_rigid_moves(g);
        t.record(c.status == mv.status, to_string(g) + " conditions " + to_string(c.status) + " moves " + to_string(mv.status));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream os;
    os << summary(t) << " graphs, " << classes.size() << " classes, " << static_cast<int>(secs) << " s";
    return report(5, "rigidity conditions agree with moves", t.ok() && secs < 120, os.str());
}

bool criterion6() {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };

    expect(is_rigid_conditions(single_loop(2, 3)).status == RigidStatus::Rigid &&
               is_rigid_moves(single_loop(2, 3)).status == RigidStatus::Rigid,
           "loop (2,3) rigid");
    expect(is_rigid_conditions(single_loop(2, 4)).status == RigidStatus::NotRigid &&
               is_rigid_moves(single_loop(2, 4)).status == RigidStatus::NotRigid,
           "loop (2,4) not rigid");
    const LabeledGraph expanded = graph_of(2, {{1, 1, 1, 2}, {1, 2, 0, 2}});
    const PathResult p = find_path(single_loop(2, 4), expanded, Bounds{});
    expect(p.found && p.moves.size() == 1 && std::holds_alternative<AMove>(p.moves[0]) &&
               equivalent(p.graphs.back(), expanded),
           "loop (2,4) one A-move from {loop (1,2), edge (2,2)}");

    const LabeledGraph star = graph_of(3, {{0, 1, 1, 2}, {0, 1, 2, 3}, {0, 1, 1, 1}});
    const Factorization two = factor_whitehead_II(WhiteheadMove{star, 0, {1, 2}, false});
    expect(two.moves.size() == 1 && std::holds_alternative<AInverseMove>(two.moves[0]) &&
               equivalent(apply_move(two.start, two.moves[0]).graph, single_loop(3, 6)),
           "type II instance gives one inverse A-move to loop (3,6)");

    const LabeledGraph cyc = graph_of(3, {{0, 1, 1, 2}, {0, 3, 1, 1}, {0, 6, 2, 5}});
    const Factorization one = factor_whitehead_I(WhiteheadMove{cyc, 0, {1}, false});
    const LabeledGraph before = graph_of(2, {{1, 1, 1, 6}, {1, 12, 0, 5}});
    const LabeledGraph after = graph_of(2, {{1, 1, 1, 6}, {1, 6, 0, 5}});
    bool iii = one.moves.size() == 2 && std::holds_alternative<Induction>(one.moves[0]) &&
               std::holds_alternative<Slide>(one.moves[1]) && equivalent(one.start, before);
    if (iii) {
        const LabeledGraph end = apply_move(apply_move(one.start, one.moves[0]).graph, one.moves[1]).graph;
        iii = equivalent(end, after) && end.label({2, 0}) == 6 && one.start.label({2, 0}) == 12;
    }
    expect(iii, "type I case (iii) gives induction + slide from end 12 to end 6");

    std::string detail = failures.empty() ? "4/4 examples" : "failed: ";
    for (const auto& f : failures) detail += f + "; ";
    return report(6, "golden examples", failures.empty(), detail);
}

bool criterion7() {
    struct Out {
        int code;
        std::string out;
    };
    auto run = [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = run_cli(args, out, err);
        return Out{code, out.str() + err.str()};
    };
    const std::string dir = std::filesystem::temp_directory_path().string() + "/gbs_acceptance";
    std::filesystem::create_directories(dir);
    auto put = [&](const std::string& name, const GraphDocument& doc) {
        const std::string path = dir + "/" + name;
        std::ofstream(path) << serialize_graph(doc);
        return path;
    };
    const std::string bs = put("bs24.json", named(single_loop(2, 4)));
    const std::string ex = put("expanded.json", named(graph_of(2, {{1, 1, 1, 2}, {1, 2, 0, 2}})));
    const std::string deform = dir + "/deform.json";
    std::ofstream(deform) << run({"random-deform", "--seed", "5"}).out;
    const std::string script = dir + "/script.json";
    std::ofstream(script) << run({"factor", deform}).out;

    const std::vector<std::vector<std::string>> commands{
        {"validate", bs},           {"reduce", bs, "--trace"},          {"moves", bs},
        {"apply", deform, script},  {"factor", deform, "--trace"},      {"path", bs, ex, "--trace"},
        {"orbit", bs, "--trace"},   {"rigid", bs},                      {"random-deform", "--seed", "5"},
        {"export-dot", bs},         {"ascending", bs},                  {"orbit", bs, "--jobs", "4"},
    };
    Tally t;
    for (const auto& c : commands) {
        const Out a = run(c);
        const Out b = run(c);
        t.record(a.code == 0 && a.out == b.out, c[0]);
    }
    const Json one = Json::parse(run({"orbit", bs, "--jobs", "1"}).out);
    const Json four = Json::parse(run({"orbit", bs, "--jobs", "4"}).out);
    t.record(one["keys"] == four["keys"], "orbit --jobs 4 vs --jobs 1");
    return report(7, "determinism", t.ok(), summary(t));
}

}  // namespace

int main() {
    bool ok = true;
    InvariantLedger inv;
    auto guarded = [&](int n, const std::function<bool()>& f) {
        try {
            ok = f() && ok;
        } catch (const std::exception& e) {
            report(n, "exception", false, e.what());
            ok = false;
        }
    };
    guarded(1, [&] { return criterion1(inv); });
    guarded(2, [&] { return criterion2_3(inv); });
    guarded(4, [&] { return criterion4(inv); });
    guarded(5, [] { return criterion5(); });
    guarded(6, [] { return criterion6(); });
    guarded(7, [] { return criterion7(); });
    return ok ? 0 : 1;
}
