#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "gbs/abelian.hpp"
#include "gbs/canonical.hpp"
#include "gbs/document.hpp"
#include "gbs/errors.hpp"
#include "gbs/explorer.hpp"
#include "gbs/whitehead.hpp"

namespace gbs {

namespace {

struct Options {
    Bounds bounds;
    DeformationBounds harness;
    std::uint64_t seed = 1;
    std::string format = "json";
    bool trace = false;
    unsigned jobs = 1;
    std::string tracked;
    std::vector<std::string> files;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("io", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// A graph document, or the "start" graph of a deformation or script file.
GraphDocument load_graph(const std::string& path) {
    Json j = parse_json(read_file(path), path);
    if (j.is_object() && j.contains("start")) return graph_from_json(j["start"], "start.");
    return graph_from_json(j);
}

Json graphs_json(const std::vector<GraphDocument>& graphs) {
    Json out = Json::array();
    for (const auto& g : graphs) out.push_back(graph_to_json(g));
    return out;
}

Json end_json(const GraphDocument& doc, EndRef r) { return Json{{"edge", doc.names.edges.at(r.edge)}, {"side", r.side}}; }

void print(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

void print_graph(std::ostream& out, const Options& o, const GraphDocument& doc) {
    if (o.format == "dot") {
        out << to_dot(doc);
    } else {
        out << serialize_graph(doc);
    }
}

int cmd_validate(const Options& o, std::ostream& out) {
    const GraphDocument doc = load_graph(o.files[0]);
    const auto problems = validate(doc.graph);
    Json j{{"valid", problems.empty()}, {"problems", problems}};
    if (problems.empty()) {
        j["reduced"] = is_reduced(doc.graph);
        j["betti"] = betti(doc.graph);
        j["abelianization"] = to_string(abelianization(doc.graph));
        j["digest"] = canonical_form(doc.graph).hex();
    }
    print(out, j);
    return problems.empty() ? 0 : 2;
}

int cmd_reduce(const Options& o, std::ostream& out) {
    const GraphDocument doc = load_graph(o.files[0]);
    require_valid(doc.graph);
    const Reduction r = reduce(doc.graph);
    std::vector<GraphDocument> graphs;
    const MoveScript script = make_script(doc, std::vector<Move>(r.collapses.begin(), r.collapses.end()), &graphs);
    if (o.format == "dot") {
        out << to_dot(graphs.back());
        return 0;
    }
    Json j{{"format", 1}, {"graph", graph_to_json(graphs.back())}, {"moves", script_to_json(script)["moves"]}};
    if (o.trace) j["graphs"] = graphs_json(graphs);
    print(out, j);
    return 0;
}

int cmd_moves(const Options& o, std::ostream& out) {
    const GraphDocument doc = load_graph(o.files[0]);
    require_valid(doc.graph);
    Json list = Json::array();
    for (const auto& em : enumerate_moves(doc.graph, o.bounds.move_bounds())) {
        std::vector<GraphDocument> graphs;
        const MoveScript s = make_script(doc, {em.move}, &graphs);
        Json rec{{"move", s.steps[0].record},
                 {"trivial", em.trivial},
                 {"unmarked_identity", em.unmarked_identity},
                 {"reduced", em.reduced_result},
                 {"result", *s.steps[0].expect}};
        if (o.trace) rec["graph"] = graph_to_json(graphs.back());
        list.push_back(std::move(rec));
    }
    print(out, Json{{"count", list.size()}, {"moves", list}});
    return 0;
}

int cmd_apply(const Options& o, std::ostream& out) {
    const GraphDocument doc = load_graph(o.files[0]);
    require_valid(doc.graph);
    const Replay r = apply_script(doc, parse_script(read_file(o.files[1])));
    if (o.trace && o.format != "dot") {
        print(out, Json{{"format", 1}, {"graphs", graphs_json(r.graphs)}});
    } else {
        print_graph(out, o, r.graphs.back());
    }
    return 0;
}

int cmd_factor(const Options& o, std::ostream& out) {
    const DeformationDocument d = parse_deformation(read_file(o.files[0]));
    require_valid(d.start.graph);
    std::optional<EdgeId> tracked;
    const ElementaryDeformation def = deformation_of(d, &tracked);
    const MoveSequence seq = deformation_to_moves(def, tracked);
    std::vector<GraphDocument> graphs;
    const MoveScript script = make_script(d.start, seq.moves, &graphs);
    Json j{{"format", 1},
           {"start", graph_to_json(d.start)},
           {"target", canonical_form(def.end()).hex()},
           {"moves", script_to_json(script)["moves"]}};
    if (o.trace) j["graphs"] = graphs_json(graphs);
    print(out, j);
    return 0;
}

int cmd_path(const Options& o, std::ostream& out) {
    const GraphDocument g1 = load_graph(o.files[0]);
    const GraphDocument g2 = load_graph(o.files[1]);
    require_valid(g1.graph);
    require_valid(g2.graph);
    const PathResult r = find_path(g1.graph, g2.graph, o.bounds, o.jobs);
    if (!r.found) {
        print(out, Json{{"status", "NOT_FOUND_WITHIN_BOUNDS"}});
        return 0;
    }
    std::vector<GraphDocument> graphs;
    const MoveScript script = make_script(g1, r.moves, &graphs);
    Json j{{"status", "FOUND"},
           {"length", r.moves.size()},
           {"format", 1},
           {"start", graph_to_json(g1)},
           {"moves", script_to_json(script)["moves"]}};
    if (o.trace) j["graphs"] = graphs_json(graphs);
    print(out, j);
    return 0;
}

int cmd_orbit(const Options& o, std::ostream& out) {
    const GraphDocument doc = load_graph(o.files[0]);
    require_valid(doc.graph);
    const Orbit orbit = reduced_orbit(doc.graph, o.bounds, o.jobs);
    Json keys = Json::array();
    Json graphs = Json::array();
    for (const auto& k : orbit.keys) {
        keys.push_back(k.hex());
        if (o.trace) graphs.push_back(graph_to_json(named(k.graph)));
    }
    Json j{{"exhausted", orbit.exhausted}, {"count", orbit.keys.size()}, {"keys", keys}};
    if (o.trace) j["graphs"] = graphs;
    print(out, j);
    return 0;
}

int cmd_rigid(const Options&, const GraphDocument& doc, std::ostream& out) {
    require_valid(doc.graph);
    const RigidityVerdict c = is_rigid_conditions(doc.graph);
    const RigidityVerdict m = is_rigid_moves(doc.graph);
    Json cj{{"status", to_string(c.status)}};
    if (c.pair) cj["pair"] = Json::array({end_json(doc, c.pair->first), end_json(doc, c.pair->second)});
    Json mj{{"status", to_string(m.status)}};
    if (m.move) {
        const MoveScript s = make_script(doc, {m.move->move});
        mj["move"] = s.steps[0].record;
        mj["result"] = *s.steps[0].expect;
    }
    print(out, Json{{"status", to_string(c.status)}, {"conditions", cj}, {"moves", mj}});
    return 0;
}

int cmd_ascending(const Options& o, std::ostream& out) {
    const GraphDocument doc = load_graph(o.files[0]);
    require_valid(doc.graph);
    const AscendingWitness w = ascending_witness(doc.graph, o.bounds);
    if (!w.found) {
        print(out, Json{{"status", "NONE_WITHIN_BOUNDS"}});
        return 0;
    }
    std::vector<GraphDocument> graphs;
    const MoveScript script = make_script(doc, w.moves, &graphs);
    print(out, Json{{"status", "FOUND"},
                    {"loop", graphs.back().names.edges.at(w.loop)},
                    {"graph", graph_to_json(graphs.back())},
                    {"moves", script_to_json(script)["moves"]}});
    return 0;
}

int cmd_random_deform(const Options& o, std::ostream& out) {
    const GraphDocument start =
        o.files.empty() ? named(random_reduced_graph(o.seed, o.harness)) : load_graph(o.files[0]);
    require_valid(start.graph);
    std::optional<EdgeId> tracked;
    if (!o.tracked.empty()) tracked = start.names.edge_id(o.tracked, "--tracked");
    const ElementaryDeformation d = random_deformation(o.seed, o.harness, start.graph, tracked);
    DeformationDocument doc{start, make_script(start, d.steps), std::nullopt};
    if (tracked) doc.tracked = o.tracked;
    print(out, deformation_to_json(doc));
    return 0;
}

void add_bounds(CLI::App* cmd, Options& o) {
    cmd->add_option("--max-label", o.bounds.max_label, "Largest |label| explored")->capture_default_str();
    cmd->add_option("--max-vertices", o.bounds.max_vertices, "Largest vertex count explored")->capture_default_str();
    cmd->add_option("--max-edges", o.bounds.max_edges, "Largest edge count explored")->capture_default_str();
    cmd->add_option("--max-depth", o.bounds.max_depth, "Largest number of moves")->capture_default_str();
    cmd->add_option("--max-frontier", o.bounds.max_frontier, "Largest number of graphs kept")->capture_default_str();
}

void add_jobs(CLI::App* cmd, Options& o) {
    cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::Range(1U, 256U))->capture_default_str();
}

void add_format(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
}

void add_trace(CLI::App* cmd, Options& o) { cmd->add_flag("--trace", o.trace, "Emit every intermediate graph"); }

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Deformation moves on generalized Baumslag-Solitar graphs", "gbstool"};
    app.require_subcommand(1);
    Options o;

    auto* validate_cmd = app.add_subcommand("validate", "Check a graph document");
    validate_cmd->add_option("graph", o.files, "Graph file")->required()->expected(1);

    auto* reduce_cmd = app.add_subcommand("reduce", "Collapse until reduced");
    reduce_cmd->add_option("graph", o.files, "Graph file")->required()->expected(1);
    add_format(reduce_cmd, o);
    add_trace(reduce_cmd, o);

    auto* moves_cmd = app.add_subcommand("moves", "List applicable moves");
    moves_cmd->add_option("graph", o.files, "Graph file")->required()->expected(1);
    add_bounds(moves_cmd, o);
    add_trace(moves_cmd, o);

    auto* apply_cmd = app.add_subcommand("apply", "Apply a move script");
    apply_cmd->add_option("files", o.files, "Graph file and script file")->required()->expected(2);
    add_format(apply_cmd, o);
    add_trace(apply_cmd, o);

    auto* factor_cmd = app.add_subcommand("factor", "Turn a deformation into slides, inductions and A-moves");
    factor_cmd->add_option("deformation", o.files, "Deformation file")->required()->expected(1);
    add_trace(factor_cmd, o);

    auto* path_cmd = app.add_subcommand("path", "Search for moves between two reduced graphs");
    path_cmd->add_option("graphs", o.files, "Two graph files")->required()->expected(2);
    add_bounds(path_cmd, o);
    add_jobs(path_cmd, o);
    add_trace(path_cmd, o);

    auto* orbit_cmd = app.add_subcommand("orbit", "Enumerate reduced graphs reachable by moves");
    orbit_cmd->add_option("graph", o.files, "Graph file")->required()->expected(1);
    add_bounds(orbit_cmd, o);
    add_jobs(orbit_cmd, o);
    add_trace(orbit_cmd, o);

    auto* rigid_cmd = app.add_subcommand("rigid", "Rigidity by conditions and by moves");
    rigid_cmd->add_option("graph", o.files, "Graph file")->required()->expected(1);

    auto* ascending_cmd = app.add_subcommand("ascending", "Look for a strict ascending loop nearby");
    ascending_cmd->add_option("graph", o.files, "Graph file")->required()->expected(1);
    add_bounds(ascending_cmd, o);

    auto* random_cmd = app.add_subcommand("random-deform", "Seeded random elementary deformation");
    random_cmd->add_option("graph", o.files, "Start graph (random when omitted)")->expected(0, 1);
    random_cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    random_cmd->add_option("--steps", o.harness.max_steps, "Largest number of steps")->capture_default_str();
    random_cmd->add_option("--max-label", o.harness.max_label, "Largest |label|")->capture_default_str();
    random_cmd->add_option("--max-vertices", o.harness.max_vertices, "Largest vertex count")->capture_default_str();
    random_cmd->add_option("--max-edges", o.harness.max_edges, "Largest edge count")->capture_default_str();
    random_cmd->add_option("--tracked", o.tracked, "Edge never collapsed");

    auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering");
    dot_cmd->add_option("graph", o.files, "Graph file")->required()->expected(1);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        require_valid_bounds(o.bounds);
        if (*validate_cmd) return cmd_validate(o, out);
        if (*reduce_cmd) return cmd_reduce(o, out);
        if (*moves_cmd) return cmd_moves(o, out);
        if (*apply_cmd) return cmd_apply(o, out);
        if (*factor_cmd) return cmd_factor(o, out);
        if (*path_cmd) return cmd_path(o, out);
        if (*orbit_cmd) return cmd_orbit(o, out);
        if (*rigid_cmd) return cmd_rigid(o, load_graph(o.files[0]), out);
        if (*ascending_cmd) return cmd_ascending(o, out);
        if (*random_cmd) return cmd_random_deform(o, out);
        if (*dot_cmd) {
            const GraphDocument doc = load_graph(o.files[0]);
            out << to_dot(doc);
            return 0;
        }
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InternalError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}

}  // namespace gbs
