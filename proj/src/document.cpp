#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "gbs/canonical.hpp"
#include "gbs/document.hpp"
#include "gbs/errors.hpp"

namespace gbs {

namespace {

[[noreturn]] void fail(const std::string& code, const std::string& where, const std::string& what) {
    throw PreconditionError(code, where.empty() ? what : where + ": " + what);
}

std::string in_quotes(const std::string& s) { return "\"" + s + "\""; }

const Json& field(const Json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) fail("missing-field", where, std::string("missing field \"") + key + "\"");
    return *it;
}

void only_fields(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
    for (const auto& [k, v] : obj.items()) {
        if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
            fail("unknown-field", where, "unknown field " + in_quotes(k));
        }
    }
}

const Json& object_at(const Json& j, const std::string& where) {
    if (!j.is_object()) fail("schema", where, "expected an object");
    return j;
}

const Json& array_at(const Json& j, const std::string& where) {
    if (!j.is_array()) fail("schema", where, "expected an array");
    return j;
}

std::string string_at(const Json& j, const std::string& where) {
    if (!j.is_string()) fail("schema", where, "expected a string");
    return j.get<std::string>();
}

std::int64_t integer_at(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) fail("schema", where, "expected an integer");
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
        fail("schema", where, "integer out of range");
    }
    return j.get<std::int64_t>();
}

int side_at(const Json& j, const std::string& where) {
    const auto s = integer_at(j, where);
    if (s != 0 && s != 1) fail("schema", where, "side must be 0 or 1");
    return static_cast<int>(s);
}

void check_format(const Json& obj, const std::string& where) {
    auto it = obj.find("format");
    if (it != obj.end() && (!it->is_number_integer() || it->get<std::int64_t>() != 1)) {
        fail("format", where + "format", "unsupported format (expected 1)");
    }
}

std::string fresh(const std::string& prefix, int id, const std::function<bool(const std::string&)>& taken) {
    std::string name = prefix + std::to_string(id);
    for (int k = 2; taken(name); ++k) name = prefix + std::to_string(id) + "_" + std::to_string(k);
    return name;
}

Json end_to_json(EndRef r, const Names& n) { return Json{{"edge", n.edges.at(r.edge)}, {"side", r.side}}; }

EndRef end_from_json(const Json& j, const Names& n, const std::string& where) {
    object_at(j, where);
    only_fields(j, {"edge", "side"}, where);
    return {n.edge_id(string_at(field(j, "edge", where), where + ".edge"), where + ".edge"),
            side_at(field(j, "side", where), where + ".side")};
}

Json ends_to_json(const std::vector<EndRef>& ends, const Names& n) {
    Json out = Json::array();
    for (EndRef r : ends) out.push_back(end_to_json(r, n));
    return out;
}

std::vector<EndRef> ends_from_json(const Json& j, const Names& n, const std::string& where) {
    array_at(j, where);
    std::vector<EndRef> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(end_from_json(j[i], n, where + "[" + std::to_string(i) + "]"));
    return out;
}

// Names for the new vertex and edge a move creates.
std::string new_vertex_name(const Names& n, VertexId id) {
    return fresh("v", id, [&](const std::string& s) { return n.vertex_taken(s); });
}

std::string new_edge_name(const Names& n, EdgeId id) {
    return fresh("e", id, [&](const std::string& s) { return n.edge_taken(s); });
}

VertexId claim_vertex(const Json& rec, GraphDocument& doc, const std::string& where) {
    const VertexId id = doc.graph.next_vertex_id();
    std::string name = new_vertex_name(doc.names, id);
    if (auto it = rec.find("new_vertex"); it != rec.end()) {
        name = string_at(*it, where + ".new_vertex");
        if (doc.names.vertex_taken(name)) fail("duplicate-id", where + ".new_vertex", "vertex " + in_quotes(name) + " already exists");
    }
    doc.names.vertices[id] = name;
    return id;
}

EdgeId claim_edge(const Json& rec, GraphDocument& doc, const std::string& where) {
    const EdgeId id = doc.graph.next_edge_id();
    std::string name = new_edge_name(doc.names, id);
    if (auto it = rec.find("new_edge"); it != rec.end()) {
        name = string_at(*it, where + ".new_edge");
        if (doc.names.edge_taken(name)) fail("duplicate-id", where + ".new_edge", "edge " + in_quotes(name) + " already exists");
    }
    doc.names.edges[id] = name;
    return id;
}

std::string escape_dot(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return "\"" + out + "\"";
}

}  // namespace

VertexId Names::vertex_id(const std::string& name, const std::string& where) const {
    for (const auto& [id, n] : vertices) {
        if (n == name) return id;
    }
    fail("unknown-vertex", where, "unknown vertex " + in_quotes(name));
}

EdgeId Names::edge_id(const std::string& name, const std::string& where) const {
    for (const auto& [id, n] : edges) {
        if (n == name) return id;
    }
    fail("unknown-edge", where, "unknown edge " + in_quotes(name));
}

bool Names::vertex_taken(const std::string& name) const {
    return std::any_of(vertices.begin(), vertices.end(), [&](const auto& p) { return p.second == name; });
}

bool Names::edge_taken(const std::string& name) const {
    return std::any_of(edges.begin(), edges.end(), [&](const auto& p) { return p.second == name; });
}

void Names::sync(const LabeledGraph& g) {
    std::erase_if(vertices, [&](const auto& p) { return !g.has_vertex(p.first); });
    std::erase_if(edges, [&](const auto& p) { return !g.has_edge(p.first); });
    for (VertexId v : g.vertices()) {
        if (!vertices.count(v)) vertices[v] = new_vertex_name(*this, v);
    }
    for (const auto& [id, e] : g.edges()) {
        if (!edges.count(id)) edges[id] = new_edge_name(*this, id);
    }
}

GraphDocument named(const LabeledGraph& g) {
    GraphDocument doc{g, {}};
    doc.names.sync(g);
    return doc;
}

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& err) {
        const std::size_t upto = std::min<std::size_t>(err.byte == 0 ? 0 : err.byte - 1, text.size());
        const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
        const auto nl = text.rfind('\n', upto == 0 ? 0 : upto - 1);
        const auto col = nl == std::string::npos || upto == 0 ? upto + 1 : upto - nl;
        std::string msg = err.what();
        if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
        throw PreconditionError("syntax", source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

GraphDocument graph_from_json(const Json& j, const std::string& where) {
    object_at(j, where.empty() ? "document" : where);
    only_fields(j, {"format", "vertices", "edges"}, where);
    check_format(j, where);
    GraphDocument doc;
    const Json& vs = array_at(field(j, "vertices", where), where + "vertices");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string at = where + "vertices[" + std::to_string(i) + "]";
        const std::string name = string_at(vs[i], at);
        if (doc.names.vertex_taken(name)) fail("duplicate-id", at, "duplicate vertex " + in_quotes(name));
        const auto id = static_cast<VertexId>(i);
        doc.graph.add_vertex(id);
        doc.names.vertices[id] = name;
    }
    const Json& es = array_at(field(j, "edges", where), where + "edges");
    for (std::size_t i = 0; i < es.size(); ++i) {
        const std::string at = where + "edges[" + std::to_string(i) + "]";
        object_at(es[i], at);
        only_fields(es[i], {"id", "ends"}, at);
        const std::string name = string_at(field(es[i], "id", at), at + ".id");
        if (doc.names.edge_taken(name)) fail("duplicate-id", at + ".id", "duplicate edge " + in_quotes(name));
        const Json& ends = array_at(field(es[i], "ends", at), at + ".ends");
        if (ends.size() != 2) fail("schema", at + ".ends", "edge " + in_quotes(name) + " needs exactly two ends");
        std::array<End, 2> parsed;
        for (std::size_t s = 0; s < 2; ++s) {
            const std::string eat = at + ".ends[" + std::to_string(s) + "]";
            object_at(ends[s], eat);
            only_fields(ends[s], {"vertex", "label"}, eat);
            const std::string vname = string_at(field(ends[s], "vertex", eat), eat + ".vertex");
            if (!doc.names.vertex_taken(vname)) {
                fail("unknown-vertex", eat + ".vertex", "edge " + in_quotes(name) + " references unknown vertex " + in_quotes(vname));
            }
            const Label label = integer_at(field(ends[s], "label", eat), eat + ".label");
            if (label == 0) fail("zero label", eat + ".label", "zero label on edge " + in_quotes(name));
            parsed[s] = {doc.names.vertex_id(vname, eat), label};
        }
        const auto id = static_cast<EdgeId>(i);
        doc.graph.add_edge(id, parsed[0], parsed[1]);
        doc.names.edges[id] = name;
    }
    return doc;
}

GraphDocument parse_graph(const std::string& text) { return graph_from_json(parse_json(text, "graph")); }

Json graph_to_json(const GraphDocument& doc) {
    Json vs = Json::array();
    for (VertexId v : doc.graph.vertices()) vs.push_back(doc.names.vertices.at(v));
    Json es = Json::array();
    for (const auto& [id, e] : doc.graph.edges()) {
        Json ends = Json::array();
        for (const auto& end : e.ends) ends.push_back(Json{{"vertex", doc.names.vertices.at(end.vertex)}, {"label", end.label}});
        es.push_back(Json{{"id", doc.names.edges.at(id)}, {"ends", ends}});
    }
    return Json{{"format", 1}, {"vertices", vs}, {"edges", es}};
}

std::string serialize_graph(const GraphDocument& doc) { return graph_to_json(doc).dump(2) + "\n"; }

Move move_from_json(const Json& j, GraphDocument& doc, const std::string& where) {
    object_at(j, where);
    const std::string kind = string_at(field(j, "kind", where), where + ".kind");
    const Names& n = doc.names;
    if (kind == "collapse") {
        only_fields(j, {"kind", "edge", "expect"}, where);
        return Collapse{end_from_json(field(j, "edge", where), n, where + ".edge")};
    }
    if (kind == "expansion") {
        only_fields(j, {"kind", "vertex", "multiplier", "unit", "pulled", "new_vertex", "new_edge", "new_side", "expect"},
                    where);
        Expansion ex;
        ex.vertex = n.vertex_id(string_at(field(j, "vertex", where), where + ".vertex"), where + ".vertex");
        ex.multiplier = integer_at(field(j, "multiplier", where), where + ".multiplier");
        ex.unit = j.contains("unit") ? integer_at(j["unit"], where + ".unit") : 1;
        ex.pulled = j.contains("pulled") ? ends_from_json(j["pulled"], n, where + ".pulled") : std::vector<EndRef>{};
        ex.new_side = j.contains("new_side") ? side_at(j["new_side"], where + ".new_side") : 0;
        ex.new_vertex = claim_vertex(j, doc, where);
        ex.new_edge = claim_edge(j, doc, where);
        return ex;
    }
    if (kind == "slide") {
        only_fields(j, {"kind", "slid", "over", "then_over", "expect"}, where);
        Slide s;
        s.slid = ends_from_json(field(j, "slid", where), n, where + ".slid");
        s.over = end_from_json(field(j, "over", where), n, where + ".over");
        if (j.contains("then_over")) s.then_over = end_from_json(j["then_over"], n, where + ".then_over");
        return s;
    }
    if (kind == "induction") {
        only_fields(j, {"kind", "loop", "unit_side", "k", "pulled", "direction", "expect"}, where);
        Induction ind;
        ind.loop = n.edge_id(string_at(field(j, "loop", where), where + ".loop"), where + ".loop");
        ind.unit_side = side_at(field(j, "unit_side", where), where + ".unit_side");
        ind.k = integer_at(field(j, "k", where), where + ".k");
        ind.pulled = j.contains("pulled") ? ends_from_json(j["pulled"], n, where + ".pulled") : std::vector<EndRef>{};
        const std::string dir = j.contains("direction") ? string_at(j["direction"], where + ".direction") : "forward";
        if (dir != "forward" && dir != "reverse") fail("schema", where + ".direction", "expected \"forward\" or \"reverse\"");
        ind.direction = dir == "forward" ? Direction::Forward : Direction::Reverse;
        return ind;
    }
    if (kind == "a_move") {
        only_fields(j, {"kind", "loop", "small_side", "b", "new_vertex", "new_edge", "expect"}, where);
        AMove a;
        a.loop = n.edge_id(string_at(field(j, "loop", where), where + ".loop"), where + ".loop");
        a.small_side = side_at(field(j, "small_side", where), where + ".small_side");
        a.b = integer_at(field(j, "b", where), where + ".b");
        a.new_vertex = claim_vertex(j, doc, where);
        a.new_edge = claim_edge(j, doc, where);
        return a;
    }
    if (kind == "a_inverse") {
        only_fields(j, {"kind", "loop", "edge", "expect"}, where);
        AInverseMove a;
        a.loop = n.edge_id(string_at(field(j, "loop", where), where + ".loop"), where + ".loop");
        a.edge = n.edge_id(string_at(field(j, "edge", where), where + ".edge"), where + ".edge");
        return a;
    }
    fail("schema", where + ".kind", "unknown move kind " + in_quotes(kind));
}

Json move_to_json(const Move& m, const GraphDocument& doc) {
    const Names& n = doc.names;
    return std::visit(
        [&](const auto& x) -> Json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, Collapse>) {
                return Json{{"kind", "collapse"}, {"edge", end_to_json(x.edge, n)}};
            } else if constexpr (std::is_same_v<T, Expansion>) {
                return Json{{"kind", "expansion"},
                            {"vertex", n.vertices.at(x.vertex)},
                            {"multiplier", x.multiplier},
                            {"unit", x.unit},
                            {"pulled", ends_to_json(x.pulled, n)},
                            {"new_vertex", new_vertex_name(n, x.new_vertex)},
                            {"new_edge", new_edge_name(n, x.new_edge)},
                            {"new_side", x.new_side}};
            } else if constexpr (std::is_same_v<T, Slide>) {
                Json out{{"kind", "slide"}, {"slid", ends_to_json(x.slid, n)}, {"over", end_to_json(x.over, n)}};
                if (x.then_over) out["then_over"] = end_to_json(*x.then_over, n);
                return out;
            } else if constexpr (std::is_same_v<T, Induction>) {
                return Json{{"kind", "induction"},
                            {"loop", n.edges.at(x.loop)},
                            {"unit_side", x.unit_side},
                            {"k", x.k},
                            {"pulled", ends_to_json(x.pulled, n)},
                            {"direction", x.direction == Direction::Forward ? "forward" : "reverse"}};
            } else if constexpr (std::is_same_v<T, AMove>) {
                return Json{{"kind", "a_move"},
                            {"loop", n.edges.at(x.loop)},
                            {"small_side", x.small_side},
                            {"b", x.b},
                            {"new_vertex", new_vertex_name(n, x.new_vertex)},
                            {"new_edge", new_edge_name(n, x.new_edge)}};
            } else {
                return Json{{"kind", "a_inverse"}, {"loop", n.edges.at(x.loop)}, {"edge", n.edges.at(x.edge)}};
            }
        },
        m);
}

MoveScript script_from_json(const Json& j, const std::string& where) {
    MoveScript s;
    const Json& moves = array_at(j, where);
    for (std::size_t i = 0; i < moves.size(); ++i) {
        const std::string at = where + "[" + std::to_string(i) + "]";
        object_at(moves[i], at);
        ScriptStep step{moves[i], std::nullopt};
        if (auto it = moves[i].find("expect"); it != moves[i].end()) {
            step.expect = string_at(*it, at + ".expect");
            step.record.erase("expect");
        }
        s.steps.push_back(std::move(step));
    }
    return s;
}

MoveScript parse_script(const std::string& text) {
    Json j = parse_json(text, "script");
    object_at(j, "script");
    // Outputs of factor and path are scripts too.
    only_fields(j, {"format", "moves", "start", "target", "graphs", "status", "length"}, "");
    check_format(j, "");
    return script_from_json(field(j, "moves", "script"), "moves");
}

Json script_to_json(const MoveScript& s) {
    Json moves = Json::array();
    for (const auto& step : s.steps) {
        Json rec = step.record;
        if (step.expect) rec["expect"] = *step.expect;
        moves.push_back(std::move(rec));
    }
    return Json{{"format", 1}, {"moves", moves}};
}

Replay apply_script(const GraphDocument& start, const MoveScript& script) {
    Replay out;
    out.graphs.push_back(start);
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
        const std::string at = "moves[" + std::to_string(i) + "]";
        GraphDocument doc = out.graphs.back();
        Move m = move_from_json(script.steps[i].record, doc, at);
        try {
            doc.graph = apply_move(doc.graph, m).graph;
        } catch (const PreconditionError& err) {
            throw PreconditionError(err.code(), at + " (" + move_kind(m) + "): " + err.what());
        }
        doc.names.sync(doc.graph);
        if (script.steps[i].expect) {
            const std::string got = canonical_form(doc.graph).hex();
            if (got != *script.steps[i].expect) {
                fail("digest-mismatch", at + ".expect", "expected " + *script.steps[i].expect + ", got " + got);
            }
        }
        out.moves.push_back(std::move(m));
        out.graphs.push_back(std::move(doc));
    }
    return out;
}

MoveScript make_script(const GraphDocument& start, const std::vector<Move>& moves, std::vector<GraphDocument>* graphs) {
    MoveScript s;
    GraphDocument doc = start;
    if (graphs) graphs->push_back(doc);
    for (const auto& m : moves) {
        Json rec = move_to_json(m, doc);
        doc.graph = apply_move(doc.graph, m).graph;
        if (const auto* ex = std::get_if<Expansion>(&m)) {
            doc.names.vertices[ex->new_vertex] = rec["new_vertex"].get<std::string>();
            doc.names.edges[ex->new_edge] = rec["new_edge"].get<std::string>();
        } else if (const auto* a = std::get_if<AMove>(&m)) {
            doc.names.vertices[a->new_vertex] = rec["new_vertex"].get<std::string>();
            doc.names.edges[a->new_edge] = rec["new_edge"].get<std::string>();
        }
        doc.names.sync(doc.graph);
        s.steps.push_back(ScriptStep{std::move(rec), canonical_form(doc.graph).hex()});
        if (graphs) graphs->push_back(doc);
    }
    return s;
}

DeformationDocument parse_deformation(const std::string& text) {
    Json j = parse_json(text, "deformation");
    object_at(j, "deformation");
    only_fields(j, {"format", "start", "steps", "tracked"}, "");
    check_format(j, "");
    DeformationDocument d;
    d.start = graph_from_json(field(j, "start", "deformation"), "start.");
    d.steps = script_from_json(field(j, "steps", "deformation"), "steps");
    if (j.contains("tracked")) d.tracked = string_at(j["tracked"], "tracked");
    return d;
}

Json deformation_to_json(const DeformationDocument& d) {
    Json out{{"format", 1}, {"start", graph_to_json(d.start)}, {"steps", script_to_json(d.steps)["moves"]}};
    if (d.tracked) out["tracked"] = *d.tracked;
    return out;
}

ElementaryDeformation deformation_of(const DeformationDocument& d, std::optional<EdgeId>* tracked) {
    if (tracked) {
        *tracked = std::nullopt;
        if (d.tracked) *tracked = d.start.names.edge_id(*d.tracked, "tracked");
    }
    for (std::size_t i = 0; i < d.steps.steps.size(); ++i) {
        const std::string kind = d.steps.steps[i].record.value("kind", "");
        if (kind != "collapse" && kind != "expansion") {
            fail("not-elementary", "steps[" + std::to_string(i) + "]", "only collapses and expansions are allowed");
        }
    }
    Replay r = apply_script(d.start, d.steps);
    return make_deformation(d.start.graph, r.moves);
}

std::string to_dot(const GraphDocument& doc) {
    std::ostringstream os;
    os << "graph G {\n";
    for (VertexId v : doc.graph.vertices()) os << "  " << escape_dot(doc.names.vertices.at(v)) << ";\n";
    auto end_label = [](Label l) { return std::to_string(l) + (is_unit(l) ? " =" : ""); };
    for (const auto& [id, e] : doc.graph.edges()) {
        os << "  " << escape_dot(doc.names.vertices.at(e.ends[0].vertex)) << " -- "
           << escape_dot(doc.names.vertices.at(e.ends[1].vertex)) << " [label=" << escape_dot(doc.names.edges.at(id))
           << ", taillabel=" << escape_dot(end_label(e.ends[0].label))
           << ", headlabel=" << escape_dot(end_label(e.ends[1].label)) << "];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace gbs
