#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gbs/labeled_graph.hpp"
#include "gbs/moves.hpp"
#include "gbs/whitehead.hpp"

namespace gbs {

using Json = nlohmann::ordered_json;

/// String names of vertices and edges as they appear in documents.
struct Names {
    std::map<VertexId, std::string> vertices;
    std::map<EdgeId, std::string> edges;

    /// Throws PreconditionError naming `where` if the name is unknown.
    VertexId vertex_id(const std::string& name, const std::string& where) const;
    EdgeId edge_id(const std::string& name, const std::string& where) const;
    bool vertex_taken(const std::string& name) const;
    bool edge_taken(const std::string& name) const;

    /// Forgets ids missing from g and invents names ("v3", "e7", ...) for new ones.
    void sync(const LabeledGraph& g);
};

struct GraphDocument {
    LabeledGraph graph;
    Names names;
};

/// Document for a graph with invented names.
GraphDocument named(const LabeledGraph& g);

/// Parses {"format": 1, "vertices": [...], "edges": [{"id", "ends": [{"vertex", "label"}, ...]}]}.
/// Vertices and edges get ids in document order.  Errors are
/// PreconditionError with the line and column (syntax) or field path.
GraphDocument parse_graph(const std::string& text);
GraphDocument graph_from_json(const Json& j, const std::string& where = "");

Json graph_to_json(const GraphDocument& doc);
std::string serialize_graph(const GraphDocument& doc);

/// Parses text as JSON, reporting syntax errors with line and column.
Json parse_json(const std::string& text, const std::string& source = "input");

/// Move records use names of `doc` for existing vertices and edges.  New
/// vertices and edges created by the move get the names given in the
/// record; `doc.names` receives them.
Move move_from_json(const Json& j, GraphDocument& doc, const std::string& where);
/// Record of `m` relative to `doc`, inventing names for new ids as
/// Names::sync would.
Json move_to_json(const Move& m, const GraphDocument& doc);

struct ScriptStep {
    Json record;
    std::optional<std::string> expect;
};

struct MoveScript {
    std::vector<ScriptStep> steps;
};

MoveScript parse_script(const std::string& text);
Json script_to_json(const MoveScript& s);

struct Replay {
    std::vector<GraphDocument> graphs;  // start and every result
    std::vector<Move> moves;
};

/// Applies a script step by step; checks each "expect" digest.
Replay apply_script(const GraphDocument& start, const MoveScript& script);

/// Script for moves applicable to `start` in turn, with expected digests.
MoveScript make_script(const GraphDocument& start, const std::vector<Move>& moves,
                       std::vector<GraphDocument>* graphs = nullptr);

struct DeformationDocument {
    GraphDocument start;
    MoveScript steps;
    std::optional<std::string> tracked;
};

DeformationDocument parse_deformation(const std::string& text);
Json deformation_to_json(const DeformationDocument& d);
/// Elementary deformation and tracked edge id; every step must be a
/// collapse or an expansion.
ElementaryDeformation deformation_of(const DeformationDocument& d, std::optional<EdgeId>* tracked = nullptr);

/// Graphviz text: each edge labeled with its end labels, unit ends marked.
std::string to_dot(const GraphDocument& doc);

}  // namespace gbs
