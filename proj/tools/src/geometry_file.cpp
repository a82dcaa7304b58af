#include "ancfkit/cli/geometry_file.hpp"

#include <json.hpp>

#include <fstream>
#include <regex>
#include <sstream>

namespace ancfkit::cli {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::string_view kFormat = "ancfkit-geometry";
constexpr int kVersion = 1;
constexpr std::string_view kControlOrder = "row-major: i along u, j along v (v fastest)";

Json point_list(std::span<const Vec3> points)
{
    Json list = Json::array();
    for (const Vec3& p : points) {
        list.push_back({p.x(), p.y(), p.z()});
    }
    return list;
}

std::vector<Vec3> read_points(const Json& list, const char* field)
{
    if (!list.is_array()) {
        throw ParseError(std::string("'") + field + "' must be an array of [x, y, z] triples");
    }
    std::vector<Vec3> points;
    for (const Json& item : list) {
        if (!item.is_array() || item.size() != 3 || !item[0].is_number() || !item[1].is_number()
            || !item[2].is_number()) {
            throw ParseError(std::string("'") + field + "' entries must be [x, y, z] number triples");
        }
        points.emplace_back(item[0].get<double>(), item[1].get<double>(), item[2].get<double>());
    }
    return points;
}

const Json& require(const Json& doc, const char* key)
{
    if (!doc.contains(key)) {
        throw ParseError(std::string("missing field '") + key + "'");
    }
    return doc.at(key);
}

int require_int(const Json& doc, const char* key)
{
    const Json& v = require(doc, key);
    if (!v.is_number_integer()) {
        throw ParseError(std::string("field '") + key + "' must be an integer");
    }
    return v.get<int>();
}

double require_number(const Json& doc, const char* key)
{
    const Json& v = require(doc, key);
    if (!v.is_number()) {
        throw ParseError(std::string("field '") + key + "' must be a number");
    }
    return v.get<double>();
}

std::vector<double> require_numbers(const Json& doc, const char* key)
{
    const Json& v = require(doc, key);
    if (!v.is_array()) {
        throw ParseError(std::string("field '") + key + "' must be an array of numbers");
    }
    std::vector<double> out;
    for (const Json& x : v) {
        if (!x.is_number()) {
            throw ParseError(std::string("field '") + key + "' must be an array of numbers");
        }
        out.push_back(x.get<double>());
    }
    return out;
}

std::string optional_string(const Json& doc, const char* key)
{
    if (!doc.contains(key)) {
        return {};
    }
    if (!doc.at(key).is_string()) {
        throw ParseError(std::string("field '") + key + "' must be a string");
    }
    return doc.at(key).get<std::string>();
}

Json node_order(bool reduced)
{
    Json labels = Json::array();
    if (reduced) {
        for (int k : kReducedNodes) {
            labels.push_back(std::string(nodal_label(k)));
        }
    } else {
        for (int k = 0; k < 16; ++k) {
            labels.push_back(std::string(nodal_label(k)));
        }
    }
    return labels;
}

template <std::size_t N>
std::array<Vec3, N> read_nodes(const Json& doc, bool reduced)
{
    if (require(doc, "node_order") != node_order(reduced)) {
        throw ParseError("'node_order' does not match the canonical nodal ordering");
    }
    const std::vector<Vec3> nodes = read_points(require(doc, "nodes"), "nodes");
    if (nodes.size() != N) {
        throw ParseError("expected " + std::to_string(N) + " nodal vectors, got " + std::to_string(nodes.size()));
    }
    std::array<Vec3, N> out;
    std::copy(nodes.begin(), nodes.end(), out.begin());
    return out;
}

Json window_json(const SegmentWindow& w)
{
    return Json{{"segment", {w.e, w.f}}, {"u_range", {w.u0, w.u1}}, {"v_range", {w.v0, w.v1}}};
}

SegmentWindow read_window(const Json& doc)
{
    const Json& seg = require(doc, "segment");
    const std::vector<double> u = require_numbers(doc, "u_range");
    const std::vector<double> v = require_numbers(doc, "v_range");
    if (!seg.is_array() || seg.size() != 2 || !seg[0].is_number_integer() || !seg[1].is_number_integer()
        || u.size() != 2 || v.size() != 2) {
        throw ParseError("malformed 'source' block");
    }
    if (!(u[1] > u[0]) || !(v[1] > v[0])) {
        throw ParseError("'source' ranges must be increasing");
    }
    return {seg[0].get<int>(), seg[1].get<int>(), u[0], u[1], v[0], v[1]};
}

} // namespace

std::string_view kind_name(GeometryKind kind)
{
    switch (kind) {
    case GeometryKind::Bezier: return "bezier";
    case GeometryKind::Bspline: return "bspline";
    case GeometryKind::Ancf48: return "ancf48";
    case GeometryKind::Ancf36: return "ancf36";
    }
    return "unknown";
}

std::optional<GeometryKind> parse_kind(std::string_view text)
{
    for (GeometryKind k : {GeometryKind::Bezier, GeometryKind::Bspline, GeometryKind::Ancf48, GeometryKind::Ancf36}) {
        if (kind_name(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

std::string to_text(const GeometryFile& file)
{
    Json doc;
    doc["format"] = kFormat;
    doc["version"] = kVersion;
    doc["kind"] = kind_name(file.kind());
    doc["name"] = file.metadata.name;
    doc["units"] = file.metadata.units;
    doc["created_by"] = file.metadata.created_by;

    std::visit(
        [&](const auto& g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, BezierNet>) {
                doc["degree_u"] = g.degree_u();
                doc["degree_v"] = g.degree_v();
                doc["control_order"] = kControlOrder;
                doc["points"] = point_list(g.points());
            } else if constexpr (std::is_same_v<T, BsplineSurface>) {
                doc["degree_u"] = g.degree_u();
                doc["degree_v"] = g.degree_v();
                doc["count_u"] = g.count_u();
                doc["count_v"] = g.count_v();
                doc["knots_u"] = std::vector<double>(g.knots_u().values().begin(), g.knots_u().values().end());
                doc["knots_v"] = std::vector<double>(g.knots_v().values().begin(), g.knots_v().values().end());
                doc["control_order"] = kControlOrder;
                doc["points"] = point_list(g.points());
            } else {
                doc["a"] = g.a();
                doc["b"] = g.b();
                doc["node_order"] = node_order(std::is_same_v<T, AncfElement36>);
                doc["nodes"] = point_list(g.nodes());
            }
        },
        file.payload);

    if (file.metadata.source && file.kind() != GeometryKind::Bspline) {
        doc["source"] = window_json(*file.metadata.source);
    }
    // Keep each [x, y, z] triple on one line.
    static const std::regex triple(R"(\[\s*([^\[\],\s]+),\s*([^\[\],\s]+),\s*([^\[\],\s]+)\s*\])");
    return std::regex_replace(doc.dump(2), triple, "[$1, $2, $3]") + "\n";
}

GeometryFile from_text(std::string_view text)
{
    Json doc;
    try {
        doc = Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& err) {
        throw ParseError(std::string("not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) {
        throw ParseError("geometry document must be a JSON object");
    }
    if (optional_string(doc, "format") != kFormat) {
        throw ParseError("unrecognized format tag (expected '" + std::string(kFormat) + "')");
    }
    if (require_int(doc, "version") != kVersion) {
        throw ParseError("unsupported format version");
    }
    const auto kind = parse_kind(optional_string(doc, "kind"));
    if (!kind) {
        throw ParseError("unknown geometry kind '" + optional_string(doc, "kind") + "'");
    }

    Metadata meta{optional_string(doc, "name"), optional_string(doc, "units"), optional_string(doc, "created_by"),
                  std::nullopt};
    if (doc.contains("source")) {
        meta.source = read_window(doc.at("source"));
    }

    // Domain constructors validate the payload; their errors propagate as-is.
    switch (*kind) {
    case GeometryKind::Bezier:
        return {BezierNet(require_int(doc, "degree_u"), require_int(doc, "degree_v"),
                          read_points(require(doc, "points"), "points")),
                meta};
    case GeometryKind::Bspline:
        meta.source.reset();
        return {BsplineSurface(require_int(doc, "degree_u"), require_int(doc, "degree_v"), require_int(doc, "count_u"),
                               require_int(doc, "count_v"), read_points(require(doc, "points"), "points"),
                               KnotVector(require_numbers(doc, "knots_u")), KnotVector(require_numbers(doc, "knots_v"))),
                meta};
    case GeometryKind::Ancf48:
        return {AncfElement48(require_number(doc, "a"), require_number(doc, "b"), read_nodes<16>(doc, false)), meta};
    case GeometryKind::Ancf36:
        return {AncfElement36(require_number(doc, "a"), require_number(doc, "b"), read_nodes<12>(doc, true)), meta};
    }
    throw ParseError("unreachable geometry kind");
}

GeometryFile load(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ParseError("cannot open '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str());
}

void save(const GeometryFile& file, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw ParseError("cannot write '" + path.string() + "'");
    }
    out << to_text(file);
    if (!out) {
        throw ParseError("write to '" + path.string() + "' failed");
    }
}

} // namespace ancfkit::cli
