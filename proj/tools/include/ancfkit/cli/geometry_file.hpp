#pragma once

#include "ancfkit/ancf.hpp"
#include "ancfkit/bezier.hpp"
#include "ancfkit/bspline.hpp"
#include "ancfkit/conversion.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace ancfkit::cli {

enum class GeometryKind { Bezier, Bspline, Ancf48, Ancf36 };

std::string_view kind_name(GeometryKind kind);
std::optional<GeometryKind> parse_kind(std::string_view text);

/// Malformed or unreadable geometry document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Metadata {
    std::string name;
    std::string units;
    std::string created_by;
    /// B-spline span a Bezier net or element was extracted from.
    std::optional<SegmentWindow> source;
};

using Payload = std::variant<BezierNet, BsplineSurface, AncfElement48, AncfElement36>;

struct GeometryFile {
    Payload payload;
    Metadata metadata;

    GeometryKind kind() const { return static_cast<GeometryKind>(payload.index()); }
};

/// Canonical text form: one JSON document, keys in a fixed order.
std::string to_text(const GeometryFile& file);
GeometryFile from_text(std::string_view text);

GeometryFile load(const std::filesystem::path& path);
void save(const GeometryFile& file, const std::filesystem::path& path);

} // namespace ancfkit::cli
