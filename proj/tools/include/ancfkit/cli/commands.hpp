#pragma once

#include "ancfkit/cli/geometry_file.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ancfkit::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitInvalid = 2,   // parse, validation or I/O failure
    kExitTolerance = 3, // tolerance or geometric condition not met
};

/// Raised for arguments that are well-formed but cannot be combined, such as
/// converting a file to its own kind.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ConvertOptions {
    GeometryKind target = GeometryKind::Ancf48;
    std::optional<double> a;
    std::optional<double> b;
    std::optional<std::pair<int, int>> segment;
    bool all_segments = false;
    double tol = 1e-9;
};

struct ConvertedItem {
    GeometryFile file;
    std::optional<std::pair<int, int>> segment;
};

struct SegmentFailure {
    std::optional<std::pair<int, int>> segment;
    std::vector<Corner> corners;
    std::vector<double> norms;
};

struct ConvertOutcome {
    std::vector<ConvertedItem> converted;
    std::vector<SegmentFailure> failures;
};

ConvertOutcome convert(const GeometryFile& input, const ConvertOptions& options);

struct EdgeMatch {
    /// Largest nodal gap between A's x = a edge and B's x = 0 edge, and
    /// between A's y = b edge and B's y = 0 edge.
    double along_u = 0.0;
    double along_v = 0.0;
};

struct CompareReport {
    int grid = 0;
    double max_deviation = 0.0;
    double mean_deviation = 0.0;
    double relative_max = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::optional<EdgeMatch> edges;
};

CompareReport compare(const GeometryFile& a, const GeometryFile& b, int grid, double tol,
                      std::optional<std::pair<int, int>> segment = std::nullopt);

std::string to_json(const CompareReport& report);

struct SampleRow {
    double xi;
    double eta;
    Vec3 point;
};

/// grid x grid samples over the normalized domain, xi-major.
std::vector<SampleRow> sample(const GeometryFile& input, int grid,
                              std::optional<std::pair<int, int>> segment = std::nullopt);

void write_samples(const std::vector<SampleRow>& rows, std::ostream& out);

/// Parallelogram test of a Bezier net (elevated to bicubic) or one B-spline span.
ParallelogramCheck check_polygon(const GeometryFile& input, double tol,
                                 std::optional<std::pair<int, int>> segment = std::nullopt);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace ancfkit::cli
