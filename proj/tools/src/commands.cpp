#include "ancfkit/cli/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

namespace ancfkit::cli {
namespace {

using PointMap = std::function<Vec3(double, double)>;

std::pair<int, int> parse_segment(const std::string& text)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw UsageError("--segment expects 'e,f', got '" + text + "'");
    }
    try {
        std::size_t used_e = 0, used_f = 0;
        const std::string es = text.substr(0, comma);
        const std::string fs = text.substr(comma + 1);
        const int e = std::stoi(es, &used_e);
        const int f = std::stoi(fs, &used_f);
        if (used_e != es.size() || used_f != fs.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return {e, f};
    } catch (const std::logic_error&) {
        throw UsageError("--segment expects two integers 'e,f', got '" + text + "'");
    }
}

// Single span to use when the caller gave none: the only span, or an error.
std::pair<int, int> default_segment(const BsplineSurface& s)
{
    const auto us = s.segments_u();
    const auto vs = s.segments_v();
    if (us.size() != 1 || vs.size() != 1) {
        throw UsageError("surface has " + std::to_string(us.size() * vs.size())
                         + " segments; pass --segment e,f or --all");
    }
    return {us.front(), vs.front()};
}

SegmentWindow window_of(const BsplineSurface& s, int e, int f)
{
    const auto ue = static_cast<std::size_t>(e);
    const auto vf = static_cast<std::size_t>(f);
    return {e, f, s.knots_u()[ue], s.knots_u()[ue + 1], s.knots_v()[vf], s.knots_v()[vf + 1]};
}

Metadata derived_metadata(const Metadata& in, const std::string& suffix)
{
    Metadata out;
    out.name = in.name.empty() ? suffix : in.name + "/" + suffix;
    out.units = in.units;
    out.created_by = "ancfkit convert";
    out.source = in.source;
    return out;
}

GeometryFile element_to_bezier(const AncfElement48& element, const Metadata& meta, double tol)
{
    return {degree_reduce_exact(ancf_to_bezier(element), tol), derived_metadata(meta, "bezier")};
}

void try_reduce(const AncfElement48& element, double tol, GeometryFile out, std::optional<std::pair<int, int>> tag,
                ConvertOutcome& outcome)
{
    try {
        out.payload = reduce_element(element, tol);
        outcome.converted.push_back({std::move(out), tag});
    } catch (const ReductionRejected& rejected) {
        outcome.failures.push_back({tag, rejected.corners(), rejected.norms()});
    }
}

void convert_element(const AncfElement48& element, const Metadata& meta, const ConvertOptions& options,
                     std::optional<std::pair<int, int>> tag, ConvertOutcome& outcome)
{
    GeometryFile out{element, derived_metadata(meta, std::string(kind_name(options.target)))};
    if (options.target == GeometryKind::Ancf36) {
        try_reduce(element, options.tol, std::move(out), tag, outcome);
        return;
    }
    outcome.converted.push_back({std::move(out), tag});
}

PointMap bspline_map(const BsplineSurface& s, const std::optional<SegmentWindow>& window)
{
    const double u0 = window ? window->u0 : s.u_min();
    const double u1 = window ? window->u1 : s.u_max();
    const double v0 = window ? window->v0 : s.v_min();
    const double v1 = window ? window->v1 : s.v_max();
    if (u0 < s.u_min() || u1 > s.u_max() || v0 < s.v_min() || v1 > s.v_max()) {
        throw DomainError("requested span lies outside the surface's parameter range");
    }
    return [&s, u0, u1, v0, v1](double xi, double eta) {
        // Stay inside the span so evaluation uses its own polynomial piece.
        const double u = xi >= 1.0 ? u1 : u0 + xi * (u1 - u0);
        const double v = eta >= 1.0 ? v1 : v0 + eta * (v1 - v0);
        const int e = s.knots_u().find_segment(std::min(u, std::nextafter(u1, u0)), s.degree_u(), s.count_u() - 1);
        const int f = s.knots_v().find_segment(std::min(v, std::nextafter(v1, v0)), s.degree_v(), s.count_v() - 1);
        const auto nu = segment_basis(s.knots_u(), s.degree_u(), e, u);
        const auto nv = segment_basis(s.knots_v(), s.degree_v(), f, v);
        Vec3 p = Vec3::Zero();
        for (int r = 0; r <= s.degree_u(); ++r) {
            for (int c = 0; c <= s.degree_v(); ++c) {
                p += s.at(e - s.degree_u() + r, f - s.degree_v() + c) * (nu[r] * nv[c]);
            }
        }
        return p;
    };
}

std::optional<SegmentWindow> selected_window(const GeometryFile& file, std::optional<std::pair<int, int>> segment)
{
    if (!segment) {
        return std::nullopt;
    }
    const auto* s = std::get_if<BsplineSurface>(&file.payload);
    if (!s) {
        return std::nullopt;
    }
    const auto [e, f] = *segment;
    if (e < s->degree_u() || e >= s->count_u() || f < s->degree_v() || f >= s->count_v()) {
        throw DomainError("segment (" + std::to_string(e) + ", " + std::to_string(f) + ") outside the surface");
    }
    return window_of(*s, e, f);
}

PointMap point_map(const GeometryFile& file, const std::optional<SegmentWindow>& window)
{
    return std::visit(
        [&](const auto& g) -> PointMap {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, BezierNet>) {
                return [&g](double xi, double eta) { return bezier_eval(g, xi, eta); };
            } else if constexpr (std::is_same_v<T, BsplineSurface>) {
                return bspline_map(g, window);
            } else if constexpr (std::is_same_v<T, AncfElement48>) {
                return [&g](double xi, double eta) { return ancf_eval(g, xi * g.a(), eta * g.b()); };
            } else {
                return [&g](double xi, double eta) { return ancf_eval_36(g, xi * g.a(), eta * g.b()); };
            }
        },
        file.payload);
}

std::optional<AncfElement48> as_full_element(const GeometryFile& file)
{
    if (const auto* e = std::get_if<AncfElement48>(&file.payload)) {
        return *e;
    }
    if (const auto* e = std::get_if<AncfElement36>(&file.payload)) {
        return e->expanded();
    }
    return std::nullopt;
}

EdgeMatch edge_match(const AncfElement48& a, const AncfElement48& b)
{
    EdgeMatch m;
    for (Slope s : {Slope::Position, Slope::DX, Slope::DY, Slope::DXY}) {
        m.along_u = std::max({m.along_u, (a.node(Corner::EndU, s) - b.node(Corner::Origin, s)).norm(),
                              (a.node(Corner::Far, s) - b.node(Corner::EndV, s)).norm()});
        m.along_v = std::max({m.along_v, (a.node(Corner::EndV, s) - b.node(Corner::Origin, s)).norm(),
                              (a.node(Corner::Far, s) - b.node(Corner::EndU, s)).norm()});
    }
    return m;
}

std::string corner_label(Corner c)
{
    constexpr std::array<const char*, 4> names{"(0,0)", "(a,0)", "(0,b)", "(a,b)"};
    return names[static_cast<std::size_t>(c)];
}

std::filesystem::path numbered_path(const std::filesystem::path& base, std::pair<int, int> segment)
{
    std::filesystem::path out = base;
    out.replace_filename(base.stem().string() + "_" + std::to_string(segment.first) + "_"
                         + std::to_string(segment.second) + base.extension().string());
    return out;
}

} // namespace

ConvertOutcome convert(const GeometryFile& input, const ConvertOptions& options)
{
    const GeometryKind from = input.kind();
    const GeometryKind to = options.target;
    if (from == to) {
        throw UsageError("input is already of kind '" + std::string(kind_name(to)) + "'");
    }
    if (to == GeometryKind::Bspline) {
        throw UsageError("conversion to 'bspline' is not supported");
    }
    if (from != GeometryKind::Bspline && (options.segment || options.all_segments)) {
        throw UsageError("--segment/--all apply to B-spline input only");
    }
    if (options.segment && options.all_segments) {
        throw UsageError("--segment and --all are mutually exclusive");
    }

    ConvertOutcome outcome;
    switch (from) {
    case GeometryKind::Bezier: {
        const auto& net = std::get<BezierNet>(input.payload);
        convert_element(bezier_to_ancf(net, options.a.value_or(1.0), options.b.value_or(1.0)).element,
                        input.metadata, options, std::nullopt, outcome);
        break;
    }
    case GeometryKind::Bspline: {
        const auto& s = std::get<BsplineSurface>(input.payload);
        std::vector<std::pair<int, int>> segments;
        if (options.all_segments) {
            for (int e : s.segments_u()) {
                for (int f : s.segments_v()) {
                    segments.emplace_back(e, f);
                }
            }
        } else {
            segments.push_back(options.segment ? *options.segment : default_segment(s));
        }
        for (const auto& [e, f] : segments) {
            const std::optional<std::pair<int, int>> tag = std::pair{e, f};
            Metadata meta = input.metadata;
            meta.source = window_of(s, e, f);
            if (to == GeometryKind::Bezier) {
                outcome.converted.push_back(
                    {GeometryFile{segment_to_bezier(s, e, f), derived_metadata(meta, "bezier")}, tag});
                continue;
            }
            const auto conversion = bspline_segment_to_ancf(s, e, f, options.a, options.b);
            convert_element(conversion.element, meta, options, tag, outcome);
        }
        break;
    }
    case GeometryKind::Ancf48: {
        const auto& element = std::get<AncfElement48>(input.payload);
        if (to == GeometryKind::Bezier) {
            outcome.converted.push_back({element_to_bezier(element, input.metadata, options.tol), std::nullopt});
        } else {
            convert_element(element, input.metadata, options, std::nullopt, outcome);
        }
        break;
    }
    case GeometryKind::Ancf36: {
        const AncfElement48 element = std::get<AncfElement36>(input.payload).expanded();
        if (to == GeometryKind::Bezier) {
            outcome.converted.push_back({element_to_bezier(element, input.metadata, options.tol), std::nullopt});
        } else {
            outcome.converted.push_back({GeometryFile{element, derived_metadata(input.metadata, "ancf48")}, std::nullopt});
        }
        break;
    }
    }
    return outcome;
}

CompareReport compare(const GeometryFile& a, const GeometryFile& b, int grid, double tol,
                      std::optional<std::pair<int, int>> segment)
{
    if (grid < 2) {
        throw UsageError("--grid must be at least 2");
    }
    // A B-spline is compared over the span the other file came from, if known.
    auto window_for = [&](const GeometryFile& self, const GeometryFile& other) {
        if (auto w = selected_window(self, segment)) {
            return w;
        }
        return other.metadata.source;
    };
    const auto wa = window_for(a, b);
    const auto wb = window_for(b, a);
    const PointMap fa = point_map(a, wa);
    const PointMap fb = point_map(b, wb);

    CompareReport report;
    report.grid = grid;
    report.tol = tol;
    std::vector<Vec3> samples;
    double total = 0.0;
    for (int s = 0; s < grid; ++s) {
        for (int t = 0; t < grid; ++t) {
            const double xi = static_cast<double>(s) / (grid - 1);
            const double eta = static_cast<double>(t) / (grid - 1);
            const Vec3 pa = fa(xi, eta);
            const double d = (pa - fb(xi, eta)).norm();
            report.max_deviation = std::max(report.max_deviation, d);
            total += d;
            samples.push_back(pa);
        }
    }
    report.mean_deviation = total / (static_cast<double>(grid) * grid);
    const double diag = bounding_box_diagonal(samples);
    report.relative_max = diag > 0.0 ? report.max_deviation / diag : report.max_deviation;
    report.pass = report.max_deviation <= tol;

    const auto ea = as_full_element(a);
    const auto eb = as_full_element(b);
    if (ea && eb) {
        report.edges = edge_match(*ea, *eb);
    }
    return report;
}

std::string to_json(const CompareReport& report)
{
    nlohmann::ordered_json doc;
    doc["grid"] = report.grid;
    doc["max_deviation"] = report.max_deviation;
    doc["mean_deviation"] = report.mean_deviation;
    doc["relative_max_deviation"] = report.relative_max;
    doc["tol"] = report.tol;
    doc["pass"] = report.pass;
    if (report.edges) {
        doc["shared_edge_gap"] = {{"u", report.edges->along_u}, {"v", report.edges->along_v}};
    }
    return doc.dump(2);
}

std::vector<SampleRow> sample(const GeometryFile& input, int grid, std::optional<std::pair<int, int>> segment)
{
    if (grid < 1) {
        throw UsageError("--grid must be positive");
    }
    const PointMap f = point_map(input, selected_window(input, segment));
    std::vector<SampleRow> rows;
    rows.reserve(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
    for (int s = 0; s < grid; ++s) {
        for (int t = 0; t < grid; ++t) {
            const double xi = grid == 1 ? 0.0 : static_cast<double>(s) / (grid - 1);
            const double eta = grid == 1 ? 0.0 : static_cast<double>(t) / (grid - 1);
            rows.push_back({xi, eta, f(xi, eta)});
        }
    }
    return rows;
}

void write_samples(const std::vector<SampleRow>& rows, std::ostream& out)
{
    out << "xi,eta,x,y,z\n";
    char line[256];
    for (const SampleRow& r : rows) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.xi, r.eta, r.point.x(), r.point.y(),
                      r.point.z());
        out << line;
    }
}

ParallelogramCheck check_polygon(const GeometryFile& input, double tol, std::optional<std::pair<int, int>> segment)
{
    if (const auto* net = std::get_if<BezierNet>(&input.payload)) {
        return check_parallelogram(elevate_to_bicubic(*net), tol);
    }
    if (const auto* s = std::get_if<BsplineSurface>(&input.payload)) {
        const auto [e, f] = segment ? *segment : default_segment(*s);
        return check_parallelogram(elevate_to_bicubic(segment_to_bezier(*s, e, f)), tol);
    }
    throw UsageError("check-polygon needs a bezier or bspline file");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"ancfkit: Bezier / B-spline to ANCF plate element conversion"};
    app.name("ancfkit");
    app.require_subcommand(1);

    std::string in_path, out_path, other_path, to_kind, segment_text;
    double a = 0.0, b = 0.0;
    double convert_tol = 1e-9, compare_tol = 1e-10, check_tol = 1e-12;
    int grid = 11;
    bool all = false;

    auto* convert_cmd = app.add_subcommand("convert", "Convert a geometry file to another representation");
    convert_cmd->add_option("--to", to_kind, "Target kind: ancf48, ancf36 or bezier")->required();
    auto* a_opt = convert_cmd->add_option("--a", a, "Element length (default: span length, 1 for Bezier)");
    auto* b_opt = convert_cmd->add_option("--b", b, "Element width (default: span length, 1 for Bezier)");
    auto* seg_opt = convert_cmd->add_option("--segment", segment_text, "B-spline span as e,f (left-knot indices)");
    auto* all_opt = convert_cmd->add_flag("--all", all, "Convert every B-spline span");
    seg_opt->excludes(all_opt);
    convert_cmd->add_option("--tol", convert_tol, "Relative tolerance for reduction checks")->capture_default_str();
    convert_cmd->add_option("input", in_path)->required();
    convert_cmd->add_option("output", out_path)->required();

    auto* compare_cmd = app.add_subcommand("compare", "Pointwise deviation of two geometries on a common grid");
    compare_cmd->add_option("--grid", grid, "Samples per direction")->default_val(11);
    compare_cmd->add_option("--tol", compare_tol, "Absolute pass threshold on the maximum deviation")->capture_default_str();
    auto* cmp_seg = compare_cmd->add_option("--segment", segment_text, "B-spline span as e,f");
    compare_cmd->add_option("A", in_path)->required();
    compare_cmd->add_option("B", other_path)->required();

    auto* check_cmd = app.add_subcommand("check-polygon", "Test the corner parallelogram condition");
    check_cmd->add_option("--tol", check_tol, "Tolerance relative to the net's bounding-box diagonal")->capture_default_str();
    auto* chk_seg = check_cmd->add_option("--segment", segment_text, "B-spline span as e,f");
    check_cmd->add_option("input", in_path)->required();

    auto* sample_cmd = app.add_subcommand("sample", "Dump xi,eta,x,y,z rows on a grid");
    sample_cmd->add_option("--grid", grid, "Samples per direction")->default_val(11);
    auto* smp_seg = sample_cmd->add_option("--segment", segment_text, "B-spline span as e,f");
    sample_cmd->add_option("input", in_path)->required();
    sample_cmd->add_option("output", out_path)->required();

    std::vector<std::string> argv_storage{"ancfkit"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) {
        argv.push_back(s.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    auto segment_from = [&](CLI::Option* opt) -> std::optional<std::pair<int, int>> {
        if (opt->count() == 0) {
            return std::nullopt;
        }
        return parse_segment(segment_text);
    };

    try {
        if (convert_cmd->parsed()) {
            ConvertOptions options;
            const auto target = parse_kind(to_kind);
            if (!target) {
                throw UsageError("unknown target kind '" + to_kind + "'");
            }
            options.target = *target;
            if (a_opt->count() > 0) {
                options.a = a;
            }
            if (b_opt->count() > 0) {
                options.b = b;
            }
            options.segment = segment_from(seg_opt);
            options.all_segments = all;
            options.tol = convert_tol;

            const GeometryFile input = load(in_path);
            const ConvertOutcome outcome = convert(input, options);
            const bool numbered = outcome.converted.size() + outcome.failures.size() > 1;
            for (const auto& item : outcome.converted) {
                const std::filesystem::path path =
                    numbered && item.segment ? numbered_path(out_path, *item.segment) : std::filesystem::path(out_path);
                save(item.file, path);
                out << "wrote " << path.string() << "\n";
            }
            for (const auto& failure : outcome.failures) {
                if (failure.segment) {
                    err << "segment " << failure.segment->first << "," << failure.segment->second << ": ";
                }
                err << "mixed slopes above tolerance:";
                for (std::size_t k = 0; k < failure.corners.size(); ++k) {
                    err << " " << corner_label(failure.corners[k]) << "=" << failure.norms[k];
                }
                err << "\n";
            }
            return outcome.failures.empty() ? kExitOk : kExitTolerance;
        }
        if (compare_cmd->parsed()) {
            const CompareReport report = compare(load(in_path), load(other_path), grid, compare_tol, segment_from(cmp_seg));
            out << to_json(report) << "\n";
            return report.pass ? kExitOk : kExitTolerance;
        }
        if (check_cmd->parsed()) {
            const ParallelogramCheck check = check_polygon(load(in_path), check_tol, segment_from(chk_seg));
            nlohmann::ordered_json doc;
            doc["satisfied"] = check.satisfied;
            for (std::size_t k = 0; k < 4; ++k) {
                doc["residuals"][corner_label(kCorners[k])] = check.residuals[k];
            }
            out << doc.dump(2) << "\n";
            return check.satisfied ? kExitOk : kExitTolerance;
        }
        if (sample_cmd->parsed()) {
            const auto rows = sample(load(in_path), grid, segment_from(smp_seg));
            std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
            if (!file) {
                throw ParseError("cannot write '" + out_path + "'");
            }
            write_samples(rows, file);
            return file ? kExitOk : kExitInvalid;
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const DomainError& e) {
        err << "invalid geometry: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const InvalidOperation& e) {
        err << "invalid operation: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitUsage;
}

} // namespace ancfkit::cli
