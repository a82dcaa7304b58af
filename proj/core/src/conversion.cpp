#include "ancfkit/conversion.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace ancfkit {
namespace {

constexpr std::array<Slope, 4> kSlopeFromParity{Slope::Position, Slope::DX, Slope::DY, Slope::DXY};

std::vector<Slope> full_row_kinds()
{
    std::vector<Slope> kinds(16);
    for (int q = 0; q < 4; ++q) {
        for (int p = 0; p < 4; ++p) {
            kinds[static_cast<std::size_t>(4 * q + p)] = kSlopeFromParity[static_cast<std::size_t>((p & 1) + 2 * (q & 1))];
        }
    }
    return kinds;
}

void check_length(double length, const char* what)
{
    if (!(length > 0.0) || !std::isfinite(length)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

std::array<Vec3, 16> to_nodes(const std::vector<Vec3>& stacked)
{
    std::array<Vec3, 16> nodes;
    std::copy(stacked.begin(), stacked.end(), nodes.begin());
    return nodes;
}

std::string corner_name(Corner c)
{
    switch (c) {
    case Corner::Origin: return "(0,0)";
    case Corner::EndU: return "(a,0)";
    case Corner::EndV: return "(0,b)";
    case Corner::Far: return "(a,b)";
    }
    return "?";
}

std::string rejection_message(const std::vector<Corner>& corners, const std::vector<double>& norms)
{
    std::ostringstream out;
    out << "mixed slopes exceed tolerance at";
    for (std::size_t k = 0; k < corners.size(); ++k) {
        out << (k == 0 ? " " : ", ") << corner_name(corners[k]) << " |r_xy|=" << norms[k];
    }
    return out.str();
}

} // namespace

std::vector<Vec3> TransformMatrix::apply(std::span<const Vec3> control_points) const
{
    if (static_cast<Eigen::Index>(control_points.size()) != weights.cols()) {
        throw DomainError("transform expects " + std::to_string(weights.cols()) + " control points, got "
                          + std::to_string(control_points.size()));
    }
    std::vector<Vec3> out(static_cast<std::size_t>(weights.rows()), Vec3::Zero());
    for (Eigen::Index r = 0; r < weights.rows(); ++r) {
        for (Eigen::Index c = 0; c < weights.cols(); ++c) {
            out[static_cast<std::size_t>(r)] += weights(r, c) * control_points[static_cast<std::size_t>(c)];
        }
    }
    return out;
}

TransformMatrix TransformMatrix::reduced() const
{
    if (weights.rows() != 16) {
        throw InvalidOperation("only a 16-row transform can be reduced");
    }
    TransformMatrix out = *this;
    out.weights.resize(12, weights.cols());
    out.row_kinds.clear();
    for (std::size_t k = 0; k < kReducedNodes.size(); ++k) {
        out.weights.row(static_cast<Eigen::Index>(k)) = weights.row(kReducedNodes[k]);
        out.row_kinds.push_back(row_kinds[static_cast<std::size_t>(kReducedNodes[k])]);
    }
    return out;
}

Eigen::MatrixXd bezier_endpoint_map(int degree, double length)
{
    check_length(length, "element length");
    Eigen::MatrixXd map(4, degree + 1);
    for (int i = 0; i <= degree; ++i) {
        map(0, i) = bernstein_basis(i, degree, 0.0);
        map(1, i) = bernstein_derivative(i, degree, 0.0) / length;
        map(2, i) = bernstein_basis(i, degree, 1.0);
        map(3, i) = bernstein_derivative(i, degree, 1.0) / length;
    }
    return map;
}

Eigen::MatrixXd bspline_endpoint_map(const KnotVector& knots, int degree, int alpha, double length)
{
    check_length(length, "element length");
    const SegmentBasisTable table = endpoint_tables(knots, degree, alpha);
    const double span = knots[static_cast<std::size_t>(alpha) + 1] - knots[static_cast<std::size_t>(alpha)];
    // d/dx = d/dlambda * dlambda/dxi * dxi/dx = d/dlambda * span / length
    const double scale = span / length;
    Eigen::MatrixXd map(4, degree + 1);
    map.row(0) = table.values_start.transpose();
    map.row(1) = scale * table.derivs_start.transpose();
    map.row(2) = table.values_end.transpose();
    map.row(3) = scale * table.derivs_end.transpose();
    return map;
}

Eigen::MatrixXd tensor_transform(const Eigen::MatrixXd& map_u, const Eigen::MatrixXd& map_v)
{
    const Eigen::Index nu = map_u.cols();
    const Eigen::Index nv = map_v.cols();
    Eigen::MatrixXd t(16, nu * nv);
    for (Eigen::Index q = 0; q < 4; ++q) {
        for (Eigen::Index p = 0; p < 4; ++p) {
            for (Eigen::Index i = 0; i < nu; ++i) {
                for (Eigen::Index j = 0; j < nv; ++j) {
                    t(4 * q + p, i * nv + j) = map_u(p, i) * map_v(q, j);
                }
            }
        }
    }
    return t;
}

Conversion bezier_to_ancf(const BezierNet& net, double a, double b)
{
    TransformMatrix transform;
    transform.weights = tensor_transform(bezier_endpoint_map(net.degree_u(), a),
                                         bezier_endpoint_map(net.degree_v(), b));
    transform.row_kinds = full_row_kinds();
    transform.degree_u = net.degree_u();
    transform.degree_v = net.degree_v();
    transform.a = a;
    transform.b = b;
    AncfElement48 element(a, b, to_nodes(transform.apply(net.points())));
    return {std::move(element), std::move(transform)};
}

Conversion bspline_segment_to_ancf(const BsplineSurface& surface, int e, int f, std::optional<double> a,
                                   std::optional<double> b)
{
    const int p = surface.degree_u();
    const int q = surface.degree_v();
    if (e < p || e >= surface.count_u() || f < q || f >= surface.count_v()) {
        throw DomainError("segment (" + std::to_string(e) + ", " + std::to_string(f)
                          + ") outside the surface's valid range");
    }
    const KnotVector& ku = surface.knots_u();
    const KnotVector& kv = surface.knots_v();
    SegmentWindow window{e, f, ku[static_cast<std::size_t>(e)], ku[static_cast<std::size_t>(e) + 1],
                         kv[static_cast<std::size_t>(f)], kv[static_cast<std::size_t>(f) + 1]};
    const double length = a.value_or(window.u1 - window.u0);
    const double width = b.value_or(window.v1 - window.v0);

    TransformMatrix transform;
    transform.weights = tensor_transform(bspline_endpoint_map(ku, p, e, length),
                                         bspline_endpoint_map(kv, q, f, width));
    transform.row_kinds = full_row_kinds();
    transform.degree_u = p;
    transform.degree_v = q;
    transform.a = length;
    transform.b = width;
    transform.window = window;

    std::vector<Vec3> window_points;
    window_points.reserve(static_cast<std::size_t>((p + 1) * (q + 1)));
    for (int i = e - p; i <= e; ++i) {
        for (int j = f - q; j <= f; ++j) {
            window_points.push_back(surface.at(i, j));
        }
    }
    AncfElement48 element(length, width, to_nodes(transform.apply(window_points)));
    return {std::move(element), std::move(transform)};
}

ParallelogramCheck check_parallelogram(const BezierNet& net, double tol)
{
    if (net.degree_u() != 3 || net.degree_v() != 3) {
        throw DomainError("parallelogram check needs a bicubic net");
    }
    // Corner (ci, cj) with inward neighbours (ni, nj).
    struct CornerStencil {
        int ci, cj, ni, nj;
    };
    constexpr std::array<CornerStencil, 4> stencils{{{0, 0, 1, 1}, {3, 0, 2, 1}, {0, 3, 1, 2}, {3, 3, 2, 2}}};

    ParallelogramCheck check;
    const double allowed = tol * bounding_box_diagonal(net.points());
    check.satisfied = true;
    for (std::size_t k = 0; k < stencils.size(); ++k) {
        const auto& s = stencils[k];
        const Vec3 defect = net.at(s.ci, s.cj) + net.at(s.ni, s.nj) - net.at(s.ni, s.cj) - net.at(s.ci, s.nj);
        check.residuals[k] = defect.norm();
        if (!(check.residuals[k] <= allowed)) {
            check.satisfied = false;
        }
    }
    return check;
}

ReductionRejected::ReductionRejected(std::vector<Corner> corners, std::vector<double> norms)
    : std::runtime_error(rejection_message(corners, norms)), corners_(std::move(corners)), norms_(std::move(norms))
{
}

std::array<double, 4> mixed_slope_norms(const AncfElement48& elem)
{
    std::array<double, 4> norms{};
    for (std::size_t k = 0; k < kCorners.size(); ++k) {
        norms[k] = elem.node(kCorners[k], Slope::DXY).norm();
    }
    return norms;
}

AncfElement36 reduce_element(const AncfElement48& elem, double tol)
{
    std::array<Vec3, 4> corners;
    for (std::size_t k = 0; k < kCorners.size(); ++k) {
        corners[k] = elem.node(kCorners[k], Slope::Position);
    }
    double scale = bounding_box_diagonal(corners);
    if (scale == 0.0) {
        scale = 1.0;
    }
    const double area = elem.a() * elem.b();
    const auto norms = mixed_slope_norms(elem);

    std::vector<Corner> bad;
    std::vector<double> bad_norms;
    for (std::size_t k = 0; k < kCorners.size(); ++k) {
        if (!(norms[k] * area <= tol * scale)) {
            bad.push_back(kCorners[k]);
            bad_norms.push_back(norms[k]);
        }
    }
    if (!bad.empty()) {
        throw ReductionRejected(std::move(bad), std::move(bad_norms));
    }

    std::array<Vec3, 12> nodes;
    for (std::size_t k = 0; k < kReducedNodes.size(); ++k) {
        nodes[k] = elem.nodes()[static_cast<std::size_t>(kReducedNodes[k])];
    }
    return AncfElement36(elem.a(), elem.b(), nodes);
}

namespace {

// Bernstein coefficients of a cubic from Hermite data (value, slope, value, slope)
// over a physical length.
Eigen::Matrix4d hermite_to_bernstein(double length)
{
    const double h = length / 3.0;
    Eigen::Matrix4d m;
    m << 1.0, 0.0, 0.0, 0.0,
         1.0, h, 0.0, 0.0,
         0.0, 0.0, 1.0, -h,
         0.0, 0.0, 1.0, 0.0;
    return m;
}

} // namespace

Eigen::MatrixXd inverse_transform(double a, double b)
{
    check_length(a, "element length");
    check_length(b, "element width");
    const Eigen::Matrix4d hu = hermite_to_bernstein(a);
    const Eigen::Matrix4d hv = hermite_to_bernstein(b);
    Eigen::MatrixXd inv(16, 16);
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            for (int q = 0; q < 4; ++q) {
                for (int p = 0; p < 4; ++p) {
                    inv(4 * i + j, 4 * q + p) = hu(i, p) * hv(j, q);
                }
            }
        }
    }
    return inv;
}

BezierNet ancf_to_bezier(const AncfElement48& elem)
{
    const Eigen::MatrixXd inv = inverse_transform(elem.a(), elem.b());
    std::vector<Vec3> points(16, Vec3::Zero());
    for (Eigen::Index r = 0; r < 16; ++r) {
        for (Eigen::Index c = 0; c < 16; ++c) {
            points[static_cast<std::size_t>(r)] += inv(r, c) * elem.nodes()[static_cast<std::size_t>(c)];
        }
    }
    return BezierNet(3, 3, std::move(points));
}

namespace {

// (to + 1) x (from + 1) matrix taking degree-`from` Bernstein coefficients to degree `to`.
Eigen::MatrixXd elevation_matrix(int from, int to)
{
    Eigen::MatrixXd total = Eigen::MatrixXd::Identity(from + 1, from + 1);
    for (int m = from; m < to; ++m) {
        Eigen::MatrixXd step = Eigen::MatrixXd::Zero(m + 2, m + 1);
        for (int r = 0; r <= m + 1; ++r) {
            const double w = static_cast<double>(r) / (m + 1);
            if (r >= 1) {
                step(r, r - 1) = w;
            }
            if (r <= m) {
                step(r, r) = 1.0 - w;
            }
        }
        total = step * total;
    }
    return total;
}

// Transposes the net so that the requested direction becomes u.
BezierNet transposed(const BezierNet& net)
{
    std::vector<Vec3> points;
    points.reserve(net.points().size());
    for (int j = 0; j <= net.degree_v(); ++j) {
        for (int i = 0; i <= net.degree_u(); ++i) {
            points.push_back(net.at(i, j));
        }
    }
    return BezierNet(net.degree_v(), net.degree_u(), std::move(points));
}

// Exact reduction along u; nullopt when `target` cannot reproduce the net.
std::optional<BezierNet> reduce_u(const BezierNet& net, int target, double allowed)
{
    const int m = net.degree_u();
    const Eigen::MatrixXd elevate = elevation_matrix(target, m);
    const auto solver = elevate.colPivHouseholderQr();
    std::vector<Vec3> points(static_cast<std::size_t>((target + 1) * net.count_v()));
    for (int j = 0; j < net.count_v(); ++j) {
        Eigen::MatrixXd line(m + 1, 3);
        for (int i = 0; i <= m; ++i) {
            line.row(i) = net.at(i, j).transpose();
        }
        const Eigen::MatrixXd reduced = solver.solve(line);
        if ((elevate * reduced - line).cwiseAbs().maxCoeff() > allowed) {
            return std::nullopt;
        }
        for (int i = 0; i <= target; ++i) {
            points[static_cast<std::size_t>(i * net.count_v() + j)] = reduced.row(i).transpose();
        }
    }
    BezierNet candidate(target, net.degree_v(), std::move(points));
    constexpr int kSamples = 5;
    for (int s = 0; s < kSamples; ++s) {
        for (int t = 0; t < kSamples; ++t) {
            const double u = static_cast<double>(s) / (kSamples - 1);
            const double v = static_cast<double>(t) / (kSamples - 1);
            if ((bezier_eval(candidate, u, v) - bezier_eval(net, u, v)).norm() > allowed) {
                return std::nullopt;
            }
        }
    }
    return candidate;
}

BezierNet lowest_degree_u(const BezierNet& net, double allowed)
{
    for (int target = 1; target < net.degree_u(); ++target) {
        if (auto reduced = reduce_u(net, target, allowed)) {
            return *reduced;
        }
    }
    return net;
}

} // namespace

BezierNet degree_reduce_exact(const BezierNet& net, double tol)
{
    double scale = bounding_box_diagonal(net.points());
    if (scale == 0.0) {
        // Constant net: measure against the coordinate magnitude instead.
        scale = std::max(1.0, net.points().front().cwiseAbs().maxCoeff());
    }
    const double allowed = tol * scale;
    const BezierNet along_u = lowest_degree_u(net, allowed);
    return transposed(lowest_degree_u(transposed(along_u), allowed));
}

} // namespace ancfkit
