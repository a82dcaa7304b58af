#include "ancfkit/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ancfkit {
namespace {

void check_degree(int degree)
{
    if (degree < 1 || degree > 3) {
        throw DomainError("B-spline degree must be in 1..3, got " + std::to_string(degree));
    }
}

// 0/0 = 0, as in the recursive definition.
double ratio(double num, double den)
{
    return den == 0.0 ? 0.0 : num / den;
}

// The closed forms on span alpha read knots alpha-degree+1 .. alpha+degree.
void check_window(const KnotVector& knots, int degree, int alpha)
{
    check_degree(degree);
    const long first = static_cast<long>(alpha) - degree + 1;
    const long last = static_cast<long>(alpha) + degree;
    const long available = static_cast<long>(knots.size()) - 1;
    if (first < 0 || last > available) {
        throw DomainError("span " + std::to_string(alpha) + " of degree " + std::to_string(degree)
                          + " needs knots " + std::to_string(first) + ".." + std::to_string(last)
                          + " but only 0.." + std::to_string(available) + " exist");
    }
    const auto a = static_cast<std::size_t>(alpha);
    if (!(knots[a + 1] > knots[a])) {
        throw DomainError("span " + std::to_string(alpha) + " is degenerate (zero length)");
    }
}

// Shorthand for the local knot differences on span alpha:
//   F(b) = k_{alpha+b} - t,  G(m) = t - k_{alpha+m},  H(b, g) = k_{alpha+b} - k_{alpha+g}.
struct SpanTerms {
    const KnotVector& knots;
    int alpha;
    double t;

    double k(int offset) const { return knots[static_cast<std::size_t>(alpha + offset)]; }
    double F(int b) const { return k(b) - t; }
    double G(int m) const { return t - k(m); }
    double H(int b, int g) const { return k(b) - k(g); }
};

} // namespace

KnotVector::KnotVector(std::vector<double> knots) : knots_(std::move(knots))
{
    if (knots_.size() < 2) {
        throw DomainError("knot vector needs at least two knots");
    }
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i])) {
            throw DomainError("knot " + std::to_string(i) + " is not finite");
        }
        if (i > 0 && knots_[i] < knots_[i - 1]) {
            throw DomainError("knot vector decreases at index " + std::to_string(i));
        }
    }
}

int KnotVector::find_segment(double t, int first, int last) const
{
    if (first < 0 || last < first || static_cast<std::size_t>(last) + 1 >= knots_.size()) {
        throw DomainError("invalid span search range");
    }
    const auto lo = static_cast<std::size_t>(first);
    const auto hi = static_cast<std::size_t>(last);
    if (!(t >= knots_[lo] && t <= knots_[hi + 1])) {
        throw DomainError("parameter " + std::to_string(t) + " outside [" + std::to_string(knots_[lo]) + ", "
                          + std::to_string(knots_[hi + 1]) + "]");
    }
    for (std::size_t a = lo; a <= hi; ++a) {
        if (knots_[a] <= t && t < knots_[a + 1]) {
            return static_cast<int>(a);
        }
    }
    // t sits on the right end; take the last non-degenerate span.
    for (std::size_t a = hi + 1; a-- > lo;) {
        if (knots_[a + 1] > knots_[a]) {
            return static_cast<int>(a);
        }
    }
    throw DomainError("no non-degenerate span in search range");
}

BsplineSurface::BsplineSurface(int degree_u, int degree_v, int count_u, int count_v, std::vector<Vec3> points,
                               KnotVector knots_u, KnotVector knots_v)
    : degree_u_(degree_u), degree_v_(degree_v), count_u_(count_u), count_v_(count_v),
      points_(std::move(points)), knots_u_(std::move(knots_u)), knots_v_(std::move(knots_v))
{
    check_degree(degree_u_);
    check_degree(degree_v_);
    if (count_u_ < degree_u_ + 1 || count_v_ < degree_v_ + 1) {
        throw DomainError("B-spline needs at least degree+1 control points per direction");
    }
    if (points_.size() != static_cast<std::size_t>(count_u_) * static_cast<std::size_t>(count_v_)) {
        throw DomainError("B-spline control grid size does not match count_u x count_v");
    }
    if (knots_u_.size() != static_cast<std::size_t>(count_u_ + degree_u_ + 1)) {
        throw DomainError("knots_u must have count_u + degree_u + 1 entries");
    }
    if (knots_v_.size() != static_cast<std::size_t>(count_v_ + degree_v_ + 1)) {
        throw DomainError("knots_v must have count_v + degree_v + 1 entries");
    }
    if (!all_finite(points_)) {
        throw DomainError("B-spline has non-finite control point coordinates");
    }
    if (!(u_max() > u_min()) || !(v_max() > v_min())) {
        throw DomainError("B-spline valid parameter rectangle has zero area");
    }
}

const Vec3& BsplineSurface::at(int i, int j) const
{
    if (i < 0 || i >= count_u_ || j < 0 || j >= count_v_) {
        throw DomainError("control point index out of range");
    }
    return points_[static_cast<std::size_t>(i) * static_cast<std::size_t>(count_v_) + static_cast<std::size_t>(j)];
}

Vec3& BsplineSurface::at(int i, int j)
{
    return const_cast<Vec3&>(std::as_const(*this).at(i, j));
}

namespace {

std::vector<int> live_segments(const KnotVector& knots, int degree, int count)
{
    std::vector<int> result;
    for (int a = degree; a < count; ++a) {
        if (knots[static_cast<std::size_t>(a) + 1] > knots[static_cast<std::size_t>(a)]) {
            result.push_back(a);
        }
    }
    return result;
}

} // namespace

std::vector<int> BsplineSurface::segments_u() const
{
    return live_segments(knots_u_, degree_u_, count_u_);
}

std::vector<int> BsplineSurface::segments_v() const
{
    return live_segments(knots_v_, degree_v_, count_v_);
}

double cox_de_boor(const KnotVector& knots, int i, int degree, double t)
{
    if (degree < 0 || i < 0 || static_cast<std::size_t>(i) + static_cast<std::size_t>(degree) + 1 >= knots.size()) {
        throw DomainError("basis index (" + std::to_string(i) + ", " + std::to_string(degree) + ") out of range");
    }
    const auto a = static_cast<std::size_t>(i);
    if (degree == 0) {
        const double lo = knots[a];
        const double hi = knots[a + 1];
        if (lo <= t && t < hi) {
            return 1.0;
        }
        const bool last_live_span = lo < hi && hi == knots[knots.size() - 1];
        return (last_live_span && t == hi) ? 1.0 : 0.0;
    }
    const auto p = static_cast<std::size_t>(degree);
    const double left = ratio(t - knots[a], knots[a + p] - knots[a]);
    const double right = ratio(knots[a + p + 1] - t, knots[a + p + 1] - knots[a + 1]);
    double value = 0.0;
    if (left != 0.0) {
        value += left * cox_de_boor(knots, i, degree - 1, t);
    }
    if (right != 0.0) {
        value += right * cox_de_boor(knots, i + 1, degree - 1, t);
    }
    return value;
}

Eigen::VectorXd segment_basis(const KnotVector& knots, int degree, int alpha, double t)
{
    check_window(knots, degree, alpha);
    const SpanTerms s{knots, alpha, t};
    Eigen::VectorXd out(degree + 1);
    switch (degree) {
    case 1:
        out << ratio(s.F(1), s.H(1, 0)), ratio(s.G(0), s.H(1, 0));
        break;
    case 2: {
        const double e0 = s.H(1, -1) * s.H(1, 0);
        const double e1 = s.H(2, 0) * s.H(1, 0);
        out << ratio(s.F(1) * s.F(1), e0),
            ratio(s.F(1) * s.G(-1), e0) + ratio(s.F(2) * s.G(0), e1),
            ratio(s.G(0) * s.G(0), e1);
        break;
    }
    default: {
        const double d0 = s.H(1, -2) * s.H(1, -1) * s.H(1, 0);
        const double d1 = s.H(2, -1) * s.H(1, -1) * s.H(1, 0);
        const double d2 = s.H(2, -1) * s.H(2, 0) * s.H(1, 0);
        const double d3 = s.H(3, 0) * s.H(2, 0) * s.H(1, 0);
        const double f1 = s.F(1), f2 = s.F(2), f3 = s.F(3);
        const double gm2 = s.G(-2), gm1 = s.G(-1), g0 = s.G(0);
        out << ratio(f1 * f1 * f1, d0),
            ratio(f1 * f1 * gm2, d0) + ratio(f1 * f2 * gm1, d1) + ratio(f2 * f2 * g0, d2),
            ratio(f1 * gm1 * gm1, d1) + ratio(f2 * g0 * gm1, d2) + ratio(f3 * g0 * g0, d3),
            ratio(g0 * g0 * g0, d3);
        break;
    }
    }
    return out;
}

Eigen::VectorXd segment_basis_derivative(const KnotVector& knots, int degree, int alpha, double t)
{
    check_window(knots, degree, alpha);
    const SpanTerms s{knots, alpha, t};
    Eigen::VectorXd out(degree + 1);
    // dF/dt = -1 and dG/dt = +1.
    switch (degree) {
    case 1:
        out << ratio(-1.0, s.H(1, 0)), ratio(1.0, s.H(1, 0));
        break;
    case 2: {
        const double e0 = s.H(1, -1) * s.H(1, 0);
        const double e1 = s.H(2, 0) * s.H(1, 0);
        out << ratio(-2.0 * s.F(1), e0),
            ratio(s.F(1) - s.G(-1), e0) + ratio(s.F(2) - s.G(0), e1),
            ratio(2.0 * s.G(0), e1);
        break;
    }
    default: {
        const double d0 = s.H(1, -2) * s.H(1, -1) * s.H(1, 0);
        const double d1 = s.H(2, -1) * s.H(1, -1) * s.H(1, 0);
        const double d2 = s.H(2, -1) * s.H(2, 0) * s.H(1, 0);
        const double d3 = s.H(3, 0) * s.H(2, 0) * s.H(1, 0);
        const double f1 = s.F(1), f2 = s.F(2), f3 = s.F(3);
        const double gm2 = s.G(-2), gm1 = s.G(-1), g0 = s.G(0);
        out << ratio(-3.0 * f1 * f1, d0),
            ratio(f1 * f1 - 2.0 * f1 * gm2, d0) + ratio(f1 * f2 - f2 * gm1 - f1 * gm1, d1)
                + ratio(f2 * f2 - 2.0 * f2 * g0, d2),
            ratio(2.0 * f1 * gm1 - gm1 * gm1, d1) + ratio(f2 * gm1 + f2 * g0 - g0 * gm1, d2)
                + ratio(2.0 * f3 * g0 - g0 * g0, d3),
            ratio(3.0 * g0 * g0, d3);
        break;
    }
    }
    return out;
}

SegmentBasisTable endpoint_tables(const KnotVector& knots, int degree, int alpha)
{
    check_window(knots, degree, alpha);
    const SpanTerms s{knots, alpha, 0.0};
    auto H = [&](int b, int g) { return s.H(b, g); };

    SegmentBasisTable table;
    table.degree = degree;
    table.values_start.resize(degree + 1);
    table.values_end.resize(degree + 1);
    table.derivs_start.resize(degree + 1);
    table.derivs_end.resize(degree + 1);

    switch (degree) {
    case 1: {
        const double h = H(1, 0);
        table.values_start << 1.0, 0.0;
        table.values_end << 0.0, 1.0;
        table.derivs_start << -1.0 / h, 1.0 / h;
        table.derivs_end << -1.0 / h, 1.0 / h;
        break;
    }
    case 2: {
        const double h1m1 = H(1, -1);
        const double h20 = H(2, 0);
        table.values_start << H(1, 0) / h1m1, H(0, -1) / h1m1, 0.0;
        table.derivs_start << -2.0 / h1m1, 2.0 / h1m1, 0.0;
        table.values_end << 0.0, H(2, 1) / h20, H(1, 0) / h20;
        table.derivs_end << 0.0, -2.0 / h20, 2.0 / h20;
        break;
    }
    default: {
        // Start of span: theta_3, theta_2, theta_1 and their derivatives.
        const double a = H(1, -2) * H(1, -1);
        const double b = H(2, -1) * H(1, -1);
        const double theta3 = H(1, 0) * H(1, 0) / a;
        const double theta2 = H(0, -2) * H(1, 0) / a + H(0, -1) * H(2, 0) / b;
        const double theta1 = H(0, -1) * H(0, -1) / b;
        const double theta_d3 = -3.0 * H(1, 0) / a;
        const double theta_d2 = (H(1, 0) - 2.0 * H(0, -2)) / a + (H(-1, 0) + 2.0 * H(2, 0)) / b;
        const double theta_d1 = 3.0 * H(0, -1) / b;

        // End of span: phi_2, phi_1, phi_0 and their derivatives.
        const double c = H(2, -1) * H(2, 0);
        const double d = H(3, 0) * H(2, 0);
        const double phi2 = H(2, 1) * H(2, 1) / c;
        const double phi1 = H(1, -1) * H(2, 1) / c + H(3, 1) * H(1, 0) / d;
        const double phi0 = H(1, 0) * H(1, 0) / d;
        const double phi_d2 = -3.0 * H(2, 1) / c;
        const double phi_d1 = (H(2, 1) - 2.0 * H(1, -1)) / c + (2.0 * H(3, 1) - H(1, 0)) / d;
        const double phi_d0 = 3.0 * H(1, 0) / d;

        table.values_start << theta3, theta2, theta1, 0.0;
        table.derivs_start << theta_d3, theta_d2, theta_d1, 0.0;
        table.values_end << 0.0, phi2, phi1, phi0;
        table.derivs_end << 0.0, phi_d2, phi_d1, phi_d0;
        break;
    }
    }
    return table;
}

Vec3 bspline_eval(const BsplineSurface& surface, double u, double v)
{
    if (!(u >= surface.u_min() && u <= surface.u_max() && v >= surface.v_min() && v <= surface.v_max())) {
        throw DomainError("parameter (" + std::to_string(u) + ", " + std::to_string(v)
                          + ") outside the valid rectangle");
    }
    const int p = surface.degree_u();
    const int q = surface.degree_v();
    const int e = surface.knots_u().find_segment(u, p, surface.count_u() - 1);
    const int f = surface.knots_v().find_segment(v, q, surface.count_v() - 1);
    const Eigen::VectorXd nu = segment_basis(surface.knots_u(), p, e, u);
    const Eigen::VectorXd nv = segment_basis(surface.knots_v(), q, f, v);
    Vec3 result = Vec3::Zero();
    for (int r = 0; r <= p; ++r) {
        for (int s = 0; s <= q; ++s) {
            result += surface.at(e - p + r, f - q + s) * (nu[r] * nv[s]);
        }
    }
    return result;
}

Eigen::MatrixXd bezier_extraction(const KnotVector& knots, int degree, int alpha)
{
    check_window(knots, degree, alpha);
    const auto k = [&](int idx) { return knots[static_cast<std::size_t>(idx)]; };

    Eigen::MatrixXd extraction(degree + 1, degree + 1);
    for (int row = 0; row <= degree; ++row) {
        // Blossom arguments: (degree - row) copies of the left knot, row copies of the right.
        std::vector<double> args(static_cast<std::size_t>(degree - row), k(alpha));
        args.insert(args.end(), static_cast<std::size_t>(row), k(alpha + 1));

        // de Boor triangle carried out on weight vectors instead of points.
        std::vector<Eigen::RowVectorXd> d;
        for (int s = 0; s <= degree; ++s) {
            d.push_back(Eigen::RowVectorXd::Unit(degree + 1, s));
        }
        for (int level = 1; level <= degree; ++level) {
            const double x = args[static_cast<std::size_t>(level - 1)];
            for (int s = degree; s >= level; --s) {
                const int i = alpha - degree + s;
                const double w = (x - k(i)) / (k(i + degree + 1 - level) - k(i));
                d[static_cast<std::size_t>(s)] = (1.0 - w) * d[static_cast<std::size_t>(s - 1)]
                                                 + w * d[static_cast<std::size_t>(s)];
            }
        }
        extraction.row(row) = d[static_cast<std::size_t>(degree)];
    }
    return extraction;
}

namespace {

void check_surface_segment(const BsplineSurface& surface, int e, int f)
{
    if (e < surface.degree_u() || e >= surface.count_u()) {
        throw DomainError("segment index e=" + std::to_string(e) + " outside " + std::to_string(surface.degree_u())
                          + ".." + std::to_string(surface.count_u() - 1));
    }
    if (f < surface.degree_v() || f >= surface.count_v()) {
        throw DomainError("segment index f=" + std::to_string(f) + " outside " + std::to_string(surface.degree_v())
                          + ".." + std::to_string(surface.count_v() - 1));
    }
}

} // namespace

BezierNet segment_to_bezier(const BsplineSurface& surface, int e, int f)
{
    check_surface_segment(surface, e, f);
    const int p = surface.degree_u();
    const int q = surface.degree_v();
    const Eigen::MatrixXd xu = bezier_extraction(surface.knots_u(), p, e);
    const Eigen::MatrixXd xv = bezier_extraction(surface.knots_v(), q, f);

    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>((p + 1) * (q + 1)));
    for (int r = 0; r <= p; ++r) {
        for (int s = 0; s <= q; ++s) {
            Vec3 acc = Vec3::Zero();
            for (int i = 0; i <= p; ++i) {
                for (int j = 0; j <= q; ++j) {
                    acc += surface.at(e - p + i, f - q + j) * (xu(r, i) * xv(s, j));
                }
            }
            points.push_back(acc);
        }
    }
    return BezierNet(p, q, std::move(points));
}

} // namespace ancfkit
