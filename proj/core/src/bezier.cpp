#include "ancfkit/bezier.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace ancfkit {
namespace {

constexpr int kMaxDegree = 3;

void check_degree(int degree, const char* what)
{
    if (degree < 1 || degree > kMaxDegree) {
        throw DomainError(std::string(what) + " must be in 1..3, got " + std::to_string(degree));
    }
}

void check_parameter(double t, const char* what)
{
    if (!(t >= 0.0 && t <= 1.0)) {
        throw DomainError(std::string(what) + " outside [0,1]: " + std::to_string(t));
    }
}

double binomial(int n, int k)
{
    double result = 1.0;
    for (int r = 1; r <= k; ++r) {
        result = result * (n - k + r) / r;
    }
    return result;
}

// Bernstein value with the convention B_{i,m} = 0 for i outside 0..m.
double bernstein_or_zero(int i, int degree, double t)
{
    if (i < 0 || i > degree) {
        return 0.0;
    }
    return binomial(degree, i) * std::pow(t, i) * std::pow(1.0 - t, degree - i);
}

double basis(int i, int degree, double t, int order)
{
    return order == 0 ? bernstein_or_zero(i, degree, t) : bernstein_derivative(i, degree, t);
}

} // namespace

BezierNet::BezierNet(int degree_u, int degree_v, std::vector<Vec3> points)
    : degree_u_(degree_u), degree_v_(degree_v), points_(std::move(points))
{
    check_degree(degree_u_, "degree_u");
    check_degree(degree_v_, "degree_v");
    const auto expected = static_cast<std::size_t>((degree_u_ + 1) * (degree_v_ + 1));
    if (points_.size() != expected) {
        throw DomainError("Bezier net needs " + std::to_string(expected) + " control points, got "
                          + std::to_string(points_.size()));
    }
    if (!all_finite(points_)) {
        throw DomainError("Bezier net has non-finite control point coordinates");
    }
}

BezierNet BezierNet::constant(int degree_u, int degree_v, const Vec3& value)
{
    return BezierNet(degree_u, degree_v,
                     std::vector<Vec3>(static_cast<std::size_t>((degree_u + 1) * (degree_v + 1)), value));
}

const Vec3& BezierNet::at(int i, int j) const
{
    if (i < 0 || i > degree_u_ || j < 0 || j > degree_v_) {
        throw DomainError("control point index out of range");
    }
    return points_[static_cast<std::size_t>(i * (degree_v_ + 1) + j)];
}

Vec3& BezierNet::at(int i, int j)
{
    return const_cast<Vec3&>(std::as_const(*this).at(i, j));
}

double bernstein_basis(int i, int degree, double t)
{
    if (degree < 0 || degree > kMaxDegree || i < 0 || i > degree) {
        throw DomainError("Bernstein index (" + std::to_string(i) + ", " + std::to_string(degree)
                          + ") out of range");
    }
    check_parameter(t, "Bernstein parameter");
    return bernstein_or_zero(i, degree, t);
}

double bernstein_derivative(int i, int degree, double t)
{
    if (degree < 0 || degree > kMaxDegree || i < 0 || i > degree) {
        throw DomainError("Bernstein index out of range");
    }
    check_parameter(t, "Bernstein parameter");
    if (degree == 0) {
        return 0.0;
    }
    return degree * (bernstein_or_zero(i - 1, degree - 1, t) - bernstein_or_zero(i, degree - 1, t));
}

Vec3 bezier_eval(const BezierNet& net, double u, double v)
{
    return bezier_partial(net, u, v, 0, 0);
}

Vec3 bezier_partial(const BezierNet& net, double u, double v, int order_u, int order_v)
{
    check_parameter(u, "u");
    check_parameter(v, "v");
    if ((order_u != 0 && order_u != 1) || (order_v != 0 && order_v != 1)) {
        throw DomainError("derivative orders must be 0 or 1");
    }
    Vec3 result = Vec3::Zero();
    for (int i = 0; i <= net.degree_u(); ++i) {
        const double bu = basis(i, net.degree_u(), u, order_u);
        for (int j = 0; j <= net.degree_v(); ++j) {
            result += net.at(i, j) * (bu * basis(j, net.degree_v(), v, order_v));
        }
    }
    return result;
}

BezierNet degree_elevate(const BezierNet& net, Direction direction)
{
    const bool along_u = direction == Direction::U;
    const int degree = along_u ? net.degree_u() : net.degree_v();
    if (degree >= kMaxDegree) {
        throw InvalidOperation("cannot elevate a cubic direction");
    }
    const int new_u = along_u ? net.degree_u() + 1 : net.degree_u();
    const int new_v = along_u ? net.degree_v() : net.degree_v() + 1;
    std::vector<Vec3> points(static_cast<std::size_t>((new_u + 1) * (new_v + 1)));

    // Q_r = (r / (m+1)) P_{r-1} + (1 - r / (m+1)) P_r, with P_{-1} = P_{m+1} = 0.
    auto source = [&](int r, int other) -> Vec3 {
        if (r < 0 || r > degree) {
            return Vec3::Zero();
        }
        return along_u ? net.at(r, other) : net.at(other, r);
    };
    const int others = along_u ? net.count_v() : net.count_u();
    for (int other = 0; other < others; ++other) {
        for (int r = 0; r <= degree + 1; ++r) {
            const double w = static_cast<double>(r) / (degree + 1);
            const Vec3 q = w * source(r - 1, other) + (1.0 - w) * source(r, other);
            const int i = along_u ? r : other;
            const int j = along_u ? other : r;
            points[static_cast<std::size_t>(i * (new_v + 1) + j)] = q;
        }
    }
    return BezierNet(new_u, new_v, std::move(points));
}

BezierNet elevate_to_bicubic(const BezierNet& net)
{
    BezierNet result = net;
    while (result.degree_u() < kMaxDegree) {
        result = degree_elevate(result, Direction::U);
    }
    while (result.degree_v() < kMaxDegree) {
        result = degree_elevate(result, Direction::V);
    }
    return result;
}

} // namespace ancfkit
