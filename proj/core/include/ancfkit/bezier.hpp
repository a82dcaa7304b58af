#pragma once

#include "ancfkit/types.hpp"

#include <vector>

namespace ancfkit {

enum class Direction { U, V };

/// Tensor-product Bezier patch over the unit square.
///
/// Control points are stored row-major in (i, j): i runs along u and
/// j along v, so point (i, j) lives at index i * (degree_v + 1) + j.
/// Degrees are limited to 1..3 in each direction.
class BezierNet {
public:
    BezierNet(int degree_u, int degree_v, std::vector<Vec3> points);

    /// Net whose every control point equals `value`.
    static BezierNet constant(int degree_u, int degree_v, const Vec3& value);

    int degree_u() const { return degree_u_; }
    int degree_v() const { return degree_v_; }
    int count_u() const { return degree_u_ + 1; }
    int count_v() const { return degree_v_ + 1; }

    const Vec3& at(int i, int j) const;
    Vec3& at(int i, int j);

    std::span<const Vec3> points() const { return points_; }

private:
    int degree_u_;
    int degree_v_;
    std::vector<Vec3> points_;
};

double bernstein_basis(int i, int degree, double t);

/// d/dt of B_{i,degree}(t).
double bernstein_derivative(int i, int degree, double t);

Vec3 bezier_eval(const BezierNet& net, double u, double v);

/// Partial derivative d^(order_u + order_v) p / du^order_u dv^order_v,
/// with each order in {0, 1}.
Vec3 bezier_partial(const BezierNet& net, double u, double v, int order_u, int order_v);

/// Exact degree elevation by one in the given direction.
/// Throws InvalidOperation if that direction is already cubic.
BezierNet degree_elevate(const BezierNet& net, Direction direction);

/// Elevates both directions to degree 3.
BezierNet elevate_to_bicubic(const BezierNet& net);

} // namespace ancfkit
