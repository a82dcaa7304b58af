#pragma once

#include "ancfkit/bezier.hpp"
#include "ancfkit/types.hpp"

#include <Eigen/Core>

#include <vector>

namespace ancfkit {

/// Non-decreasing sequence of finite knots.
class KnotVector {
public:
    explicit KnotVector(std::vector<double> knots);

    std::size_t size() const { return knots_.size(); }
    double operator[](std::size_t i) const { return knots_[i]; }
    std::span<const double> values() const { return knots_; }

    /// Left-knot index alpha of the non-degenerate span [k_alpha, k_{alpha+1})
    /// containing t, searching alpha in [first, last]. A t equal to the right
    /// end of span `last` belongs to `last`.
    int find_segment(double t, int first, int last) const;

private:
    std::vector<double> knots_;
};

class BsplineSurface {
public:
    /// Control points row-major in (i, j) with i along u, j along v.
    BsplineSurface(int degree_u, int degree_v, int count_u, int count_v, std::vector<Vec3> points,
                   KnotVector knots_u, KnotVector knots_v);

    int degree_u() const { return degree_u_; }
    int degree_v() const { return degree_v_; }
    int count_u() const { return count_u_; }
    int count_v() const { return count_v_; }
    const KnotVector& knots_u() const { return knots_u_; }
    const KnotVector& knots_v() const { return knots_v_; }
    std::span<const Vec3> points() const { return points_; }

    const Vec3& at(int i, int j) const;
    Vec3& at(int i, int j);

    // Valid parameter rectangle [u_k, u_{count_u}] x [v_l, v_{count_v}].
    double u_min() const { return knots_u_[static_cast<std::size_t>(degree_u_)]; }
    double u_max() const { return knots_u_[static_cast<std::size_t>(count_u_)]; }
    double v_min() const { return knots_v_[static_cast<std::size_t>(degree_v_)]; }
    double v_max() const { return knots_v_[static_cast<std::size_t>(count_v_)]; }

    /// Left-knot indices of the non-degenerate spans inside the valid range.
    std::vector<int> segments_u() const;
    std::vector<int> segments_v() const;

private:
    int degree_u_;
    int degree_v_;
    int count_u_;
    int count_v_;
    std::vector<Vec3> points_;
    KnotVector knots_u_;
    KnotVector knots_v_;
};

/// Basis values and parametric first derivatives of the degree+1 functions
/// active on one span, evaluated at the span's two end knots. Entry r refers
/// to the function with index alpha - degree + r.
struct SegmentBasisTable {
    int degree = 0;
    Eigen::VectorXd values_start;
    Eigen::VectorXd values_end;
    Eigen::VectorXd derivs_start;
    Eigen::VectorXd derivs_end;
};

/// Recursive basis N_{i,degree}(t), with 0/0 taken as 0. Degree-0 spans are
/// half-open, except the last non-degenerate span which is closed.
double cox_de_boor(const KnotVector& knots, int i, int degree, double t);

/// Closed-form values of N_{alpha-degree..alpha, degree} on span alpha.
Eigen::VectorXd segment_basis(const KnotVector& knots, int degree, int alpha, double t);

/// Parametric derivatives of segment_basis.
Eigen::VectorXd segment_basis_derivative(const KnotVector& knots, int degree, int alpha, double t);

SegmentBasisTable endpoint_tables(const KnotVector& knots, int degree, int alpha);

Vec3 bspline_eval(const BsplineSurface& surface, double u, double v);

/// Row r holds the weights of window functions alpha-degree..alpha that give
/// Bernstein coefficient r of the span, computed by blossoming.
Eigen::MatrixXd bezier_extraction(const KnotVector& knots, int degree, int alpha);

/// Bezier form of span (e, f), reparameterized to the unit square.
BezierNet segment_to_bezier(const BsplineSurface& surface, int e, int f);

} // namespace ancfkit
