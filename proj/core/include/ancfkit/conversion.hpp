#pragma once

#include "ancfkit/ancf.hpp"
#include "ancfkit/bezier.hpp"
#include "ancfkit/bspline.hpp"
#include "ancfkit/types.hpp"

#include <Eigen/Core>

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ancfkit {

/// Knot rectangle a B-spline conversion was taken from.
struct SegmentWindow {
    int e = 0;
    int f = 0;
    double u0 = 0.0;
    double u1 = 1.0;
    double v0 = 0.0;
    double v1 = 1.0;
};

/// Linear map from stacked control points to stacked nodal vectors.
///
/// The scalar matrix acts identically on x, y and z: nodal vector k equals
/// sum_c weights(k, c) * control_point[c]. Columns follow the row-major (i, j)
/// control ordering (v index fastest); rows follow the element's nodal order.
struct TransformMatrix {
    Eigen::MatrixXd weights;
    std::vector<Slope> row_kinds;
    int degree_u = 0;
    int degree_v = 0;
    double a = 1.0;
    double b = 1.0;
    std::optional<SegmentWindow> window;

    bool is_position_row(int row) const { return row_kinds.at(static_cast<std::size_t>(row)) == Slope::Position; }

    std::vector<Vec3> apply(std::span<const Vec3> control_points) const;

    /// The 12-row map onto the reduced element (mixed-slope rows dropped).
    TransformMatrix reduced() const;
};

struct Conversion {
    AncfElement48 element;
    TransformMatrix transform;
};

/// Hermite endpoint data of one parametric direction: rows are value at
/// start, physical slope at start, value at end, physical slope at end.
Eigen::MatrixXd bezier_endpoint_map(int degree, double length);
Eigen::MatrixXd bspline_endpoint_map(const KnotVector& knots, int degree, int alpha, double length);

/// Tensor-product assembly of two endpoint maps into the 16-row transform.
Eigen::MatrixXd tensor_transform(const Eigen::MatrixXd& map_u, const Eigen::MatrixXd& map_v);

Conversion bezier_to_ancf(const BezierNet& net, double a = 1.0, double b = 1.0);

/// Converts span (e, f). a and b default to the span lengths, which makes
/// the nodal slopes equal the parametric derivatives.
Conversion bspline_segment_to_ancf(const BsplineSurface& surface, int e, int f,
                                   std::optional<double> a = std::nullopt,
                                   std::optional<double> b = std::nullopt);

struct ParallelogramCheck {
    bool satisfied = false;
    /// Norm of the defect b_c + b_diag - b_side1 - b_side2 at each corner, in
    /// nodal corner order (0,0), (a,0), (0,b), (a,b).
    std::array<double, 4> residuals{};
};

/// Tests whether the four corner quadrilaterals of a bicubic net are
/// parallelograms; tol is relative to the net's bounding-box diagonal.
ParallelogramCheck check_parallelogram(const BezierNet& net, double tol);

class ReductionRejected : public std::runtime_error {
public:
    ReductionRejected(std::vector<Corner> corners, std::vector<double> norms);

    const std::vector<Corner>& corners() const { return corners_; }
    const std::vector<double>& norms() const { return norms_; }

private:
    std::vector<Corner> corners_;
    std::vector<double> norms_;
};

/// Norms of the four mixed-slope vectors, in nodal corner order.
std::array<double, 4> mixed_slope_norms(const AncfElement48& elem);

/// Drops the mixed slopes. Each |r_xy| * a * b must be at most tol times the
/// diagonal of the corner positions' bounding box (1 when that is zero).
AncfElement36 reduce_element(const AncfElement48& elem, double tol);

/// 16x16 inverse of the bicubic transform: rows index the bicubic net
/// (row-major), columns the nodal vectors.
Eigen::MatrixXd inverse_transform(double a, double b);

BezierNet ancf_to_bezier(const AncfElement48& elem);

/// Lowest-degree net (per direction, at least 1) reproducing the surface
/// within tol relative to the bounding-box diagonal. Returns the input when
/// no exact reduction exists.
BezierNet degree_reduce_exact(const BezierNet& net, double tol);

} // namespace ancfkit
