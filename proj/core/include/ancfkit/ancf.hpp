#pragma once

#include "ancfkit/types.hpp"

#include <array>
#include <string_view>

namespace ancfkit {

// Element corners in nodal order: (0,0), (a,0), (0,b), (a,b).
enum class Corner { Origin = 0, EndU = 1, EndV = 2, Far = 3 };

// Nodal quantity at a corner: r, dr/dx, dr/dy, d2r/dxdy.
enum class Slope { Position = 0, DX = 1, DY = 2, DXY = 3 };

inline constexpr std::array<Corner, 4> kCorners{Corner::Origin, Corner::EndU, Corner::EndV, Corner::Far};

/// Index of (corner, slope) in the 16-vector nodal ordering
///   r00, rx00, ra0, rxa0, ry00, rxy00, rya0, rxya0, r0b, rx0b, rab, rxab, ry0b, rxy0b, ryab, rxyab
/// i.e. 4 * q + p where p selects the x-direction Hermite function and q the y one.
constexpr int nodal_index(Corner corner, Slope slope)
{
    const int c = static_cast<int>(corner);
    const int s = static_cast<int>(slope);
    const int p = 2 * (c & 1) + (s & 1);
    const int q = 2 * (c >> 1) + (s >> 1);
    return 4 * q + p;
}

/// Position of each reduced-element node in the full 16-vector ordering.
inline constexpr std::array<int, 12> kReducedNodes{0, 1, 2, 3, 4, 6, 8, 9, 10, 11, 12, 14};

/// Label such as "r_00^10" for node k of the full element.
std::string_view nodal_label(int index);

/// Thin-plate element with 48 nodal coordinates (16 vectors).
/// Slopes are taken with respect to the physical coordinates x in [0, a], y in [0, b].
class AncfElement48 {
public:
    AncfElement48(double a, double b, const std::array<Vec3, 16>& nodes);

    double a() const { return a_; }
    double b() const { return b_; }
    const std::array<Vec3, 16>& nodes() const { return nodes_; }
    const Vec3& node(Corner corner, Slope slope) const { return nodes_[static_cast<std::size_t>(nodal_index(corner, slope))]; }

private:
    double a_;
    double b_;
    std::array<Vec3, 16> nodes_;
};

/// Reduced element: the four mixed slopes are absent (12 vectors, 36 coordinates).
class AncfElement36 {
public:
    AncfElement36(double a, double b, const std::array<Vec3, 12>& nodes);

    double a() const { return a_; }
    double b() const { return b_; }
    const std::array<Vec3, 12>& nodes() const { return nodes_; }

    /// Full element with zero mixed slopes.
    AncfElement48 expanded() const;

private:
    double a_;
    double b_;
    std::array<Vec3, 12> nodes_;
};

/// 1D Hermite cubic functions s1..s4 at lambda in [0,1] over length l.
std::array<double, 4> hermite_functions(double lambda, double length);

/// The 16 shape-function products in nodal order: weight k = s_{p+1}(xi) s_{q+1}(eta), k = 4q + p.
std::array<double, 16> shape_functions(double xi, double eta, double a, double b);

Vec3 ancf_eval(const AncfElement48& elem, double x, double y);
Vec3 ancf_eval_36(const AncfElement36& elem, double x, double y);

} // namespace ancfkit
