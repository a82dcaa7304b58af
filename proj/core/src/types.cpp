#include "ancfkit/types.hpp"

#include <algorithm>
#include <cmath>

namespace ancfkit {

bool all_finite(std::span<const Vec3> points)
{
    return std::all_of(points.begin(), points.end(),
                       [](const Vec3& p) { return p.allFinite(); });
}

double bounding_box_diagonal(std::span<const Vec3> points)
{
    if (points.empty()) {
        return 0.0;
    }
    Vec3 lo = points.front();
    Vec3 hi = points.front();
    for (const Vec3& p : points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

} // namespace ancfkit
