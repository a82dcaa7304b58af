#pragma once

#include <Eigen/Core>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ancfkit {

using Vec3 = Eigen::Vector3d;

// Raised for arguments outside an operation's mathematical domain:
// bad indices, parameters outside the patch, degenerate knot spans.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when an operation is well-formed but not applicable to its input,
// e.g. elevating a direction that is already cubic.
class InvalidOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

bool all_finite(std::span<const Vec3> points);

// Diagonal of the axis-aligned bounding box; 0 for an empty set.
double bounding_box_diagonal(std::span<const Vec3> points);

} // namespace ancfkit
