#include "ancfkit/ancf.hpp"

#include <cmath>
#include <string>

namespace ancfkit {
namespace {

void check_dimensions(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("element dimensions must be positive and finite");
    }
}

void check_physical(double x, double y, double a, double b)
{
    if (!(x >= 0.0 && x <= a && y >= 0.0 && y <= b)) {
        throw DomainError("point (" + std::to_string(x) + ", " + std::to_string(y) + ") outside the element");
    }
}

} // namespace

std::string_view nodal_label(int index)
{
    static constexpr std::array<std::string_view, 16> labels{
        "r_00^00", "r_00^10", "r_a0^00", "r_a0^10", "r_00^01", "r_00^11", "r_a0^01", "r_a0^11",
        "r_0b^00", "r_0b^10", "r_ab^00", "r_ab^10", "r_0b^01", "r_0b^11", "r_ab^01", "r_ab^11",
    };
    if (index < 0 || index >= 16) {
        throw DomainError("nodal index out of range");
    }
    return labels[static_cast<std::size_t>(index)];
}

AncfElement48::AncfElement48(double a, double b, const std::array<Vec3, 16>& nodes)
    : a_(a), b_(b), nodes_(nodes)
{
    check_dimensions(a_, b_);
    if (!all_finite(nodes_)) {
        throw DomainError("element has non-finite nodal coordinates");
    }
}

AncfElement36::AncfElement36(double a, double b, const std::array<Vec3, 12>& nodes)
    : a_(a), b_(b), nodes_(nodes)
{
    check_dimensions(a_, b_);
    if (!all_finite(nodes_)) {
        throw DomainError("element has non-finite nodal coordinates");
    }
}

AncfElement48 AncfElement36::expanded() const
{
    std::array<Vec3, 16> full;
    full.fill(Vec3::Zero());
    for (std::size_t k = 0; k < kReducedNodes.size(); ++k) {
        full[static_cast<std::size_t>(kReducedNodes[k])] = nodes_[k];
    }
    return AncfElement48(a_, b_, full);
}

std::array<double, 4> hermite_functions(double lambda, double length)
{
    const double l2 = lambda * lambda;
    const double l3 = l2 * lambda;
    return {
        1.0 - 3.0 * l2 + 2.0 * l3,
        length * (lambda - 2.0 * l2 + l3),
        3.0 * l2 - 2.0 * l3,
        length * (l3 - l2),
    };
}

std::array<double, 16> shape_functions(double xi, double eta, double a, double b)
{
    check_dimensions(a, b);
    if (!(xi >= 0.0 && xi <= 1.0 && eta >= 0.0 && eta <= 1.0)) {
        throw DomainError("normalized coordinates outside [0,1]");
    }
    const auto sx = hermite_functions(xi, a);
    const auto sy = hermite_functions(eta, b);
    std::array<double, 16> weights{};
    for (std::size_t q = 0; q < 4; ++q) {
        for (std::size_t p = 0; p < 4; ++p) {
            weights[4 * q + p] = sx[p] * sy[q];
        }
    }
    return weights;
}

Vec3 ancf_eval(const AncfElement48& elem, double x, double y)
{
    check_physical(x, y, elem.a(), elem.b());
    const auto weights = shape_functions(x / elem.a(), y / elem.b(), elem.a(), elem.b());
    Vec3 result = Vec3::Zero();
    for (std::size_t k = 0; k < weights.size(); ++k) {
        result += elem.nodes()[k] * weights[k];
    }
    return result;
}

Vec3 ancf_eval_36(const AncfElement36& elem, double x, double y)
{
    check_physical(x, y, elem.a(), elem.b());
    const auto weights = shape_functions(x / elem.a(), y / elem.b(), elem.a(), elem.b());
    Vec3 result = Vec3::Zero();
    for (std::size_t k = 0; k < kReducedNodes.size(); ++k) {
        result += elem.nodes()[k] * weights[static_cast<std::size_t>(kReducedNodes[k])];
    }
    return result;
}

} // namespace ancfkit
