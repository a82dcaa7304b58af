#include "ancfkit/bspline.hpp"

#include "oracles.hpp"
#include "random_geometry.hpp"

#include <doctest.h>

#include <numeric>

using namespace ancfkit;
using namespace ancfkit::testing;

namespace {

KnotVector uniform_knots(int count, double h = 1.0)
{
    std::vector<double> k(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        k[static_cast<std::size_t>(i)] = i * h;
    }
    return KnotVector(k);
}

// Reference values from an independent B-spline package on these knots.
const KnotVector kNonUniformCubic({0, 0.5, 1.25, 2, 3.5, 4, 5.5, 6, 7.25});
const KnotVector kNonUniformQuadratic({0, 1, 3, 4, 6, 7});

// Greville-lattice cubic surface reproducing (u, v, 0).
BsplineSurface greville_plane(int cu, int cv)
{
    const KnotVector ku = uniform_knots(cu + 4);
    const KnotVector kv = uniform_knots(cv + 4);
    std::vector<Vec3> pts;
    for (int i = 0; i < cu; ++i) {
        for (int j = 0; j < cv; ++j) {
            const double xi = (ku[i + 1] + ku[i + 2] + ku[i + 3]) / 3.0;
            const double eta = (kv[j + 1] + kv[j + 2] + kv[j + 3]) / 3.0;
            pts.emplace_back(xi, eta, 0.0);
        }
    }
    return BsplineSurface(3, 3, cu, cv, pts, ku, kv);
}

} // namespace

TEST_CASE("knot vector validation")
{
    CHECK_THROWS_AS(KnotVector({0, 1, 0.5}), DomainError);
    CHECK_THROWS_AS(KnotVector({0}), DomainError);
    CHECK_THROWS_AS(KnotVector({0, std::numeric_limits<double>::infinity()}), DomainError);
    CHECK_NOTHROW(KnotVector({0, 0, 1, 1}));
}

TEST_CASE("find_segment uses half-open spans closed at the end")
{
    const KnotVector k({0, 0, 0, 1, 2, 2, 3, 3, 3});
    CHECK(k.find_segment(0.0, 2, 5) == 2);
    CHECK(k.find_segment(1.0, 2, 5) == 3);
    CHECK(k.find_segment(2.0, 2, 5) == 5);
    CHECK(k.find_segment(3.0, 2, 5) == 5);
    CHECK_THROWS_AS(k.find_segment(3.5, 2, 5), DomainError);
}

TEST_CASE("cox_de_boor")
{
    const KnotVector k = uniform_knots(10);
    SUBCASE("degree zero indicator")
    {
        CHECK(cox_de_boor(k, 3, 0, 3.4) == 1.0);
        CHECK(cox_de_boor(k, 3, 0, 3.0) == 1.0);
        CHECK(cox_de_boor(k, 3, 0, 4.0) == 0.0);
        CHECK(cox_de_boor(k, 8, 0, 9.0) == 1.0); // closed final span
    }
    SUBCASE("uniform cubic at a knot")
    {
        CHECK(cox_de_boor(k, 1, 3, 4.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
        CHECK(cox_de_boor(k, 2, 3, 4.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(cox_de_boor(k, 3, 3, 4.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
        CHECK(cox_de_boor(k, 4, 3, 4.0) == 0.0);
    }
    SUBCASE("partition of unity on the interior")
    {
        for (double t : {3.0, 3.3, 4.5, 5.99}) {
            double sum = 0.0;
            for (int i = 0; i + 4 < 10; ++i) {
                sum += cox_de_boor(k, i, 3, t);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
        }
    }
    SUBCASE("non-uniform reference values")
    {
        CHECK(cox_de_boor(kNonUniformCubic, 0, 3, 2.6) == doctest::Approx(0.072).epsilon(1e-13));
        CHECK(cox_de_boor(kNonUniformCubic, 1, 3, 2.6) == doctest::Approx(0.4938181818181817).epsilon(1e-13));
        CHECK(cox_de_boor(kNonUniformCubic, 2, 3, 2.6) == doctest::Approx(0.41361038961038965).epsilon(1e-13));
        CHECK(cox_de_boor(kNonUniformCubic, 3, 3, 2.6) == doctest::Approx(0.02057142857142858).epsilon(1e-13));
    }
    SUBCASE("repeated knots use 0/0 = 0")
    {
        const KnotVector clamped({0, 0, 0, 0, 1, 1, 1, 1});
        CHECK(cox_de_boor(clamped, 0, 3, 0.0) == 1.0);
        CHECK(cox_de_boor(clamped, 3, 3, 1.0) == 1.0);
        CHECK(cox_de_boor(clamped, 1, 3, 0.5) == doctest::Approx(3 * 0.5 * 0.25));
    }
    SUBCASE("index errors")
    {
        CHECK_THROWS_AS(cox_de_boor(k, 7, 3, 5.0), DomainError);
        CHECK_THROWS_AS(cox_de_boor(k, -1, 3, 5.0), DomainError);
    }
}

TEST_CASE("segment_basis closed forms")
{
    const KnotVector k = uniform_knots(10);
    SUBCASE("cubic uniform at left knot")
    {
        const auto n = segment_basis(k, 3, 4, 4.0);
        CHECK(n[0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
        CHECK(n[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(n[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
        CHECK(n[3] == 0.0);
    }
    SUBCASE("quadratic uniform at left knot")
    {
        const auto n = segment_basis(k, 2, 4, 4.0);
        CHECK(n[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(n[1] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(n[2] == 0.0);
    }
    SUBCASE("linear midpoint")
    {
        const KnotVector kl({0, 0.3, 1.7, 2.0});
        const auto n = segment_basis(kl, 1, 1, 1.0);
        CHECK(n[0] == doctest::Approx(0.5));
        CHECK(n[1] == doctest::Approx(0.5));
    }
    SUBCASE("degenerate and truncated windows")
    {
        const KnotVector rep({0, 1, 2, 2, 3, 4, 5});
        CHECK_THROWS_AS(segment_basis(rep, 2, 2, 2.0), DomainError);
        CHECK_THROWS_AS(segment_basis(k, 3, 1, 1.5), DomainError);
        CHECK_THROWS_AS(segment_basis(k, 3, 7, 7.5), DomainError);
        CHECK_THROWS_AS(segment_basis(k, 4, 5, 5.5), DomainError);
    }
    SUBCASE("agrees with recursion on random non-uniform knots")
    {
        Rng rng(21);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0;
        for (int degree = 1; degree <= 3; ++degree) {
            for (int trial = 0; trial < 50; ++trial) {
                const KnotVector kv = random_knots(rng, degree, 2 * degree + 1, false, true);
                const int alpha = degree;
                if (!(kv[alpha + 1] > kv[alpha])) {
                    continue;
                }
                for (int s = 0; s < 50; ++s) {
                    const double t = kv[alpha] + unit(rng) * (kv[alpha + 1] - kv[alpha]);
                    const auto n = segment_basis(kv, degree, alpha, t);
                    for (int r = 0; r <= degree; ++r) {
                        worst = std::max(worst, std::abs(n[r] - cox_de_boor(kv, alpha - degree + r, degree, t)));
                    }
                }
            }
        }
        CHECK(worst <= 1e-12);
    }
}

TEST_CASE("endpoint_tables")
{
    SUBCASE("uniform cubic spacing h")
    {
        const double h = 0.5;
        const auto t = endpoint_tables(uniform_knots(10, h), 3, 4);
        CHECK(t.values_start[0] == doctest::Approx(1.0 / 6.0));
        CHECK(t.values_start[1] == doctest::Approx(2.0 / 3.0));
        CHECK(t.values_start[2] == doctest::Approx(1.0 / 6.0));
        CHECK(t.values_start[3] == 0.0);
        CHECK(t.derivs_start[0] == doctest::Approx(-1.0 / (2 * h)));
        CHECK(std::abs(t.derivs_start[1]) <= 1e-14);
        CHECK(t.derivs_start[2] == doctest::Approx(1.0 / (2 * h)));
        CHECK(t.derivs_start[3] == 0.0);
        CHECK(t.values_end[0] == 0.0);
    }
    SUBCASE("uniform quadratic spacing h")
    {
        const double h = 2.0;
        const auto t = endpoint_tables(uniform_knots(8, h), 2, 3);
        CHECK(t.values_start[0] == doctest::Approx(0.5));
        CHECK(t.values_start[1] == doctest::Approx(0.5));
        CHECK(t.values_start[2] == 0.0);
        CHECK(t.derivs_start[0] == doctest::Approx(-1.0 / h));
        CHECK(t.derivs_start[1] == doctest::Approx(1.0 / h));
        CHECK(t.derivs_start[2] == 0.0);
    }
    SUBCASE("non-uniform cubic reference values")
    {
        const auto t = endpoint_tables(kNonUniformCubic, 3, 3);
        const std::array<double, 4> vs{1.0 / 3.0, 0.5757575757575757, 0.0909090909090909, 0.0};
        const std::array<double, 4> ds{-2.0 / 3.0, 0.30303030303030304, 0.3636363636363636, 0.0};
        const std::array<double, 4> ve{0.0, 0.045454545454545456, 0.6331168831168831, 0.3214285714285714};
        const std::array<double, 4> de{0.0, -0.2727272727272727, -0.3701298701298701, 0.6428571428571428};
        for (int r = 0; r < 4; ++r) {
            CHECK(t.values_start[r] == doctest::Approx(vs[static_cast<std::size_t>(r)]).epsilon(1e-13));
            CHECK(t.derivs_start[r] == doctest::Approx(ds[static_cast<std::size_t>(r)]).epsilon(1e-13));
            CHECK(t.values_end[r] == doctest::Approx(ve[static_cast<std::size_t>(r)]).epsilon(1e-13));
            CHECK(t.derivs_end[r] == doctest::Approx(de[static_cast<std::size_t>(r)]).epsilon(1e-13));
        }
    }
    SUBCASE("non-uniform quadratic reference values")
    {
        const auto t = endpoint_tables(kNonUniformQuadratic, 2, 2);
        CHECK(t.values_start[0] == doctest::Approx(1.0 / 3.0));
        CHECK(t.values_start[1] == doctest::Approx(2.0 / 3.0));
        CHECK(t.derivs_start[0] == doctest::Approx(-2.0 / 3.0));
        CHECK(t.derivs_start[1] == doctest::Approx(2.0 / 3.0));
        CHECK(t.values_end[1] == doctest::Approx(2.0 / 3.0));
        CHECK(t.values_end[2] == doctest::Approx(1.0 / 3.0));
        CHECK(t.derivs_end[1] == doctest::Approx(-2.0 / 3.0));
        CHECK(t.derivs_end[2] == doctest::Approx(2.0 / 3.0));
    }
    SUBCASE("random tables: sums, zero-influence entries, recursion and finite differences")
    {
        Rng rng(22);
        for (int degree = 1; degree <= 3; ++degree) {
            for (int trial = 0; trial < 50; ++trial) {
                const KnotVector kv = random_knots(rng, degree, 2 * degree + 1, false, true);
                const int alpha = degree;
                if (!(kv[alpha + 1] > kv[alpha])) {
                    continue;
                }
                const auto t = endpoint_tables(kv, degree, alpha);
                CHECK(t.values_start.sum() == doctest::Approx(1.0).epsilon(1e-14));
                CHECK(t.values_end.sum() == doctest::Approx(1.0).epsilon(1e-14));
                CHECK(std::abs(t.derivs_start.sum()) <= 1e-12);
                CHECK(std::abs(t.derivs_end.sum()) <= 1e-12);
                if (degree >= 2) {
                    CHECK(t.values_start[degree] == 0.0);
                    CHECK(t.values_end[0] == 0.0);
                }
                const double lo = kv[alpha];
                const double hi = kv[alpha + 1];
                const double h = 1e-6 * (hi - lo);
                for (int r = 0; r <= degree; ++r) {
                    const int i = alpha - degree + r;
                    CHECK(std::abs(t.values_start[r] - cox_de_boor(kv, i, degree, lo)) <= 1e-12);
                    CHECK(std::abs(t.values_end[r] - cox_de_boor(kv, i, degree, hi)) <= 1e-12);
                    auto f = [&](double x) { return segment_basis(kv, degree, alpha, x)[r]; };
                    CHECK(relative_error(t.derivs_start[r], central_difference(f, lo, h)) <= 1e-6);
                    CHECK(relative_error(t.derivs_end[r], central_difference(f, hi, h)) <= 1e-6);
                    CHECK(std::abs(t.derivs_start[r] - segment_basis_derivative(kv, degree, alpha, lo)[r]) <= 1e-10);
                    CHECK(std::abs(t.derivs_end[r] - segment_basis_derivative(kv, degree, alpha, hi)[r]) <= 1e-10);
                }
            }
        }
    }
    SUBCASE("missing knots are reported")
    {
        try {
            endpoint_tables(uniform_knots(6), 3, 1);
            FAIL("expected DomainError");
        } catch (const DomainError& err) {
            CHECK(std::string(err.what()).find("needs knots") != std::string::npos);
        }
    }
}

TEST_CASE("bspline_eval")
{
    Rng rng(23);
    SUBCASE("constant control points")
    {
        const BsplineSurface s = random_surface(rng, 3, 2);
        BsplineSurface c(s.degree_u(), s.degree_v(), s.count_u(), s.count_v(),
                         std::vector<Vec3>(s.points().size(), Vec3(1, 2, 3)), s.knots_u(), s.knots_v());
        const double u = 0.5 * (c.u_min() + c.u_max());
        const double v = 0.3 * c.v_min() + 0.7 * c.v_max();
        CHECK((bspline_eval(c, u, v) - Vec3(1, 2, 3)).norm() <= 1e-14);
    }
    SUBCASE("Greville linear precision")
    {
        const BsplineSurface plane = greville_plane(8, 8);
        CHECK((bspline_eval(plane, 3.5, 3.25) - Vec3(3.5, 3.25, 0)).norm() <= 1e-14);
    }
    SUBCASE("segment-local equals full sum")
    {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        double worst = 0.0;
        for (int p = 1; p <= 3; ++p) {
            for (int q = 1; q <= 3; ++q) {
                for (int trial = 0; trial < 5; ++trial) {
                    const BsplineSurface s = random_surface(rng, p, q, true);
                    for (int k = 0; k < 20; ++k) {
                        const double u = s.u_min() + unit(rng) * (s.u_max() - s.u_min());
                        const double v = s.v_min() + unit(rng) * (s.v_max() - s.v_min());
                        worst = std::max(worst, (bspline_eval(s, u, v) - bspline_full_sum(s, u, v)).norm());
                    }
                }
            }
        }
        CHECK(worst <= 1e-12);
    }
    SUBCASE("outside the valid rectangle")
    {
        const BsplineSurface plane = greville_plane(5, 5);
        CHECK_THROWS_AS(bspline_eval(plane, 2.9, 4.0), DomainError);
        CHECK_THROWS_AS(bspline_eval(plane, 4.0, 5.1), DomainError);
        CHECK_NOTHROW(bspline_eval(plane, 5.0, 5.0));
    }
    SUBCASE("zero-influence corners")
    {
        const BsplineSurface s = random_surface(rng, 3, 3);
        const int e = s.segments_u().front();
        const int f = s.segments_v().front();
        const double ue = s.knots_u()[e], ue1 = s.knots_u()[e + 1];
        const double vf = s.knots_v()[f], vf1 = s.knots_v()[f + 1];
        BsplineSurface moved = s;
        moved.at(e, f) += Vec3(5, -7, 11);
        CHECK((bspline_eval(moved, ue, vf) - bspline_eval(s, ue, vf)).norm() == 0.0);
        moved = s;
        moved.at(e - 3, f - 3) += Vec3(5, -7, 11);
        CHECK((bspline_eval(moved, ue1, vf1) - bspline_eval(s, ue1, vf1)).norm() == 0.0);
    }
}

TEST_CASE("surface construction validates")
{
    const KnotVector k = uniform_knots(8);
    std::vector<Vec3> pts(16, Vec3::Zero());
    CHECK_NOTHROW(BsplineSurface(3, 3, 4, 4, pts, k, k));
    CHECK_THROWS_AS(BsplineSurface(3, 3, 4, 4, std::vector<Vec3>(15), k, k), DomainError);
    CHECK_THROWS_AS(BsplineSurface(3, 2, 4, 4, pts, k, k), DomainError);
    CHECK_THROWS_AS(BsplineSurface(4, 3, 4, 4, pts, KnotVector(std::vector<double>(9, 0.0)), k), DomainError);
    CHECK_THROWS_AS(BsplineSurface(3, 3, 4, 4, pts, KnotVector({0, 0, 0, 1, 1, 2, 2, 2}), k), DomainError);
}

TEST_CASE("segment_to_bezier")
{
    Rng rng(24);
    SUBCASE("single clamped segment is its own Bezier net")
    {
        const BezierNet net = random_net(rng, 3, 2);
        const BsplineSurface s(3, 2, 4, 3, std::vector<Vec3>(net.points().begin(), net.points().end()),
                               KnotVector({0, 0, 0, 0, 1, 1, 1, 1}), KnotVector({2, 2, 2, 5, 5, 5}));
        const BezierNet back = segment_to_bezier(s, 3, 2);
        for (std::size_t k = 0; k < net.points().size(); ++k) {
            CHECK((back.points()[k] - net.points()[k]).norm() <= 1e-13);
        }
    }
    SUBCASE("uniform cubic corner")
    {
        const BsplineSurface s = random_surface(rng, 3, 3);
        BsplineSurface u(3, 3, s.count_u(), s.count_v(), std::vector<Vec3>(s.points().begin(), s.points().end()),
                         uniform_knots(s.count_u() + 4), uniform_knots(s.count_v() + 4));
        const BezierNet net = segment_to_bezier(u, 3, 3);
        const std::array<double, 3> theta{1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
        Vec3 corner = Vec3::Zero();
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                corner += theta[static_cast<std::size_t>(i)] * theta[static_cast<std::size_t>(j)] * u.at(i, j);
            }
        }
        CHECK((net.at(0, 0) - corner).norm() <= 1e-13);
    }
    SUBCASE("sampled equivalence")
    {
        for (int p = 1; p <= 3; ++p) {
            for (int q = 1; q <= 3; ++q) {
                const BsplineSurface s = random_surface(rng, p, q, true);
                for (int e : s.segments_u()) {
                    for (int f : s.segments_v()) {
                        const BezierNet net = segment_to_bezier(s, e, f);
                        const double u0 = s.knots_u()[e], du = s.knots_u()[e + 1] - u0;
                        const double v0 = s.knots_v()[f], dv = s.knots_v()[f + 1] - v0;
                        for (int a = 1; a <= 5; ++a) {
                            for (int b = 1; b <= 5; ++b) {
                                const double xi = a / 6.0, eta = b / 6.0;
                                const Vec3 want = bspline_full_sum(s, u0 + xi * du, v0 + eta * dv);
                                CHECK((bezier_eval(net, xi, eta) - want).norm() <= 1e-11);
                            }
                        }
                    }
                }
            }
        }
    }
    SUBCASE("degenerate segment")
    {
        const BsplineSurface s(2, 1, 4, 2, std::vector<Vec3>(8, Vec3::Zero()), KnotVector({0, 0, 0, 1, 1, 2, 2}),
                               KnotVector({0, 0, 1, 1}));
        CHECK_THROWS_AS(segment_to_bezier(s, 3, 1), DomainError);
        CHECK_NOTHROW(segment_to_bezier(s, 2, 1));
    }
}
