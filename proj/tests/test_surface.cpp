#include "doctest.h"

#include <cmath>
#include <random>

#include "srbm/surface.hpp"
#include "test_support.hpp"

using namespace srbm;
using namespace srbm::testing;

namespace {
constexpr double kPi = 3.14159265358979323846;

bool same_point(const Surface& surf, const SurfacePoint& a,
                const SurfacePoint& b, double tol = 1e-12) {
    if (a.infinite || b.infinite) return a.infinite == b.infinite;
    (void)surf;
    return std::abs(a.s - b.s) <= tol * (1.0 + std::abs(a.s));
}
} // namespace

TEST_SUITE("surface") {

TEST_CASE("angle helpers") {
    CHECK(wrap_angle(-kPi / 2) == doctest::Approx(1.5 * kPi));
    CHECK(wrap_angle(5 * kPi) == doctest::Approx(kPi));
    CHECK(angle_gap(0.1, 2 * kPi - 0.1) == doctest::Approx(0.2));
    CHECK(angle_gap(kPi, 0.0) == doctest::Approx(kPi));
}

TEST_CASE("arc membership with per-end inclusion") {
    const Arc a = arc_ccw(kPi / 4, kPi, true, false);
    CHECK(in_arc(a, kPi / 4));
    CHECK(in_arc(a, kPi / 2));
    CHECK_FALSE(in_arc(a, kPi));
    CHECK_FALSE(in_arc(a, 1.5 * kPi));
    // Wrap-around arc.
    const Arc b = arc_ccw(1.75 * kPi, 0.25 * kPi, false, true);
    CHECK(in_arc(b, 0.0));
    CHECK(in_arc(b, 0.25 * kPi));
    CHECK_FALSE(in_arc(b, 1.75 * kPi));
    CHECK_FALSE(in_arc(b, kPi));
}

TEST_CASE("arc avoiding a marked angle picks the other side") {
    // Endpoints 1/4 pi and 3/4 pi; the side containing pi/2 is rejected.
    const Arc a = arc_avoiding(kPi / 4, 0.75 * kPi, kPi / 2, true, false);
    CHECK_FALSE(in_arc(a, kPi / 2));
    CHECK(in_arc(a, 1.5 * kPi));
    CHECK(in_arc(a, kPi / 4));        // inclusion follows the endpoint
    CHECK_FALSE(in_arc(a, 0.75 * kPi));
    // Avoided angle on the far side leaves the ccw arc alone.
    const Arc b = arc_avoiding(kPi / 4, 0.75 * kPi, 1.5 * kPi, false, true);
    CHECK(in_arc(b, kPi / 2));
    CHECK_FALSE(in_arc(b, 1.5 * kPi));
    CHECK_THROWS_AS(arc_avoiding(0.3, 0.3, 1.0, true, true), Error);
}

TEST_CASE("uniformization of the symmetric model") {
    const Surface surf(identity_model());
    CHECK(surf.beta() == doctest::Approx(kPi / 2).epsilon(1e-12));
    const EllipsePoint p45 = surf.theta(kPi / 4);
    CHECK(p45.theta1 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(p45.theta2 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(surf.t_origin() == doctest::Approx(1.25 * kPi));
    CHECK(surf.t_axis2() == doctest::Approx(0.75 * kPi));
    CHECK(surf.t_axis1() == doctest::Approx(1.75 * kPi));
    CHECK(surf.t_s1_plus() == doctest::Approx(0.0));
    CHECK(surf.t_s2_plus() == doctest::Approx(kPi / 2));
}

TEST_CASE("involutions fix their coordinate") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    std::uniform_real_distribution<double> rad(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        const ModelParams p = random_stable_model(rng);
        const Surface surf(p);
        const SurfacePoint sp{std::polar(std::exp(rad(rng)), ang(rng)), false};
        const SurfacePoint zz = surf.zeta(surf.zeta(sp));
        const SurfacePoint ee = surf.eta(surf.eta(sp));
        CHECK(same_point(surf, zz, sp, 1e-10));
        CHECK(same_point(surf, ee, sp, 1e-10));
        const cx t1 = surf.theta1(sp);
        const cx t1z = surf.theta1(surf.zeta(sp));
        CHECK(std::abs(t1 - t1z) <= 1e-9 * (1.0 + std::abs(t1)));
        const cx t2 = surf.theta2(sp);
        const cx t2e = surf.theta2(surf.eta(sp));
        CHECK(std::abs(t2 - t2e) <= 1e-9 * (1.0 + std::abs(t2)));
        // The parametrization lands on the kernel zero set everywhere.
        const cx g = surf.kernel().gamma(t1, t2);
        const double scale = 1.0 + std::norm(t1) + std::norm(t2);
        CHECK(std::abs(g) <= 1e-9 * scale);
    }
}

TEST_CASE("compositions rotate by twice beta") {
    const Surface surf(skewed_model());
    const SurfacePoint sp = surf.at_angle(0.3);
    const SurfacePoint r = surf.eta_zeta(sp);
    CHECK(surf.angle_of(r) ==
          doctest::Approx(wrap_angle(0.3 + 2 * surf.beta())).epsilon(1e-12));
    const SurfacePoint back = surf.zeta_eta(r);
    CHECK(same_point(surf, back, sp, 1e-12));
}

TEST_CASE("galois images in curve coordinates") {
    const Surface surf(identity_model());
    const EllipsePoint z = surf.apply_zeta({2.0, 2.0});
    CHECK(z.theta1 == doctest::Approx(2.0));
    CHECK(z.theta2 == doctest::Approx(0.0));
    const EllipsePoint e = surf.apply_eta({0.0, 2.0});
    CHECK(e.theta1 == doctest::Approx(2.0));
    CHECK(e.theta2 == doctest::Approx(2.0));
    // Coordinate action matches the sphere action on the circle.
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_stable_model(rng);
        const Surface s(p);
        const double t = ang(rng);
        const EllipsePoint via_coord = s.apply_eta(s.theta(t));
        const SurfacePoint via_sphere = s.eta(s.at_angle(t));
        CHECK(via_coord.theta1 ==
              doctest::Approx(s.theta1(via_sphere).real()).epsilon(1e-9));
        CHECK(via_coord.theta2 ==
              doctest::Approx(s.theta2(via_sphere).real()).epsilon(1e-9));
    }
}

TEST_CASE("point at infinity round trip") {
    const Surface surf(identity_model());
    const SurfacePoint zero{cx{}, false};
    const SurfacePoint inf = surf.zeta(zero);
    CHECK(inf.infinite);
    CHECK(std::isinf(surf.theta1(inf).real()));
    const SurfacePoint back = surf.zeta(inf);
    CHECK_FALSE(back.infinite);
    CHECK(std::abs(back.s) == 0.0);
    CHECK(surf.eta(zero).infinite);
    CHECK_THROWS_AS(surf.angle_of(inf), Error);
}

TEST_CASE("inverse parametrization") {
    const Surface surf(skewed_model());
    for (double t = 0.05; t < 2 * kPi; t += 0.217) {
        const EllipsePoint p = surf.theta(t);
        const double t2 = surf.angle_on_circle(p);
        CHECK(angle_gap(t, t2) < 1e-9);
    }
    try {
        surf.angle_on_circle({0.5, 0.5});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotOnEllipse);
    }
}

} // TEST_SUITE
