#pragma once

#include "srbm/kernel.hpp"

namespace srbm {

// Point on the genus-zero compactification of {gamma = 0}, identified with
// the Riemann sphere via the rational parametrization below. The two points
// over theta1 = infinity are s = 0 and s = infinity; the latter cannot be a
// finite complex number, so it carries an explicit tag and the automorphisms
// swap the pair without producing NaNs.
struct SurfacePoint {
    cx s{0.0, 0.0};
    bool infinite = false;

    static SurfacePoint at_infinity() { return {cx{}, true}; }
};

// Anticlockwise circular arc. `start` is an angle in radians, `len` in
// (0, 2 pi]; end = start + len. Endpoint membership is controlled per end;
// points within `tol` of an open end are outside, within `tol` of a closed
// end inside.
struct Arc {
    double start = 0.0;
    double len = 0.0;
    bool include_start = false;
    bool include_end = false;
};

double wrap_angle(double t);                 // into [0, 2 pi)
double angle_gap(double a, double b);        // smallest |a - b| mod 2 pi

// Arc from a to b running anticlockwise.
Arc arc_ccw(double a, double b, bool include_a, bool include_b);
// Arc between a and b on the side avoiding the angle `avoid`; the inclusion
// flags stay attached to a and b regardless of which way the arc runs.
// Throws DegenerateArc when a and b coincide within tolerance.
Arc arc_avoiding(double a, double b, double avoid, bool include_a,
                 bool include_b, double tol = 1e-9);
bool in_arc(const Arc& arc, double t, double tol = 1e-9);

// Rational uniformization of the kernel curve:
//   theta1(s) = (t1p+t1m)/2 + (t1p-t1m)/4 (s + 1/s)
//   theta2(s) = (t2p+t2m)/2 + (t2p-t2m)/4 (s e^{-i beta} + e^{i beta}/s)
// with beta = arccos(-sigma12/sqrt(sigma11 sigma22)) in (0, pi). The unit
// circle |s|=1 is exactly the real ellipse; the Galois involutions of the
// two double covers act as zeta(s) = 1/s (fixes theta1) and
// eta(s) = e^{2 i beta}/s (fixes theta2); their compositions are the rigid
// rotations by +-2 beta.
class Surface {
public:
    explicit Surface(const ModelParams& p);

    const Kernel& kernel() const { return k_; }
    const ModelParams& params() const { return k_.params(); }
    double beta() const { return beta_; }

    cx theta1(const SurfacePoint& sp) const;  // infinite tag -> (inf, inf)
    cx theta2(const SurfacePoint& sp) const;

    // Real coordinates at unit-circle angle t.
    EllipsePoint theta(double t) const;
    SurfacePoint at_angle(double t) const;
    double angle_of(const SurfacePoint& sp) const;  // arg(s), requires |s|~1

    SurfacePoint zeta(const SurfacePoint& sp) const;      // s -> 1/s
    SurfacePoint eta(const SurfacePoint& sp) const;       // s -> e^{2i beta}/s
    SurfacePoint eta_zeta(const SurfacePoint& sp) const;  // s -> e^{+2i beta} s
    SurfacePoint zeta_eta(const SurfacePoint& sp) const;  // s -> e^{-2i beta} s

    // Galois images in curve coordinates through root sums of the defining
    // quadratics (stable even when a reflection column is axis-aligned):
    //   eta:  theta1 -> -2(sigma12 theta2 + mu1)/sigma11 - theta1
    //   zeta: theta2 -> -2(sigma12 theta1 + mu2)/sigma22 - theta2
    EllipsePoint apply_eta(EllipsePoint p) const;
    EllipsePoint apply_zeta(EllipsePoint p) const;

    // Inverse of the parametrization on the unit circle, via atan2 of the
    // normalized coordinates. Throws NotOnEllipse when gamma(p) != 0.
    SurfacePoint ellipse_to_s(EllipsePoint p) const;
    double angle_on_circle(EllipsePoint p) const;

    // Cached unit-circle angles of the marked points.
    double t_origin() const { return t_s0_; }      // s0 = (0, 0)
    double t_axis2() const { return t_s0p_; }      // s0' = (0, -2mu2/s22)
    double t_axis1() const { return t_s0pp_; }     // s0'' = (-2mu1/s11, 0)
    double t_s1_plus() const { return 0.0; }
    double t_s1_minus() const { return pi_; }
    double t_s2_plus() const { return beta_; }
    double t_s2_minus() const { return wrap_angle(beta_ + pi_); }

private:
    Kernel k_;
    double beta_ = 0.0;
    double m1_ = 0.0, h1_ = 0.0;  // theta1(s) = m1 + h1 (s + 1/s)/2
    double m2_ = 0.0, h2_ = 0.0;
    double t_s0_ = 0.0, t_s0p_ = 0.0, t_s0pp_ = 0.0;
    static constexpr double pi_ = 3.14159265358979323846;
};

} // namespace srbm
