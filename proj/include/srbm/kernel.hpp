#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include "srbm/model.hpp"

namespace srbm {

using cx = std::complex<double>;

// Point on the kernel curve {gamma = 0} in (theta1, theta2) coordinates.
struct EllipsePoint {
    double theta1 = 0.0;
    double theta2 = 0.0;
};

inline double ray_rate(EllipsePoint p, double alpha) {
    return p.theta1 * std::cos(alpha) + p.theta2 * std::sin(alpha);
}

// Laplace-transform kernel of the quadrant RBM. Internal sign convention:
//   gamma(theta)  = <theta, sigma theta>/2 + <mu, theta>
//   gamma1(theta) = r11 theta1 + r21 theta2   (first column of refl)
//   gamma2(theta) = r12 theta1 + r22 theta2   (second column of refl)
// The zero set of gamma over the reals is an ellipse through the origin.
//
// Construction requires mu1 < 0, mu2 < 0 (UnsupportedDrift otherwise): with
// nonnegative drift components the branch points below degenerate.
class Kernel {
public:
    explicit Kernel(const ModelParams& p);

    const ModelParams& params() const { return p_; }
    double det_sigma() const { return det_sigma_; }

    double gamma(double t1, double t2) const;
    cx gamma(cx t1, cx t2) const;
    double gamma(EllipsePoint p) const { return gamma(p.theta1, p.theta2); }
    double gamma1(double t1, double t2) const;
    cx gamma1(cx t1, cx t2) const;
    double gamma1(EllipsePoint p) const { return gamma1(p.theta1, p.theta2); }
    double gamma2(double t1, double t2) const;
    cx gamma2(cx t1, cx t2) const;
    double gamma2(EllipsePoint p) const { return gamma2(p.theta1, p.theta2); }

    // gamma as a quadratic in theta2 at fixed theta1:
    //   a2 theta2^2 + b2(theta1) theta2 + c2(theta1),
    // and symmetrically in theta1 at fixed theta2.
    double a2() const { return 0.5 * p_.sigma.a22; }
    cx b2(cx t1) const { return p_.sigma.a12 * t1 + p_.mu.x2; }
    cx c2(cx t1) const { return 0.5 * p_.sigma.a11 * t1 * t1 + p_.mu.x1 * t1; }
    double a1() const { return 0.5 * p_.sigma.a11; }
    cx b1(cx t2) const { return p_.sigma.a12 * t2 + p_.mu.x1; }
    cx c1(cx t2) const { return 0.5 * p_.sigma.a22 * t2 * t2 + p_.mu.x2 * t2; }

    // Discriminants b^2 - 4ac of the two quadratics.
    cx disc1(cx t1) const;       // in theta1; roots are the theta1 branch points
    cx disc2(cx t2) const;       // in theta2
    double disc1(double t1) const { return std::real(disc1(cx(t1))); }
    double disc2(double t2) const { return std::real(disc2(cx(t2))); }

    // Real branch points: disc1 > 0 exactly on (theta1_minus, theta1_plus).
    double theta1_minus() const { return t1m_; }
    double theta1_plus() const { return t1p_; }
    double theta2_minus() const { return t2m_; }
    double theta2_plus() const { return t2p_; }

    // Two-valued algebraic functions Theta2(theta1), Theta1(theta2) returned
    // as (minus, plus). Branch labels: the minus branch has the smaller real
    // part, ties broken by the smaller imaginary part; for real arguments
    // inside the branch-point interval this is the usual -sqrt/+sqrt order.
    std::pair<cx, cx> theta2_branches(cx t1) const;
    std::pair<cx, cx> theta1_branches(cx t2) const;

    // Larger real root above a real abscissa strictly inside the branch-point
    // interval (used for slopes of the upper arc of the ellipse).
    double theta2_upper(double t1) const;
    double theta1_upper(double t2) const;

    // Implicit slope d theta2 / d theta1 of {gamma=0} at a point on the curve;
    // throws DerivativeAtBranchPoint when the tangent is vertical there.
    double curve_slope(EllipsePoint p) const;
    // d theta1 / d theta2 (reciprocal orientation), vertical guard swapped.
    double curve_slope_inv(EllipsePoint p) const;

    // Intersections of the ellipse with the axes:
    // s0 = (0,0), s0' = (0, -2 mu2/s22), s0'' = (-2 mu1/s11, 0).
    EllipsePoint s0() const { return {0.0, 0.0}; }
    EllipsePoint s0_prime() const;
    EllipsePoint s0_dblprime() const;
    // Points of vertical / horizontal tangency (double roots at the branch
    // points): s1pm = (theta1pm, -b2/2a2), s2pm = (-b1/2a1, theta2pm).
    EllipsePoint s1_plus() const;
    EllipsePoint s1_minus() const;
    EllipsePoint s2_plus() const;
    EllipsePoint s2_minus() const;

    bool on_ellipse(EllipsePoint p, double tol = 1e-9) const;

private:
    ModelParams p_;
    double det_sigma_ = 0.0;
    double t1m_ = 0.0, t1p_ = 0.0;
    double t2m_ = 0.0, t2p_ = 0.0;
};

} // namespace srbm
