#include "srbm/kernel.hpp"

#include <cmath>

#include "srbm/errors.hpp"

namespace srbm {

Kernel::Kernel(const ModelParams& p) : p_(p) {
    if (!drift_supported(p))
        fail(ErrorCode::UnsupportedDrift,
             "kernel geometry requires mu1 < 0 and mu2 < 0");
    det_sigma_ = det(p_.sigma);

    // disc1(t) = t^2 (s12^2 - s11 s22) + 2 t (mu2 s12 - mu1 s22) + mu2^2.
    // Leading coefficient is -det(sigma) < 0, so the roots are real iff
    // D1 = (mu2 s12 - mu1 s22)^2 + mu2^2 det(sigma) > 0; strict under the
    // drift gate. Roots straddle zero: disc1(0) = mu2^2 > 0 and the parabola
    // opens downward, t1m < 0 < t1p.
    const Mat2& s = p_.sigma;
    const Vec2& mu = p_.mu;
    const double B1 = mu.x2 * s.a12 - mu.x1 * s.a22;
    const double D1 = B1 * B1 + mu.x2 * mu.x2 * det_sigma_;
    t1m_ = (B1 - std::sqrt(D1)) / det_sigma_;
    t1p_ = (B1 + std::sqrt(D1)) / det_sigma_;

    const double B2 = mu.x1 * s.a12 - mu.x2 * s.a11;
    const double D2 = B2 * B2 + mu.x1 * mu.x1 * det_sigma_;
    t2m_ = (B2 - std::sqrt(D2)) / det_sigma_;
    t2p_ = (B2 + std::sqrt(D2)) / det_sigma_;
}

double Kernel::gamma(double t1, double t2) const {
    const Mat2& s = p_.sigma;
    return 0.5 * (s.a11 * t1 * t1 + s.a22 * t2 * t2 + 2.0 * s.a12 * t1 * t2) +
           p_.mu.x1 * t1 + p_.mu.x2 * t2;
}

cx Kernel::gamma(cx t1, cx t2) const {
    const Mat2& s = p_.sigma;
    return 0.5 * (s.a11 * t1 * t1 + s.a22 * t2 * t2 + 2.0 * s.a12 * t1 * t2) +
           p_.mu.x1 * t1 + p_.mu.x2 * t2;
}

double Kernel::gamma1(double t1, double t2) const {
    return p_.refl.a11 * t1 + p_.refl.a21 * t2;
}
cx Kernel::gamma1(cx t1, cx t2) const {
    return p_.refl.a11 * t1 + p_.refl.a21 * t2;
}
double Kernel::gamma2(double t1, double t2) const {
    return p_.refl.a12 * t1 + p_.refl.a22 * t2;
}
cx Kernel::gamma2(cx t1, cx t2) const {
    return p_.refl.a12 * t1 + p_.refl.a22 * t2;
}

cx Kernel::disc1(cx t1) const {
    const cx b = b2(t1);
    return b * b - 4.0 * a2() * c2(t1);
}

cx Kernel::disc2(cx t2) const {
    const cx b = b1(t2);
    return b * b - 4.0 * a1() * c1(t2);
}

namespace {

// (minus, plus) with minus = lexicographically smaller (Re, Im).
std::pair<cx, cx> ordered_roots(cx neg_b, cx sq, double two_a) {
    cx r1 = (neg_b - sq) / two_a;
    cx r2 = (neg_b + sq) / two_a;
    const bool swap = r1.real() > r2.real() ||
                      (r1.real() == r2.real() && r1.imag() > r2.imag());
    if (swap) std::swap(r1, r2);
    return {r1, r2};
}

} // namespace

std::pair<cx, cx> Kernel::theta2_branches(cx t1) const {
    return ordered_roots(-b2(t1), std::sqrt(disc1(t1)), 2.0 * a2());
}

std::pair<cx, cx> Kernel::theta1_branches(cx t2) const {
    return ordered_roots(-b1(t2), std::sqrt(disc2(t2)), 2.0 * a1());
}

double Kernel::theta2_upper(double t1) const {
    const double d = disc1(t1);
    if (!(d > 0.0))
        fail(ErrorCode::DerivativeAtBranchPoint,
             "theta2_upper: abscissa not strictly inside the branch interval");
    return (-std::real(b2(cx(t1))) + std::sqrt(d)) / (2.0 * a2());
}

double Kernel::theta1_upper(double t2) const {
    const double d = disc2(t2);
    if (!(d > 0.0))
        fail(ErrorCode::DerivativeAtBranchPoint,
             "theta1_upper: ordinate not strictly inside the branch interval");
    return (-std::real(b1(cx(t2))) + std::sqrt(d)) / (2.0 * a1());
}

double Kernel::curve_slope(EllipsePoint p) const {
    // Implicit differentiation of gamma = 0: dtheta2/dtheta1 =
    // -(s11 t1 + s12 t2 + mu1)/(s22 t2 + s12 t1 + mu2).
    const Mat2& s = p_.sigma;
    const double num = s.a11 * p.theta1 + s.a12 * p.theta2 + p_.mu.x1;
    const double den = s.a22 * p.theta2 + s.a12 * p.theta1 + p_.mu.x2;
    const double scale = std::fabs(s.a11) + std::fabs(s.a22) +
                         std::fabs(p_.mu.x1) + std::fabs(p_.mu.x2);
    if (std::fabs(den) <= 1e-12 * scale * (1.0 + std::fabs(p.theta1) +
                                           std::fabs(p.theta2)))
        fail(ErrorCode::DerivativeAtBranchPoint,
             "curve slope: vertical tangent");
    return -num / den;
}

double Kernel::curve_slope_inv(EllipsePoint p) const {
    const Mat2& s = p_.sigma;
    const double num = s.a22 * p.theta2 + s.a12 * p.theta1 + p_.mu.x2;
    const double den = s.a11 * p.theta1 + s.a12 * p.theta2 + p_.mu.x1;
    const double scale = std::fabs(s.a11) + std::fabs(s.a22) +
                         std::fabs(p_.mu.x1) + std::fabs(p_.mu.x2);
    if (std::fabs(den) <= 1e-12 * scale * (1.0 + std::fabs(p.theta1) +
                                           std::fabs(p.theta2)))
        fail(ErrorCode::DerivativeAtBranchPoint,
             "curve slope: horizontal tangent");
    return -num / den;
}

EllipsePoint Kernel::s0_prime() const {
    return {0.0, -2.0 * p_.mu.x2 / p_.sigma.a22};
}

EllipsePoint Kernel::s0_dblprime() const {
    return {-2.0 * p_.mu.x1 / p_.sigma.a11, 0.0};
}

EllipsePoint Kernel::s1_plus() const {
    return {t1p_, -std::real(b2(cx(t1p_))) / (2.0 * a2())};
}
EllipsePoint Kernel::s1_minus() const {
    return {t1m_, -std::real(b2(cx(t1m_))) / (2.0 * a2())};
}
EllipsePoint Kernel::s2_plus() const {
    return {-std::real(b1(cx(t2p_))) / (2.0 * a1()), t2p_};
}
EllipsePoint Kernel::s2_minus() const {
    return {-std::real(b1(cx(t2m_))) / (2.0 * a1()), t2m_};
}

bool Kernel::on_ellipse(EllipsePoint p, double tol) const {
    const double scale = 1.0 + p.theta1 * p.theta1 + p.theta2 * p.theta2;
    return std::fabs(gamma(p)) <= tol * scale;
}

} // namespace srbm
