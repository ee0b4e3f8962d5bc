#include "srbm/surface.hpp"

#include <cmath>
#include <limits>

#include "srbm/errors.hpp"

namespace srbm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
const cx kInfTheta{std::numeric_limits<double>::infinity(),
                   std::numeric_limits<double>::infinity()};
} // namespace

double wrap_angle(double t) {
    double w = std::fmod(t, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w == kTwoPi) w = 0.0;
    return w;
}

double angle_gap(double a, double b) {
    const double d = wrap_angle(a - b);
    return std::min(d, kTwoPi - d);
}

Arc arc_ccw(double a, double b, bool include_a, bool include_b) {
    return {wrap_angle(a), wrap_angle(b - a), include_a, include_b};
}

Arc arc_avoiding(double a, double b, double avoid, bool include_a,
                 bool include_b, double tol) {
    if (angle_gap(a, b) <= tol)
        fail(ErrorCode::DegenerateArc, "arc endpoints coincide");
    const double len = wrap_angle(b - a);
    const double rel = wrap_angle(avoid - a);
    if (rel > tol && rel < len - tol)  // avoided angle inside ccw(a, b)
        return {wrap_angle(b), kTwoPi - len, include_b, include_a};
    return {wrap_angle(a), len, include_a, include_b};
}

bool in_arc(const Arc& arc, double t, double tol) {
    double d = wrap_angle(t - arc.start);
    if (d >= kTwoPi - tol) d -= kTwoPi;  // just before the start point
    if (std::fabs(d) <= tol) return arc.include_start;
    if (std::fabs(d - arc.len) <= tol) return arc.include_end;
    return d > tol && d < arc.len - tol;
}

Surface::Surface(const ModelParams& p) : k_(p) {
    const Mat2& s = p.sigma;
    beta_ = std::acos(-s.a12 / std::sqrt(s.a11 * s.a22));
    m1_ = 0.5 * (k_.theta1_plus() + k_.theta1_minus());
    h1_ = 0.5 * (k_.theta1_plus() - k_.theta1_minus());
    m2_ = 0.5 * (k_.theta2_plus() + k_.theta2_minus());
    h2_ = 0.5 * (k_.theta2_plus() - k_.theta2_minus());
    t_s0_ = angle_on_circle(k_.s0());
    t_s0p_ = angle_on_circle(k_.s0_prime());
    t_s0pp_ = angle_on_circle(k_.s0_dblprime());
}

cx Surface::theta1(const SurfacePoint& sp) const {
    if (sp.infinite || sp.s == cx{}) return kInfTheta;
    return m1_ + 0.5 * h1_ * (sp.s + 1.0 / sp.s);
}

cx Surface::theta2(const SurfacePoint& sp) const {
    if (sp.infinite || sp.s == cx{}) return kInfTheta;
    const cx ei = std::polar(1.0, beta_);
    return m2_ + 0.5 * h2_ * (sp.s / ei + ei / sp.s);
}

EllipsePoint Surface::theta(double t) const {
    return {m1_ + h1_ * std::cos(t), m2_ + h2_ * std::cos(t - beta_)};
}

SurfacePoint Surface::at_angle(double t) const {
    return {std::polar(1.0, t), false};
}

double Surface::angle_of(const SurfacePoint& sp) const {
    if (sp.infinite)
        fail(ErrorCode::NotOnEllipse, "angle of the point at infinity");
    if (std::fabs(std::abs(sp.s) - 1.0) > 1e-6)
        fail(ErrorCode::NotOnEllipse, "angle of a point off the unit circle");
    return wrap_angle(std::arg(sp.s));
}

SurfacePoint Surface::zeta(const SurfacePoint& sp) const {
    if (sp.infinite) return {cx{}, false};
    if (sp.s == cx{}) return SurfacePoint::at_infinity();
    return {1.0 / sp.s, false};
}

SurfacePoint Surface::eta(const SurfacePoint& sp) const {
    const cx rot = std::polar(1.0, 2.0 * beta_);
    if (sp.infinite) return {cx{}, false};
    if (sp.s == cx{}) return SurfacePoint::at_infinity();
    return {rot / sp.s, false};
}

SurfacePoint Surface::eta_zeta(const SurfacePoint& sp) const {
    if (sp.infinite || sp.s == cx{}) return sp;  // rotation fixes 0 and inf
    return {std::polar(1.0, 2.0 * beta_) * sp.s, false};
}

SurfacePoint Surface::zeta_eta(const SurfacePoint& sp) const {
    if (sp.infinite || sp.s == cx{}) return sp;
    return {std::polar(1.0, -2.0 * beta_) * sp.s, false};
}

EllipsePoint Surface::apply_eta(EllipsePoint p) const {
    const Mat2& s = params().sigma;
    const double sum = -2.0 * (s.a12 * p.theta2 + params().mu.x1) / s.a11;
    return {sum - p.theta1, p.theta2};
}

EllipsePoint Surface::apply_zeta(EllipsePoint p) const {
    const Mat2& s = params().sigma;
    const double sum = -2.0 * (s.a12 * p.theta1 + params().mu.x2) / s.a22;
    return {p.theta1, sum - p.theta2};
}

double Surface::angle_on_circle(EllipsePoint p) const {
    if (!k_.on_ellipse(p, 1e-7))
        fail(ErrorCode::NotOnEllipse, "point does not satisfy gamma = 0");
    const double u = (p.theta1 - m1_) / h1_;
    const double v = (p.theta2 - m2_) / h2_;
    const double sb = std::sin(beta_);
    // cos t = u and cos(t - beta) = v determine sin t on the real ellipse.
    const double w = (v - u * std::cos(beta_)) / sb;
    if (std::fabs(u * u + w * w - 1.0) > 1e-6)
        fail(ErrorCode::NotOnEllipse, "coordinates inconsistent with circle");
    return wrap_angle(std::atan2(w, u));
}

SurfacePoint Surface::ellipse_to_s(EllipsePoint p) const {
    return at_angle(angle_on_circle(p));
}

} // namespace srbm
