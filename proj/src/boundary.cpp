#include "srbm/boundary.hpp"

#include <cmath>
#include <limits>

#include "srbm/errors.hpp"

namespace srbm {

std::optional<ProductFormModel> fit_product_form(const ModelParams& p,
                                                 double* residual_out) {
    const Mat2& s = p.sigma;
    const Mat2& r = p.refl;
    if (residual_out) *residual_out = std::numeric_limits<double>::infinity();
    const double rscale =
        std::fabs(r.a11) + std::fabs(r.a12) + std::fabs(r.a21) + std::fabs(r.a22);
    if (std::fabs(r.a11) <= 1e-14 * rscale || std::fabs(r.a22) <= 1e-14 * rscale)
        return std::nullopt;

    // Matching monomial coefficients in
    //   C gamma = c1 gamma1 (eta1 - theta1) + c2 gamma2 (eta2 - theta2)
    // forces c_i = -C sigma_ii / (2 r_ii) and leaves one scalar consistency
    // condition on the theta1*theta2 coefficient.
    const double skew =
        2.0 * s.a12 - s.a11 * r.a21 / r.a11 - s.a22 * r.a12 / r.a22;
    const double scale = s.a11 + s.a22 + 2.0 * std::fabs(s.a12);
    const double residual = std::fabs(skew) / scale;
    if (residual_out) *residual_out = residual;
    if (residual >= 1e-9) return std::nullopt;

    // Linear coefficients fix eta.
    const Mat2 m{0.5 * s.a11, 0.5 * s.a22 * r.a12 / r.a22,
                 0.5 * s.a11 * r.a21 / r.a11, 0.5 * s.a22};
    Vec2 eta;
    try {
        eta = solve(m, {-p.mu.x1, -p.mu.x2});
    } catch (const Error&) {
        return std::nullopt;
    }
    if (!(eta.x1 > 0.0) || !(eta.x2 > 0.0)) return std::nullopt;

    ProductFormModel pf;
    pf.eta1 = eta.x1;
    pf.eta2 = eta.x2;
    pf.C = eta.x1 * eta.x2;
    pf.c1 = -pf.C * s.a11 / (2.0 * r.a11);
    pf.c2 = -pf.C * s.a22 / (2.0 * r.a22);
    return pf;
}

namespace {

// gamma1/gamma2 along the zero surface, with the removable-singularity value
// at the origin where both reflection forms vanish: along the tangent
// direction (-mu2, mu1) the ratio tends to a drift/reflection constant.
struct RatioEval {
    const Surface& surf;
    const Kernel& k;
    double theta_ref;   // magnitude scale of the ellipse
    double rscale;

    explicit RatioEval(const Surface& s)
        : surf(s), k(s.kernel()) {
        theta_ref = 1.0 + std::max(std::fabs(k.theta1_minus()),
                                   std::fabs(k.theta1_plus())) +
                    std::max(std::fabs(k.theta2_minus()),
                             std::fabs(k.theta2_plus()));
        const Mat2& r = k.params().refl;
        rscale = std::fabs(r.a11) + std::fabs(r.a12) + std::fabs(r.a21) +
                 std::fabs(r.a22);
    }

    cx ratio12(const SurfacePoint& x) const { return eval(x, true); }
    cx ratio21(const SurfacePoint& x) const { return eval(x, false); }

  private:
    cx eval(const SurfacePoint& x, bool one_over_two) const {
        if (x.infinite || std::abs(x.s) == 0.0)
            fail(ErrorCode::ContinuationDiverged,
                 "continuation reached the point at infinity");
        const cx t1 = surf.theta1(x);
        const cx t2 = surf.theta2(x);
        const double mag = std::abs(t1) + std::abs(t2);
        const Mat2& r = k.params().refl;
        const Vec2& mu = k.params().mu;
        if (mag < 1e-9 * theta_ref) {
            const double num1 = r.a11 * mu.x2 - r.a21 * mu.x1;
            const double num2 = r.a12 * mu.x2 - r.a22 * mu.x1;
            return one_over_two ? cx{num1 / num2} : cx{num2 / num1};
        }
        const cx g1 = k.gamma1(t1, t2);
        const cx g2 = k.gamma2(t1, t2);
        const cx den = one_over_two ? g2 : g1;
        if (std::abs(den) <= 1e-13 * rscale * mag)
            fail(ErrorCode::PoleHit,
                 "reflection form vanishes along the continuation path");
        return (one_over_two ? g1 : g2) / den;
    }
};

} // namespace

cx continuation_value(const Surface& surf, const SurfacePoint& s,
                      const BoundaryTransform& bt, TransformPart part,
                      int max_steps) {
    const bool is_phi2 = part == TransformPart::phi2;
    const double sing =
        is_phi2 ? bt.phi2_singularity() : bt.phi1_singularity();
    // Direct evaluation is valid strictly left of the declared singularity
    // abscissa (half-plane analyticity of the one-sided transform).
    const double bound = std::isfinite(sing)
                             ? sing - 1e-9 * (1.0 + std::fabs(sing))
                             : std::numeric_limits<double>::infinity();
    const auto in_domain = [&](const SurfacePoint& x) {
        const cx th = is_phi2 ? surf.theta1(x) : surf.theta2(x);
        return th.real() <= bound;
    };
    const auto direct = [&](const SurfacePoint& x) {
        return is_phi2 ? bt.phi2(surf.theta1(x)) : bt.phi1(surf.theta2(x));
    };

    if (s.infinite || std::abs(s.s) == 0.0)
        fail(ErrorCode::ContinuationDiverged,
             "cannot continue through the point at infinity");
    if (in_domain(s)) return direct(s);

    // Probe both rotation directions and take the shorter path.
    const auto probe = [&](int dir) {
        const cx rot = std::polar(1.0, dir * 2.0 * surf.beta());
        SurfacePoint x = s;
        for (int n = 1; n <= max_steps; ++n) {
            x.s *= rot;
            if (in_domain(x)) return n;
        }
        return -1;
    };
    const int np = probe(+1);
    const int nm = probe(-1);
    int dir;
    if (np < 0 && nm < 0)
        fail(ErrorCode::ContinuationDiverged,
             "rotation orbit never re-enters the transform domain");
    if (np < 0) dir = -1;
    else if (nm < 0) dir = +1;
    else dir = np <= nm ? +1 : -1;
    const int steps = dir > 0 ? np : nm;

    const RatioEval re(surf);
    const cx rot = std::polar(1.0, dir * 2.0 * surf.beta());
    cx acc = 1.0;
    SurfacePoint x = s;
    for (int n = 0; n < steps; ++n) {
        const SurfacePoint next{x.s * rot, false};
        if (is_phi2) {
            // +2beta: phi2(s) = r12(zeta s) r21(eta zeta s) phi2(eta zeta s)
            // -2beta: phi2(s) = r12(s) r21(eta s) phi2(zeta eta s)
            acc *= dir > 0 ? re.ratio12(surf.zeta(x)) * re.ratio21(next)
                           : re.ratio12(x) * re.ratio21(surf.eta(x));
        } else {
            // +2beta: phi1(s) = r21(s) r12(zeta s) phi1(eta zeta s)
            // -2beta: phi1(s) = r21(eta s) r12(zeta eta s) phi1(zeta eta s)
            acc *= dir > 0 ? re.ratio21(x) * re.ratio12(surf.zeta(x))
                           : re.ratio21(surf.eta(x)) * re.ratio12(next);
        }
        x = next;
    }
    return acc * direct(x);
}

cx residue_at(const Surface& surf, const PoleCandidate& pole,
              const BoundaryTransform& bt) {
    const bool is_phi2 = pole.owner == PoleOwner::phi2;
    const TransformPart part =
        is_phi2 ? TransformPart::phi2 : TransformPart::phi1;
    const double tp = pole.t;
    const double own_p =
        is_phi2 ? pole.point.theta1 : pole.point.theta2;

    // Offset along the circle away from the nearer end of the carrying arc so
    // the probe stays inside the pole's analytic neighbourhood.
    const double e0 = is_phi2 ? surf.t_s1_plus() : surf.t_axis1();
    const double e1 = is_phi2 ? surf.t_axis2() : surf.t_s2_plus();
    const double g0 = angle_gap(tp, e0);
    const double g1 = angle_gap(tp, e1);
    const double sign = g0 < g1 ? +1.0 : -1.0;
    const double gap = std::min(g0, g1);
    const double d0 = std::min(1e-2, gap / 8.0);
    if (!(d0 > 0.0))
        fail(ErrorCode::ResidueUnstable, "pole sits on an arc end");

    // (theta - theta_p) phi(theta) sampled at four halving offsets, then
    // Richardson extrapolated; the limit is the residue in the owner variable.
    cx v[4];
    for (int j = 0; j < 4; ++j) {
        const double t = tp + sign * d0 / double(1 << j);
        const SurfacePoint x = surf.at_angle(t);
        const cx own = is_phi2 ? surf.theta1(x) : surf.theta2(x);
        v[j] = (own - own_p) * continuation_value(surf, x, bt, part);
    }
    cx r1[3], r2[2];
    for (int j = 0; j < 3; ++j) r1[j] = 2.0 * v[j + 1] - v[j];
    for (int j = 0; j < 2; ++j) r2[j] = (4.0 * r1[j + 1] - r1[j]) / 3.0;
    const cx r3 = (8.0 * r2[1] - r2[0]) / 7.0;
    const double spread = std::abs(r3 - r2[1]) / (std::abs(r3) + 1e-300);
    if (spread > 1e-6)
        fail(ErrorCode::ResidueUnstable,
             "residue extrapolation did not converge");
    return r3;
}

} // namespace srbm
