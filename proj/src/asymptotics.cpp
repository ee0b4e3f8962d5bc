#include "srbm/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "srbm/errors.hpp"

namespace srbm {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kCoincidenceTol = 1e-7;  // saddle-vs-pole angle coincidence
constexpr double kArcTol = 1e-9;
constexpr double kTieTol = 1e-9;          // relative rate tie for TwoPoles

void require_stable(const ModelParams& p) {
    if (!validate_stability(p).stable)
        fail(ErrorCode::UnstableModel,
             "asymptotics require a positive-recurrent model");
}

} // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::SaddleDominated:       return "SaddleDominated";
        case Regime::PoleZetaThetaStarStar: return "PoleZetaThetaStarStar";
        case Regime::PoleEtaThetaStar:      return "PoleEtaThetaStar";
        case Regime::TwoPoles:              return "TwoPoles";
        case Regime::Untreated:             return "Untreated";
    }
    return "?";
}

SaddleInfo saddle_point(const Surface& surf, double alpha) {
    if (!(alpha > 0.0) || !(alpha < 0.5 * kPi))
        fail(ErrorCode::AngleOutOfRange,
             "ray angle must satisfy 0 < alpha < pi/2");
    require_stable(surf.params());

    // Lagrange multiplier form of argmax{ <theta|e_alpha> : gamma(theta)=0 }:
    // grad gamma = lambda' e_alpha  =>  theta = sigma^{-1}(lambda e - mu),
    // lambda fixed by gamma(theta) = 0.
    const Mat2 si = inverse(surf.params().sigma);
    const Vec2 e{std::cos(alpha), std::sin(alpha)};
    const Vec2 si_mu = mul(si, surf.params().mu);
    const Vec2 si_e = mul(si, e);
    const double q_mu = dot(surf.params().mu, si_mu);
    const double q_e = dot(e, si_e);
    const double lambda = std::sqrt(q_mu / q_e);

    SaddleInfo out;
    out.alpha = alpha;
    const Vec2 th = lambda * si_e - si_mu;
    out.point = {th.x1, th.x2};
    out.rate = dot(th, e);
    out.t = surf.angle_on_circle(out.point);
    out.s = surf.at_angle(out.t);

    // Curvature of f(t) = <theta(t)|e_alpha> along the circle; f has a strict
    // maximum at the saddle, so -f'' > 0.
    const double h = 1e-5;
    const auto f = [&](double t) { return ray_rate(surf.theta(t), alpha); };
    const double ftt =
        (f(out.t + h) - 2.0 * f(out.t) + f(out.t - h)) / (h * h);
    out.fpp = -ftt;
    if (!(out.fpp > 0.0))
        fail(ErrorCode::DerivativeAtBranchPoint,
             "saddle curvature vanished along the circle");
    return out;
}

PoleZeroPoints pole_zeros(const ModelParams& p) {
    const Mat2& s = p.sigma;
    const Mat2& r = p.refl;
    // theta* spans the line gamma1 = 0 (direction (-r21, r11)); the scale
    // 2 <mu, col1-normal> / <dir, sigma dir> places it back on the ellipse.
    const double q1 =
        r.a21 * r.a21 * s.a11 - 2.0 * r.a11 * r.a21 * s.a12 +
        r.a11 * r.a11 * s.a22;
    const double q2 =
        r.a22 * r.a22 * s.a11 - 2.0 * r.a22 * r.a12 * s.a12 +
        r.a12 * r.a12 * s.a22;
    if (!(q1 > 0.0) || !(q2 > 0.0))
        fail(ErrorCode::SingularTransform,
             "reflection column degenerate against sigma");
    const double k1 = 2.0 * (r.a21 * p.mu.x1 - r.a11 * p.mu.x2) / q1;
    const double k2 = 2.0 * (r.a12 * p.mu.x2 - r.a22 * p.mu.x1) / q2;
    return {{-k1 * r.a21, k1 * r.a11}, {k2 * r.a22, -k2 * r.a12}};
}

GaloisImages galois_images(const Surface& surf, const PoleZeroPoints& z) {
    return {surf.apply_eta(z.theta_star), surf.apply_zeta(z.theta_star_star)};
}

GaloisImages galois_images(const Surface& surf) {
    return galois_images(surf, pole_zeros(surf.params()));
}

namespace {

// Orbit candidates for one transform: rotations of the two seed points that
// stay on the admissible arc. `arc_valid` is the open arc carrying poles of
// this transform, `arc_active` the alpha-dependent sub-arc whose residues
// survive the contour shift.
void collect_candidates(const Surface& surf, PoleOwner owner,
                        const std::vector<std::pair<EllipsePoint, PoleSource>>& seeds,
                        const Arc& arc_valid, const Arc& arc_active,
                        int max_depth, std::vector<PoleCandidate>& out) {
    const double two_beta = 2.0 * surf.beta();
    for (const auto& [seed, source] : seeds) {
        const double t0 = surf.angle_on_circle(seed);
        for (int j = 0; j <= max_depth; ++j) {
            bool any_in = false;
            for (const double t :
                 {t0 + two_beta * j, t0 - two_beta * j}) {
                if (!in_arc(arc_valid, t, kArcTol)) {
                    if (j == 0) break;
                    continue;
                }
                any_in = true;
                if (!in_arc(arc_active, t, kArcTol)) {
                    if (j == 0) break;
                    continue;
                }
                PoleCandidate c;
                c.owner = owner;
                c.source = source;
                c.depth = j;
                c.t = wrap_angle(t);
                c.point = surf.theta(c.t);
                c.order = 1;
                // Beyond the first sheet the telescoped factors are not
                // probed for confluent zeros, so the multiplicity stays
                // uncertified.
                c.order_known = (j == 0);
                bool dup = false;
                for (const auto& prev : out)
                    dup = dup || angle_gap(prev.t, c.t) <= kArcTol;
                if (!dup) out.push_back(c);
                if (j == 0) break;  // +-0 are the same angle
            }
            if (!any_in && j > 0) break;  // orbit left the valid arc
        }
    }
}

} // namespace

PoleSets enumerate_poles(const Surface& surf, double alpha, int max_depth) {
    const SaddleInfo sad = saddle_point(surf, alpha);
    const GaloisImages gi = galois_images(surf);
    const double t_zz = surf.angle_on_circle(gi.zeta_theta_star_star);
    const double t_ee = surf.angle_on_circle(gi.eta_theta_star);
    if (angle_gap(sad.t, t_zz) < kCoincidenceTol ||
        angle_gap(sad.t, t_ee) < kCoincidenceTol)
        fail(ErrorCode::SaddleIsPole,
             "saddle point coincides with a pole candidate");

    PoleSets sets;

    // phi2: poles live on the open arc (s1+, s0'); residues count on the
    // alpha-dependent open sub-arc (theta(alpha), s0'), origin avoided.
    {
        const Arc valid = arc_ccw(surf.t_s1_plus(), surf.t_axis2(), false, false);
        const Arc active = arc_avoiding(sad.t, surf.t_axis2(), surf.t_origin(),
                                        false, false);
        const std::vector<std::pair<EllipsePoint, PoleSource>> seeds{
            {gi.zeta_theta_star_star, PoleSource::theta_star_star}};
        collect_candidates(surf, PoleOwner::phi2, seeds, valid, active,
                           max_depth, sets.phi2);
    }
    // phi1: mirrored, poles on (s0'', s2+), active sub-arc (s0'', theta(alpha)).
    {
        const Arc valid = arc_ccw(surf.t_axis1(), surf.t_s2_plus(), false, false);
        const Arc active = arc_avoiding(surf.t_axis1(), sad.t, surf.t_origin(),
                                        false, false);
        const std::vector<std::pair<EllipsePoint, PoleSource>> seeds{
            {gi.eta_theta_star, PoleSource::theta_star}};
        collect_candidates(surf, PoleOwner::phi1, seeds, valid, active,
                           max_depth, sets.phi1);
    }

    const auto by_rate = [alpha](const PoleCandidate& a, const PoleCandidate& b) {
        return ray_rate(a.point, alpha) < ray_rate(b.point, alpha);
    };
    std::sort(sets.phi2.begin(), sets.phi2.end(), by_rate);
    std::sort(sets.phi1.begin(), sets.phi1.end(), by_rate);
    return sets;
}

AngleThresholds angle_thresholds(const Surface& surf) {
    require_stable(surf.params());
    const Kernel& k = surf.kernel();
    AngleThresholds th;
    th.gamma2_s1p = k.gamma2(k.s1_plus());
    th.gamma1_s2p = k.gamma1(k.s2_plus());
    const PoleZeroPoints z = pole_zeros(surf.params());
    const GaloisImages gi = galois_images(surf, z);

    if (th.gamma2_s1p > 0.0) {
        // Slope of the upper branch Theta2+ over the abscissa of theta**.
        const EllipsePoint above{z.theta_star_star.theta1,
                                 k.theta2_upper(z.theta_star_star.theta1)};
        th.A_star_star = k.curve_slope(above);
        if (*th.A_star_star < 0.0)
            th.alpha1 = std::atan(-1.0 / *th.A_star_star);
    }
    if (th.gamma1_s2p > 0.0) {
        const EllipsePoint right{k.theta1_upper(z.theta_star.theta2),
                                 z.theta_star.theta2};
        th.A_star = k.curve_slope_inv(right);
        if (*th.A_star < 0.0)
            th.alpha2 = std::atan(-*th.A_star);
    }
    if (th.gamma2_s1p > 0.0 && th.gamma1_s2p > 0.0) {
        const EllipsePoint zz = gi.zeta_theta_star_star;
        const EllipsePoint ee = gi.eta_theta_star;
        // The two pole rates cross inside the quadrant only when the points
        // interleave strictly.
        if (zz.theta1 < ee.theta1 && zz.theta2 > ee.theta2)
            th.beta0 = std::atan((ee.theta1 - zz.theta1) /
                                 (zz.theta2 - ee.theta2));
    }
    return th;
}

DecayReport classify(const Surface& surf, double alpha) {
    const SaddleInfo sad = saddle_point(surf, alpha);
    const GaloisImages gi = galois_images(surf);
    const double t_zz = surf.angle_on_circle(gi.zeta_theta_star_star);
    const double t_ee = surf.angle_on_circle(gi.eta_theta_star);

    DecayReport rep;
    rep.thresholds = angle_thresholds(surf);

    const bool zz_coincides = angle_gap(sad.t, t_zz) < kCoincidenceTol;
    const bool ee_coincides = angle_gap(sad.t, t_ee) < kCoincidenceTol;
    if (zz_coincides || ee_coincides) {
        rep.regime = Regime::Untreated;
        rep.rate = sad.rate;
        rep.prefactor_exponent = 0.0;
        rep.upper_bound_only = true;
        if (zz_coincides) rep.dominant.push_back(gi.zeta_theta_star_star);
        if (ee_coincides && !(zz_coincides && angle_gap(t_zz, t_ee) < kArcTol))
            rep.dominant.push_back(gi.eta_theta_star);
        return rep;
    }

    const Arc arc2 = arc_avoiding(sad.t, surf.t_axis2(), surf.t_origin(),
                                  false, true);
    const Arc arc1 = arc_avoiding(surf.t_axis1(), sad.t, surf.t_origin(),
                                  true, false);
    const bool in2 = in_arc(arc2, t_zz, kArcTol);
    const bool in1 = in_arc(arc1, t_ee, kArcTol);

    if (!in1 && !in2) {
        rep.regime = Regime::SaddleDominated;
        rep.rate = sad.rate;
        rep.prefactor_exponent = -0.5;
        rep.dominant.push_back(sad.point);
        return rep;
    }

    const double rate_zz = ray_rate(gi.zeta_theta_star_star, alpha);
    const double rate_ee = ray_rate(gi.eta_theta_star, alpha);
    rep.prefactor_exponent = 0.0;
    if (in2 && !in1) {
        rep.regime = Regime::PoleZetaThetaStarStar;
        rep.rate = rate_zz;
        rep.dominant.push_back(gi.zeta_theta_star_star);
    } else if (in1 && !in2) {
        rep.regime = Regime::PoleEtaThetaStar;
        rep.rate = rate_ee;
        rep.dominant.push_back(gi.eta_theta_star);
    } else {
        const double scale = std::max(std::fabs(rate_zz), std::fabs(rate_ee));
        if (std::fabs(rate_zz - rate_ee) <= kTieTol * scale) {
            rep.regime = Regime::TwoPoles;
            rep.rate = std::min(rate_zz, rate_ee);
            rep.dominant.push_back(gi.zeta_theta_star_star);
            rep.dominant.push_back(gi.eta_theta_star);
        } else if (rate_zz < rate_ee) {
            rep.regime = Regime::PoleZetaThetaStarStar;
            rep.rate = rate_zz;
            rep.dominant.push_back(gi.zeta_theta_star_star);
        } else {
            rep.regime = Regime::PoleEtaThetaStar;
            rep.rate = rate_ee;
            rep.dominant.push_back(gi.eta_theta_star);
        }
    }
    return rep;
}

} // namespace srbm
