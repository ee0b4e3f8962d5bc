#pragma once

#include <optional>
#include <vector>

#include "srbm/surface.hpp"

namespace srbm {

// Decay classes of the stationary density along a ray of angle alpha:
// pi(r e_alpha) ~ c * r^p * exp(-rate * r) with p = prefactor_exponent.
enum class Regime {
    SaddleDominated,        // p = -1/2, rate from the saddle point
    PoleZetaThetaStarStar,  // p = 0, dominant simple pole zeta(theta**)
    PoleEtaThetaStar,       // p = 0, dominant simple pole eta(theta*)
    TwoPoles,               // both poles achieve the same rate
    Untreated,              // saddle coincides with a pole; only an
                            // upper-bound exponent is reported
};
const char* to_string(Regime r);

struct SaddleInfo {
    double alpha = 0.0;
    double t = 0.0;        // unit-circle angle of the saddle
    SurfacePoint s;
    EllipsePoint point;    // theta(alpha), argmax of <theta|e_alpha> on the ellipse
    double rate = 0.0;     // <theta(alpha)|e_alpha>
    double fpp = 0.0;      // -d^2/dt^2 <theta(t)|e_alpha> at t, > 0
};

// Closed form: theta(alpha) = sigma^{-1} (lambda e_alpha - mu) with
// lambda = sqrt(<mu, sigma^{-1} mu> / <e_alpha, sigma^{-1} e_alpha>).
// Throws AngleOutOfRange unless 0 < alpha < pi/2.
SaddleInfo saddle_point(const Surface& surf, double alpha);

// Nontrivial zeros of gamma1 / gamma2 on the ellipse:
//   theta*  = 2 (r21 mu1 - r11 mu2)/(r21^2 s11 - 2 r11 r21 s12 + r11^2 s22) * (-r21, r11)
//   theta** = 2 (r12 mu2 - r22 mu1)/(r22^2 s11 - 2 r22 r12 s12 + r12^2 s22) * (r22, -r12)
struct PoleZeroPoints {
    EllipsePoint theta_star;       // gamma1 = 0, distinct from the origin
    EllipsePoint theta_star_star;  // gamma2 = 0
};
PoleZeroPoints pole_zeros(const ModelParams& p);

struct GaloisImages {
    EllipsePoint eta_theta_star;        // candidate pole of phi1
    EllipsePoint zeta_theta_star_star;  // candidate pole of phi2
};
GaloisImages galois_images(const Surface& surf, const PoleZeroPoints& z);
GaloisImages galois_images(const Surface& surf);

enum class PoleOwner { phi1, phi2 };
enum class PoleSource { theta_star, theta_star_star };

struct PoleCandidate {
    PoleOwner owner = PoleOwner::phi2;
    PoleSource source = PoleSource::theta_star_star;
    int depth = 0;           // rotation steps applied beyond the base image
    EllipsePoint point;
    double t = 0.0;          // unit-circle angle
    int order = 1;
    bool order_known = true; // false past the first sheet: not residue-probed
};

struct PoleSets {
    std::vector<PoleCandidate> phi2;  // on the open arc (theta(alpha), s0')
    std::vector<PoleCandidate> phi1;  // on the open arc (s0'', theta(alpha))
};

// Pole candidates of the continued transforms whose residue terms are not
// absorbed by the saddle remainder: rotation-orbit images of zeta(theta**)
// and eta(theta*) filtered by arc membership. Throws SaddleIsPole when
// theta(alpha) lies within tolerance of a base candidate.
PoleSets enumerate_poles(const Surface& surf, double alpha,
                         int max_depth = 16);

// Angles where the dominant mechanism changes, each defined only when the
// sign pattern that creates the transition is present:
//   alpha1 = arctan(-1/A**)  requires gamma2(s1+) > 0 and A** < 0
//   alpha2 = arctan(-A*)     requires gamma1(s2+) > 0 and A*  < 0
//   beta0  = arctan((theta1(z**) - theta1(e*)) / (theta2(e*) - theta2(z**)))
//            requires both gammas positive and the two pole points
//            interleaved so their rates cross.
// A** is the slope of the upper branch Theta2+ at the abscissa of theta**;
// A* the mirrored slope of Theta1+ at the ordinate of theta*.
struct AngleThresholds {
    std::optional<double> alpha1, alpha2, beta0;
    std::optional<double> A_star_star, A_star;
    double gamma2_s1p = 0.0;
    double gamma1_s2p = 0.0;
};
AngleThresholds angle_thresholds(const Surface& surf);

struct DecayReport {
    Regime regime = Regime::SaddleDominated;
    double rate = 0.0;
    double prefactor_exponent = 0.0;  // 0 for pole regimes, -1/2 for saddle
    std::vector<EllipsePoint> dominant;
    std::optional<double> leading_constant;  // filled by the density layer
    bool upper_bound_only = false;           // true for Untreated
    AngleThresholds thresholds;
};

// Regime assignment for a stable model (UnstableModel / UnsupportedDrift
// otherwise): arc tests on zeta(theta**) against (theta(alpha), s0'] and on
// eta(theta*) against [s0'', theta(alpha)), both taken on the side of the
// circle avoiding the origin point; coincidence within 1e-7 rad yields
// Untreated; when both poles qualify the smaller rate wins and a relative
// tie within 1e-9 yields TwoPoles.
DecayReport classify(const Surface& surf, double alpha);

} // namespace srbm
