#pragma once

#include <memory>
#include <optional>

#include "srbm/asymptotics.hpp"

namespace srbm {

// Laplace transforms of the two boundary measures, stored with the sign that
// satisfies the kernel identity
//   gamma(theta) phi(theta) = gamma1(theta) phi1(theta2) + gamma2(theta) phi2(theta1)
// with the internal plus-sign gamma. Under this convention the probabilistic
// transforms (positive, with phi_i(0) the face local-time masses) are the
// negatives of phi1/phi2; consumers that need positive quantities negate.
struct BoundaryTransform {
    virtual ~BoundaryTransform() = default;
    virtual cx phi1(cx theta2) const = 0;  // transform in the theta2 variable
    virtual cx phi2(cx theta1) const = 0;  // transform in the theta1 variable
    // Real abscissas of the nearest singularity (declared analyticity bound);
    // +inf when entire.
    virtual double phi1_singularity() const = 0;
    virtual double phi2_singularity() const = 0;
};

struct RationalBoundaryTransform final : BoundaryTransform {
    double c1 = 0.0, eta2 = 0.0;  // phi1(t2) = c1 / (eta2 - t2)
    double c2 = 0.0, eta1 = 0.0;  // phi2(t1) = c2 / (eta1 - t1)

    RationalBoundaryTransform() = default;
    RationalBoundaryTransform(double c1_, double eta2_, double c2_,
                              double eta1_)
        : c1(c1_), eta2(eta2_), c2(c2_), eta1(eta1_) {}

    cx phi1(cx t2) const override { return c1 / (eta2 - t2); }
    cx phi2(cx t1) const override { return c2 / (eta1 - t1); }
    double phi1_singularity() const override { return eta2; }
    double phi2_singularity() const override { return eta1; }
};

// Exact exponential stationary density pi(x) = C exp(-eta1 x1 - eta2 x2)
// with C = eta1 eta2, available exactly when the reflection matrix is skewed
// against the covariance so the boundary transforms are degree-one rational.
struct ProductFormModel {
    double eta1 = 0.0, eta2 = 0.0;
    double C = 0.0;           // = eta1 * eta2
    double c1 = 0.0, c2 = 0.0;

    RationalBoundaryTransform transform() const {
        return {c1, eta2, c2, eta1};
    }
    double density(double x1, double x2) const {
        return C * std::exp(-eta1 * x1 - eta2 * x2);
    }
    // Boundary local-time masses -phi_i(0) (positive for a stable fit).
    double mass1() const { return -c1 / eta2; }
    double mass2() const { return -c2 / eta1; }
};

// Coefficient-matching fit of C gamma = c1 gamma1 (eta1 - theta1) +
// c2 gamma2 (eta2 - theta2). Returns the model when the scaled residual over
// all monomial coefficients is below 1e-9 and eta1, eta2 > 0; otherwise
// nullopt (typed "not product form" outcome, never an exception). The
// residual is reported through `residual_out` in both cases.
std::optional<ProductFormModel> fit_product_form(const ModelParams& p,
                                                 double* residual_out = nullptr);

enum class TransformPart { phi1, phi2 };

// Meromorphic continuation of phi1 (function of theta2(s)) or phi2 (function
// of theta1(s)) at a surface point outside the initial half-plane domain
// {Re theta_i(s) <= 0}: walk the rotation orbit until the pulled-back point
// re-enters the domain, telescoping the reflection factors
//   phi2(s) = [gamma1 gamma2 ratio at the intermediate involution images] phi2(rot s).
// Throws ContinuationDiverged after max_steps rotations, PoleHit when a
// telescoped denominator vanishes at the requested point.
cx continuation_value(const Surface& surf, const SurfacePoint& s,
                      const BoundaryTransform& bt, TransformPart part,
                      int max_steps = 64);

// Residue of the continued transform at a simple pole on the unit circle,
// in its own variable (theta1 for phi2 poles, theta2 for phi1 poles).
// Limit (theta - theta_pole) phi(theta) along the circle, Richardson
// extrapolated over four halving offsets; ResidueUnstable when the final
// extrapolants disagree beyond 1e-6 relative.
cx residue_at(const Surface& surf, const PoleCandidate& pole,
              const BoundaryTransform& bt);

} // namespace srbm
