#pragma once

#include "srbm/boundary.hpp"

namespace srbm {

// Contour quadrature controls for the inversion integrals. T = 0 means the
// automatic truncation 40 * max(1/x1, 1/x2), widened until the integrand
// envelope at the endpoints falls below envelope_eps of its peak.
struct QuadratureSpec {
    double T = 0.0;
    int nodes_per_panel = 64;   // Gauss-Legendre nodes per panel
    int initial_panels = 16;
    int max_panels = 4096;
    double rel_tol = 1e-9;      // stop when doubling changes the result less
    double envelope_eps = 1e-14;
};

struct QuadratureDiag {
    double T1 = 0.0, T2 = 0.0;
    int panels1 = 0, panels2 = 0;
    double imag_residual = 0.0;   // |Im| of the assembled density
    double clamped = 0.0;         // negative mass clamped to zero, if any
};

// Stationary density at an interior point (x1 > 0, x2 > 0) by integrating
// the two half-plane inversion integrals along the imaginary axes,
//   I1 = (2 pi i)^{-1} Int phi2(t1) gamma2(t1, Theta2+(t1))
//          e^{-x1 t1 - x2 Theta2+(t1)} / sqrt(disc1(t1)) dt1,
// and symmetrically I2; the integrands are built from the probabilistic
// (negated) transforms so the result is the positive density. Branch
// tracking of sqrt(disc) is verified along the contour (BranchDiscontinuity)
// and refinement failures raise QuadratureInconsistent; negatives smaller
// than -1e-12 raise, larger are clamped to zero.
double density_eval(const Surface& surf, double x1, double x2,
                    const BoundaryTransform& bt,
                    const QuadratureSpec& spec = {},
                    QuadratureDiag* diag = nullptr);

// Saddle-point constant of the r^{-1/2} e^{-rate r} expansion:
//   c0 = [pt2(s(alpha)) gamma2(theta(alpha)) + pt1(s(alpha)) gamma1(theta(alpha))]
//          / sqrt(2 pi det(sigma) fpp),
// pt_i the continued probabilistic transforms. Requires the SaddleDominated
// regime (WrongRegime) and transforms evaluable at s(alpha)
// (ConstantUnavailable).
double leading_coefficient(const Surface& surf, double alpha,
                           const BoundaryTransform& bt);

// Residue weight of a simple pole: kappa = res * gamma_owner(theta(p)) /
// sqrt(disc_owner at the pole abscissa).
double residue_coefficient(const Surface& surf, const PoleCandidate& pole,
                           const BoundaryTransform& bt);

// Contribution kappa * exp(-r <theta(p)|e_alpha>) of a pole to the density
// along the ray.
double residue_term(const Surface& surf, const PoleCandidate& pole,
                    double alpha, double r, const BoundaryTransform& bt);

// Scaled violation of the kernel identity by a fitted product-form model at
// a complex point: |-gamma phi + gamma1 phi1 + gamma2 phi2| / scale with
// phi = C / ((eta1 - t1)(eta2 - t2)).
double functional_equation_residual(const Kernel& k, const ProductFormModel& pf,
                                    cx t1, cx t2);

// classify() plus the leading constant for the reported regime when a
// boundary transform is available: residue weights for pole regimes (sum for
// TwoPoles), the saddle constant for SaddleDominated; omitted for Untreated
// and when a pole's order is flagged unknown.
DecayReport classify_with_constant(const Surface& surf, double alpha,
                                   const BoundaryTransform& bt,
                                   int max_depth = 16);

} // namespace srbm
