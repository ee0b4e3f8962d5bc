#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "srbm/linalg.hpp"

namespace srbm {

// Semimartingale reflected Brownian motion in the nonnegative quadrant:
//   Z(t) = Z(0) + W(t) + mu t + R L(t),
// W a Brownian motion with covariance sigma, L the per-face local times.
// Columns of refl are the reflection directions off the faces {x1=0}, {x2=0}.
struct ModelParams {
    Mat2 sigma;  // symmetric positive definite
    Vec2 mu;
    Mat2 refl;
};

// Validates the covariance block; throws InvalidCovariance. The drift is not
// gated here: models with nonnegative drift components are representable, the
// analytic pipeline rejects them later (UnsupportedDrift).
ModelParams make_model(const Mat2& sigma, Vec2 mu, const Mat2& refl);
ModelParams make_model(double s11, double s12, double s22, double mu1,
                       double mu2, double r11, double r12, double r21,
                       double r22);

inline bool drift_supported(const ModelParams& p) {
    return p.mu.x1 < 0.0 && p.mu.x2 < 0.0;
}

// Clause identifiers for the existence / positive-recurrence gate.
enum class StabilityCondition {
    r11_pos,       // refl(1,1) > 0
    r22_pos,       // refl(2,2) > 0
    detR_pos,      // det(refl) > 0
    drift_cond_1,  // r22 mu1 - r12 mu2 < 0
    drift_cond_2,  // r11 mu2 - r21 mu1 < 0
    existence_alt, // neither (r12>0 and r21>0) nor det(refl)>0
};

const char* to_string(StabilityCondition c);

struct StabilityReport {
    bool exists = false;  // the semimartingale RBM exists
    bool stable = false;  // positive recurrent (unique stationary density)
    std::vector<StabilityCondition> violated;
};

// Existence: r11 > 0, r22 > 0, and (r12 > 0 and r21 > 0) or det(refl) > 0.
bool validate_existence(const ModelParams& p);

// Stability: all five clauses strictly; a value of exactly zero counts as
// violated. `violated` lists every failed clause, plus existence_alt when
// existence fails through the alternative clause.
StabilityReport validate_stability(const ModelParams& p);

// Push a reflected Brownian motion in a cone through the linear map T that
// carries the cone onto the quadrant: (sigma, mu, refl) -> (T sigma T', T mu,
// T refl). Throws SingularTransform when T is not invertible.
ModelParams transform_cone_to_quadrant(const Mat2& sigma, Vec2 mu,
                                       const Mat2& refl, const Mat2& T);

// Flat key-value parameter files: nine keys (sigma11 sigma12 sigma22 mu1 mu2
// r11 r12 r21 r22), one `key value` pair per line, `#` comments. Missing,
// duplicate, unknown, or non-numeric entries raise ParseError.
ModelParams parse_params(std::istream& in);
ModelParams parse_params_file(const std::string& path);

} // namespace srbm
