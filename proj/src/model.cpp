#include "srbm/model.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "srbm/errors.hpp"

namespace srbm {

ModelParams make_model(const Mat2& sigma, Vec2 mu, const Mat2& refl) {
    const double scale = std::fabs(sigma.a11) + std::fabs(sigma.a22) +
                         std::fabs(sigma.a12) + std::fabs(sigma.a21);
    if (std::fabs(sigma.a12 - sigma.a21) > 1e-12 * (scale + 1.0))
        fail(ErrorCode::InvalidCovariance, "sigma must be symmetric");
    if (!(sigma.a11 > 0.0) || !(sigma.a22 > 0.0))
        fail(ErrorCode::InvalidCovariance, "sigma diagonal must be positive");
    if (!(det(sigma) > 0.0))
        fail(ErrorCode::InvalidCovariance, "sigma must be positive definite");
    ModelParams p{sigma, mu, refl};
    p.sigma.a21 = p.sigma.a12;  // exact symmetry for downstream algebra
    return p;
}

ModelParams make_model(double s11, double s12, double s22, double mu1,
                       double mu2, double r11, double r12, double r21,
                       double r22) {
    return make_model(Mat2{s11, s12, s12, s22}, Vec2{mu1, mu2},
                      Mat2{r11, r12, r21, r22});
}

const char* to_string(StabilityCondition c) {
    switch (c) {
        case StabilityCondition::r11_pos:       return "r11_pos";
        case StabilityCondition::r22_pos:       return "r22_pos";
        case StabilityCondition::detR_pos:      return "detR_pos";
        case StabilityCondition::drift_cond_1:  return "drift_cond_1";
        case StabilityCondition::drift_cond_2:  return "drift_cond_2";
        case StabilityCondition::existence_alt: return "existence_alt";
    }
    return "?";
}

bool validate_existence(const ModelParams& p) {
    const Mat2& r = p.refl;
    if (!(r.a11 > 0.0) || !(r.a22 > 0.0)) return false;
    return (r.a12 > 0.0 && r.a21 > 0.0) || det(r) > 0.0;
}

StabilityReport validate_stability(const ModelParams& p) {
    const Mat2& r = p.refl;
    const Vec2& mu = p.mu;
    StabilityReport rep;
    rep.exists = validate_existence(p);

    // All clauses strict; exactly zero counts as violated.
    if (!(r.a11 > 0.0)) rep.violated.push_back(StabilityCondition::r11_pos);
    if (!(r.a22 > 0.0)) rep.violated.push_back(StabilityCondition::r22_pos);
    if (!(det(r) > 0.0)) rep.violated.push_back(StabilityCondition::detR_pos);
    if (!(r.a22 * mu.x1 - r.a12 * mu.x2 < 0.0))
        rep.violated.push_back(StabilityCondition::drift_cond_1);
    if (!(r.a11 * mu.x2 - r.a21 * mu.x1 < 0.0))
        rep.violated.push_back(StabilityCondition::drift_cond_2);
    if (!rep.exists && r.a11 > 0.0 && r.a22 > 0.0)
        rep.violated.push_back(StabilityCondition::existence_alt);

    rep.stable = rep.violated.empty();
    return rep;
}

ModelParams transform_cone_to_quadrant(const Mat2& sigma, Vec2 mu,
                                       const Mat2& refl, const Mat2& T) {
    const double scale = std::fabs(T.a11) + std::fabs(T.a12) +
                         std::fabs(T.a21) + std::fabs(T.a22);
    if (std::fabs(det(T)) <= 1e-12 * scale * scale + 1e-300)
        fail(ErrorCode::SingularTransform,
             "cone transform must be invertible");
    return make_model(mul(mul(T, sigma), transpose(T)), mul(T, mu),
                      mul(T, refl));
}

namespace {

const char* const kKeys[9] = {"sigma11", "sigma12", "sigma22", "mu1", "mu2",
                              "r11",     "r12",     "r21",     "r22"};

double to_double(const std::string& tok, int line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size())
        fail(ErrorCode::ParseError, "parameter file line " +
                                        std::to_string(line_no) +
                                        ": bad numeric literal '" + tok + "'");
    return v;
}

} // namespace

ModelParams parse_params(std::istream& in) {
    std::map<std::string, double> vals;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        for (char& c : line)
            if (c == '=' || c == '\t') c = ' ';
        std::istringstream ls(line);
        std::string key, val, extra;
        if (!(ls >> key)) continue;  // blank or comment-only
        if (!(ls >> val) || (ls >> extra))
            fail(ErrorCode::ParseError,
                 "parameter file line " + std::to_string(line_no) +
                     ": expected 'key value'");
        bool known = false;
        for (const char* k : kKeys) known = known || key == k;
        if (!known)
            fail(ErrorCode::ParseError, "parameter file line " +
                                            std::to_string(line_no) +
                                            ": unknown key '" + key + "'");
        if (vals.count(key))
            fail(ErrorCode::ParseError, "parameter file line " +
                                            std::to_string(line_no) +
                                            ": duplicate key '" + key + "'");
        vals[key] = to_double(val, line_no);
    }
    for (const char* k : kKeys)
        if (!vals.count(k))
            fail(ErrorCode::ParseError,
                 std::string("parameter file: missing key '") + k + "'");
    return make_model(vals["sigma11"], vals["sigma12"], vals["sigma22"],
                      vals["mu1"], vals["mu2"], vals["r11"], vals["r12"],
                      vals["r21"], vals["r22"]);
}

ModelParams parse_params_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail(ErrorCode::ParseError, "cannot open parameter file " + path);
    return parse_params(f);
}

} // namespace srbm
