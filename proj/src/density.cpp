#include "srbm/density.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <vector>

#include "srbm/errors.hpp"

namespace srbm {

namespace {
constexpr double kPi = 3.14159265358979323846;

struct GaussLegendre {
    std::vector<double> x, w;  // nodes/weights on [-1, 1]
};

// Newton iteration on the Legendre recurrence; nodes accurate to ~1e-15.
GaussLegendre compute_gl(int n) {
    GaussLegendre g;
    g.x.resize(n);
    g.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        g.x[i] = -x;
        g.x[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        g.w[i] = w;
        g.w[n - 1 - i] = w;
    }
    return g;
}

const GaussLegendre& gl_rule(int n) {
    static std::mutex mu;
    static std::map<int, GaussLegendre> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gl(n)).first;
    return it->second;
}

cx integrate_panels(const std::function<cx(double)>& f, double a, double b,
                    int panels, int nodes) {
    const GaussLegendre& g = gl_rule(nodes);
    const double h = (b - a) / panels;
    cx acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = a + (p + 0.5) * h;
        cx sum = 0.0;
        for (int i = 0; i < nodes; ++i)
            sum += g.w[i] * f(c + 0.5 * h * g.x[i]);
        acc += 0.5 * h * sum;
    }
    return acc;
}

struct AxisIntegral {
    cx value;
    double T = 0.0;
    int panels = 0;
    double peak = 0.0;  // largest integrand magnitude seen on the probe grid
};

// One inversion integral (1/2pi) Int_{-T}^{T} f(y) dy with automatic
// truncation widening and panel doubling.
AxisIntegral adaptive_axis(const std::function<cx(double)>& f, double T0,
                           const QuadratureSpec& spec) {
    AxisIntegral out;
    out.T = T0;
    for (int widen = 0;; ++widen) {
        out.peak = 0.0;
        for (int i = 0; i <= 256; ++i) {
            const double y = -out.T + 2.0 * out.T * i / 256.0;
            out.peak = std::max(out.peak, std::abs(f(y)));
        }
        const double edge =
            std::max(std::abs(f(-out.T)), std::abs(f(out.T)));
        if (edge <= spec.envelope_eps * out.peak) break;
        if (widen >= 3)
            fail(ErrorCode::QuadratureInconsistent,
                 "integrand envelope does not reach the truncation target");
        out.T *= 2.0;
    }

    // Roundoff floor: summing ~peak-sized values over the window cannot do
    // better than this absolutely, whatever the relative target says.
    const double floor_abs = 1e-16 * out.peak * 2.0 * out.T;
    cx prev = integrate_panels(f, -out.T, out.T, spec.initial_panels,
                               spec.nodes_per_panel);
    for (int p = 2 * spec.initial_panels;; p *= 2) {
        if (p > spec.max_panels)
            fail(ErrorCode::QuadratureInconsistent,
                 "panel refinement did not converge");
        const cx cur = integrate_panels(f, -out.T, out.T, p,
                                        spec.nodes_per_panel);
        const double diff = std::abs(cur - prev);
        prev = cur;
        if (diff <= spec.rel_tol * std::abs(cur) + floor_abs) {
            out.panels = p;
            break;
        }
    }
    out.value = prev / (2.0 * kPi);
    return out;
}

} // namespace

double density_eval(const Surface& surf, double x1, double x2,
                    const BoundaryTransform& bt, const QuadratureSpec& spec,
                    QuadratureDiag* diag) {
    if (!(x1 > 0.0) || !(x2 > 0.0))
        fail(ErrorCode::AngleOutOfRange, "density point must be interior");
    const Kernel& k = surf.kernel();

    // Integrands along theta_i = i y. Re disc > 0 on the axis, so the
    // principal square root is the continuous branch and Theta+ is the root
    // with positive real part.
    const auto integrand1 = [&](double y) {
        const cx t1{0.0, y};
        const cx d = k.disc1(t1);
        if (!(d.real() > 0.0))
            fail(ErrorCode::BranchDiscontinuity,
                 "disc1 left the right half-plane on the contour");
        const cx sq = std::sqrt(d);
        const cx th2 = (-k.b2(t1) + sq) / (2.0 * k.a2());
        return -bt.phi2(t1) * k.gamma2(t1, th2) *
               std::exp(-x1 * t1 - x2 * th2) / sq;
    };
    const auto integrand2 = [&](double y) {
        const cx t2{0.0, y};
        const cx d = k.disc2(t2);
        if (!(d.real() > 0.0))
            fail(ErrorCode::BranchDiscontinuity,
                 "disc2 left the right half-plane on the contour");
        const cx sq = std::sqrt(d);
        const cx th1 = (-k.b1(t2) + sq) / (2.0 * k.a1());
        return -bt.phi1(t2) * k.gamma1(th1, t2) *
               std::exp(-x1 * th1 - x2 * t2) / sq;
    };

    const double T0 =
        spec.T > 0.0 ? spec.T : 40.0 * std::max(1.0 / x1, 1.0 / x2);
    const AxisIntegral i1 = adaptive_axis(integrand1, T0, spec);
    const AxisIntegral i2 = adaptive_axis(integrand2, T0, spec);

    const cx total = i1.value + i2.value;
    double v = total.real();
    const double im = std::fabs(total.imag());
    const double peak = std::max(i1.peak, i2.peak);
    if (diag) {
        diag->T1 = i1.T;
        diag->T2 = i2.T;
        diag->panels1 = i1.panels;
        diag->panels2 = i2.panels;
        diag->imag_residual = im;
        diag->clamped = 0.0;
    }
    if (im > 100.0 * spec.rel_tol * std::fabs(v) + 1e-13 * peak)
        fail(ErrorCode::QuadratureInconsistent,
             "imaginary residual exceeds the adaptivity target");
    if (v < 0.0) {
        if (v <= -1e-12)
            fail(ErrorCode::QuadratureInconsistent,
                 "density evaluated clearly negative");
        if (diag) diag->clamped = -v;
        v = 0.0;
    }
    return v;
}

double leading_coefficient(const Surface& surf, double alpha,
                           const BoundaryTransform& bt) {
    const DecayReport rep = classify(surf, alpha);
    if (rep.regime != Regime::SaddleDominated)
        fail(ErrorCode::WrongRegime,
             "leading coefficient is defined in the saddle regime only");
    const SaddleInfo sad = saddle_point(surf, alpha);
    const Kernel& k = surf.kernel();

    const cx pt2 = -continuation_value(surf, sad.s, bt, TransformPart::phi2);
    const cx pt1 = -continuation_value(surf, sad.s, bt, TransformPart::phi1);
    const cx num = pt2 * k.gamma2(sad.point) + pt1 * k.gamma1(sad.point);
    const double den =
        std::sqrt(2.0 * kPi * k.det_sigma() * sad.fpp);
    const cx c0 = num / den;
    if (std::fabs(c0.imag()) > 1e-8 * (std::fabs(c0.real()) + 1e-300))
        fail(ErrorCode::ConstantUnavailable,
             "saddle constant came out non-real");
    return c0.real();
}

double residue_coefficient(const Surface& surf, const PoleCandidate& pole,
                           const BoundaryTransform& bt) {
    if (!pole.order_known || pole.order != 1)
        fail(ErrorCode::ResidueUnstable,
             "residue weight needs a confirmed simple pole");
    const Kernel& k = surf.kernel();
    const cx res = residue_at(surf, pole, bt);
    double disc, gown;
    if (pole.owner == PoleOwner::phi2) {
        disc = k.disc1(pole.point.theta1);
        gown = k.gamma2(pole.point);
    } else {
        disc = k.disc2(pole.point.theta2);
        gown = k.gamma1(pole.point);
    }
    if (!(disc > 0.0))
        fail(ErrorCode::DerivativeAtBranchPoint,
             "pole abscissa reached a branch point");
    const cx kappa = res * gown / std::sqrt(disc);
    if (std::fabs(kappa.imag()) > 1e-6 * (std::fabs(kappa.real()) + 1e-300))
        fail(ErrorCode::ResidueUnstable, "residue weight came out non-real");
    return kappa.real();
}

double residue_term(const Surface& surf, const PoleCandidate& pole,
                    double alpha, double r, const BoundaryTransform& bt) {
    const double kappa = residue_coefficient(surf, pole, bt);
    return kappa * std::exp(-r * ray_rate(pole.point, alpha));
}

double functional_equation_residual(const Kernel& k, const ProductFormModel& pf,
                                    cx t1, cx t2) {
    const cx phi = pf.C / ((pf.eta1 - t1) * (pf.eta2 - t2));
    const RationalBoundaryTransform bt = pf.transform();
    const cx a = k.gamma(t1, t2) * phi;
    const cx b = k.gamma1(t1, t2) * bt.phi1(t2);
    const cx c = k.gamma2(t1, t2) * bt.phi2(t1);
    const double scale =
        std::max({std::abs(a), std::abs(b), std::abs(c), 1e-300});
    return std::abs(a - b - c) / scale;
}

DecayReport classify_with_constant(const Surface& surf, double alpha,
                                   const BoundaryTransform& bt,
                                   int max_depth) {
    DecayReport rep = classify(surf, alpha);
    try {
        if (rep.regime == Regime::SaddleDominated) {
            rep.leading_constant = leading_coefficient(surf, alpha, bt);
        } else if (rep.regime != Regime::Untreated) {
            const PoleSets sets = enumerate_poles(surf, alpha, max_depth);
            double sum = 0.0;
            int found = 0;
            for (const EllipsePoint& dom : rep.dominant) {
                const double td = surf.angle_on_circle(dom);
                for (const auto& list : {sets.phi2, sets.phi1})
                    for (const PoleCandidate& p : list)
                        if (angle_gap(p.t, td) < 1e-7) {
                            sum += residue_coefficient(surf, p, bt);
                            ++found;
                        }
            }
            if (found > 0) rep.leading_constant = sum;
        }
    } catch (const Error&) {
        // Rate-only report remains valid when the constant is unavailable.
    }
    return rep;
}

} // namespace srbm
