// End-to-end acceptance gate: each criterion prints one [PASS]/[FAIL] line
// with its runtime; the process exits nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "srbm/cli.hpp"
#include "srbm/density.hpp"
#include "srbm/simulate.hpp"
#include "test_support.hpp"

using namespace srbm;
using namespace srbm::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kSqrt2 = std::sqrt(2.0);

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome fail_with(std::string msg) { return {false, std::move(msg)}; }

int g_failures = 0;

void run_criterion(int idx, const char* name, double budget_s,
                   const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = fail_with(std::string("exception: ") + e.what());
    }
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (dt > budget_s) {
        o.pass = false;
        o.detail += (o.detail.empty() ? "" : "; ");
        o.detail += "exceeded " + std::to_string(budget_s) + "s budget";
    }
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", o.pass ? "PASS" : "FAIL",
                idx, name, dt, o.detail.empty() ? "" : ": ",
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++g_failures;
}

bool near_rel(double a, double b, double tol) {
    return std::fabs(a - b) <= tol * (1.0 + std::fabs(b));
}

// ---------------------------------------------------------------- criterion 1
Outcome stability_table() {
    using C = StabilityCondition;
    struct Case {
        ModelParams p;
        bool exists;
        bool stable;
        std::vector<C> violated;
    };
    const std::vector<Case> cases = {
        {make_model(1, 0, 1, -1, -1, 1, 0, 0, 1), true, true, {}},
        {make_model(1, 0, 1, -1, -1, 1, 0.2, 0.2, 1), true, true, {}},
        {make_model(1, 0, 1, -1, -1, 1, -0.5, -0.5, 1), true, true, {}},
        {make_model(1, 0.3, 1, -1, -1, 1, 0.3, 0.3, 1), true, true, {}},
        {make_model(1, 0, 1, -1, -1, 1, 2, 2, 1), true, false,
         {C::detR_pos, C::drift_cond_1, C::drift_cond_2}},
        {make_model(1, 0, 1, -1, -1, 0, 1, 1, 0), false, false,
         {C::r11_pos, C::r22_pos, C::detR_pos, C::drift_cond_1,
          C::drift_cond_2}},
        {make_model(1, 0, 1, 1, -1, 1, 0, 0, 1), true, false,
         {C::drift_cond_1}},
        {make_model(1, 0, 1, -1, 1, 1, 0, 0, 1), true, false,
         {C::drift_cond_2}},
        {make_model(1, 0, 1, 0, -1, 1, 0, 0, 1), true, false,
         {C::drift_cond_1}},
        {make_model(1, 0, 1, -1, -1, 1, -1, -1, 1), false, false,
         {C::detR_pos, C::existence_alt}},
        {make_model(1, 0, 1, -1, -1, 1, 1, 1, 1), true, false,
         {C::detR_pos, C::drift_cond_1, C::drift_cond_2}},
        {make_model(1, 0, 1, -2, -0.1, 2, -0.5, -0.5, 2), true, true, {}},
    };
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const StabilityReport rep = validate_stability(cases[i].p);
        if (rep.exists != cases[i].exists || rep.stable != cases[i].stable)
            return fail_with("case " + std::to_string(i) +
                             ": exists/stable mismatch");
        std::vector<C> got = rep.violated, want = cases[i].violated;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        if (got != want)
            return fail_with("case " + std::to_string(i) +
                             ": violated-clause set mismatch");
        if (validate_existence(cases[i].p) != cases[i].exists)
            return fail_with("case " + std::to_string(i) +
                             ": existence disagrees with the report");
    }
    return {};
}

// ---------------------------------------------------------------- criterion 2
Outcome kernel_identities() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> box(-3.0, 3.0);
    for (int i = 0; i < 1000; ++i) {
        const ModelParams p = random_stable_model(rng);
        const Kernel k(p);
        const cx t1(box(rng), box(rng));
        const auto [lo2, hi2] = k.theta2_branches(t1);
        const double s2 =
            1.0 + std::norm(lo2) + std::norm(hi2) + std::norm(t1);
        if (std::abs(k.gamma(t1, lo2)) > 1e-9 * s2 ||
            std::abs(k.gamma(t1, hi2)) > 1e-9 * s2)
            return fail_with("theta2 branch does not solve the kernel");
        if (std::abs(lo2 + hi2 + k.b2(t1) / k.a2()) > 1e-9 * s2)
            return fail_with("theta2 root sum identity violated");
        if (std::abs(lo2 * hi2 - k.c2(t1) / k.a2()) > 1e-9 * s2)
            return fail_with("theta2 root product identity violated");

        const cx t2(box(rng), box(rng));
        const auto [lo1, hi1] = k.theta1_branches(t2);
        const double s1 =
            1.0 + std::norm(lo1) + std::norm(hi1) + std::norm(t2);
        if (std::abs(k.gamma(lo1, t2)) > 1e-9 * s1 ||
            std::abs(k.gamma(hi1, t2)) > 1e-9 * s1)
            return fail_with("theta1 branch does not solve the kernel");
        if (std::abs(lo1 + hi1 + k.b1(t2) / k.a1()) > 1e-9 * s1)
            return fail_with("theta1 root sum identity violated");
        if (std::abs(lo1 * hi1 - k.c1(t2) / k.a1()) > 1e-9 * s1)
            return fail_with("theta1 root product identity violated");
    }
    return {};
}

// ---------------------------------------------------------------- criterion 3
Outcome surface_identities() {
    std::mt19937_64 rng(202);
    std::uniform_real_distribution<double> ang(0.0, 2 * kPi);
    std::uniform_real_distribution<double> logr(-1.5, 1.5);
    for (int i = 0; i < 1000; ++i) {
        const ModelParams p = random_stable_model(rng);
        const Surface surf(p);
        const double radius = (i % 3 == 0) ? 1.0 : std::exp(logr(rng));
        const SurfacePoint sp{std::polar(radius, ang(rng)), false};

        const SurfacePoint zz = surf.zeta(surf.zeta(sp));
        const SurfacePoint ee = surf.eta(surf.eta(sp));
        if (std::abs(zz.s - sp.s) > 1e-9 * (1.0 + std::abs(sp.s)) ||
            std::abs(ee.s - sp.s) > 1e-9 * (1.0 + std::abs(sp.s)))
            return fail_with("involution squared is not the identity");

        const cx t1 = surf.theta1(sp);
        const cx t2 = surf.theta2(sp);
        const double sc = 1.0 + std::abs(t1) + std::abs(t2);
        if (std::abs(surf.theta1(surf.zeta(sp)) - t1) > 1e-9 * sc)
            return fail_with("zeta moves theta1");
        if (std::abs(surf.theta2(surf.eta(sp)) - t2) > 1e-9 * sc)
            return fail_with("eta moves theta2");
        if (std::abs(surf.kernel().gamma(t1, t2)) > 1e-9 * sc * sc)
            return fail_with("parametrization leaves the kernel zero set");
    }
    return {};
}

// ---------------------------------------------------------------- criterion 4
Outcome saddle_against_search() {
    std::mt19937_64 rng(303);
    std::uniform_real_distribution<double> ang(0.05, kPi / 2 - 0.05);
    const int n_grid = 10000;
    std::vector<double> g(n_grid);
    for (int m = 0; m < 50; ++m) {
        const ModelParams p = random_stable_model(rng);
        const Surface surf(p);
        for (int a = 0; a < 20; ++a) {
            const double alpha = ang(rng);
            const SaddleInfo sad = saddle_point(surf, alpha);

            const auto eval = [&](double t) {
                return ray_rate(surf.theta(t), alpha);
            };
            int imax = 0, imin = 0;
            for (int i = 0; i < n_grid; ++i) {
                g[i] = eval(2 * kPi * i / n_grid);
                if (g[i] > g[imax]) imax = i;
                if (g[i] < g[imin]) imin = i;
            }
            // Golden-section refinement inside the bracketing cell.
            const double step = 2 * kPi / n_grid;
            double lo = 2 * kPi * imax / n_grid - step;
            double hi = lo + 2 * step;
            const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = eval(x1), f2 = eval(x2);
            for (int it = 0; it < 90; ++it) {
                if (f1 < f2) {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = eval(x2);
                } else {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = eval(x1);
                }
            }
            const EllipsePoint found = surf.theta(0.5 * (lo + hi));
            if (std::fabs(found.theta1 - sad.point.theta1) > 1e-6 ||
                std::fabs(found.theta2 - sad.point.theta2) > 1e-6)
                return fail_with("argmax disagrees with the closed form");

            // The ray rate must rise strictly from the minimizer to the
            // maximizer along both arcs of the circle.
            for (int off = 1; off < n_grid - 1; ++off) {
                const int cur = (imin + off) % n_grid;
                const int prev = (imin + off - 1) % n_grid;
                if (cur == imax) break;
                if (!(g[cur] > g[prev]))
                    return fail_with("rate not strictly monotone (ccw arc)");
            }
            for (int off = 1; off < n_grid - 1; ++off) {
                const int cur = (imin - off % n_grid + n_grid) % n_grid;
                const int prev = (imin - (off - 1) % n_grid + n_grid) % n_grid;
                if (cur == imax) break;
                if (!(g[cur] > g[prev]))
                    return fail_with("rate not strictly monotone (cw arc)");
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------- criterion 5
Outcome regime_oracle() {
    const Surface surf(identity_model());
    for (int k = 1; k <= 999; ++k) {
        const double alpha = k * (kPi / 2) / 1000.0;
        const DecayReport rep = classify(surf, alpha);
        if (k == 500) {
            if (rep.regime != Regime::Untreated)
                return fail_with("diagonal ray is not flagged Untreated");
            if (!near_rel(rep.rate, 2 * kSqrt2, 1e-12))
                return fail_with("diagonal rate is off");
            continue;
        }
        const Regime want = k < 500 ? Regime::PoleZetaThetaStarStar
                                    : Regime::PoleEtaThetaStar;
        if (rep.regime != want)
            return fail_with("wrong regime at grid index " + std::to_string(k));
        const double exact = 2.0 * (std::cos(alpha) + std::sin(alpha));
        if (!near_rel(rep.rate, exact, 1e-12))
            return fail_with("pole rate deviates from the exact slope at k=" +
                             std::to_string(k));
    }
    return {};
}

// ---------------------------------------------------------------- criterion 6
Outcome density_against_product_form() {
    for (const ModelParams& p : {eta21_model(), skewed_model()}) {
        const Surface surf(p);
        const auto pf = fit_product_form(p);
        if (!pf) return fail_with("expected a product-form fit");
        const RationalBoundaryTransform bt = pf->transform();
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) {
                const double x1 = 0.25 + i * (3.0 - 0.25) / 4.0;
                const double x2 = 0.25 + j * (3.0 - 0.25) / 4.0;
                const double got = density_eval(surf, x1, x2, bt);
                const double want = pf->density(x1, x2);
                if (std::fabs(got - want) > 1e-6 * want)
                    return fail_with("density off at (" + std::to_string(x1) +
                                     "," + std::to_string(x2) + ")");
            }
        }
    }
    return {};
}

// ---------------------------------------------------------------- criterion 7
Outcome functional_equation_gate() {
    for (const ModelParams& p :
         {identity_model(), eta21_model(), skewed_model()}) {
        const Kernel k(p);
        const auto pf = fit_product_form(p);
        if (!pf) return fail_with("expected a product-form fit");
        double worst = 0.0, worst_bad = 0.0;
        ProductFormModel bad = *pf;
        bad.c1 *= 1.01;
        for (int i = 0; i < 20; ++i) {
            for (int j = 0; j < 20; ++j) {
                const cx t1(-2.0 + 4.0 * i / 19.0, 0.3);
                const cx t2(-2.0 + 4.0 * j / 19.0, -0.4);
                worst = std::max(worst,
                                 functional_equation_residual(k, *pf, t1, t2));
                worst_bad = std::max(
                    worst_bad, functional_equation_residual(k, bad, t1, t2));
            }
        }
        if (worst >= 1e-10)
            return fail_with("fitted residual " + std::to_string(worst));
        if (worst_bad <= 1e-4)
            return fail_with("perturbed fit not rejected (residual " +
                             std::to_string(worst_bad) + ")");
    }
    return {};
}

// ---------------------------------------------------------------- criterion 8
Outcome saddle_expansion_cross_check() {
    const ModelParams p = mixed_model();
    const Surface surf(p);
    const RationalBoundaryTransform bt{-1.0, 10.0, -1.0, 10.0};
    const DecayReport rep = classify(surf, kPi / 4);
    if (rep.regime != Regime::SaddleDominated)
        return fail_with("expected the saddle regime on the diagonal");
    if (!near_rel(rep.rate, 2 * kSqrt2, 1e-9))
        return fail_with("saddle rate is off");
    const double c0 = leading_coefficient(surf, kPi / 4, bt);
    const auto scaled = [&](double r) {
        const double x = r / kSqrt2;
        return std::sqrt(r) * std::exp(rep.rate * r) *
               density_eval(surf, x, x, bt);
    };
    const double v8 = scaled(8.0), v12 = scaled(12.0);
    if (std::fabs(v8 - v12) > 0.02 * std::fabs(v12))
        return fail_with("scaled density still drifting between r=8 and r=12");
    // The scaled density carries an O(1/r) correction; eliminating it with
    // the two sampled radii leaves the limit constant.
    const double v_inf = (12.0 * v12 - 8.0 * v8) / 4.0;
    if (std::fabs(v_inf - c0) > 0.01 * c0)
        return fail_with("extrapolated constant " + std::to_string(v_inf) +
                         " does not match " + std::to_string(c0));
    return {};
}

// ---------------------------------------------------------------- criterion 9
Outcome simulation_cross_check() {
    SimConfig cfg;
    cfg.total_time = 1e5;
    cfg.step = 1e-3;
    cfg.seed = 1;
    const ModelParams p = identity_model();
    const OccupationHistogram h = simulate(p, cfg);

    for (const double alpha : {kPi / 6, kPi / 4, kPi / 3}) {
        const RateEstimate est = estimate_ray_rate(h, alpha, 0.5, 2.0);
        const double exact = 2.0 * (std::cos(alpha) + std::sin(alpha));
        if (std::fabs(est.rate - exact) > 0.10 * exact)
            return fail_with("empirical rate off at alpha=" +
                             std::to_string(alpha) + ": got " +
                             std::to_string(est.rate) + " want " +
                             std::to_string(exact));
    }
    if (std::fabs(h.mean.x1 - 0.5) > 0.05 * 0.5 ||
        std::fabs(h.mean.x2 - 0.5) > 0.05 * 0.5)
        return fail_with("mean position off: (" + std::to_string(h.mean.x1) +
                         "," + std::to_string(h.mean.x2) + ")");
    // Tail mass of the first marginal above 1.
    double tail = h.overflow_time;
    const int edge = h.cell_of(1.0);
    for (int ix = 0; ix < h.n; ++ix)
        for (int iy = 0; iy < h.n; ++iy)
            if (ix >= edge)
                tail += h.time[ix + static_cast<std::size_t>(h.n) * iy];
    const double want_tail = std::exp(-2.0);
    if (std::fabs(tail / h.total_time - want_tail) > 0.10 * want_tail)
        return fail_with("tail probability off: " +
                         std::to_string(tail / h.total_time));

    const OccupationHistogram h2 = simulate(p, cfg);
    if (h2.time != h.time || h2.hits != h.hits)
        return fail_with("rerun is not bit-identical");
    return {};
}

// --------------------------------------------------------------- criterion 10
Outcome threshold_sweep() {
    const Surface surf(threshold_model());
    const AngleThresholds th = angle_thresholds(surf);
    if (!th.alpha1) return fail_with("alpha1 undefined for the sweep model");
    if (!near_rel(*th.alpha1, kPi / 4, 1e-9))
        return fail_with("alpha1 is not pi/4");

    const int n = 500;
    const auto grid = [&](int k) { return k * (kPi / 2) / (n + 1); };
    int last_pole = 0, first_saddle = 0;
    for (int k = 1; k <= n; ++k) {
        const DecayReport rep = classify(surf, grid(k));
        if (rep.regime == Regime::PoleZetaThetaStarStar) {
            if (first_saddle != 0)
                return fail_with("regime switches back after the threshold");
            last_pole = k;
        } else if (rep.regime == Regime::SaddleDominated) {
            if (first_saddle == 0) first_saddle = k;
        } else {
            return fail_with("unexpected regime " +
                             std::string(to_string(rep.regime)) + " at k=" +
                             std::to_string(k));
        }
    }
    if (last_pole == 0 || first_saddle == 0)
        return fail_with("sweep never crossed the threshold");
    if (first_saddle != last_pole + 1)
        return fail_with("regimes interleave around the threshold");
    if (!(grid(last_pole) < *th.alpha1 && *th.alpha1 < grid(first_saddle) &&
          grid(first_saddle) - grid(last_pole) <= 1.01 * (kPi / 2) / (n + 1)))
        return fail_with("switch farther than one grid step from alpha1");
    return {};
}

} // namespace

int main() {
    run_criterion(1, "reflection existence and stability truth table", 1.0,
                  stability_table);
    run_criterion(2, "kernel branch and Vieta identities on random models",
                  1.0, kernel_identities);
    run_criterion(3, "uniformization and involution identities", 1.0,
                  surface_identities);
    run_criterion(4, "closed-form saddle vs grid-plus-golden-section search",
                  30.0, saddle_against_search);
    run_criterion(5, "exact regime oracle on the symmetric model", 1.0,
                  regime_oracle);
    run_criterion(6, "contour quadrature vs exact product-form density", 60.0,
                  density_against_product_form);
    run_criterion(7, "kernel identity residual accepts fits, rejects 1% bias",
                  5.0, functional_equation_gate);
    run_criterion(8, "saddle constant vs scaled far-field quadrature", 120.0,
                  saddle_expansion_cross_check);
    run_criterion(9, "Euler simulation: ray rates, moments, reproducibility",
                  300.0, simulation_cross_check);
    run_criterion(10, "regime flip location in a 500-point angle sweep", 30.0,
                  threshold_sweep);
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
