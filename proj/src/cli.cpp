#include "srbm/cli.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "srbm/density.hpp"
#include "srbm/errors.hpp"
#include "srbm/format.hpp"
#include "srbm/simulate.hpp"

namespace srbm {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Angles must carry an explicit unit ("30deg", "0.5236rad"); bare numbers are
// rejected so nobody mixes units silently.
double parse_angle(const std::string& text) {
    const auto ends_with = [&](const char* suf) {
        const std::size_t n = std::char_traits<char>::length(suf);
        return text.size() > n &&
               text.compare(text.size() - n, n, suf) == 0;
    };
    double scale;
    std::size_t cut;
    if (ends_with("deg")) {
        scale = kPi / 180.0;
        cut = text.size() - 3;
    } else if (ends_with("rad")) {
        scale = 1.0;
        cut = text.size() - 3;
    } else {
        fail(ErrorCode::ParseError,
             "angle '" + text + "' needs a deg or rad suffix");
    }
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(text.substr(0, cut), &used);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "cannot parse angle '" + text + "'");
    }
    if (used != cut)
        fail(ErrorCode::ParseError, "cannot parse angle '" + text + "'");
    return v * scale;
}

std::string fmt_point(const EllipsePoint& p) {
    return "(" + sig6(p.theta1) + "," + sig6(p.theta2) + ")";
}

std::string machine_line(const DecayReport& rep) {
    std::string line = to_string(rep.regime);
    if (rep.regime == Regime::Untreated) {
        line += " (saddle coincides with pole) rate=" + sig6(rep.rate);
        return line;
    }
    line += " rate=" + sig6(rep.rate);
    if (rep.regime == Regime::SaddleDominated) {
        line += " prefactor=r^-1/2 dominant=" + fmt_point(rep.dominant[0]);
        return line;
    }
    line += " dominant=";
    for (std::size_t i = 0; i < rep.dominant.size(); ++i)
        line += (i ? "," : "") + fmt_point(rep.dominant[i]);
    return line;
}

void print_stability(const StabilityReport& rep, std::ostream& out) {
    out << "exists: " << (rep.exists ? "yes" : "no") << "\n";
    out << "stable: " << (rep.stable ? "yes" : "no") << "\n";
    if (!rep.violated.empty()) {
        out << "violated:";
        for (const StabilityCondition c : rep.violated)
            out << ' ' << to_string(c);
        out << "\n";
    }
}

// Shared gate: print the report and exit 2 when the model is not stable.
std::optional<int> gate_stable(const ModelParams& p, std::ostream& out) {
    const StabilityReport rep = validate_stability(p);
    if (!rep.stable) {
        print_stability(rep, out);
        return kExitUnstable;
    }
    return std::nullopt;
}

void print_thresholds(const AngleThresholds& th, std::ostream& out) {
    if (th.alpha1) out << "alpha1: " << sig6(*th.alpha1) << "\n";
    if (th.alpha2) out << "alpha2: " << sig6(*th.alpha2) << "\n";
    if (th.beta0) out << "beta0: " << sig6(*th.beta0) << "\n";
}

int cmd_validate(const ModelParams& p, std::ostream& out) {
    const StabilityReport rep = validate_stability(p);
    print_stability(rep, out);
    return rep.stable ? kExitOk : kExitUnstable;
}

int cmd_classify(const ModelParams& p, double alpha, std::ostream& out,
                 std::ostream& err) {
    if (const auto rc = gate_stable(p, out)) return *rc;
    const Surface surf(p);
    const auto pf = fit_product_form(p);
    const DecayReport rep = pf ? classify_with_constant(surf, alpha,
                                                        pf->transform())
                               : classify(surf, alpha);
    out << "regime: " << to_string(rep.regime) << "\n";
    out << "rate: " << sig6(rep.rate) << "\n";
    out << "prefactor exponent: " << sig6(rep.prefactor_exponent) << "\n";
    out << "dominant:";
    for (const EllipsePoint& d : rep.dominant) out << ' ' << fmt_point(d);
    out << "\n";
    if (rep.leading_constant)
        out << "leading constant: " << sig6(*rep.leading_constant) << "\n";
    print_thresholds(rep.thresholds, out);
    if (rep.regime == Regime::Untreated)
        err << "warning: saddle point coincides with a pole candidate; the "
               "reported rate is an upper-bound exponent\n";
    out << machine_line(rep) << "\n";
    return kExitOk;
}

int cmd_sweep(const ModelParams& p, int n, std::ostream& out) {
    if (n < 2) fail(ErrorCode::ParseError, "sweep needs --n >= 2");
    if (const auto rc = gate_stable(p, out)) return *rc;
    const Surface surf(p);
    const AngleThresholds th = angle_thresholds(surf);
    if (th.alpha1) out << "# alpha1=" << sig6(*th.alpha1) << "\n";
    if (th.alpha2) out << "# alpha2=" << sig6(*th.alpha2) << "\n";
    if (th.beta0) out << "# beta0=" << sig6(*th.beta0) << "\n";
    out << "alpha,regime,rate,threshold_markers\n";

    const auto grid = [&](int k) { return k * (kPi / 2.0) / (n + 1); };
    // Each defined threshold marks the grid row closest to it.
    const auto nearest = [&](double t) {
        int best = 1;
        for (int k = 2; k <= n; ++k)
            if (std::fabs(grid(k) - t) < std::fabs(grid(best) - t)) best = k;
        return best;
    };
    const int m1 = th.alpha1 ? nearest(*th.alpha1) : 0;
    const int m2 = th.alpha2 ? nearest(*th.alpha2) : 0;
    const int m3 = th.beta0 ? nearest(*th.beta0) : 0;
    for (int k = 1; k <= n; ++k) {
        const DecayReport rep = classify(surf, grid(k));
        std::string markers;
        if (k == m1) markers += "alpha1";
        if (k == m2) markers += std::string(markers.empty() ? "" : ";") +
                                "alpha2";
        if (k == m3) markers += std::string(markers.empty() ? "" : ";") +
                                "beta0";
        out << sig6(grid(k)) << ',' << to_string(rep.regime) << ','
            << sig6(rep.rate) << ',' << markers << "\n";
    }
    return kExitOk;
}

int cmd_poles(const ModelParams& p, double alpha, std::ostream& out) {
    if (const auto rc = gate_stable(p, out)) return *rc;
    const Surface surf(p);
    const SaddleInfo sad = saddle_point(surf, alpha);
    out << "saddle point=" << fmt_point(sad.point) << " rate="
        << sig6(sad.rate) << " t=" << sig6(sad.t) << "\n";
    PoleSets sets;
    try {
        sets = enumerate_poles(surf, alpha);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::SaddleIsPole) throw;
        out << "saddle coincides with a pole candidate; residue expansion "
               "not separable\n";
        return kExitOk;
    }
    const auto dump = [&](const char* owner,
                          const std::vector<PoleCandidate>& list) {
        for (const PoleCandidate& c : list) {
            out << owner << " pole point=" << fmt_point(c.point)
                << " rate=" << sig6(ray_rate(c.point, alpha))
                << " source="
                << (c.source == PoleSource::theta_star ? "theta_star"
                                                       : "theta_star_star")
                << " depth=" << c.depth << " order="
                << (c.order_known ? std::to_string(c.order) : "?") << "\n";
        }
    };
    dump("phi2", sets.phi2);
    dump("phi1", sets.phi1);
    if (sets.phi2.empty() && sets.phi1.empty())
        out << "no active poles on the contour arcs\n";
    return kExitOk;
}

int cmd_product_form(const ModelParams& p, std::ostream& out) {
    double residual = 0.0;
    const auto pf = fit_product_form(p, &residual);
    if (!pf) {
        out << "product-form: no (residual=" << sig6(residual) << ")\n";
        return kExitOk;
    }
    out << "product-form: yes\n";
    out << "eta=(" << sig6(pf->eta1) << ',' << sig6(pf->eta2) << ") C="
        << sig6(pf->C) << " c1=" << sig6(pf->c1) << " c2=" << sig6(pf->c2)
        << "\n";
    out << "mass1=" << sig6(pf->mass1()) << " mass2=" << sig6(pf->mass2())
        << "\n";
    return kExitOk;
}

int cmd_density(const ModelParams& p, double x1, double x2, std::ostream& out,
                std::ostream& err) {
    if (!(x1 > 0.0) || !(x2 > 0.0))
        fail(ErrorCode::ParseError, "--x1 and --x2 must be positive");
    if (const auto rc = gate_stable(p, out)) return *rc;
    const auto pf = fit_product_form(p);
    if (!pf) {
        err << "density needs boundary transforms; only product-form models "
               "provide them here\n";
        return kExitNumeric;
    }
    const Surface surf(p);
    const double v = density_eval(surf, x1, x2, pf->transform());
    out << "density=" << sig6(v) << "\n";
    return kExitOk;
}

struct SimOptions {
    SimConfig cfg;
    std::string hist_out, localtime_out;
};

int cmd_simulate(const ModelParams& p, const SimOptions& opt,
                 std::ostream& out) {
    if (const auto rc = gate_stable(p, out)) return *rc;
    const OccupationHistogram h = simulate(p, opt.cfg);
    out << "total_time=" << sig6(h.total_time) << " step="
        << sig6(opt.cfg.step) << " replicas=" << opt.cfg.replicas
        << " seed=" << opt.cfg.seed << "\n";
    out << "mean=(" << sig6(h.mean.x1) << ',' << sig6(h.mean.x2) << ")\n";
    out << "local_time_rate=(" << sig6(h.local_time_rate.x1) << ','
        << sig6(h.local_time_rate.x2) << ")\n";
    out << "overflow_fraction=" << sig6(h.overflow_time / h.total_time)
        << "\n";
    if (!opt.hist_out.empty()) write_histogram_csv(h, opt.hist_out);
    if (!opt.localtime_out.empty()) write_local_time_csv(h, opt.localtime_out);
    return kExitOk;
}

int cmd_compare(const ModelParams& p, double alpha, double sim_budget,
                std::ostream& out) {
    if (const auto rc = gate_stable(p, out)) return *rc;
    const Surface surf(p);
    const DecayReport rep = classify(surf, alpha);

    SimConfig cfg;
    cfg.total_time = sim_budget;
    const OccupationHistogram h = simulate(p, cfg);
    const RateEstimate sim = estimate_ray_rate(h, alpha, 0.5, 2.0);

    std::optional<double> quad;
    if (const auto pf = fit_product_form(p)) {
        const RationalBoundaryTransform bt = pf->transform();
        const double r0 = 4.0, r1 = 8.0;
        const double d0 = density_eval(surf, r0 * std::cos(alpha),
                                       r0 * std::sin(alpha), bt);
        const double d1 = density_eval(surf, r1 * std::cos(alpha),
                                       r1 * std::sin(alpha), bt);
        quad = -(std::log(d1) - std::log(d0)) / (r1 - r0);
    }

    out << "analytic rate    " << sig6(rep.rate) << "\n";
    out << "simulated rate   " << sig6(sim.rate) << " +/- "
        << sig6(sim.stderr_) << "\n";
    out << "quadrature rate  " << (quad ? sig6(*quad) : std::string("n/a"))
        << "\n";
    const bool sim_ok = std::fabs(sim.rate - rep.rate) <= 0.10 * rep.rate;
    const bool quad_ok = !quad || std::fabs(*quad - rep.rate) <= 0.01 * rep.rate;
    out << "verdict: " << (sim_ok && quad_ok ? "PASS" : "FAIL") << "\n";
    return kExitOk;
}

} // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
    CLI::App app{
        "srbmtail: decay rates and regimes of the stationary density of "
        "reflected Brownian motion in the quarter plane"};
    app.require_subcommand(1);

    std::string file, angle_text;
    int sweep_n = 0;
    double x1 = 0.0, x2 = 0.0, sim_budget = 1e5;
    SimOptions sim;

    CLI::App* c_validate = app.add_subcommand(
        "validate", "check existence and stability of the reflection data");
    c_validate->add_option("file", file, "parameter file")->required();

    CLI::App* c_classify = app.add_subcommand(
        "classify", "classify the tail regime along a ray");
    c_classify->add_option("file", file, "parameter file")->required();
    c_classify->add_option("--alpha", angle_text,
                           "ray angle with unit suffix, e.g. 30deg or 0.52rad")
        ->required();

    CLI::App* c_sweep = app.add_subcommand(
        "sweep", "classify over an angle grid, CSV on stdout");
    c_sweep->add_option("file", file, "parameter file")->required();
    c_sweep->add_option("--n", sweep_n, "number of interior grid angles")
        ->required();

    CLI::App* c_poles = app.add_subcommand(
        "poles", "list saddle and active pole candidates for a ray");
    c_poles->add_option("file", file, "parameter file")->required();
    c_poles->add_option("--alpha", angle_text, "ray angle with unit suffix")
        ->required();

    CLI::App* c_pf = app.add_subcommand(
        "product-form", "fit the exponential product-form density if exact");
    c_pf->add_option("file", file, "parameter file")->required();

    CLI::App* c_density = app.add_subcommand(
        "density", "evaluate the stationary density at an interior point");
    c_density->add_option("file", file, "parameter file")->required();
    c_density->add_option("--x1", x1, "first coordinate > 0")->required();
    c_density->add_option("--x2", x2, "second coordinate > 0")->required();

    CLI::App* c_sim = app.add_subcommand(
        "simulate", "Euler simulation of the reflected dynamics");
    c_sim->add_option("file", file, "parameter file")->required();
    c_sim->add_option("--total-time", sim.cfg.total_time, "horizon per replica");
    c_sim->add_option("--step", sim.cfg.step, "Euler step");
    c_sim->add_option("--burn-in", sim.cfg.burn_in, "discarded initial time");
    c_sim->add_option("--seed", sim.cfg.seed, "RNG seed");
    c_sim->add_option("--replicas", sim.cfg.replicas, "independent replicas");
    c_sim->add_option("--cell", sim.cfg.cell, "histogram cell width");
    c_sim->add_option("--extent", sim.cfg.extent, "histogram extent");
    c_sim->add_option("--hist-out", sim.hist_out, "occupation CSV path");
    c_sim->add_option("--localtime-out", sim.localtime_out,
                      "local-time CSV path");

    CLI::App* c_compare = app.add_subcommand(
        "compare", "analytic rate vs simulation vs quadrature");
    c_compare->add_option("file", file, "parameter file")->required();
    c_compare->add_option("--alpha", angle_text, "ray angle with unit suffix")
        ->required();
    c_compare->add_option("--sim-budget", sim_budget,
                          "simulation horizon for the empirical rate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        const ModelParams p = parse_params_file(file);
        if (c_validate->parsed()) return cmd_validate(p, out);
        if (c_classify->parsed())
            return cmd_classify(p, parse_angle(angle_text), out, err);
        if (c_sweep->parsed()) return cmd_sweep(p, sweep_n, out);
        if (c_poles->parsed())
            return cmd_poles(p, parse_angle(angle_text), out);
        if (c_pf->parsed()) return cmd_product_form(p, out);
        if (c_density->parsed()) return cmd_density(p, x1, x2, out, err);
        if (c_sim->parsed()) return cmd_simulate(p, sim, out);
        if (c_compare->parsed())
            return cmd_compare(p, parse_angle(angle_text), sim_budget, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        switch (e.code()) {
            case ErrorCode::UnsupportedDrift:
                return kExitUnsupportedDrift;
            case ErrorCode::UnstableModel:
                return kExitUnstable;
            case ErrorCode::ParseError:
            case ErrorCode::AngleOutOfRange:
            case ErrorCode::InvalidCovariance:
                return kExitUsage;
            default:
                return kExitNumeric;
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitUsage;
}

} // namespace srbm
