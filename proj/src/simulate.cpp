#include "srbm/simulate.hpp"

#include <cmath>
#include <fstream>
#include <thread>

#include "srbm/errors.hpp"

namespace srbm {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr double kTwoPi = 6.28318530717958647692;
} // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replica) {
    key_ = mix(seed ^ mix(replica + kGolden));
}

std::uint64_t CounterRng::mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

double CounterRng::uniform(std::uint64_t counter) const {
    const std::uint64_t u = mix(key_ + counter * kGolden);
    // Top 53 bits, offset off zero so log() below is always finite.
    return static_cast<double>(u >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

void CounterRng::gaussian_pair(std::uint64_t k, double& z1, double& z2) const {
    const double u1 = uniform(2 * k);
    const double u2 = uniform(2 * k + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    z1 = r * std::cos(kTwoPi * u2);
    z2 = r * std::sin(kTwoPi * u2);
}

StepResult reflect_step(Vec2 y, const Mat2& r) {
    if (y.x1 >= 0.0 && y.x2 >= 0.0) return {y, {0.0, 0.0}};
    if (y.x1 < 0.0) {
        const double dl1 = -y.x1 / r.a11;
        const double z2 = y.x2 + r.a21 * dl1;
        if (dl1 >= 0.0 && z2 >= 0.0) return {{0.0, z2}, {dl1, 0.0}};
    }
    if (y.x2 < 0.0) {
        const double dl2 = -y.x2 / r.a22;
        const double z1 = y.x1 + r.a12 * dl2;
        if (dl2 >= 0.0 && z1 >= 0.0) return {{z1, 0.0}, {0.0, dl2}};
    }
    // Corner: push off both faces at once, z lands exactly at the origin.
    Vec2 dl = solve(r, {-y.x1, -y.x2});
    const double tol = 1e-12 * (1.0 + std::fabs(y.x1) + std::fabs(y.x2));
    if (dl.x1 >= -tol && dl.x2 >= -tol) {
        dl.x1 = std::max(dl.x1, 0.0);
        dl.x2 = std::max(dl.x2, 0.0);
        return {{0.0, 0.0}, dl};
    }
    fail(ErrorCode::ReflectionInfeasible,
         "no admissible reflection case for the proposed step");
}

namespace {

struct ReplicaResult {
    std::vector<double> time;
    std::vector<std::uint64_t> hits;
    double overflow_time = 0.0;
    Vec2 mean_sum{0.0, 0.0};   // integral of Z dt
    Vec2 local_sum{0.0, 0.0};  // total pushed local time
};

void run_replica(const ModelParams& p, const SimConfig& cfg, int replica,
                 int n, ReplicaResult& out) {
    const double h = cfg.step;
    const double sqrt_h = std::sqrt(h);
    // Lower Cholesky factor of sigma.
    const double l11 = std::sqrt(p.sigma.a11);
    const double l21 = p.sigma.a12 / l11;
    const double l22 = std::sqrt(p.sigma.a22 - l21 * l21);

    const CounterRng rng(cfg.seed, static_cast<std::uint64_t>(replica));
    const long long total_steps = std::llround(cfg.total_time / h);
    const long long burn_steps = std::llround(cfg.burn_in / h);

    out.time.assign(static_cast<std::size_t>(n) * n, 0.0);
    out.hits.assign(static_cast<std::size_t>(n) * n, 0);

    Vec2 z{0.0, 0.0};
    for (long long k = 0; k < total_steps; ++k) {
        double g1, g2;
        rng.gaussian_pair(static_cast<std::uint64_t>(k), g1, g2);
        const Vec2 y{z.x1 + p.mu.x1 * h + sqrt_h * (l11 * g1),
                     z.x2 + p.mu.x2 * h + sqrt_h * (l21 * g1 + l22 * g2)};
        const StepResult s = reflect_step(y, p.refl);
        z = s.z;
        if (k < burn_steps) continue;
        const int ix = static_cast<int>(z.x1 / cfg.cell);
        const int iy = static_cast<int>(z.x2 / cfg.cell);
        if (ix >= 0 && ix < n && iy >= 0 && iy < n) {
            const std::size_t c = ix + static_cast<std::size_t>(n) * iy;
            out.time[c] += h;
            out.hits[c] += 1;
        } else {
            out.overflow_time += h;
        }
        out.mean_sum = out.mean_sum + h * z;
        out.local_sum = out.local_sum + s.dl;
    }
}

} // namespace

OccupationHistogram simulate(const ModelParams& p, const SimConfig& cfg) {
    if (!validate_stability(p).stable)
        fail(ErrorCode::UnstableModel,
             "simulation requires a positive-recurrent model");
    if (!(cfg.step > 0.0) || !(cfg.total_time > cfg.burn_in) ||
        !(cfg.cell > 0.0) || !(cfg.extent > cfg.cell) || cfg.replicas < 1)
        fail(ErrorCode::ParseError, "invalid simulation configuration");

    const int n = static_cast<int>(std::lround(cfg.extent / cfg.cell));
    std::vector<ReplicaResult> parts(cfg.replicas);
    if (cfg.replicas == 1) {
        run_replica(p, cfg, 0, n, parts[0]);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(cfg.replicas);
        for (int r = 0; r < cfg.replicas; ++r)
            pool.emplace_back(run_replica, std::cref(p), std::cref(cfg), r, n,
                              std::ref(parts[r]));
        for (auto& t : pool) t.join();
    }

    OccupationHistogram hist;
    hist.n = n;
    hist.cell = cfg.cell;
    hist.time.assign(static_cast<std::size_t>(n) * n, 0.0);
    hist.hits.assign(static_cast<std::size_t>(n) * n, 0);
    const long long rec_steps =
        std::llround(cfg.total_time / cfg.step) -
        std::llround(cfg.burn_in / cfg.step);
    hist.total_time = static_cast<double>(rec_steps) * cfg.step * cfg.replicas;
    Vec2 mean_sum{0.0, 0.0};
    Vec2 local_sum{0.0, 0.0};
    // Merge strictly in replica order so reruns are bit-identical.
    for (const ReplicaResult& part : parts) {
        for (std::size_t i = 0; i < hist.time.size(); ++i) {
            hist.time[i] += part.time[i];
            hist.hits[i] += part.hits[i];
        }
        hist.overflow_time += part.overflow_time;
        mean_sum = mean_sum + part.mean_sum;
        local_sum = local_sum + part.local_sum;
    }
    hist.mean = (1.0 / hist.total_time) * mean_sum;
    hist.local_time_rate = (1.0 / hist.total_time) * local_sum;
    return hist;
}

RateEstimate estimate_ray_rate(const OccupationHistogram& h, double alpha,
                               double r_lo, double r_hi) {
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const int ix0 = h.cell_of(r_lo * ca);
    const int iy0 = h.cell_of(r_lo * sa);
    if (ix0 < 0 || ix0 >= h.n || iy0 < 0 || iy0 >= h.n ||
        h.hits[ix0 + static_cast<std::size_t>(h.n) * iy0] < 30)
        fail(ErrorCode::InsufficientData,
             "ray window starts in a poorly sampled cell");

    std::vector<double> rs, ys;
    for (double r = r_lo; r <= r_hi + 1e-12; r += h.cell) {
        const int ix = h.cell_of(r * ca);
        const int iy = h.cell_of(r * sa);
        if (ix < 0 || ix >= h.n || iy < 0 || iy >= h.n) break;
        const double d = h.density(ix, iy);
        if (!(d > 0.0)) continue;
        rs.push_back(r);
        ys.push_back(std::log(d));
    }
    const int m = static_cast<int>(rs.size());
    if (m < 5)
        fail(ErrorCode::InsufficientData,
             "fewer than five populated cells along the ray");

    double sr = 0.0, sy = 0.0;
    for (int i = 0; i < m; ++i) {
        sr += rs[i];
        sy += ys[i];
    }
    const double rbar = sr / m, ybar = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < m; ++i) {
        sxx += (rs[i] - rbar) * (rs[i] - rbar);
        sxy += (rs[i] - rbar) * (ys[i] - ybar);
    }
    const double slope = sxy / sxx;
    double ss = 0.0;
    for (int i = 0; i < m; ++i) {
        const double e = ys[i] - ybar - slope * (rs[i] - rbar);
        ss += e * e;
    }
    RateEstimate est;
    est.rate = -slope;
    est.stderr_ = m > 2 ? std::sqrt(ss / (m - 2) / sxx) : 0.0;
    est.cells_used = m;
    return est;
}

void write_histogram_csv(const OccupationHistogram& h,
                         const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::ParseError, "cannot open " + path);
    out.precision(9);
    out << "x1_center,x2_center,density\n";
    for (int iy = 0; iy < h.n; ++iy)
        for (int ix = 0; ix < h.n; ++ix)
            out << (ix + 0.5) * h.cell << ',' << (iy + 0.5) * h.cell << ','
                << h.density(ix, iy) << '\n';
}

void write_local_time_csv(const OccupationHistogram& h,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::ParseError, "cannot open " + path);
    out.precision(9);
    out << "face,local_time_rate\n";
    out << "1," << h.local_time_rate.x1 << '\n';
    out << "2," << h.local_time_rate.x2 << '\n';
}

} // namespace srbm
