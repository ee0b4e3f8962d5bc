#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srbm/model.hpp"

namespace srbm {

// Stateless counter-based RNG: SplitMix64 finalizer over a key derived from
// (seed, replica) plus a running counter. Uniforms are the top 53 bits mapped
// into (0,1); Gaussians come from the Box-Muller transform of a counter pair.
// Identical (seed, replica, counter) always yields identical bits, so replica
// streams are disjoint and merge order independent.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t replica);
    static std::uint64_t mix(std::uint64_t x);
    double uniform(std::uint64_t counter) const;      // in (0, 1)
    // Standard normal pair from counters (2k, 2k+1).
    void gaussian_pair(std::uint64_t k, double& z1, double& z2) const;

private:
    std::uint64_t key_ = 0;
};

struct SimConfig {
    double step = 1e-3;       // Euler step h
    double total_time = 1e4;  // horizon per replica, includes burn_in
    double burn_in = 0.0;
    std::uint64_t seed = 1;
    int replicas = 1;
    double cell = 0.05;       // histogram cell width
    double extent = 4.0;      // square grid [0, extent)^2
};

struct OccupationHistogram {
    int n = 0;                       // grid is n x n
    double cell = 0.0;
    std::vector<double> time;        // row-major [ix + n * iy], occupation time
    std::vector<std::uint64_t> hits; // step counts per cell
    double overflow_time = 0.0;      // time spent outside the grid
    double total_time = 0.0;         // recorded horizon across replicas
    Vec2 mean;                       // time-weighted mean position
    Vec2 local_time_rate;            // L(T)/T per face

    double density(int ix, int iy) const {
        return time[ix + static_cast<std::size_t>(n) * iy] /
               (total_time * cell * cell);
    }
    int cell_of(double x) const { return static_cast<int>(x / cell); }
};

// One reflected Euler update: given the unconstrained proposal y, find the
// unique complementarity case (interior, one face, or corner) with a
// nonnegative local-time push dl such that z = y + refl dl lies in the
// quadrant with z_i = 0 exactly where dl_i > 0. ReflectionInfeasible when no
// case admits dl >= 0 (possible only for reflection matrices outside the
// existence region).
struct StepResult {
    Vec2 z;
    Vec2 dl;
};
StepResult reflect_step(Vec2 y, const Mat2& refl);

// Explicit Euler simulation of the reflected dynamics started at the corner.
// Requires a stable model (UnstableModel). Replicas run on separate threads
// with disjoint RNG streams; the merged histogram is bit-identical across
// reruns and scheduling.
OccupationHistogram simulate(const ModelParams& p, const SimConfig& cfg);

struct RateEstimate {
    double rate = 0.0;
    double stderr_ = 0.0;
    int cells_used = 0;
};

// Exponential decay rate of the empirical density along the ray of angle
// alpha: least-squares slope of -log density over cells sampled at
// r in [r_lo, r_hi]. InsufficientData when the ray starts in a cell with
// fewer than 30 hits or fewer than 5 populated cells remain.
RateEstimate estimate_ray_rate(const OccupationHistogram& h, double alpha,
                               double r_lo, double r_hi);

void write_histogram_csv(const OccupationHistogram& h, const std::string& path);
void write_local_time_csv(const OccupationHistogram& h, const std::string& path);

} // namespace srbm
