#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bbcf/center_families.hpp"
#include "bbcf/holo_system.hpp"

namespace bbcf {

using ComplexVector = std::vector<std::complex<double>>;

enum class StepMethod { rk4 };

struct TrajectorySample {
    double t = 0;
    ComplexVector state;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double step = 0;
    StepMethod method = StepMethod::rk4;

    const ComplexVector& final_state() const { return samples.back().state; }
};

double euclidean_norm(const ComplexVector& v);

// Classical fixed-step RK4 on the stored field of h. The step is shrunk to
// T/ceil(T/step) so the last sample lands on T. Throws DivergenceError once
// the Euclidean norm of the state exceeds divergence_bound.
Trajectory integrate(const HoloSystem& h, const ComplexVector& z0, double T, double step,
                     double divergence_bound = 1e3, bool keep_samples = true);

struct VerifyOptions {
    std::size_t starts = 8;
    double radius = 1e-2;
    double tol = 1e-6;
    double step = 1e-3;
    std::size_t grid = 16;
    std::uint32_t seed = 20240601;
    double divergence_bound = 1e3;
    std::optional<double> period;  // overrides the predicted period (stored time)
    unsigned threads = 0;          // 0: hardware concurrency
};

struct VerifyResult {
    double return_error = 0;
    double residual_error = 0;
    double predicted_period = 0;
    std::size_t starts = 0;
    bool diverged = false;
    bool pass = false;
    std::string diagnostics;
};

// Period of the report's orbits in the stored time of h.
double predicted_period(const HoloSystem& h, const CenterManifoldReport& r);

// Starting points at Euclidean distance radius: on the truncated graph for manifold
// reports, random points of the ball for the origin center.
std::vector<ComplexVector> sample_starts(const HoloSystem& h, const CenterManifoldReport& r, const VerifyOptions& opt);

VerifyResult check_isochronous(const HoloSystem& h, const CenterManifoldReport& r, const VerifyOptions& opt = {});

// Max |F_c(phi) phi_j' - F_j(phi)| over grid points on |t| = radius. The
// polynomials are evaluated exactly at Gaussian-rational points of the
// circle and only the final values are rounded, so tiny residuals survive.
double check_residual_numeric(const HoloSystem& h, const CenterManifoldReport& r, std::size_t grid, double radius);

// Same, for a graph other than the report's own (e.g. a shorter truncation).
double residual_numeric_for_graph(const HoloSystem& h, std::size_t chart, const std::vector<MultiSeries>& graph,
                                  std::size_t grid, double radius);

// Least-squares slope of log(residual) against log(radius).
double loglog_slope(const std::vector<double>& radii, const std::vector<double>& values);

}  // namespace bbcf
