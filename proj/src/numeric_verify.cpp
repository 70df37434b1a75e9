#include "bbcf/numeric_verify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "bbcf/spectra.hpp"

namespace bbcf {

double euclidean_norm(const ComplexVector& v) {
    double s = 0;
    for (const auto& c : v) s += std::norm(c);
    return std::sqrt(s);
}

namespace {

void axpy(ComplexVector& out, const ComplexVector& base, double a, const ComplexVector& k) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = base[i] + a * k[i];
}

}  // namespace

Trajectory integrate(const HoloSystem& h, const ComplexVector& z0, double T, double step, double divergence_bound,
                     bool keep_samples) {
    if (!(step > 0) || !(T > 0)) throw PreconditionError("integrate needs positive T and step");
    if (z0.size() != h.dim) throw DimensionError("initial state has the wrong dimension");
    auto n = static_cast<std::size_t>(std::ceil(T / step - 1e-9));
    n = std::max<std::size_t>(n, 1);
    double dt = T / static_cast<double>(n);

    Trajectory tr;
    tr.step = dt;
    tr.samples.push_back({0.0, z0});
    ComplexVector z = z0, tmp(h.dim);
    for (std::size_t k = 1; k <= n; ++k) {
        ComplexVector k1 = h.eval_numeric(z);
        axpy(tmp, z, dt / 2, k1);
        ComplexVector k2 = h.eval_numeric(tmp);
        axpy(tmp, z, dt / 2, k2);
        ComplexVector k3 = h.eval_numeric(tmp);
        axpy(tmp, z, dt, k3);
        ComplexVector k4 = h.eval_numeric(tmp);
        for (std::size_t i = 0; i < h.dim; ++i) z[i] += dt / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        double nz = euclidean_norm(z);
        double t = k == n ? T : dt * static_cast<double>(k);
        if (!(nz <= divergence_bound)) {
            std::ostringstream msg;
            msg << "state norm " << nz << " exceeded " << divergence_bound << " at t = " << t;
            throw DivergenceError(msg.str());
        }
        if (keep_samples || k == n) tr.samples.push_back({t, z});
    }
    return tr;
}

double predicted_period(const HoloSystem& h, const CenterManifoldReport& r) {
    return 2 * std::numbers::pi * Rational(r.period_factor * h.time_scale).get_d();
}

std::vector<ComplexVector> sample_starts(const HoloSystem& h, const CenterManifoldReport& r, const VerifyOptions& opt) {
    std::vector<ComplexVector> out;
    if (r.is_origin_center()) {
        std::mt19937 rng(opt.seed);
        std::normal_distribution<double> gauss;
        for (std::size_t k = 0; k < opt.starts; ++k) {
            ComplexVector z(h.dim);
            for (auto& c : z) c = {gauss(rng), gauss(rng)};
            double s = opt.radius / euclidean_norm(z);
            for (auto& c : z) c *= s;
            out.push_back(std::move(z));
        }
        return out;
    }
    const auto graph = manifold_graph(r);
    auto point_at = [&](std::complex<double> t) {
        ComplexVector z(h.dim);
        std::complex<double> arg[1] = {t};
        for (std::size_t j = 0; j < h.dim; ++j) z[j] = graph[j].eval_numeric(arg);
        return z;
    };
    for (std::size_t k = 0; k < opt.starts; ++k) {
        double theta = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(opt.starts) + 0.3;
        std::complex<double> dir = std::polar(1.0, theta);
        double rho = opt.radius;
        // two corrections bring the point onto the sphere; the graph is nearly linear here
        for (int pass = 0; pass < 2; ++pass) rho *= opt.radius / euclidean_norm(point_at(rho * dir));
        out.push_back(point_at(rho * dir));
    }
    return out;
}

namespace {

struct StartOutcome {
    double error = 0;
    bool diverged = false;
    std::string message;
};

StartOutcome run_start(const HoloSystem& h, const ComplexVector& z0, double T, const VerifyOptions& opt) {
    StartOutcome o;
    try {
        Trajectory tr = integrate(h, z0, T, opt.step, opt.divergence_bound, false);
        ComplexVector d = tr.final_state();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] -= z0[i];
        o.error = euclidean_norm(d);
    } catch (const DivergenceError& e) {
        o.diverged = true;
        o.error = std::numeric_limits<double>::infinity();
        o.message = e.what();
    }
    return o;
}

}  // namespace

VerifyResult check_isochronous(const HoloSystem& h, const CenterManifoldReport& r, const VerifyOptions& opt) {
    if (r.multiplicity == Multiplicity::none) throw PreconditionError("cannot verify a chart without a manifold");
    VerifyResult res;
    res.predicted_period = opt.period.value_or(predicted_period(h, r));
    auto starts = sample_starts(h, r, opt);
    res.starts = starts.size();

    std::vector<StartOutcome> outcomes(starts.size());
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    if (threads <= 1 || starts.size() <= 1) {
        for (std::size_t k = 0; k < starts.size(); ++k) outcomes[k] = run_start(h, starts[k], res.predicted_period, opt);
    } else {
        std::vector<std::future<void>> jobs;
        for (unsigned w = 0; w < threads; ++w) {
            jobs.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t k = w; k < starts.size(); k += threads)
                    outcomes[k] = run_start(h, starts[k], res.predicted_period, opt);
            }));
        }
        for (auto& j : jobs) j.get();
    }

    std::ostringstream diag;
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        res.return_error = std::max(res.return_error, outcomes[k].error);
        if (outcomes[k].diverged) {
            res.diverged = true;
            diag << "start " << k << ": " << outcomes[k].message << "\n";
        }
    }
    res.residual_error = check_residual_numeric(h, r, opt.grid, opt.radius);
    res.pass = !res.diverged && res.return_error <= opt.tol && res.residual_error <= opt.tol;
    res.diagnostics = diag.str();
    return res;
}

namespace {

// Gaussian-rational points radius*(1-s^2, 2s)/(1+s^2) spread around the circle.
std::vector<ExactComplex> circle_points(std::size_t grid, const Rational& radius) {
    std::vector<ExactComplex> out;
    for (std::size_t k = 0; k < grid; ++k) {
        double theta = 2 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid) + 0.17;
        double half = std::tan(theta / 2);
        if (std::abs(half) > 1e4) {
            out.emplace_back(Rational(-radius));
            continue;
        }
        Rational s(static_cast<long>(std::lround(half * 256)), 256);
        s.canonicalize();
        Rational den = 1 + s * s;
        out.emplace_back(Rational(radius * (1 - s * s) / den), Rational(radius * 2 * s / den));
    }
    return out;
}

double modulus(const ExactComplex& c) { return std::abs(c.to_complex()); }

}  // namespace

double residual_numeric_for_graph(const HoloSystem& h, std::size_t chart, const std::vector<MultiSeries>& graph,
                                  std::size_t grid, double radius) {
    if (graph.empty()) return 0;
    if (graph.size() != h.dim) throw DimensionError("graph needs one series per coordinate");
    std::vector<MultiSeries> deriv;
    for (const auto& g : graph) deriv.push_back(g.derivative(0));
    double worst = 0;
    for (const auto& t : circle_points(grid, rational_approximation(radius))) {
        ExactComplex arg[1] = {t};
        std::vector<ExactComplex> phi;
        for (const auto& g : graph) phi.push_back(g.eval_exact(arg));
        std::vector<ExactComplex> f = h.eval_exact(phi);
        for (std::size_t j = 0; j < h.dim; ++j) {
            if (j == chart) continue;
            worst = std::max(worst, modulus(f[chart] * deriv[j].eval_exact(arg) - f[j]));
        }
    }
    return worst;
}

double check_residual_numeric(const HoloSystem& h, const CenterManifoldReport& r, std::size_t grid, double radius) {
    if (r.multiplicity == Multiplicity::none) throw PreconditionError("no manifold to evaluate");
    if (r.is_origin_center()) return 0;
    return residual_numeric_for_graph(h, r.chart, manifold_graph(r), grid, radius);
}

double loglog_slope(const std::vector<double>& radii, const std::vector<double>& values) {
    if (radii.size() != values.size() || radii.size() < 2) throw PreconditionError("slope needs two or more points");
    double n = static_cast<double>(radii.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < radii.size(); ++k) {
        double x = std::log10(radii[k]), y = std::log10(values[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace bbcf
