#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bbcf/bb_engine.hpp"
#include "bbcf/holo_system.hpp"
#include "bbcf/spectra.hpp"

namespace bbcf {

// Graph ansatz z_j = t*u_j(t) over the chart variable t = z_chart, turned
// into the Briot-Bouquet system t*u_j' = rhs_j(t, u).
struct ChartReduction {
    std::size_t chart = 0;
    std::vector<std::size_t> dependent;  // original index of u_1, u_2, ...
    std::vector<MultiSeries> rhs;        // nvars = dependent.size() + 1, variable 0 is t
    ExactVector constant_terms;          // rhs_j(0, 0)
    std::optional<BBSystem> reduced;     // empty when some constant term is nonzero

    bool obstructed() const { return !reduced.has_value(); }
};

// Throws InvalidChartError when the chart's diagonal entry vanishes.
ChartReduction chart_reduce(const HoloSystem& h, std::size_t chart, int order);

enum class Multiplicity { none, unique, infinite };
std::string to_string(Multiplicity m);

struct CenterManifoldReport {
    std::size_t chart = 0;
    std::string tangency;  // "x-invariant", "(x,y)-invariant", "isochronous center at origin", ...
    Multiplicity multiplicity = Multiplicity::unique;
    // Free coefficients of the graph: order = power of t, variable = original index.
    std::vector<FreeParameter> free_parameters;
    std::vector<MultiSeries> graph;  // one-variable series per coordinate; empty for the origin report
    int order = 0;
    Rational omega;          // |omega| of the chart eigenvalue in original time
    Rational period_factor;  // period = 2*pi*period_factor in original time
    std::string theorem_tag;
    std::vector<ObstructionConstant> obstructions;  // variables are original indices
    std::optional<int> blocking_order;

    bool is_origin_center() const { return graph.empty() && multiplicity != Multiplicity::none; }
    std::string period_string() const;  // "2π/3"
};

// All center manifolds at the origin of a system in one of the supported
// normal forms. Empty when no eigenvalue is purely imaginary. Throws
// NotNormalizedError for other linear parts.
std::vector<CenterManifoldReport> enumerate_centers(const HoloSystem& h, int order);

// Graph functions with every free parameter at its representative value 0.
std::vector<MultiSeries> manifold_graph(const CenterManifoldReport& r);

// F_c(phi) * phi_j' - F_j(phi) for each coordinate j != chart, truncated at
// the report order. Identically zero for a correct manifold.
std::vector<MultiSeries> graph_residual(const HoloSystem& h, const CenterManifoldReport& r);

// The system with time rescaled so that the smallest imaginary |omega| is 1.
HoloSystem normalize_time(const HoloSystem& h);

// Linear change of variables z = basis * w putting the linear part into a
// supported normal form. With allow_numeric, an uncertifiable spectrum is
// handled through rounded eigenvectors and the result is flagged.
struct NormalizedSystem {
    HoloSystem system;
    SmallMatrix basis;
    bool certified = true;
    bool changed = false;  // false when the input was already normalized
};

NormalizedSystem normalize_system(const HoloSystem& h, bool allow_numeric = false);

}  // namespace bbcf
