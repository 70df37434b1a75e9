#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bbcf/multi_series.hpp"
#include "bbcf/small_matrix.hpp"

namespace bbcf {

// Which linear normal form the system's linear part matches exactly.
enum class NormalFormTag {
    diagonal,                  // all eigenvalues purely imaginary, diagonal
    diagonal_with_hyperbolic,  // diagonal, at least one eigenvalue off the imaginary axis
    jordan_2x2,                // [[a,e],[0,a]] on (x,y), a imaginary, plus a diagonal z entry
    jordan_3x3,                // single 3x3 Jordan block at an imaginary eigenvalue
    not_normalized,
};

std::string to_string(NormalFormTag tag);

// Holomorphic vector field z' = linear*z + nonlinear(z) with an equilibrium
// at the origin. The stored field equals the original field divided by
// time_scale, so periods in original time are stored periods / time_scale.
struct HoloSystem {
    std::size_t dim = 0;
    SmallMatrix linear;
    std::vector<MultiSeries> nonlinear;  // nvars == dim, every term of degree >= 2
    Rational time_scale{1};
    NormalFormTag normal_form = NormalFormTag::not_normalized;
    std::vector<std::string> names;

    // Full right-hand side of component i (linear row plus nonlinear part).
    MultiSeries component(std::size_t i) const;
    std::vector<std::complex<double>> eval_numeric(std::span<const std::complex<double>> z) const;
    std::vector<ExactComplex> eval_exact(std::span<const ExactComplex> z) const;
    int series_order() const;
};

// Validates the invariants (no constant or linear terms in the nonlinear
// part, consistent dimensions), fills default names and the normal form tag.
HoloSystem make_holo_system(SmallMatrix linear, std::vector<MultiSeries> nonlinear,
                            std::vector<std::string> names = {});

// The system factor*F; time_scale is left untouched.
HoloSystem scaled(const HoloSystem& h, const Rational& factor);

}  // namespace bbcf
