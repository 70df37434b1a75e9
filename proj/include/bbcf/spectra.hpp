#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "bbcf/exact_complex.hpp"
#include "bbcf/holo_system.hpp"
#include "bbcf/small_matrix.hpp"

namespace bbcf {

struct Eigenvalue {
    ExactComplex value;
    std::size_t multiplicity = 1;
    std::complex<double> approx;
};

struct JordanBlock {
    ExactComplex eigenvalue;
    std::size_t size = 1;
};

// omega_to / omega_from for two purely imaginary eigenvalues i*omega.
struct ImaginaryRatio {
    std::size_t from = 0;  // index into SpectrumInfo::eigenvalues
    std::size_t to = 0;
    std::optional<Rational> ratio;  // empty when not certified
};

struct SpectrumInfo {
    std::size_t dim = 0;
    bool certified = true;
    // Distinct eigenvalues. Purely imaginary ones come first, sorted by |omega|
    // ascending with positive omega before negative; the rest follow.
    std::vector<Eigenvalue> eigenvalues;
    bool diagonalizable = true;
    std::vector<JordanBlock> jordan_blocks;
    std::vector<ImaginaryRatio> imaginary_part_ratios;
    std::vector<long> positive_integer_eigenvalues;

    std::size_t imaginary_count() const;  // counted with multiplicity
};

// Exact eigenvalues and Jordan structure. Throws UncertifiableSpectrumError
// when the characteristic polynomial does not split over Q(i).
SpectrumInfo classify_spectrum(const SmallMatrix& m);

// Double-precision fallback; parts below 1e-9 are zeroed, eigenvalues within
// 1e-6 (relative) are merged, and the result is flagged certified = false.
SpectrumInfo classify_spectrum_numeric(const SmallMatrix& m);

// Exact roots (with multiplicity) of a monic-able polynomial given by
// coefficients c_0..c_n over Q(i); nullopt when some root is not a Gaussian rational.
std::optional<std::vector<ExactComplex>> gaussian_rational_roots(std::vector<ExactComplex> coeffs);

// Continued-fraction approximation within 1e-12 relative, denominators up to 1e9.
Rational rational_approximation(double v);

// Double-precision eigenpairs rounded to Gaussian rationals; eigenvectors are
// scaled so their largest entry is 1. Uncertified by construction.
struct ApproxEigenpair {
    ExactComplex value;
    ExactVector vector;
};
std::vector<ApproxEigenpair> approximate_eigenpairs(const SmallMatrix& m);

struct NormalForm {
    NormalFormTag tag = NormalFormTag::not_normalized;
    // Ratios omega_2/omega_1 and omega_3/omega_1 of the sorted imaginary eigenvalues.
    std::optional<Rational> mu;
    std::optional<Rational> nu;
    // First eigenvalue off the imaginary axis, divided by |omega_1|.
    std::optional<ExactComplex> lambda;
};

NormalForm normal_form_check(const HoloSystem& h);
NormalForm normal_form_check(const SmallMatrix& linear);

// Purely imaginary diagonal entries i*omega of an upper triangular matrix,
// as (index, omega) sorted by |omega|, then positive omega first, then index.
std::vector<std::pair<std::size_t, Rational>> sorted_imaginary_axes(const SmallMatrix& m);

}  // namespace bbcf
