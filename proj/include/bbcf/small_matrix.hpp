#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "bbcf/exact_complex.hpp"

namespace bbcf {

using ExactVector = std::vector<ExactComplex>;

// Square matrix (dimension 1..3 in practice) over the Gaussian rationals,
// stored row-major.
class SmallMatrix {
public:
    SmallMatrix() = default;
    explicit SmallMatrix(std::size_t dim);
    SmallMatrix(std::size_t dim, std::initializer_list<ExactComplex> row_major);

    static SmallMatrix identity(std::size_t dim);
    static SmallMatrix diagonal(std::span<const ExactComplex> entries);

    std::size_t dim() const { return dim_; }
    ExactComplex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const ExactComplex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    SmallMatrix operator+(const SmallMatrix& o) const;
    SmallMatrix operator-(const SmallMatrix& o) const;
    SmallMatrix operator*(const SmallMatrix& o) const;
    SmallMatrix operator*(const ExactComplex& s) const;
    ExactVector operator*(std::span<const ExactComplex> v) const;
    friend bool operator==(const SmallMatrix&, const SmallMatrix&) = default;

    bool is_diagonal() const;
    bool is_upper_triangular() const;

    ExactComplex determinant() const;
    std::size_t rank() const;
    SmallMatrix inverse() const;
    SmallMatrix pow(int k) const;
    // Coefficients c_0..c_dim of det(t I - M), c_dim = 1.
    std::vector<ExactComplex> characteristic_polynomial() const;
    // Basis of the right kernel (columns as vectors), from the reduced row echelon form.
    std::vector<ExactVector> nullspace() const;

    std::string to_string() const;

private:
    std::size_t dim_ = 0;
    std::vector<ExactComplex> data_;
};

// Result of solving M w = rhs for a possibly singular M.
struct LinearSolution {
    bool consistent = true;
    ExactVector solution;                  // valid when consistent
    std::vector<std::size_t> free_columns; // non-pivot columns of the RREF
    // First nonzero right-hand side left on a zero row; the inconsistency witness.
    ExactComplex defect;
};

// Gauss-Jordan elimination with the leftmost-nonzero pivot rule. Free columns
// take the values in `free_values` (in column order; missing ones are zero).
LinearSolution solve_linear(const SmallMatrix& m, std::span<const ExactComplex> rhs,
                            std::span<const ExactComplex> free_values = {});

}  // namespace bbcf
