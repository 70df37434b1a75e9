#include "bbcf/small_matrix.hpp"

#include <sstream>

#include "bbcf/errors.hpp"

namespace bbcf {

SmallMatrix::SmallMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

SmallMatrix::SmallMatrix(std::size_t dim, std::initializer_list<ExactComplex> row_major)
    : dim_(dim), data_(row_major) {
    if (data_.size() != dim * dim) throw DimensionError("SmallMatrix: entry count does not match dimension");
}

SmallMatrix SmallMatrix::identity(std::size_t dim) {
    SmallMatrix m(dim);
    for (std::size_t k = 0; k < dim; ++k) m(k, k) = ExactComplex(1);
    return m;
}

SmallMatrix SmallMatrix::diagonal(std::span<const ExactComplex> entries) {
    SmallMatrix m(entries.size());
    for (std::size_t k = 0; k < entries.size(); ++k) m(k, k) = entries[k];
    return m;
}

SmallMatrix SmallMatrix::operator+(const SmallMatrix& o) const {
    if (o.dim_ != dim_) throw DimensionError("matrix dimension mismatch");
    SmallMatrix r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] += o.data_[k];
    return r;
}

SmallMatrix SmallMatrix::operator-(const SmallMatrix& o) const {
    if (o.dim_ != dim_) throw DimensionError("matrix dimension mismatch");
    SmallMatrix r = *this;
    for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] -= o.data_[k];
    return r;
}

SmallMatrix SmallMatrix::operator*(const SmallMatrix& o) const {
    if (o.dim_ != dim_) throw DimensionError("matrix dimension mismatch");
    SmallMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t k = 0; k < dim_; ++k) {
            if ((*this)(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < dim_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
        }
    return r;
}

SmallMatrix SmallMatrix::operator*(const ExactComplex& s) const {
    SmallMatrix r = *this;
    for (auto& e : r.data_) e *= s;
    return r;
}

ExactVector SmallMatrix::operator*(std::span<const ExactComplex> v) const {
    if (v.size() != dim_) throw DimensionError("matrix-vector dimension mismatch");
    ExactVector r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r[i] += (*this)(i, j) * v[j];
    return r;
}

bool SmallMatrix::is_diagonal() const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j)
            if (i != j && !(*this)(i, j).is_zero()) return false;
    return true;
}

bool SmallMatrix::is_upper_triangular() const {
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (!(*this)(i, j).is_zero()) return false;
    return true;
}

namespace {

// In-place Gauss-Jordan on an augmented copy; returns pivot columns.
std::vector<std::size_t> reduce(std::vector<ExactVector>& rows, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t p = r;
        while (p < rows.size() && rows[p][c].is_zero()) ++p;
        if (p == rows.size()) continue;
        std::swap(rows[p], rows[r]);
        ExactComplex inv = rows[r][c].inverse();
        for (auto& e : rows[r]) e *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c].is_zero()) continue;
            ExactComplex f = rows[i][c];
            for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= f * rows[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

}  // namespace

ExactComplex SmallMatrix::determinant() const {
    std::vector<ExactVector> rows(dim_);
    for (std::size_t i = 0; i < dim_; ++i) rows[i].assign(data_.begin() + static_cast<long>(i * dim_),
                                                          data_.begin() + static_cast<long>((i + 1) * dim_));
    ExactComplex det(1);
    for (std::size_t c = 0; c < dim_; ++c) {
        std::size_t p = c;
        while (p < dim_ && rows[p][c].is_zero()) ++p;
        if (p == dim_) return ExactComplex();
        if (p != c) {
            std::swap(rows[p], rows[c]);
            det = -det;
        }
        det *= rows[c][c];
        ExactComplex inv = rows[c][c].inverse();
        for (std::size_t i = c + 1; i < dim_; ++i) {
            if (rows[i][c].is_zero()) continue;
            ExactComplex f = rows[i][c] * inv;
            for (std::size_t j = c; j < dim_; ++j) rows[i][j] -= f * rows[c][j];
        }
    }
    return det;
}

std::size_t SmallMatrix::rank() const {
    std::vector<ExactVector> rows(dim_);
    for (std::size_t i = 0; i < dim_; ++i) rows[i].assign(data_.begin() + static_cast<long>(i * dim_),
                                                          data_.begin() + static_cast<long>((i + 1) * dim_));
    return reduce(rows, dim_).size();
}

SmallMatrix SmallMatrix::inverse() const {
    std::vector<ExactVector> rows(dim_, ExactVector(2 * dim_));
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) rows[i][j] = (*this)(i, j);
        rows[i][dim_ + i] = ExactComplex(1);
    }
    if (reduce(rows, dim_).size() != dim_) throw PreconditionError("matrix is singular");
    SmallMatrix r(dim_);
    for (std::size_t i = 0; i < dim_; ++i)
        for (std::size_t j = 0; j < dim_; ++j) r(i, j) = rows[i][dim_ + j];
    return r;
}

SmallMatrix SmallMatrix::pow(int k) const {
    SmallMatrix r = identity(dim_);
    for (int i = 0; i < k; ++i) r = r * *this;
    return r;
}

std::vector<ExactComplex> SmallMatrix::characteristic_polynomial() const {
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k
    std::size_t n = dim_;
    std::vector<ExactComplex> c(n + 1);
    c[n] = ExactComplex(1);
    SmallMatrix mk(n);
    for (std::size_t k = 1; k <= n; ++k) {
        mk = *this * mk + identity(n) * c[n - k + 1];
        SmallMatrix am = *this * mk;
        ExactComplex tr;
        for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
        c[n - k] = -tr / ExactComplex(static_cast<long>(k));
    }
    return c;
}

std::vector<ExactVector> SmallMatrix::nullspace() const {
    std::vector<ExactVector> rows(dim_);
    for (std::size_t i = 0; i < dim_; ++i) rows[i].assign(data_.begin() + static_cast<long>(i * dim_),
                                                          data_.begin() + static_cast<long>((i + 1) * dim_));
    auto pivots = reduce(rows, dim_);
    std::vector<bool> is_pivot(dim_, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<ExactVector> basis;
    for (std::size_t f = 0; f < dim_; ++f) {
        if (is_pivot[f]) continue;
        ExactVector v(dim_);
        v[f] = ExactComplex(1);
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::string SmallMatrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < dim_; ++i) {
        if (i) os << "; ";
        for (std::size_t j = 0; j < dim_; ++j) os << (j ? ", " : "") << (*this)(i, j).to_string();
    }
    os << ']';
    return os.str();
}

LinearSolution solve_linear(const SmallMatrix& m, std::span<const ExactComplex> rhs,
                            std::span<const ExactComplex> free_values) {
    std::size_t n = m.dim();
    if (rhs.size() != n) throw DimensionError("solve_linear: right-hand side dimension mismatch");
    std::vector<ExactVector> rows(n, ExactVector(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) rows[i][j] = m(i, j);
        rows[i][n] = rhs[i];
    }
    auto pivots = reduce(rows, n);
    LinearSolution out;
    for (std::size_t r = pivots.size(); r < n; ++r) {
        if (!rows[r][n].is_zero()) {
            out.consistent = false;
            out.defect = rows[r][n];
            break;
        }
    }
    std::vector<bool> is_pivot(n, false);
    for (auto p : pivots) is_pivot[p] = true;
    out.solution.assign(n, ExactComplex());
    std::size_t used = 0;
    for (std::size_t c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        out.free_columns.push_back(c);
        if (used < free_values.size()) out.solution[c] = free_values[used];
        ++used;
    }
    if (!out.consistent) return out;
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        ExactComplex v = rows[r][n];
        for (std::size_t c : out.free_columns) v -= rows[r][c] * out.solution[c];
        out.solution[pivots[r]] = v;
    }
    return out;
}

}  // namespace bbcf
