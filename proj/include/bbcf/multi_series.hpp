#pragma once

#include <array>
#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbcf/errors.hpp"
#include "bbcf/exact_complex.hpp"

namespace bbcf {

// Exponent multi-index for up to kMaxVars variables, packed one byte per
// variable. Ordered by total degree first, so maps iterate degree by degree.
class Exponent {
public:
    static constexpr std::size_t kMaxVars = 4;

    Exponent() = default;
    Exponent(std::initializer_list<int> powers);
    static Exponent unit(std::size_t var, int power = 1);

    int operator[](std::size_t var) const { return static_cast<int>((packed_ >> (8 * var)) & 0xffu); }
    void set(std::size_t var, int power);
    int degree() const { return degree_; }
    std::uint32_t packed() const { return packed_; }

    // Component-wise sum; components must stay below 256.
    friend Exponent operator+(const Exponent& a, const Exponent& b) {
        Exponent r;
        r.packed_ = a.packed_ + b.packed_;
        r.degree_ = a.degree_ + b.degree_;
        return r;
    }

    friend bool operator==(const Exponent&, const Exponent&) = default;
    friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
        if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
        return a.packed_ <=> b.packed_;
    }

private:
    std::uint32_t packed_ = 0;
    int degree_ = 0;
};

enum class ArithOp { add, sub, mul };

// Sparse multivariate power series truncated in total degree. Zero
// coefficients are never stored and no stored exponent exceeds order().
// Variable 0 plays the role of the independent variable in the shear and
// divide_by_x primitives.
class MultiSeries {
public:
    using TermMap = std::map<Exponent, ExactComplex>;

    MultiSeries() = default;
    MultiSeries(std::size_t nvars, int order);

    static MultiSeries constant(std::size_t nvars, int order, const ExactComplex& c);
    static MultiSeries variable(std::size_t nvars, int order, std::size_t var);
    static MultiSeries monomial(std::size_t nvars, int order, const Exponent& e, const ExactComplex& c);

    std::size_t nvars() const { return nvars_; }
    int order() const { return order_; }
    const TermMap& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    ExactComplex coefficient(const Exponent& e) const;
    // Accumulates c into the coefficient of e; silently drops terms above order.
    void add_term(const Exponent& e, const ExactComplex& c);

    // Smallest total degree present (order()+1 when zero).
    int min_degree() const;
    int max_degree() const;
    MultiSeries truncated(int new_order) const;
    MultiSeries homogeneous_part(int degree) const;
    // Same terms viewed at a different truncation (order may grow).
    MultiSeries with_order(int new_order) const;

    MultiSeries& operator+=(const MultiSeries& o);
    MultiSeries& operator-=(const MultiSeries& o);
    MultiSeries& operator*=(const ExactComplex& s);

    friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
    friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }
    friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
    friend MultiSeries operator*(MultiSeries a, const ExactComplex& s) { return a *= s; }
    friend MultiSeries operator*(const ExactComplex& s, MultiSeries a) { return a *= s; }
    MultiSeries operator-() const;

    friend bool operator==(const MultiSeries&, const MultiSeries&) = default;

    // Multiplicative inverse; requires a nonzero constant term.
    MultiSeries reciprocal() const;
    MultiSeries pow(int k) const;
    // Partial derivative; the result is known one degree less far.
    MultiSeries derivative(std::size_t var) const;

    // Replace variable `var` (>= 1) by x*(y_var + shift).
    MultiSeries shear_substitute(std::size_t var, const ExactComplex& shift) const;
    // Exact division by variable 0; every term must contain it.
    MultiSeries divide_by_x() const;

    // Substitute variable k by images[k]; all images share one variable count.
    MultiSeries compose(std::span<const MultiSeries> images, int order) const;

    std::complex<double> eval_numeric(std::span<const std::complex<double>> point) const;
    ExactComplex eval_exact(std::span<const ExactComplex> point) const;

    // Dense coefficient list of a one-variable series, index = power.
    std::vector<ExactComplex> univariate_coefficients() const;

    std::string to_string(std::span<const std::string> names = {}) const;

private:
    void check_compatible(const MultiSeries& o, const char* what) const;

    std::size_t nvars_ = 0;
    int order_ = 0;
    TermMap terms_;
};

MultiSeries arith(const MultiSeries& a, const MultiSeries& b, ArithOp op,
                  const std::optional<ExactComplex>& scalar = std::nullopt);

}  // namespace bbcf
