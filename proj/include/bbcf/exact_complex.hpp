#pragma once

#include <complex>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "bbcf/errors.hpp"

namespace bbcf {

using Rational = mpq_class;

// Gaussian rational re + im*i with arbitrary precision parts.
// Parts are kept canonical, so equality is structural.
class ExactComplex {
public:
    ExactComplex() = default;
    ExactComplex(long v) : re_(v) {}
    // mpq_class(num, den) does not reduce, so constructors canonicalize.
    ExactComplex(Rational re) : re_(std::move(re)) { re_.canonicalize(); }
    ExactComplex(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {
        re_.canonicalize();
        im_.canonicalize();
    }

    static ExactComplex i() { return {Rational(0), Rational(1)}; }
    static ExactComplex fraction(long num, long den, long im_num = 0, long im_den = 1);

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return sgn(re_) == 0 && sgn(im_) == 0; }
    bool is_real() const { return sgn(im_) == 0; }
    bool is_purely_imaginary() const { return sgn(re_) == 0 && sgn(im_) != 0; }
    // True when the value is exactly a positive integer; sets *value.
    bool is_positive_integer(long* value = nullptr) const;

    ExactComplex conj() const { return {re_, -im_}; }
    Rational norm() const { return re_ * re_ + im_ * im_; }
    ExactComplex inverse() const;

    ExactComplex& operator+=(const ExactComplex& o);
    ExactComplex& operator-=(const ExactComplex& o);
    ExactComplex& operator*=(const ExactComplex& o);
    ExactComplex& operator/=(const ExactComplex& o);

    friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
    friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
    friend ExactComplex operator/(ExactComplex a, const ExactComplex& b) { return a /= b; }
    ExactComplex operator-() const { return {-re_, -im_}; }

    friend bool operator==(const ExactComplex& a, const ExactComplex& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }

    std::complex<double> to_complex() const { return {re_.get_d(), im_.get_d()}; }

    // "3/2", "-i", "1/2-3/4i". Inverse of parse().
    std::string to_string() const;
    static ExactComplex parse(std::string_view text);

private:
    Rational re_{0};
    Rational im_{0};
};

std::ostream& operator<<(std::ostream& os, const ExactComplex& z);

Rational parse_rational(std::string_view text);
std::string rational_to_string(const Rational& q);

}  // namespace bbcf
