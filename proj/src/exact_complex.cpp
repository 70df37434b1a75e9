#include "bbcf/exact_complex.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

namespace bbcf {

ExactComplex ExactComplex::fraction(long num, long den, long im_num, long im_den) {
    if (den == 0 || im_den == 0) throw std::invalid_argument("zero denominator");
    Rational re(num, den);
    Rational im(im_num, im_den);
    re.canonicalize();
    im.canonicalize();
    return {re, im};
}

bool ExactComplex::is_positive_integer(long* value) const {
    if (sgn(im_) != 0 || sgn(re_) <= 0 || re_.get_den() != 1) return false;
    if (!re_.get_num().fits_slong_p()) return false;
    if (value) *value = re_.get_num().get_si();
    return true;
}

ExactComplex ExactComplex::inverse() const {
    Rational n = norm();
    if (sgn(n) == 0) throw std::domain_error("division by zero (exact complex)");
    return {re_ / n, -im_ / n};
}

ExactComplex& ExactComplex::operator+=(const ExactComplex& o) {
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

ExactComplex& ExactComplex::operator-=(const ExactComplex& o) {
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

ExactComplex& ExactComplex::operator*=(const ExactComplex& o) {
    if (sgn(im_) == 0 && sgn(o.im_) == 0) {
        re_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational i = re_ * o.im_ + im_ * o.re_;
    re_ = std::move(r);
    im_ = std::move(i);
    return *this;
}

ExactComplex& ExactComplex::operator/=(const ExactComplex& o) {
    if (sgn(o.im_) == 0) {
        if (sgn(o.re_) == 0) throw std::domain_error("division by zero (exact complex)");
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw ParseError("empty rational");
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    auto ok = [](const std::string& part) {
        std::size_t start = (!part.empty() && part[0] == '-') ? 1 : 0;
        if (part.size() == start) return false;
        return std::all_of(part.begin() + static_cast<long>(start), part.end(),
                           [](unsigned char c) { return std::isdigit(c) != 0; });
    };
    auto slash = s.find('/');
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!ok(num) || !ok(den) || den[0] == '-') throw ParseError("malformed rational '" + std::string(text) + "'");
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
}

std::string ExactComplex::to_string() const {
    if (sgn(im_) == 0) return rational_to_string(re_);
    std::string imag;
    if (im_ == 1)
        imag = "i";
    else if (im_ == -1)
        imag = "-i";
    else
        imag = rational_to_string(im_) + "i";
    if (sgn(re_) == 0) return imag;
    std::string out = rational_to_string(re_);
    if (imag[0] != '-') out += '+';
    return out + imag;
}

ExactComplex ExactComplex::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty complex literal");
    if (s.back() != 'i') return ExactComplex(parse_rational(s));
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if (body[k] == '+' || body[k] == '-') {
            split = k;
            break;
        }
    }
    std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
    std::string im_part = split == std::string::npos ? body : body.substr(split);
    Rational im;
    if (im_part.empty() || im_part == "+")
        im = 1;
    else if (im_part == "-")
        im = -1;
    else
        im = parse_rational(im_part);
    Rational re = re_part.empty() ? Rational(0) : parse_rational(re_part);
    return {re, im};
}

std::ostream& operator<<(std::ostream& os, const ExactComplex& z) { return os << z.to_string(); }

}  // namespace bbcf
