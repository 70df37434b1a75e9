#include "bbcf/multi_series.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace bbcf {

Exponent::Exponent(std::initializer_list<int> powers) {
    if (powers.size() > kMaxVars) throw DimensionError("too many variables in exponent");
    std::size_t k = 0;
    for (int p : powers) set(k++, p);
}

Exponent Exponent::unit(std::size_t var, int power) {
    Exponent e;
    e.set(var, power);
    return e;
}

void Exponent::set(std::size_t var, int power) {
    if (var >= kMaxVars) throw IndexError("exponent variable index out of range");
    if (power < 0 || power > 255) throw DimensionError("exponent out of range");
    int old = (*this)[var];
    packed_ &= ~(0xffu << (8 * var));
    packed_ |= static_cast<std::uint32_t>(power) << (8 * var);
    degree_ += power - old;
}

MultiSeries::MultiSeries(std::size_t nvars, int order) : nvars_(nvars), order_(order) {
    if (nvars > Exponent::kMaxVars) throw DimensionError("at most 4 series variables are supported");
    if (order < 0) throw DimensionError("negative truncation order");
}

MultiSeries MultiSeries::constant(std::size_t nvars, int order, const ExactComplex& c) {
    MultiSeries s(nvars, order);
    s.add_term(Exponent{}, c);
    return s;
}

MultiSeries MultiSeries::variable(std::size_t nvars, int order, std::size_t var) {
    if (var >= nvars) throw IndexError("variable index out of range");
    MultiSeries s(nvars, order);
    s.add_term(Exponent::unit(var), ExactComplex(1));
    return s;
}

MultiSeries MultiSeries::monomial(std::size_t nvars, int order, const Exponent& e, const ExactComplex& c) {
    MultiSeries s(nvars, order);
    s.add_term(e, c);
    return s;
}

ExactComplex MultiSeries::coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ExactComplex() : it->second;
}

void MultiSeries::add_term(const Exponent& e, const ExactComplex& c) {
    if (e.degree() > order_ || c.is_zero()) return;
    for (std::size_t k = nvars_; k < Exponent::kMaxVars; ++k)
        if (e[k] != 0) throw DimensionError("exponent uses a variable beyond nvars");
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (inserted) return;
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

int MultiSeries::min_degree() const { return terms_.empty() ? order_ + 1 : terms_.begin()->first.degree(); }

int MultiSeries::max_degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first.degree(); }

MultiSeries MultiSeries::truncated(int new_order) const {
    MultiSeries r(nvars_, std::min(new_order, order_));
    for (const auto& [e, c] : terms_) {
        if (e.degree() > r.order_) break;
        r.terms_.emplace_hint(r.terms_.end(), e, c);
    }
    return r;
}

MultiSeries MultiSeries::with_order(int new_order) const {
    MultiSeries r(nvars_, new_order);
    for (const auto& [e, c] : terms_) {
        if (e.degree() > new_order) break;
        r.terms_.emplace_hint(r.terms_.end(), e, c);
    }
    return r;
}

MultiSeries MultiSeries::homogeneous_part(int degree) const {
    MultiSeries r(nvars_, order_);
    for (const auto& [e, c] : terms_)
        if (e.degree() == degree) r.terms_.emplace_hint(r.terms_.end(), e, c);
    return r;
}

void MultiSeries::check_compatible(const MultiSeries& o, const char* what) const {
    if (nvars_ != o.nvars_)
        throw DimensionError(std::string(what) + ": variable count mismatch (" + std::to_string(nvars_) + " vs " +
                             std::to_string(o.nvars_) + ")");
}

MultiSeries& MultiSeries::operator+=(const MultiSeries& o) {
    check_compatible(o, "add");
    if (o.order_ < order_) *this = truncated(o.order_);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

MultiSeries& MultiSeries::operator-=(const MultiSeries& o) {
    check_compatible(o, "sub");
    if (o.order_ < order_) *this = truncated(o.order_);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

MultiSeries& MultiSeries::operator*=(const ExactComplex& s) {
    if (s.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

MultiSeries MultiSeries::operator-() const {
    MultiSeries r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b) {
    a.check_compatible(b, "mul");
    MultiSeries r(a.nvars_, std::min(a.order_, b.order_));
    std::unordered_map<std::uint32_t, std::pair<Exponent, ExactComplex>> acc;
    for (const auto& [ea, ca] : a.terms_) {
        int room = r.order_ - ea.degree();
        if (room < 0) break;
        for (const auto& [eb, cb] : b.terms_) {
            if (eb.degree() > room) break;
            Exponent e = ea + eb;
            auto [it, inserted] = acc.try_emplace(e.packed(), e, ca * cb);
            if (!inserted) it->second.second += ca * cb;
        }
    }
    for (auto& [key, entry] : acc)
        if (!entry.second.is_zero()) r.terms_.emplace(entry.first, std::move(entry.second));
    return r;
}

MultiSeries arith(const MultiSeries& a, const MultiSeries& b, ArithOp op, const std::optional<ExactComplex>& scalar) {
    const MultiSeries& rhs = b;
    MultiSeries scaled;
    if (scalar) scaled = b * *scalar;
    const MultiSeries& use = scalar ? scaled : rhs;
    switch (op) {
        case ArithOp::add: return a + use;
        case ArithOp::sub: return a - use;
        case ArithOp::mul: return a * use;
    }
    return {};
}

MultiSeries MultiSeries::reciprocal() const {
    ExactComplex c0 = coefficient(Exponent{});
    if (c0.is_zero()) throw NotDivisibleError("reciprocal of a series without constant term");
    ExactComplex inv0 = c0.inverse();
    std::vector<MultiSeries> parts;
    parts.reserve(static_cast<std::size_t>(order_) + 1);
    for (int d = 0; d <= order_; ++d) parts.push_back(homogeneous_part(d));
    // w_d = -(1/c0) * sum_{k=1..d} s_k w_{d-k}
    std::vector<MultiSeries> w;
    w.push_back(constant(nvars_, order_, inv0));
    for (int d = 1; d <= order_; ++d) {
        MultiSeries wd(nvars_, order_);
        for (int k = 1; k <= d; ++k) {
            if (parts[static_cast<std::size_t>(k)].is_zero() || w[static_cast<std::size_t>(d - k)].is_zero()) continue;
            wd += parts[static_cast<std::size_t>(k)] * w[static_cast<std::size_t>(d - k)];
        }
        wd *= -inv0;
        w.push_back(std::move(wd));
    }
    MultiSeries r(nvars_, order_);
    for (auto& part : w)
        for (auto& [e, c] : part.terms_) r.terms_.emplace(e, std::move(c));
    return r;
}

MultiSeries MultiSeries::pow(int k) const {
    if (k < 0) throw DimensionError("negative power");
    MultiSeries result = constant(nvars_, order_, ExactComplex(1));
    MultiSeries base = *this;
    while (k > 0) {
        if (k & 1) result = result * base;
        k >>= 1;
        if (k > 0) base = base * base;
    }
    return result;
}

MultiSeries MultiSeries::derivative(std::size_t var) const {
    if (var >= nvars_) throw IndexError("derivative variable out of range");
    MultiSeries r(nvars_, std::max(order_ - 1, 0));
    for (const auto& [e, c] : terms_) {
        int p = e[var];
        if (p == 0) continue;
        Exponent d = e;
        d.set(var, p - 1);
        r.add_term(d, c * ExactComplex(p));
    }
    return r;
}

MultiSeries MultiSeries::shear_substitute(std::size_t var, const ExactComplex& shift) const {
    if (var == 0 || var >= nvars_) throw IndexError("shear variable must be a dependent variable index");
    MultiSeries r(nvars_, order_);
    for (const auto& [e, c] : terms_) {
        int b = e[var];
        if (b == 0) {
            r.add_term(e, c);
            continue;
        }
        // x^a y^b -> x^(a+b) * sum_k C(b,k) y^k shift^(b-k)
        Exponent base = e;
        base.set(var, 0);
        base.set(0, e[0] + b);
        if (base.degree() > order_) continue;
        mpz_class binom = 1;
        std::vector<ExactComplex> shift_pow(static_cast<std::size_t>(b) + 1, ExactComplex(1));
        for (int k = 1; k <= b; ++k) shift_pow[static_cast<std::size_t>(k)] = shift_pow[static_cast<std::size_t>(k - 1)] * shift;
        for (int k = 0; k <= b; ++k) {
            if (k > 0) binom = binom * (b - k + 1) / k;
            const ExactComplex& sp = shift_pow[static_cast<std::size_t>(b - k)];
            if (sp.is_zero()) continue;
            Exponent t = base;
            t.set(var, k);
            r.add_term(t, c * sp * ExactComplex(Rational(binom)));
        }
    }
    return r;
}

MultiSeries MultiSeries::divide_by_x() const {
    if (nvars_ == 0) throw DimensionError("divide_by_x on a series without variables");
    MultiSeries r(nvars_, std::max(order_ - 1, 0));
    for (const auto& [e, c] : terms_) {
        if (e[0] == 0) throw NotDivisibleError("term without the independent variable cannot be divided by x");
        Exponent d = e;
        d.set(0, e[0] - 1);
        r.terms_.emplace(d, c);
    }
    return r;
}

MultiSeries MultiSeries::compose(std::span<const MultiSeries> images, int order) const {
    if (images.size() != nvars_) throw DimensionError("compose: need one image per variable");
    std::size_t m = images.empty() ? 0 : images[0].nvars();
    for (const auto& img : images)
        if (img.nvars() != m) throw DimensionError("compose: images disagree on variable count");
    // powers[k][p] = images[k]^p, truncated at order
    std::vector<std::vector<MultiSeries>> powers(nvars_);
    for (std::size_t k = 0; k < nvars_; ++k) powers[k].push_back(constant(m, order, ExactComplex(1)));
    auto power_of = [&](std::size_t k, int p) -> const MultiSeries& {
        auto& cache = powers[k];
        while (static_cast<int>(cache.size()) <= p) cache.push_back(cache.back() * images[k].with_order(order));
        return cache[static_cast<std::size_t>(p)];
    };
    MultiSeries r(m, order);
    for (const auto& [e, c] : terms_) {
        MultiSeries term = constant(m, order, c);
        for (std::size_t k = 0; k < nvars_ && !term.is_zero(); ++k)
            if (e[k] > 0) term = term * power_of(k, e[k]);
        r += term;
    }
    return r;
}

std::complex<double> MultiSeries::eval_numeric(std::span<const std::complex<double>> point) const {
    if (point.size() != nvars_) throw DimensionError("eval_numeric: point dimension mismatch");
    std::vector<std::vector<std::complex<double>>> pw(nvars_, std::vector<std::complex<double>>{1.0});
    std::complex<double> sum = 0.0;
    for (const auto& [e, c] : terms_) {
        std::complex<double> t = c.to_complex();
        for (std::size_t k = 0; k < nvars_; ++k) {
            int p = e[k];
            auto& cache = pw[k];
            while (static_cast<int>(cache.size()) <= p) cache.push_back(cache.back() * point[k]);
            t *= cache[static_cast<std::size_t>(p)];
        }
        sum += t;
    }
    return sum;
}

ExactComplex MultiSeries::eval_exact(std::span<const ExactComplex> point) const {
    if (point.size() != nvars_) throw DimensionError("eval_exact: point dimension mismatch");
    std::vector<std::vector<ExactComplex>> pw(nvars_, std::vector<ExactComplex>{ExactComplex(1)});
    ExactComplex sum;
    for (const auto& [e, c] : terms_) {
        ExactComplex t = c;
        for (std::size_t k = 0; k < nvars_; ++k) {
            int p = e[k];
            auto& cache = pw[k];
            while (static_cast<int>(cache.size()) <= p) cache.push_back(cache.back() * point[k]);
            t *= cache[static_cast<std::size_t>(p)];
        }
        sum += t;
    }
    return sum;
}

std::vector<ExactComplex> MultiSeries::univariate_coefficients() const {
    if (nvars_ != 1) throw DimensionError("univariate_coefficients needs a one-variable series");
    std::vector<ExactComplex> out(static_cast<std::size_t>(order_) + 1);
    for (const auto& [e, c] : terms_) out[static_cast<std::size_t>(e[0])] = c;
    return out;
}

std::string MultiSeries::to_string(std::span<const std::string> names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << '(' << c.to_string() << ')';
        for (std::size_t k = 0; k < nvars_; ++k) {
            if (e[k] == 0) continue;
            std::string name = k < names.size() ? names[k] : "x" + std::to_string(k);
            os << '*' << name;
            if (e[k] > 1) os << '^' << e[k];
        }
    }
    return os.str();
}

}  // namespace bbcf
