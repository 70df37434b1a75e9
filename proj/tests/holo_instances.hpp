#pragma once

// Random holomorphic systems in the supported normal forms.

#include <random>
#include <string>
#include <vector>

#include "bbcf/holo_system.hpp"
#include "generators.hpp"

namespace bbcf::testing {

enum class HoloPattern {
    single_imaginary,
    distinct_pair,
    equal_pair,
    jordan_pair_hyperbolic,
    jordan_pair_imaginary,
    three_distinct,
    equal_smaller,
    equal_larger,
    all_equal,
    jordan_triple,
    planar_single,
    planar_distinct,
    planar_equal,
    planar_jordan,
};

inline constexpr HoloPattern kAllHoloPatterns[] = {
    HoloPattern::single_imaginary, HoloPattern::distinct_pair,  HoloPattern::equal_pair,
    HoloPattern::jordan_pair_hyperbolic, HoloPattern::jordan_pair_imaginary, HoloPattern::three_distinct,
    HoloPattern::equal_smaller,    HoloPattern::equal_larger,   HoloPattern::all_equal,
    HoloPattern::jordan_triple,    HoloPattern::planar_single,  HoloPattern::planar_distinct,
    HoloPattern::planar_equal,     HoloPattern::planar_jordan,
};

inline ExactComplex hyperbolic_eigenvalue(std::mt19937& rng) {
    static const std::vector<ExactComplex> pool = {ExactComplex(1), ExactComplex(-1), ExactComplex(-2, 1),
                                                   ExactComplex::fraction(1, 2, -1, 1), ExactComplex(3, 2)};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return pool[pick(rng)];
}

// Ratios of imaginary parts to the base frequency, 1 < |ratio| <= 5.
inline Rational random_ratio(std::mt19937& rng) {
    static const std::vector<Rational> pool = {Rational(2), Rational(3), Rational(-2), Rational(3, 2),
                                               Rational(5, 2), Rational(4), Rational(-3), Rational(5)};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return pool[pick(rng)];
}

inline SmallMatrix linear_for(std::mt19937& rng, HoloPattern pat, Rational base = 1) {
    const ExactComplex I = ExactComplex::i();
    auto im = [&](const Rational& w) { return I * ExactComplex(w * base); };
    Rational mu = random_ratio(rng), nu = random_ratio(rng);
    while (abs(mu) >= 5) mu = random_ratio(rng);
    while (abs(nu) <= abs(mu)) nu = random_ratio(rng);
    switch (pat) {
        case HoloPattern::single_imaginary:
            return SmallMatrix(3, {hyperbolic_eigenvalue(rng), 0, 0, 0, im(1), 0, 0, 0, hyperbolic_eigenvalue(rng)});
        case HoloPattern::distinct_pair: return SmallMatrix(3, {im(1), 0, 0, 0, im(mu), 0, 0, 0, hyperbolic_eigenvalue(rng)});
        case HoloPattern::equal_pair: return SmallMatrix(3, {im(1), 0, 0, 0, im(1), 0, 0, 0, hyperbolic_eigenvalue(rng)});
        case HoloPattern::jordan_pair_hyperbolic:
            return SmallMatrix(3, {im(1), 1, 0, 0, im(1), 0, 0, 0, hyperbolic_eigenvalue(rng)});
        case HoloPattern::jordan_pair_imaginary: {
            static const std::vector<Rational> ratios = {Rational(2), Rational(1, 2), Rational(3), Rational(1),
                                                         Rational(-1), Rational(5, 3)};
            std::uniform_int_distribution<std::size_t> pick(0, ratios.size() - 1);
            return SmallMatrix(3, {im(1), 1, 0, 0, im(1), 0, 0, 0, im(ratios[pick(rng)])});
        }
        case HoloPattern::three_distinct: return SmallMatrix(3, {im(1), 0, 0, 0, im(mu), 0, 0, 0, im(nu)});
        case HoloPattern::equal_smaller: return SmallMatrix(3, {im(1), 0, 0, 0, im(1), 0, 0, 0, im(mu)});
        case HoloPattern::equal_larger: return SmallMatrix(3, {im(1), 0, 0, 0, im(mu), 0, 0, 0, im(mu)});
        case HoloPattern::all_equal: return SmallMatrix(3, {im(1), 0, 0, 0, im(1), 0, 0, 0, im(1)});
        case HoloPattern::jordan_triple: return SmallMatrix(3, {im(1), 1, 0, 0, im(1), 1, 0, 0, im(1)});
        case HoloPattern::planar_single: return SmallMatrix(2, {im(1), 0, 0, hyperbolic_eigenvalue(rng)});
        case HoloPattern::planar_distinct: return SmallMatrix(2, {im(1), 0, 0, im(mu)});
        case HoloPattern::planar_equal: return SmallMatrix(2, {im(1), 0, 0, im(1)});
        case HoloPattern::planar_jordan: return SmallMatrix(2, {im(1), 1, 0, im(1)});
    }
    return SmallMatrix();
}

// Sparse random terms of degree 2..max_deg with coefficients of modulus <= bound.
inline std::vector<MultiSeries> random_nonlinear(std::mt19937& rng, std::size_t dim, int order, int max_deg,
                                                 int terms_per_component, Rational bound = Rational(1)) {
    std::vector<MultiSeries> out;
    std::uniform_int_distribution<int> deg(2, max_deg);
    std::uniform_int_distribution<std::size_t> var(0, dim - 1);
    std::uniform_int_distribution<int> num(-4, 4);
    for (std::size_t i = 0; i < dim; ++i) {
        MultiSeries s(dim, order);
        for (int t = 0; t < terms_per_component; ++t) {
            Exponent e;
            int d = deg(rng);
            for (int k = 0; k < d; ++k) {
                std::size_t v = var(rng);
                e.set(v, e[v] + 1);
            }
            // parts within 2/3 of the bound keep the modulus below it
            ExactComplex c(Rational(num(rng), 6) * bound, Rational(num(rng), 6) * bound);
            // a repeated exponent would add up past the bound
            if (s.coefficient(e).is_zero()) s.add_term(e, c);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline HoloSystem random_holo(std::mt19937& rng, HoloPattern pat, int order, Rational base = 1) {
    SmallMatrix l = linear_for(rng, pat, base);
    return make_holo_system(l, random_nonlinear(rng, l.dim(), order, 3, 3));
}

}  // namespace bbcf::testing
