#pragma once

// Random Briot-Bouquet instances in both the library's and the oracle's
// representation.

#include <random>
#include <vector>

#include "bbcf/bb_engine.hpp"
#include "generators.hpp"
#include "oracle/bb_oracle.hpp"

namespace bbcf::testing {

enum class ResonancePattern { none, single, distinct_pair, equal_diagonal, equal_jordan };

struct BBInstance {
    oracle::Problem problem;
    SmallMatrix a;
};

inline BBSystem to_bb_system(const oracle::Problem& p, int order) {
    std::vector<MultiSeries> rhs;
    for (const auto& eq : p.equations) {
        MultiSeries f(p.n + 1, order);
        for (const auto& m : eq) {
            Exponent e;
            for (std::size_t v = 0; v < m.exps.size(); ++v) e.set(v, m.exps[v]);
            f.add_term(e, m.coeff);
        }
        rhs.push_back(std::move(f));
    }
    return bb_from_rhs(rhs);
}

inline oracle::Monomial linear_monomial(std::size_t n, std::size_t var, const ExactComplex& c) {
    oracle::Monomial m{c, std::vector<int>(n + 1, 0)};
    m.exps[var] = 1;
    return m;
}

// Eigenvalues that are never positive integers.
inline ExactComplex nonresonant_eigenvalue(std::mt19937& rng) {
    static const std::vector<ExactComplex> pool = {
        ExactComplex(-1), ExactComplex(-2), ExactComplex(0), ExactComplex::fraction(1, 2), ExactComplex::fraction(-3, 2),
        ExactComplex::fraction(5, 2), ExactComplex::i(), ExactComplex(1, 1), ExactComplex(-1, -2), ExactComplex::fraction(7, 3),
        ExactComplex(3, 1)};
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    return pool[pick(rng)];
}

inline SmallMatrix random_unimodular(std::mt19937& rng, std::size_t n) {
    // Products of elementary shears keep entries small and the inverse exact.
    SmallMatrix p = SmallMatrix::identity(n);
    if (n < 2) return p;
    std::uniform_int_distribution<int> k(-2, 2);
    SmallMatrix lower = SmallMatrix::identity(n), upper = SmallMatrix::identity(n);
    lower(1, 0) = ExactComplex(k(rng));
    upper(0, 1) = ExactComplex::fraction(k(rng), 2);
    return lower * upper;
}

inline SmallMatrix matrix_for(std::mt19937& rng, std::size_t n, ResonancePattern pat, int max_int) {
    std::uniform_int_distribution<int> qd(1, max_int);
    std::uniform_int_distribution<int> coin(0, 2);
    SmallMatrix a(n);
    int q = qd(rng);
    switch (pat) {
        case ResonancePattern::none:
            for (std::size_t i = 0; i < n; ++i) a(i, i) = nonresonant_eigenvalue(rng);
            if (n == 2 && coin(rng) == 0) a(0, 1) = random_small_complex(rng, 2, 2);
            break;
        case ResonancePattern::single:
            a(0, 0) = ExactComplex(q);
            if (n == 2) {
                a(1, 1) = nonresonant_eigenvalue(rng);
                if (coin(rng) == 0) a(0, 1) = random_small_complex(rng, 2, 2);
                if (coin(rng) == 0) std::swap(a(0, 0), a(1, 1));
            }
            break;
        case ResonancePattern::distinct_pair: {
            int s = qd(rng);
            while (s == q) s = qd(rng);
            a(0, 0) = ExactComplex(std::min(q, s));
            a(1, 1) = ExactComplex(std::max(q, s));
            if (coin(rng) == 0) a(0, 1) = ExactComplex(qd(rng));
            break;
        }
        case ResonancePattern::equal_diagonal:
            for (std::size_t i = 0; i < n; ++i) a(i, i) = ExactComplex(q);
            break;
        case ResonancePattern::equal_jordan:
            a(0, 0) = a(1, 1) = ExactComplex(q);
            a(0, 1) = coin(rng) == 0 ? ExactComplex(1) : random_small_complex(rng, 2, 2, false);
            if (a(0, 1).is_zero()) a(0, 1) = ExactComplex(1);
            break;
    }
    if (n == 2 && pat != ResonancePattern::equal_diagonal && coin(rng) == 0) {
        SmallMatrix p = random_unimodular(rng, n);
        a = p.inverse() * a * p;
    }
    return a;
}

// Builds the oracle problem x y' = px*x + A y + (random terms of degree 2..max_deg).
inline oracle::Problem make_problem(std::mt19937& rng, const SmallMatrix& a, int max_deg, bool zero_px = false) {
    std::size_t n = a.dim();
    oracle::Problem p;
    p.n = n;
    p.equations.resize(n);
    std::uniform_int_distribution<int> nterms(0, 3);
    std::uniform_int_distribution<int> deg(2, max_deg);
    std::uniform_int_distribution<std::size_t> var(0, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!zero_px) p.equations[i].push_back(linear_monomial(n, 0, random_small_complex(rng, 2, 2)));
        for (std::size_t j = 0; j < n; ++j)
            if (!a(i, j).is_zero()) p.equations[i].push_back(linear_monomial(n, j + 1, a(i, j)));
        int t = nterms(rng);
        for (int k = 0; k < t; ++k) {
            oracle::Monomial m{random_small_complex(rng, 2, 3), std::vector<int>(n + 1, 0)};
            int d = deg(rng);
            for (int e = 0; e < d; ++e) ++m.exps[var(rng)];
            p.equations[i].push_back(m);
        }
    }
    return p;
}

// Adds pure x^k corrections until the oracle finds no blocking order, so the
// instance lands in the family branch.
inline void repair_obstructions(oracle::Problem& p, int order) {
    for (int guard = 0; guard < 8; ++guard) {
        oracle::Result r = oracle::solve(p, order);
        if (r.kind != oracle::Kind::no_solution) return;
        const auto& m = r.blocking_matrix;
        const auto& b = r.blocking_rhs;
        int k = r.blocking_order;
        auto add = [&](std::size_t row, const ExactComplex& delta) {
            oracle::Monomial mono{delta, std::vector<int>(p.n + 1, 0)};
            mono.exps[0] = k;
            p.equations[row].push_back(mono);
        };
        bool all_zero = true;
        for (const auto& row : m)
            for (const auto& v : row) all_zero = all_zero && v.is_zero();
        if (all_zero) {
            for (std::size_t i = 0; i < p.n; ++i)
                if (!b[i].is_zero()) add(i, -b[i]);
            continue;
        }
        // rank one 2x2: left null vector from a nonzero column
        std::size_t c = m[0][0].is_zero() && m[1][0].is_zero() ? 1 : 0;
        ExactComplex l0 = m[1][c], l1 = -m[0][c];
        ExactComplex dot = l0 * b[0] + l1 * b[1];
        if (!l0.is_zero())
            add(0, -dot / l0);
        else
            add(1, -dot / l1);
    }
}

}  // namespace bbcf::testing
