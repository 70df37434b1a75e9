#include "bbcf/spectra.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "bbcf/errors.hpp"

namespace bbcf {

std::size_t SpectrumInfo::imaginary_count() const {
    std::size_t n = 0;
    for (const auto& e : eigenvalues)
        if (e.value.is_purely_imaginary()) n += e.multiplicity;
    return n;
}

namespace {

using CMatrix = Eigen::MatrixXcd;

std::vector<std::complex<double>> numeric_roots(const std::vector<ExactComplex>& coeffs) {
    std::size_t n = coeffs.size() - 1;
    std::vector<std::complex<double>> c(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) c[k] = coeffs[k].to_complex() / coeffs[n].to_complex();
    if (n == 1) return {-c[0]};
    CMatrix comp = CMatrix::Zero(static_cast<long>(n), static_cast<long>(n));
    for (std::size_t k = 1; k < n; ++k) comp(static_cast<long>(k), static_cast<long>(k - 1)) = 1.0;
    for (std::size_t k = 0; k < n; ++k) comp(static_cast<long>(k), static_cast<long>(n - 1)) = -c[k];
    Eigen::ComplexEigenSolver<CMatrix> solver(comp, false);
    std::vector<std::complex<double>> out;
    for (long k = 0; k < solver.eigenvalues().size(); ++k) out.push_back(solver.eigenvalues()(k));
    return out;
}

ExactComplex eval_poly(const std::vector<ExactComplex>& coeffs, const ExactComplex& t) {
    ExactComplex acc;
    for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
    return acc;
}

// Divide by (t - root); exact when root is a root.
std::vector<ExactComplex> deflate(const std::vector<ExactComplex>& coeffs, const ExactComplex& root) {
    std::size_t n = coeffs.size() - 1;
    std::vector<ExactComplex> q(n);
    ExactComplex carry;
    for (std::size_t k = n; k-- > 0;) {
        carry = coeffs[k + 1] + carry * root;
        q[k] = carry;
    }
    return q;
}

mpz_class denominator_lcm(const std::vector<ExactComplex>& monic) {
    mpz_class d = 1;
    for (const auto& c : monic) {
        mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.re().get_den_mpz_t());
        mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.im().get_den_mpz_t());
    }
    return d;
}

Rational nearest_integer(double v) { return Rational(mpz_class(static_cast<long>(std::lround(v)))); }

bool sort_key_less(const ExactComplex& a, const ExactComplex& b) {
    bool ia = a.is_purely_imaginary(), ib = b.is_purely_imaginary();
    if (ia != ib) return ia;
    if (ia) {
        Rational aa = abs(a.im()), ab = abs(b.im());
        if (aa != ab) return aa < ab;
        return a.im() > b.im();
    }
    if (a.re() != b.re()) return a.re() < b.re();
    return a.im() < b.im();
}

void fill_derived(SpectrumInfo& info) {
    info.positive_integer_eigenvalues.clear();
    info.imaginary_part_ratios.clear();
    for (std::size_t a = 0; a < info.eigenvalues.size(); ++a) {
        long v = 0;
        if (info.eigenvalues[a].value.is_positive_integer(&v)) info.positive_integer_eigenvalues.push_back(v);
        if (!info.eigenvalues[a].value.is_purely_imaginary()) continue;
        for (std::size_t b = a + 1; b < info.eigenvalues.size(); ++b) {
            if (!info.eigenvalues[b].value.is_purely_imaginary()) continue;
            ImaginaryRatio r{a, b, std::nullopt};
            if (info.certified) r.ratio = info.eigenvalues[b].value.im() / info.eigenvalues[a].value.im();
            info.imaginary_part_ratios.push_back(r);
        }
    }
}

}  // namespace

Rational rational_approximation(double v) {
    // continued fraction with tolerance 1e-12, denominators capped at 1e9
    double x = v;
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 40; ++it) {
        double a = std::floor(x);
        mpz_class ai(static_cast<long>(a));
        mpz_class h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > 1000000000) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        Rational approx(h1, k1);
        if (std::abs(approx.get_d() - v) < 1e-12 * std::max(1.0, std::abs(v))) break;
        double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    Rational q(h1, k1);
    q.canonicalize();
    return q;
}

std::optional<std::vector<ExactComplex>> gaussian_rational_roots(std::vector<ExactComplex> coeffs) {
    while (!coeffs.empty() && coeffs.back().is_zero()) coeffs.pop_back();
    if (coeffs.empty()) throw PreconditionError("zero polynomial has no finite root set");
    std::vector<ExactComplex> roots;
    while (coeffs.size() > 1) {
        ExactComplex lead = coeffs.back();
        for (auto& c : coeffs) c /= lead;
        if (coeffs[0].is_zero()) {
            roots.emplace_back();
            coeffs = deflate(coeffs, ExactComplex());
            continue;
        }
        if (coeffs.size() == 2) {
            roots.push_back(-coeffs[0]);
            break;
        }
        mpz_class d = denominator_lcm(coeffs);
        double scale = mpz_class(d).get_d();
        bool found = false;
        for (const auto& approx : numeric_roots(coeffs)) {
            Rational yr = nearest_integer(approx.real() * scale);
            Rational yi = nearest_integer(approx.imag() * scale);
            for (int dr = 0; dr < 3 && !found; ++dr)
                for (int di = 0; di < 3 && !found; ++di) {
                    static constexpr int kOffsets[3] = {0, 1, -1};
                    ExactComplex t(Rational(yr + kOffsets[dr]) / Rational(d), Rational(yi + kOffsets[di]) / Rational(d));
                    if (eval_poly(coeffs, t).is_zero()) {
                        roots.push_back(t);
                        coeffs = deflate(coeffs, t);
                        found = true;
                    }
                }
            if (found) break;
        }
        if (!found) return std::nullopt;
    }
    return roots;
}

SpectrumInfo classify_spectrum(const SmallMatrix& m) {
    if (m.dim() == 0 || m.dim() > 3) throw DimensionError("classify_spectrum supports dimensions 1 to 3");
    auto roots = gaussian_rational_roots(m.characteristic_polynomial());
    if (!roots) throw UncertifiableSpectrumError("eigenvalues are not Gaussian rationals: " + m.to_string());

    SpectrumInfo info;
    info.dim = m.dim();
    for (const auto& r : *roots) {
        auto it = std::find_if(info.eigenvalues.begin(), info.eigenvalues.end(),
                               [&](const Eigenvalue& e) { return e.value == r; });
        if (it != info.eigenvalues.end())
            ++it->multiplicity;
        else
            info.eigenvalues.push_back({r, 1, r.to_complex()});
    }
    std::sort(info.eigenvalues.begin(), info.eigenvalues.end(),
              [](const Eigenvalue& a, const Eigenvalue& b) { return sort_key_less(a.value, b.value); });

    SmallMatrix id = SmallMatrix::identity(m.dim());
    for (const auto& ev : info.eigenvalues) {
        // ranks[k] = rank((m - a)^k); blocks of size >= k number ranks[k-1] - ranks[k]
        SmallMatrix shifted = m - id * ev.value;
        std::vector<long> ranks{static_cast<long>(m.dim())};
        SmallMatrix p = id;
        for (std::size_t k = 1; k <= ev.multiplicity + 1; ++k) {
            p = p * shifted;
            ranks.push_back(static_cast<long>(p.rank()));
        }
        for (std::size_t k = 1; k <= ev.multiplicity; ++k) {
            long at_least_k = ranks[k - 1] - ranks[k];
            long at_least_next = ranks[k] - ranks[k + 1];
            for (long b = 0; b < at_least_k - at_least_next; ++b) info.jordan_blocks.push_back({ev.value, k});
        }
    }
    info.diagonalizable = std::all_of(info.jordan_blocks.begin(), info.jordan_blocks.end(),
                                      [](const JordanBlock& b) { return b.size == 1; });
    fill_derived(info);
    return info;
}

SpectrumInfo classify_spectrum_numeric(const SmallMatrix& m) {
    constexpr double kTol = 1e-9;
    std::size_t n = m.dim();
    CMatrix a(static_cast<long>(n), static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(static_cast<long>(i), static_cast<long>(j)) = m(i, j).to_complex();
    Eigen::ComplexEigenSolver<CMatrix> solver(a, false);

    SpectrumInfo info;
    info.dim = n;
    info.certified = false;
    double scale = std::max(1.0, a.norm());
    for (long k = 0; k < solver.eigenvalues().size(); ++k) {
        std::complex<double> z = solver.eigenvalues()(k);
        auto it = std::find_if(info.eigenvalues.begin(), info.eigenvalues.end(),
                               [&](const Eigenvalue& e) { return std::abs(e.approx - z) < 1e-6 * scale; });
        if (it != info.eigenvalues.end()) {
            ++it->multiplicity;
            continue;
        }
        double re = std::abs(z.real()) < kTol * scale ? 0.0 : z.real();
        double im = std::abs(z.imag()) < kTol * scale ? 0.0 : z.imag();
        info.eigenvalues.push_back({ExactComplex(rational_approximation(re), rational_approximation(im)), 1, {re, im}});
    }
    std::sort(info.eigenvalues.begin(), info.eigenvalues.end(),
              [](const Eigenvalue& x, const Eigenvalue& y) { return sort_key_less(x.value, y.value); });
    for (const auto& ev : info.eigenvalues) {
        CMatrix shifted = a - ev.approx * CMatrix::Identity(static_cast<long>(n), static_cast<long>(n));
        Eigen::JacobiSVD<CMatrix> svd(shifted);
        svd.setThreshold(kTol * scale);
        auto geometric = n - static_cast<std::size_t>(svd.rank());
        geometric = std::clamp<std::size_t>(geometric, 1, ev.multiplicity);
        // dim <= 3 leaves at most one non-trivial block per eigenvalue
        std::size_t big = ev.multiplicity - geometric + 1;
        info.jordan_blocks.push_back({ev.value, big});
        for (std::size_t b = 1; b < geometric; ++b) info.jordan_blocks.push_back({ev.value, 1});
    }
    info.diagonalizable = std::all_of(info.jordan_blocks.begin(), info.jordan_blocks.end(),
                                      [](const JordanBlock& b) { return b.size == 1; });
    fill_derived(info);
    return info;
}

std::vector<ApproxEigenpair> approximate_eigenpairs(const SmallMatrix& m) {
    std::size_t n = m.dim();
    CMatrix a(static_cast<long>(n), static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(static_cast<long>(i), static_cast<long>(j)) = m(i, j).to_complex();
    Eigen::ComplexEigenSolver<CMatrix> solver(a, true);
    double scale = std::max(1.0, a.norm());
    auto round = [&](std::complex<double> z) {
        double re = std::abs(z.real()) < 1e-9 * scale ? 0.0 : z.real();
        double im = std::abs(z.imag()) < 1e-9 * scale ? 0.0 : z.imag();
        return ExactComplex(rational_approximation(re), rational_approximation(im));
    };
    std::vector<ApproxEigenpair> out;
    for (long k = 0; k < solver.eigenvalues().size(); ++k) {
        auto v = solver.eigenvectors().col(k);
        // scale so the largest entry is 1 before rounding
        long big = 0;
        for (long r = 1; r < v.size(); ++r)
            if (std::abs(v(r)) > std::abs(v(big))) big = r;
        ApproxEigenpair p{round(solver.eigenvalues()(k)), {}};
        for (long r = 0; r < v.size(); ++r) p.vector.push_back(round(v(r) / v(big)));
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::pair<std::size_t, Rational>> sorted_imaginary_axes(const SmallMatrix& m) {
    std::vector<std::pair<std::size_t, Rational>> axes;
    for (std::size_t k = 0; k < m.dim(); ++k)
        if (m(k, k).is_purely_imaginary()) axes.emplace_back(k, m(k, k).im());
    std::stable_sort(axes.begin(), axes.end(), [](const auto& a, const auto& b) {
        Rational aa = abs(a.second), ab = abs(b.second);
        if (aa != ab) return aa < ab;
        return a.second > b.second;
    });
    return axes;
}

NormalForm normal_form_check(const SmallMatrix& l) {
    NormalForm nf;
    std::size_t n = l.dim();
    if (n < 2 || n > 3 || !l.is_upper_triangular()) return nf;
    auto axes = sorted_imaginary_axes(l);
    if (axes.empty()) return nf;
    for (std::size_t k = 0; k < n; ++k)
        if (l(k, k).is_zero()) return nf;

    auto off = [&](std::size_t i, std::size_t j) { return !l(i, j).is_zero(); };
    NormalFormTag tag = NormalFormTag::not_normalized;
    if (l.is_diagonal()) {
        tag = axes.size() == n ? NormalFormTag::diagonal : NormalFormTag::diagonal_with_hyperbolic;
    } else if (n == 2) {
        if (off(0, 1) && l(0, 0) == l(1, 1) && l(0, 0).is_purely_imaginary()) tag = NormalFormTag::jordan_2x2;
    } else if (off(0, 1) && !off(0, 2) && !off(1, 2) && l(0, 0) == l(1, 1) && l(0, 0).is_purely_imaginary()) {
        tag = NormalFormTag::jordan_2x2;
    } else if (off(0, 1) && off(1, 2) && !off(0, 2) && l(0, 0) == l(1, 1) && l(1, 1) == l(2, 2) &&
               l(0, 0).is_purely_imaginary()) {
        tag = NormalFormTag::jordan_3x3;
    }
    if (tag == NormalFormTag::not_normalized) return nf;
    nf.tag = tag;

    Rational w1 = axes[0].second;
    if (tag == NormalFormTag::jordan_2x2 || tag == NormalFormTag::jordan_3x3) w1 = l(0, 0).im();
    std::vector<Rational> others;
    for (const auto& [idx, w] : axes) {
        if (tag == NormalFormTag::jordan_2x2 && idx <= 1) continue;
        if (tag == NormalFormTag::jordan_3x3) continue;
        if (tag != NormalFormTag::jordan_2x2 && idx == axes[0].first) continue;
        others.push_back(w / w1);
    }
    if (!others.empty()) nf.mu = others[0];
    if (others.size() > 1) nf.nu = others[1];
    for (std::size_t k = 0; k < n; ++k)
        if (!l(k, k).is_purely_imaginary()) {
            nf.lambda = l(k, k) / ExactComplex(abs(w1));
            break;
        }
    return nf;
}

NormalForm normal_form_check(const HoloSystem& h) { return normal_form_check(h.linear); }

}  // namespace bbcf
