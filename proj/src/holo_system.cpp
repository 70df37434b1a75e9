#include "bbcf/holo_system.hpp"

#include <algorithm>

#include "bbcf/spectra.hpp"

namespace bbcf {

std::string to_string(NormalFormTag tag) {
    switch (tag) {
        case NormalFormTag::diagonal: return "diagonal";
        case NormalFormTag::diagonal_with_hyperbolic: return "diagonal-with-hyperbolic";
        case NormalFormTag::jordan_2x2: return "jordan-2x2";
        case NormalFormTag::jordan_3x3: return "jordan-3x3";
        case NormalFormTag::not_normalized: return "not-normalized";
    }
    return "not-normalized";
}

MultiSeries HoloSystem::component(std::size_t i) const {
    MultiSeries c = nonlinear.at(i);
    for (std::size_t j = 0; j < dim; ++j) c.add_term(Exponent::unit(j), linear(i, j));
    return c;
}

std::vector<std::complex<double>> HoloSystem::eval_numeric(std::span<const std::complex<double>> z) const {
    std::vector<std::complex<double>> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::complex<double> v = nonlinear[i].eval_numeric(z);
        for (std::size_t j = 0; j < dim; ++j)
            if (!linear(i, j).is_zero()) v += linear(i, j).to_complex() * z[j];
        out[i] = v;
    }
    return out;
}

std::vector<ExactComplex> HoloSystem::eval_exact(std::span<const ExactComplex> z) const {
    std::vector<ExactComplex> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        ExactComplex v = nonlinear[i].eval_exact(z);
        for (std::size_t j = 0; j < dim; ++j)
            if (!linear(i, j).is_zero()) v += linear(i, j) * z[j];
        out[i] = v;
    }
    return out;
}

int HoloSystem::series_order() const {
    int order = 0;
    for (const auto& s : nonlinear) order = std::max(order, s.order());
    return order;
}

HoloSystem make_holo_system(SmallMatrix linear, std::vector<MultiSeries> nonlinear, std::vector<std::string> names) {
    HoloSystem h;
    h.dim = linear.dim();
    if (h.dim == 0 || h.dim > 3) throw DimensionError("holomorphic systems must have dimension 1 to 3");
    if (nonlinear.size() != h.dim) throw DimensionError("need one nonlinear series per variable");
    for (const auto& s : nonlinear) {
        if (s.nvars() != h.dim) throw DimensionError("nonlinear series variable count must equal the dimension");
        if (s.min_degree() < 2) throw PreconditionError("nonlinear part may only contain terms of degree >= 2");
    }
    if (names.empty()) {
        static const char* kDefault[] = {"x", "y", "z"};
        for (std::size_t k = 0; k < h.dim; ++k) names.emplace_back(kDefault[k]);
    }
    if (names.size() != h.dim) throw DimensionError("variable name count must equal the dimension");
    h.linear = std::move(linear);
    h.nonlinear = std::move(nonlinear);
    h.names = std::move(names);
    h.normal_form = normal_form_check(h.linear).tag;
    return h;
}

HoloSystem scaled(const HoloSystem& h, const Rational& factor) {
    HoloSystem r = h;
    ExactComplex f(factor);
    r.linear = h.linear * f;
    for (auto& s : r.nonlinear) s *= f;
    return r;
}

}  // namespace bbcf
