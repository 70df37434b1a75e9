#include "bbcf/bb_engine.hpp"

#include <algorithm>

#include "bbcf/errors.hpp"
#include "bbcf/spectra.hpp"

namespace bbcf {

int BBSystem::order() const {
    int o = 0;
    for (const auto& s : nonlinear) o = std::max(o, s.order());
    return o;
}

MultiSeries BBSystem::full_rhs(std::size_t i) const {
    MultiSeries f = nonlinear.at(i);
    f.add_term(Exponent::unit(0), px[i]);
    for (std::size_t j = 0; j < n; ++j) f.add_term(Exponent::unit(j + 1), a(i, j));
    return f;
}

BBSystem make_bb_system(SmallMatrix a, ExactVector px, std::vector<MultiSeries> nonlinear) {
    BBSystem bb;
    bb.n = a.dim();
    if (bb.n == 0 || bb.n > 3) throw DimensionError("Briot-Bouquet systems need 1 to 3 dependent variables");
    if (px.size() != bb.n || nonlinear.size() != bb.n)
        throw DimensionError("Briot-Bouquet system: inconsistent component counts");
    int order = nonlinear.front().order();
    for (const auto& s : nonlinear) {
        if (s.nvars() != bb.n + 1) throw DimensionError("nonlinear series must have n+1 variables");
        if (s.order() != order) throw DimensionError("nonlinear series must share one truncation order");
        if (s.min_degree() < 2) throw PreconditionError("nonlinear part may only contain terms of degree >= 2");
    }
    bb.a = std::move(a);
    bb.px = std::move(px);
    bb.nonlinear = std::move(nonlinear);
    return bb;
}

BBSystem bb_from_rhs(std::span<const MultiSeries> rhs) {
    std::size_t n = rhs.size();
    if (n == 0) throw DimensionError("empty Briot-Bouquet system");
    SmallMatrix a(n);
    ExactVector px(n);
    std::vector<MultiSeries> nl;
    int order = rhs[0].order();
    for (const auto& f : rhs) order = std::min(order, f.order());
    for (std::size_t i = 0; i < n; ++i) {
        const MultiSeries& f = rhs[i];
        if (f.nvars() != n + 1) throw DimensionError("right-hand sides must have n+1 variables");
        if (!f.coefficient(Exponent{}).is_zero())
            throw PreconditionError("Briot-Bouquet right-hand side has a constant term");
        px[i] = f.coefficient(Exponent::unit(0));
        for (std::size_t j = 0; j < n; ++j) a(i, j) = f.coefficient(Exponent::unit(j + 1));
        MultiSeries rest(n + 1, order);
        for (const auto& [e, c] : f.terms())
            if (e.degree() >= 2) rest.add_term(e, c);
        nl.push_back(std::move(rest));
    }
    return make_bb_system(std::move(a), std::move(px), std::move(nl));
}

MultiSeries FormalSolution::component(std::size_t i) const {
    MultiSeries s(1, order);
    for (int k = 1; k <= order; ++k) s.add_term(Exponent::unit(0, k), coefficients[static_cast<std::size_t>(k)][i]);
    return s;
}

namespace {

// Coefficient of x^k in nonlinear_i(x, y(x)) for every i.
ExactVector nonlinear_coefficient(const BBSystem& bb, const std::vector<MultiSeries>& y, int k) {
    std::vector<MultiSeries> images;
    images.push_back(MultiSeries::variable(1, k, 0));
    for (const auto& yi : y) images.push_back(yi.with_order(k));
    ExactVector out(bb.n);
    for (std::size_t i = 0; i < bb.n; ++i) {
        if (bb.nonlinear[i].is_zero()) continue;
        out[i] = bb.nonlinear[i].truncated(k).compose(images, k).coefficient(Exponent::unit(0, k));
    }
    return out;
}

}  // namespace

FormalSolution formal_solve_nonresonant(const BBSystem& bb, int order) {
    if (order > bb.order()) throw OrderTooSmallError("requested solution order exceeds the system's truncation order");
    FormalSolution sol;
    sol.order = order;
    sol.coefficients.assign(static_cast<std::size_t>(order) + 1, ExactVector(bb.n));
    std::vector<MultiSeries> y(bb.n, MultiSeries(1, order));
    SmallMatrix id = SmallMatrix::identity(bb.n);
    for (int k = 1; k <= order; ++k) {
        SmallMatrix m = id * ExactComplex(k) - bb.a;
        if (m.determinant().is_zero())
            throw PreconditionError("eigenvalue " + std::to_string(k) +
                                    " of A is a positive integer; use classify() for resonant systems");
        ExactVector rhs = nonlinear_coefficient(bb, y, k);
        if (k == 1)
            for (std::size_t i = 0; i < bb.n; ++i) rhs[i] += bb.px[i];
        LinearSolution s = solve_linear(m, rhs);
        for (std::size_t i = 0; i < bb.n; ++i) {
            sol.coefficients[static_cast<std::size_t>(k)][i] = s.solution[i];
            y[i].add_term(Exponent::unit(0, k), s.solution[i]);
        }
    }
    return sol;
}

ReductionStep reduction_step(const BBSystem& bb, std::span<const ExactComplex> free_values) {
    ReductionStep out;
    SmallMatrix lhs = SmallMatrix::identity(bb.n) - bb.a;
    for (std::size_t i = 0; i < bb.n; ++i) {
        bool zero_row = true;
        for (std::size_t j = 0; j < bb.n; ++j) zero_row = zero_row && lhs(i, j).is_zero();
        if (zero_row) out.resonant_rows.emplace_back(i, bb.px[i]);
    }
    LinearSolution s = solve_linear(lhs, bb.px, free_values);
    out.free_columns = s.free_columns;
    if (!s.consistent) {
        out.blocked = true;
        out.obstruction = s.defect;
        return out;
    }
    out.shift = s.solution;

    int order = bb.order();
    std::vector<MultiSeries> transformed;
    for (const auto& f : bb.nonlinear) {
        MultiSeries g = f;
        for (std::size_t j = 0; j < bb.n; ++j) g = g.shear_substitute(j + 1, out.shift[j]);
        transformed.push_back(g.divide_by_x());
    }
    SmallMatrix a_new = bb.a - SmallMatrix::identity(bb.n);
    ExactVector px_new(bb.n);
    std::vector<MultiSeries> nl_new;
    for (std::size_t i = 0; i < bb.n; ++i) {
        const MultiSeries& g = transformed[i];
        px_new[i] = g.coefficient(Exponent::unit(0));
        MultiSeries rest(bb.n + 1, order - 1);
        for (const auto& [e, c] : g.terms()) {
            if (e.degree() < 2) {
                if (e != Exponent::unit(0))
                    throw Error("reduction_step: unexpected low-degree term after the shear");
                continue;
            }
            rest.add_term(e, c);
        }
        nl_new.push_back(std::move(rest));
    }
    out.reduced = make_bb_system(std::move(a_new), std::move(px_new), std::move(nl_new));
    return out;
}

std::string to_string(BBKind kind) {
    switch (kind) {
        case BBKind::no_solution: return "no-solution";
        case BBKind::unique: return "unique";
        case BBKind::family: return "family";
    }
    return "unique";
}

std::string to_string(ResonanceCase c) {
    switch (c) {
        case ResonanceCase::nonresonant: return "nonresonant";
        case ResonanceCase::single: return "single-resonance";
        case ResonanceCase::distinct_pair: return "distinct-resonances";
        case ResonanceCase::equal_diagonalizable: return "double-resonance-diagonalizable";
        case ResonanceCase::equal_jordan: return "double-resonance-jordan";
    }
    return "nonresonant";
}

namespace {

struct ResonanceInfo {
    ResonanceCase kind = ResonanceCase::nonresonant;
    std::vector<long> orders;  // distinct positive integer eigenvalues, ascending
};

ResonanceInfo detect_resonance(const SmallMatrix& a, int order) {
    ResonanceInfo info;
    std::optional<SpectrumInfo> spec;
    try {
        spec = classify_spectrum(a);
    } catch (const UncertifiableSpectrumError&) {
        // Integer eigenvalues are always rational roots, so probe them directly.
        SmallMatrix id = SmallMatrix::identity(a.dim());
        for (int k = 1; k <= order; ++k)
            if ((id * ExactComplex(k) - a).determinant().is_zero()) info.orders.push_back(k);
        if (!info.orders.empty()) throw UncertifiableSpectrumError("resonant matrix with uncertifiable spectrum");
        return info;
    }
    std::size_t multiplicity = 0;
    for (const auto& ev : spec->eigenvalues) {
        long v = 0;
        if (ev.value.is_positive_integer(&v)) {
            info.orders.push_back(v);
            multiplicity += ev.multiplicity;
        }
    }
    std::sort(info.orders.begin(), info.orders.end());
    if (info.orders.empty()) return info;
    if (info.orders.size() == 2)
        info.kind = ResonanceCase::distinct_pair;
    else if (multiplicity == 1)
        info.kind = ResonanceCase::single;
    else
        info.kind = spec->diagonalizable ? ResonanceCase::equal_diagonalizable : ResonanceCase::equal_jordan;
    return info;
}

std::string obstruction_label(ResonanceCase rc, std::size_t variable, int k, const std::vector<long>& orders) {
    switch (rc) {
        case ResonanceCase::single: return "p_bar";
        case ResonanceCase::distinct_pair: return k == orders.front() ? "p_bar" : "r_hat";
        case ResonanceCase::equal_diagonalizable: return variable == 0 ? "p_bar" : "r_bar";
        case ResonanceCase::equal_jordan: return "r_bar";
        case ResonanceCase::nonresonant: break;
    }
    return "defect";
}

}  // namespace

BBClassification classify(const BBSystem& bb, int order, std::span<const ExactComplex> parameters) {
    if (order > bb.order()) throw OrderTooSmallError("requested order exceeds the system's truncation order");
    ResonanceInfo res = detect_resonance(bb.a, order);
    BBClassification out;
    out.resonance = res.kind;
    if (res.orders.empty()) {
        out.kind = BBKind::unique;
        out.solution = formal_solve_nonresonant(bb, order);
        return out;
    }
    if (bb.n > 2) throw PreconditionError("resonant classification is implemented for one or two dependent variables");
    long steps = res.orders.back();
    if (order < steps + 2)
        throw OrderTooSmallError("order " + std::to_string(order) + " is too small for integer eigenvalue " +
                                 std::to_string(steps) + " (need at least " + std::to_string(steps + 2) + ")");

    FormalSolution sol;
    sol.order = order;
    sol.coefficients.assign(static_cast<std::size_t>(order) + 1, ExactVector(bb.n));
    BBSystem current = bb;
    std::size_t next_param = 0;
    for (int k = 1; k <= steps; ++k) {
        ExactVector values;
        for (std::size_t p = next_param; p < parameters.size(); ++p) values.push_back(parameters[p]);
        ReductionStep step = reduction_step(current, values);
        for (const auto& [row, value] : step.resonant_rows)
            out.obstructions.push_back({obstruction_label(res.kind, row, k, res.orders), row, k, value});
        if (step.blocked) {
            if (step.resonant_rows.empty()) out.obstructions.push_back({"defect", bb.n, k, step.obstruction});
            out.kind = BBKind::no_solution;
            out.blocking_order = k;
            return out;
        }
        for (std::size_t col : step.free_columns) sol.free_parameters.push_back({k, col, next_param++});
        sol.coefficients[static_cast<std::size_t>(k)] = step.shift;
        current = std::move(step.reduced);
    }
    FormalSolution tail = formal_solve_nonresonant(current, order - static_cast<int>(steps));
    for (int j = 1; j <= tail.order; ++j)
        sol.coefficients[static_cast<std::size_t>(j + steps)] = tail.coefficients[static_cast<std::size_t>(j)];
    out.kind = sol.free_parameters.empty() ? BBKind::unique : BBKind::family;
    out.solution = std::move(sol);
    return out;
}

std::vector<MultiSeries> residual(const BBSystem& bb, const FormalSolution& sol, int order) {
    if (sol.dimension() != bb.n) throw DimensionError("solution dimension does not match the system");
    std::vector<MultiSeries> images;
    images.push_back(MultiSeries::variable(1, order, 0));
    for (std::size_t i = 0; i < bb.n; ++i) images.push_back(sol.component(i).with_order(order));
    std::vector<MultiSeries> out;
    for (std::size_t i = 0; i < bb.n; ++i) {
        MultiSeries lhs(1, order);
        for (const auto& [e, c] : images[i + 1].terms()) lhs.add_term(e, c * ExactComplex(e[0]));
        out.push_back(lhs - bb.full_rhs(i).compose(images, order));
    }
    return out;
}

}  // namespace bbcf
