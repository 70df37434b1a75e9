#include "bbcf/center_families.hpp"

#include <algorithm>
#include <stdexcept>

#include "bbcf/errors.hpp"

namespace bbcf {

std::string to_string(Multiplicity m) {
    switch (m) {
        case Multiplicity::none: return "none";
        case Multiplicity::unique: return "unique";
        case Multiplicity::infinite: return "infinite";
    }
    return "none";
}

std::string CenterManifoldReport::period_string() const {
    if (period_factor == 1) return "2π";
    Rational k = 1 / period_factor;
    std::string ks = rational_to_string(k);
    return k.get_den() == 1 ? "2π/" + ks : "2π/(" + ks + ")";
}

ChartReduction chart_reduce(const HoloSystem& h, std::size_t chart, int order) {
    std::size_t n = h.dim;
    if (n < 2) throw DimensionError("chart reduction needs at least two variables");
    if (chart >= n) throw IndexError("chart index out of range");
    if (h.linear(chart, chart).is_zero()) throw InvalidChartError("chart variable has a zero eigenvalue");
    if (order < 1) throw PreconditionError("chart reduction order must be positive");

    ChartReduction red;
    red.chart = chart;
    for (std::size_t k = 0; k < n; ++k)
        if (k != chart) red.dependent.push_back(k);
    std::size_t m = red.dependent.size();

    // z_chart = t, z_j = t*u_j; every component then carries a factor t.
    int work = order + 1;
    MultiSeries t = MultiSeries::variable(m + 1, work, 0);
    std::vector<MultiSeries> images(n);
    images[chart] = t;
    for (std::size_t k = 0; k < m; ++k) images[red.dependent[k]] = t * MultiSeries::variable(m + 1, work, k + 1);
    std::vector<MultiSeries> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(h.component(i).with_order(work).compose(images, work).divide_by_x());

    MultiSeries inv = g[chart].reciprocal();
    for (std::size_t k = 0; k < m; ++k) {
        MultiSeries u = MultiSeries::variable(m + 1, order, k + 1);
        red.rhs.push_back((g[red.dependent[k]] - u * g[chart]) * inv);
        red.constant_terms.push_back(red.rhs.back().coefficient(Exponent{}));
    }
    bool clean = std::all_of(red.constant_terms.begin(), red.constant_terms.end(),
                             [](const ExactComplex& c) { return c.is_zero(); });
    if (clean) red.reduced = bb_from_rhs(red.rhs);
    return red;
}

HoloSystem normalize_time(const HoloSystem& h) {
    auto axes = sorted_imaginary_axes(h.linear);
    if (axes.empty()) return h;
    Rational w = abs(axes.front().second);
    HoloSystem r = scaled(h, 1 / w);
    r.time_scale = h.time_scale * w;
    return r;
}

namespace {

struct ChartOutcome {
    ChartReduction reduction;
    std::optional<BBClassification> classification;
    Multiplicity multiplicity = Multiplicity::none;
};

ChartOutcome run_chart(const HoloSystem& h, std::size_t chart, int order) {
    ChartOutcome out{chart_reduce(h, chart, order), std::nullopt, Multiplicity::none};
    if (out.reduction.obstructed()) return out;
    out.classification = classify(*out.reduction.reduced, order);
    switch (out.classification->kind) {
        case BBKind::unique: out.multiplicity = Multiplicity::unique; break;
        case BBKind::family: out.multiplicity = Multiplicity::infinite; break;
        case BBKind::no_solution: out.multiplicity = Multiplicity::none; break;
    }
    return out;
}

Rational chart_omega(const HoloSystem& h, std::size_t chart) { return abs(h.linear(chart, chart).im()) * h.time_scale; }

std::string axis_label(const HoloSystem& h, std::size_t c) { return h.names[c] + "-invariant"; }

std::string plane_label(const HoloSystem& h, std::size_t a, std::size_t b) {
    if (a > b) std::swap(a, b);
    return "(" + h.names[a] + "," + h.names[b] + ")-invariant";
}

CenterManifoldReport make_report(const HoloSystem& h, const ChartOutcome& oc, Multiplicity mult, std::string label,
                                 std::string tag, int order) {
    const ChartReduction& red = oc.reduction;
    CenterManifoldReport r;
    r.chart = red.chart;
    r.tangency = std::move(label);
    r.multiplicity = mult;
    r.order = order;
    r.omega = chart_omega(h, red.chart);
    r.period_factor = 1 / r.omega;
    r.theorem_tag = std::move(tag);

    if (red.obstructed()) {
        for (std::size_t k = 0; k < red.constant_terms.size(); ++k)
            if (!red.constant_terms[k].is_zero())
                r.obstructions.push_back({"constant", red.dependent[k], 0, red.constant_terms[k]});
        r.blocking_order = 0;
        return r;
    }
    const BBClassification& cls = *oc.classification;
    for (const auto& ob : cls.obstructions) {
        ObstructionConstant o = ob;
        if (o.variable < red.dependent.size()) o.variable = red.dependent[o.variable];
        r.obstructions.push_back(o);
    }
    r.blocking_order = cls.blocking_order;
    if (mult == Multiplicity::none || !cls.solution) return r;

    const FormalSolution& sol = *cls.solution;
    MultiSeries t = MultiSeries::variable(1, order, 0);
    r.graph.assign(h.dim, MultiSeries(1, order));
    r.graph[red.chart] = t;
    for (std::size_t k = 0; k < red.dependent.size(); ++k)
        r.graph[red.dependent[k]] = (t.with_order(order + 1) * sol.component(k).with_order(order + 1)).truncated(order);
    for (const auto& p : sol.free_parameters)
        r.free_parameters.push_back({p.order + 1, red.dependent[p.variable], r.free_parameters.size()});
    return r;
}

// Slope of the graph in direction `var` is free (equal eigenvalues).
void add_slope_parameter(CenterManifoldReport& r, std::size_t var) {
    r.free_parameters.insert(r.free_parameters.begin(), FreeParameter{1, var, 0});
    for (std::size_t k = 0; k < r.free_parameters.size(); ++k) r.free_parameters[k].id = k;
}

class Dispatcher {
public:
    Dispatcher(const HoloSystem& h, int order) : h_(h), order_(order) {}

    std::vector<CenterManifoldReport> run() {
        NormalFormTag tag = normal_form_check(h_.linear).tag;
        if (tag == NormalFormTag::not_normalized) {
            if (classify_spectrum(h_.linear).imaginary_count() == 0) return {};
            throw NotNormalizedError("linear part is not in a supported normal form; normalize it first");
        }
        auto axes = sorted_imaginary_axes(h_.linear);
        if (axes.empty()) return {};
        switch (tag) {
            case NormalFormTag::jordan_3x3: jordan_triple(); break;
            case NormalFormTag::jordan_2x2: jordan_pair(); break;
            case NormalFormTag::diagonal:
            case NormalFormTag::diagonal_with_hyperbolic: diagonal(axes); break;
            case NormalFormTag::not_normalized: break;
        }
        std::stable_sort(reports_.begin(), reports_.end(), [](const auto& a, const auto& b) {
            bool ea = a.multiplicity != Multiplicity::none, eb = b.multiplicity != Multiplicity::none;
            if (ea != eb) return ea;
            return a.chart < b.chart;
        });
        return std::move(reports_);
    }

private:
    void generic(std::size_t chart, const std::string& tag) {
        ChartOutcome oc = run_chart(h_, chart, order_);
        reports_.push_back(make_report(h_, oc, oc.multiplicity, axis_label(h_, chart), tag, order_));
    }

    void origin_center(std::size_t chart) {
        CenterManifoldReport r;
        r.chart = chart;
        r.tangency = "isochronous center at origin";
        r.multiplicity = Multiplicity::unique;
        r.order = order_;
        r.omega = chart_omega(h_, chart);
        r.period_factor = 1 / r.omega;
        r.theorem_tag = "Poincaré isochronous center";
        reports_.push_back(std::move(r));
    }

    // Plane through axes a and b, graphed over a with the slope towards b free.
    void plane(std::size_t a, std::size_t b, const ChartOutcome& oc, Multiplicity mult, const std::string& tag) {
        CenterManifoldReport r = make_report(h_, oc, mult, plane_label(h_, a, b), tag, order_);
        add_slope_parameter(r, b);
        reports_.push_back(std::move(r));
    }

    void jordan_triple() {
        for (std::size_t c = 0; c < 3; ++c) generic(c, "jordan-triple");
    }

    void jordan_pair() {
        if (h_.dim == 3 && h_.linear(2, 2).is_purely_imaginary()) {
            if (h_.linear(2, 2) == h_.linear(0, 0)) {
                ChartOutcome x = run_chart(h_, 0, order_);
                plane(0, 2, x, x.multiplicity, "jordan-pair-equal-third");
                generic(1, "jordan-pair-equal-third");
                return;
            }
            for (std::size_t c = 0; c < 3; ++c) generic(c, "jordan-pair-imaginary-third");
            return;
        }
        std::string tag = h_.dim == 3 ? "jordan-pair-hyperbolic-third" : "jordan-pair";
        generic(0, tag);
        generic(1, tag);
    }

    void diagonal(const std::vector<std::pair<std::size_t, Rational>>& axes) {
        auto same = [&](std::size_t p, std::size_t q) { return axes[p].second == axes[q].second; };
        if (axes.size() == 1) {
            generic(axes[0].first, "single-imaginary-axis");
            return;
        }
        std::size_t a = axes[0].first, b = axes[1].first;
        if (axes.size() == 2) {
            if (!same(0, 1)) {
                generic(a, "distinct-imaginary-pair");
                generic(b, "distinct-imaginary-pair");
            } else if (h_.dim == 2) {
                origin_center(a);
            } else {
                ChartOutcome oa = run_chart(h_, a, order_);
                plane(a, b, oa, oa.multiplicity, "equal-imaginary-pair");
            }
            return;
        }
        std::size_t c = axes[2].first;
        if (same(0, 1) && same(1, 2)) {
            origin_center(a);
        } else if (same(0, 1)) {
            equal_smaller_pair(a, b, c);
        } else if (same(1, 2)) {
            generic(a, "equal-larger-pair");
            ChartOutcome ob = run_chart(h_, b, order_);
            plane(b, c, ob, ob.multiplicity, "equal-larger-pair");
        } else {
            for (const auto& ax : axes) generic(ax.first, "three-distinct-imaginary");
        }
    }

    void equal_smaller_pair(std::size_t a, std::size_t b, std::size_t c) {
        const std::string tag = "equal-smaller-pair";
        generic(c, tag);
        ChartOutcome oa = run_chart(h_, a, order_), ob = run_chart(h_, b, order_);
        // a nonresonant chart counts as a family through its free slope
        bool fa = oa.multiplicity != Multiplicity::none, fb = ob.multiplicity != Multiplicity::none;
        if (fa && fb) {
            plane(a, b, oa, Multiplicity::infinite, tag);
        } else if (fa) {
            reports_.push_back(make_report(h_, oa, Multiplicity::infinite, axis_label(h_, a), tag, order_));
            reports_.push_back(make_report(h_, ob, Multiplicity::none, axis_label(h_, b), tag, order_));
        } else if (fb) {
            reports_.push_back(make_report(h_, ob, Multiplicity::infinite, axis_label(h_, b), tag, order_));
            reports_.push_back(make_report(h_, oa, Multiplicity::none, axis_label(h_, a), tag, order_));
        } else {
            reports_.push_back(make_report(h_, oa, Multiplicity::none, axis_label(h_, a), tag, order_));
            reports_.push_back(make_report(h_, ob, Multiplicity::none, axis_label(h_, b), tag, order_));
        }
    }

    const HoloSystem& h_;
    int order_;
    std::vector<CenterManifoldReport> reports_;
};

}  // namespace

std::vector<CenterManifoldReport> enumerate_centers(const HoloSystem& h, int order) {
    if (h.dim < 2 || h.dim > 3) throw DimensionError("center enumeration needs a 2- or 3-dimensional system");
    HoloSystem normalized = normalize_time(h);
    return Dispatcher(normalized, order).run();
}

std::vector<MultiSeries> manifold_graph(const CenterManifoldReport& r) {
    if (r.multiplicity == Multiplicity::none) throw PreconditionError("no manifold to graph");
    return r.graph;
}

std::vector<MultiSeries> graph_residual(const HoloSystem& h, const CenterManifoldReport& r) {
    if (r.graph.size() != h.dim) throw PreconditionError("report carries no graph");
    int order = r.order;
    std::vector<MultiSeries> phi;
    for (const auto& g : r.graph) phi.push_back(g.with_order(order));
    MultiSeries fc = h.component(r.chart).with_order(order).compose(phi, order);
    std::vector<MultiSeries> out;
    for (std::size_t j = 0; j < h.dim; ++j) {
        if (j == r.chart) continue;
        // the unknown top coefficient of phi_j' only meets fc's O(t) factor
        MultiSeries dphi = phi[j].derivative(0).with_order(order);
        MultiSeries fj = h.component(j).with_order(order).compose(phi, order);
        out.push_back(fc * dphi - fj);
    }
    return out;
}

namespace {

std::vector<MultiSeries> transform_nonlinear(const HoloSystem& h, const SmallMatrix& p, const SmallMatrix& pinv) {
    std::size_t n = h.dim;
    int order = h.series_order();
    std::vector<MultiSeries> images;
    for (std::size_t i = 0; i < n; ++i) {
        MultiSeries s(n, order);
        for (std::size_t j = 0; j < n; ++j) s.add_term(Exponent::unit(j), p(i, j));
        images.push_back(std::move(s));
    }
    std::vector<MultiSeries> fz;
    for (const auto& f : h.nonlinear) fz.push_back(f.compose(images, order));
    std::vector<MultiSeries> out;
    for (std::size_t k = 0; k < n; ++k) {
        MultiSeries acc(n, order);
        for (std::size_t i = 0; i < n; ++i)
            if (!pinv(k, i).is_zero()) acc += fz[i] * pinv(k, i);
        out.push_back(std::move(acc));
    }
    return out;
}

bool independent_of(const std::vector<ExactVector>& cols, const ExactVector& v) {
    std::size_t n = v.size();
    SmallMatrix m(n);
    std::size_t c = 0;
    for (; c < cols.size(); ++c)
        for (std::size_t r = 0; r < n; ++r) m(r, c) = cols[c][r];
    for (std::size_t r = 0; r < n; ++r) m(r, c) = v[r];
    return m.rank() == cols.size() + 1;
}

SmallMatrix from_columns(const std::vector<ExactVector>& cols) {
    std::size_t n = cols.size();
    SmallMatrix p(n);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = 0; r < n; ++r) p(r, c) = cols[c][r];
    return p;
}

std::vector<std::string> coordinate_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t k = 1; k <= n; ++k) names.push_back("w" + std::to_string(k));
    return names;
}

SmallMatrix exact_basis(const SmallMatrix& m, const SpectrumInfo& spec) {
    std::size_t n = m.dim();
    SmallMatrix id = SmallMatrix::identity(n);
    std::vector<ExactVector> cols;
    std::optional<JordanBlock> big;
    for (const auto& b : spec.jordan_blocks)
        if (b.size > 1) big = b;
    if (big) {
        if (!big->eigenvalue.is_purely_imaginary())
            throw NotNormalizedError("Jordan block at an eigenvalue off the imaginary axis is not supported");
        SmallMatrix nil = m - id * big->eigenvalue;
        SmallMatrix top = nil.pow(static_cast<int>(big->size) - 1);
        std::optional<ExactVector> seed;
        for (std::size_t k = 0; k < n && !seed; ++k) {
            ExactVector e(n);
            e[k] = ExactComplex(1);
            ExactVector image = top * std::span<const ExactComplex>(e);
            bool nonzero = std::any_of(image.begin(), image.end(), [](const ExactComplex& z) { return !z.is_zero(); });
            // the seed must also lie in the generalized eigenspace
            ExactVector kill = nil.pow(static_cast<int>(big->size)) * std::span<const ExactComplex>(e);
            bool inside = std::all_of(kill.begin(), kill.end(), [](const ExactComplex& z) { return z.is_zero(); });
            if (nonzero && inside) seed = e;
        }
        if (!seed) {
            // fall back to a kernel vector of nil^size outside ker nil^(size-1)
            for (const auto& v : nil.pow(static_cast<int>(big->size)).nullspace()) {
                ExactVector image = top * std::span<const ExactComplex>(v);
                if (std::any_of(image.begin(), image.end(), [](const ExactComplex& z) { return !z.is_zero(); })) {
                    seed = v;
                    break;
                }
            }
        }
        if (!seed) throw Error("failed to build a Jordan chain");
        std::vector<ExactVector> chain{*seed};
        for (std::size_t k = 1; k < big->size; ++k) chain.push_back(nil * std::span<const ExactComplex>(chain.back()));
        std::reverse(chain.begin(), chain.end());
        cols = chain;
    }
    for (const auto& ev : spec.eigenvalues) {
        std::size_t need = ev.multiplicity - (big && big->eigenvalue == ev.value ? big->size : 0);
        for (const auto& v : (m - id * ev.value).nullspace()) {
            if (need == 0) break;
            if (independent_of(cols, v)) {
                cols.push_back(v);
                --need;
            }
        }
    }
    if (cols.size() != n) throw Error("failed to assemble a normalizing basis");
    return from_columns(cols);
}

}  // namespace

NormalizedSystem normalize_system(const HoloSystem& h, bool allow_numeric) {
    if (normal_form_check(h.linear).tag != NormalFormTag::not_normalized)
        return {h, SmallMatrix::identity(h.dim), true, false};

    NormalizedSystem out;
    out.changed = true;
    SmallMatrix linear;
    try {
        SpectrumInfo spec = classify_spectrum(h.linear);
        if (spec.imaginary_count() == 0) return {h, SmallMatrix::identity(h.dim), true, false};
        out.basis = exact_basis(h.linear, spec);
        linear = out.basis.inverse() * h.linear * out.basis;
    } catch (const UncertifiableSpectrumError&) {
        if (!allow_numeric) throw;
        out.certified = false;
        auto pairs = approximate_eigenpairs(h.linear);
        std::stable_sort(pairs.begin(), pairs.end(), [](const ApproxEigenpair& a, const ApproxEigenpair& b) {
            bool ia = a.value.is_purely_imaginary(), ib = b.value.is_purely_imaginary();
            if (ia != ib) return ia;
            if (ia && abs(a.value.im()) != abs(b.value.im())) return abs(a.value.im()) < abs(b.value.im());
            return false;
        });
        std::vector<ExactVector> cols;
        ExactVector diag;
        for (const auto& p : pairs) {
            cols.push_back(p.vector);
            diag.push_back(p.value);
        }
        out.basis = from_columns(cols);
        if (out.basis.determinant().is_zero())
            throw UncertifiableSpectrumError("numeric eigenvectors are not independent");
        linear = SmallMatrix::diagonal(diag);
        if (!std::any_of(diag.begin(), diag.end(), [](const ExactComplex& z) { return z.is_purely_imaginary(); }))
            return {h, SmallMatrix::identity(h.dim), false, false};
    }
    SmallMatrix pinv = out.basis.inverse();
    out.system = make_holo_system(linear, transform_nonlinear(h, out.basis, pinv), coordinate_names(h.dim));
    out.system.time_scale = h.time_scale;
    if (out.system.normal_form == NormalFormTag::not_normalized)
        throw NotNormalizedError("linear part has no supported normal form (zero eigenvalue or hyperbolic Jordan block)");
    return out;
}

}  // namespace bbcf
