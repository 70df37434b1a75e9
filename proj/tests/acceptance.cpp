// Acceptance run: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "bbcf/app_io.hpp"
#include "bbcf/bb_engine.hpp"
#include "bbcf/center_families.hpp"
#include "bbcf/numeric_verify.hpp"
#include "bb_instances.hpp"
#include "holo_instances.hpp"
#include "oracle/bb_oracle.hpp"

using namespace bbcf;
using bbcf::testing::HoloPattern;
using bbcf::testing::ResonancePattern;

namespace {

const ExactComplex I = ExactComplex::i();

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Timer {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

bool all_zero(const std::vector<MultiSeries>& r) {
    for (const auto& s : r)
        if (!s.is_zero()) return false;
    return true;
}

oracle::Kind kind_of(BBKind k) {
    if (k == BBKind::no_solution) return oracle::Kind::no_solution;
    return k == BBKind::family ? oracle::Kind::family : oracle::Kind::unique;
}

// ---- 1 -----------------------------------------------------------------------

Outcome nonresonant_uniqueness() {
    Timer timer;
    std::mt19937 rng(1001);
    std::uniform_int_distribution<int> coin(0, 1);
    const int order = 10;
    int bad = 0;
    for (int t = 0; t < 200; ++t) {
        std::size_t n = 1 + static_cast<std::size_t>(coin(rng));
        SmallMatrix a = testing::matrix_for(rng, n, ResonancePattern::none, 5);
        oracle::Problem p = testing::make_problem(rng, a, 3);
        BBSystem bb = testing::to_bb_system(p, order);
        FormalSolution s = formal_solve_nonresonant(bb, order);
        oracle::Result o = oracle::solve(p, order);
        bool ok = o.kind == oracle::Kind::unique && all_zero(residual(bb, s, order)) && s.free_parameters.empty();
        for (int k = 1; ok && k <= order; ++k) ok = s.coefficients[static_cast<std::size_t>(k)] == o.coeffs[static_cast<std::size_t>(k)];
        if (!ok) ++bad;
    }
    double secs = timer.seconds();
    Outcome out;
    out.pass = bad == 0 && secs < 30;
    out.detail = "200 systems, " + std::to_string(bad) + " mismatches, " + fmt("%.2f s", secs) + " (limit 30 s)";
    return out;
}

// ---- 2 -----------------------------------------------------------------------

struct SuiteCount {
    int cases = 0;
    int bad = 0;
};

bool agrees_with_oracle(const oracle::Problem& p, int order) {
    BBSystem bb = testing::to_bb_system(p, order);
    BBClassification c = classify(bb, order);
    oracle::Result o = oracle::solve(p, order);
    if (kind_of(c.kind) != o.kind) return false;
    if (o.kind == oracle::Kind::no_solution) {
        if (c.blocking_order != o.blocking_order) return false;
    } else {
        if (!c.solution || c.solution->free_parameters.size() != o.free_count) return false;
        if (!all_zero(residual(bb, *c.solution, order))) return false;
    }
    std::vector<std::tuple<int, std::size_t, std::string>> got, want;
    for (const auto& ob : c.obstructions)
        if (ob.label != "defect") got.emplace_back(ob.order, ob.variable, ob.value.to_string());
    for (const auto& w : o.witnesses) want.emplace_back(w.order, w.row, w.value.to_string());
    return got == want;
}

void run_suite(SuiteCount& sc, std::mt19937& rng, const std::vector<SmallMatrix>& matrices, int per_matrix, int order) {
    for (const auto& a : matrices) {
        for (int t = 0; t < per_matrix; ++t) {
            oracle::Problem p = testing::make_problem(rng, a, 3);
            if (t % 2 == 0) testing::repair_obstructions(p, order);
            ++sc.cases;
            if (!agrees_with_oracle(p, order)) ++sc.bad;
        }
    }
}

oracle::Problem hand_problem(std::size_t n, std::vector<std::vector<oracle::Monomial>> eqs) { return {n, std::move(eqs)}; }

Outcome resonant_trichotomy() {
    std::mt19937 rng(2002);
    const int order = 10;
    SuiteCount single, pair, equal, jordan;
    std::string named;

    // (q) = (2): f = x gives a family with c_2 free, f = x + x u is blocked by p_bar = -1
    using M = oracle::Monomial;
    oracle::Problem fam = hand_problem(1, {{M{1, {1, 0}}, M{2, {0, 1}}}});
    oracle::Problem blk = hand_problem(1, {{M{1, {1, 0}}, M{2, {0, 1}}, M{1, {1, 1}}}});
    BBClassification cf = classify(testing::to_bb_system(fam, order), order);
    BBClassification cb = classify(testing::to_bb_system(blk, order), order);
    bool named_ok = cf.kind == BBKind::family && cf.solution && cf.solution->free_parameters.size() == 1 &&
                    cf.solution->free_parameters[0].order == 2 && cb.kind == BBKind::no_solution &&
                    !cb.obstructions.empty() && cb.obstructions[0].label == "p_bar" &&
                    cb.obstructions[0].value == ExactComplex(-1);
    for (const auto* p : {&fam, &blk}) {
        ++single.cases;
        if (!agrees_with_oracle(*p, order)) ++single.bad;
    }
    run_suite(single, rng, {SmallMatrix(1, {2})}, 8, order);

    run_suite(pair, rng, {SmallMatrix(2, {2, 0, 0, 3}), SmallMatrix(2, {3, 0, 0, 2})}, 6, order);
    run_suite(equal, rng, {SmallMatrix(2, {1, 0, 0, 1}), SmallMatrix(2, {2, 0, 0, 2}), SmallMatrix(2, {3, 0, 0, 3})}, 4,
              order);

    // (q, q) Jordan with eps = 1; q = 1 with r != 0 has no solution
    oracle::Problem q1 = hand_problem(2, {{M{1, {1, 0, 0}}, M{1, {0, 1, 0}}, M{1, {0, 0, 1}}}, {M{1, {1, 0, 0}}, M{1, {0, 0, 1}}}});
    BBClassification cq1 = classify(testing::to_bb_system(q1, order), order);
    named_ok = named_ok && cq1.kind == BBKind::no_solution;
    ++jordan.cases;
    if (!agrees_with_oracle(q1, order)) ++jordan.bad;
    run_suite(jordan, rng, {SmallMatrix(2, {1, 1, 0, 1}), SmallMatrix(2, {2, 1, 0, 2}), SmallMatrix(2, {3, 1, 0, 3})}, 4,
              order);

    int cases = single.cases + pair.cases + equal.cases + jordan.cases;
    int bad = single.bad + pair.bad + equal.bad + jordan.bad;
    Outcome out;
    out.pass = named_ok && bad == 0 && cases >= 40;
    std::ostringstream os;
    os << cases << " cases (single " << single.cases << ", distinct pair " << pair.cases << ", equal diagonal "
       << equal.cases << ", Jordan " << jordan.cases << "), " << bad << " oracle mismatches, named cases "
       << (named_ok ? "ok" : "WRONG");
    out.detail = os.str();
    return out;
}

// ---- 3 -----------------------------------------------------------------------

const CenterManifoldReport* chart_report(const std::vector<CenterManifoldReport>& rs, std::size_t chart) {
    for (const auto& r : rs)
        if (r.chart == chart && !r.is_origin_center()) return &r;
    return nullptr;
}

Outcome b200_case() {
    auto system = [](long b) {
        std::vector<MultiSeries> nl(3, MultiSeries(3, 12));
        nl[1].add_term(Exponent{2, 0, 0}, ExactComplex(b));
        return make_holo_system(SmallMatrix(3, {I, 0, 0, 0, I * ExactComplex(2), 0, 0, 0, 1}), nl);
    };
    HoloSystem one = system(1), zero = system(0);
    auto r1 = enumerate_centers(one, 12), r0 = enumerate_centers(zero, 12);
    const auto *x1 = chart_report(r1, 0), *x0 = chart_report(r0, 0), *y1 = chart_report(r1, 1), *y0 = chart_report(r0, 1);
    bool ok = x1 && x0 && y1 && y0 && x1->multiplicity == Multiplicity::none && x0->multiplicity == Multiplicity::infinite &&
              y1->multiplicity == Multiplicity::unique && y0->multiplicity == Multiplicity::unique &&
              all_zero(graph_residual(one, *y1)) && all_zero(graph_residual(zero, *y0)) && all_zero(graph_residual(zero, *x0));
    Outcome out;
    out.pass = ok;
    if (x1 && x0 && y1 && y0) {
        out.detail = "b200 = 1: x " + to_string(x1->multiplicity) + ", y " + to_string(y1->multiplicity) +
                     "; b200 = 0: x " + to_string(x0->multiplicity) + ", y " + to_string(y0->multiplicity);
        if (!x1->obstructions.empty()) out.detail += "; obstruction " + x1->obstructions[0].value.to_string();
    } else {
        out.detail = "missing chart reports";
    }
    return out;
}

// ---- 4 -----------------------------------------------------------------------

Outcome jordan_no_go() {
    std::mt19937 rng(4004);
    const int order = 12;
    int systems = 0, bad = 0;
    for (int form = 0; form < 2; ++form) {
        for (int t = 0; t < 5; ++t) {
            SmallMatrix l = form == 0 ? SmallMatrix(3, {I, 1, 0, 0, I, 0, 0, 0, testing::hyperbolic_eigenvalue(rng)})
                                      : SmallMatrix(3, {I, 1, 0, 0, I, 1, 0, 0, I});
            HoloSystem h = make_holo_system(l, testing::random_nonlinear(rng, 3, order, 2, 3));
            auto reports = enumerate_centers(h, order);
            const auto *x = chart_report(reports, 0), *y = chart_report(reports, 1), *z = chart_report(reports, 2);
            bool ok = x && y && x->multiplicity == Multiplicity::unique && all_zero(graph_residual(h, *x)) &&
                      y->multiplicity == Multiplicity::none;
            if (form == 1) ok = ok && z && z->multiplicity == Multiplicity::none;
            ++systems;
            if (!ok) ++bad;
        }
    }
    Outcome out;
    out.pass = bad == 0;
    out.detail = std::to_string(systems) + " systems (5 with a 2x2 block, 5 with a 3x3 block), " + std::to_string(bad) +
                 " violations";
    return out;
}

// ---- 5 -----------------------------------------------------------------------

Outcome poincare_center() {
    std::mt19937 rng(5005);
    HoloSystem h = make_holo_system(SmallMatrix(3, {I, 0, 0, 0, I, 0, 0, 0, I}),
                                    testing::random_nonlinear(rng, 3, 12, 2, 3, Rational(1, 4)));
    Rational max_mod2 = 0;
    for (const auto& s : h.nonlinear)
        for (const auto& [e, c] : s.terms()) max_mod2 = std::max(max_mod2, c.norm());
    Timer timer;
    auto reports = enumerate_centers(h, 12);
    Outcome out;
    if (reports.size() != 1 || !reports[0].is_origin_center()) {
        out.pass = false;
        out.detail = "origin center not reported";
        return out;
    }
    VerifyOptions opt;
    opt.starts = 20;
    opt.radius = 1e-2;
    opt.step = 1e-3;
    opt.tol = 1e-6;
    VerifyResult v = check_isochronous(h, reports[0], opt);
    double secs = timer.seconds();
    out.pass = v.pass && v.predicted_period == 2 * std::numbers::pi && secs < 10 && max_mod2 <= Rational(1, 16);
    out.detail = "20 starts, max return error " + fmt("%.3e", v.return_error) + " (tol 1e-6), " + fmt("%.2f s", secs) +
                 " (limit 10 s), max coefficient modulus " + fmt("%.3f", std::sqrt(max_mod2.get_d()));
    return out;
}

// ---- 6 -----------------------------------------------------------------------

std::vector<MultiSeries> graph_from(const ChartEntry& c, int order) {
    std::vector<MultiSeries> g;
    for (const auto& cs : c.series) {
        MultiSeries s(1, order);
        for (const auto& t : cs.terms) s.add_term(Exponent{t.power}, t.coefficient);
        g.push_back(std::move(s));
    }
    return g;
}

std::size_t index_of(const std::vector<std::string>& names, const std::string& n) {
    for (std::size_t k = 0; k < names.size(); ++k)
        if (names[k] == n) return k;
    return names.size();
}

bool exact_residual_zero(const HoloSystem& h, std::size_t chart, const std::vector<MultiSeries>& graph, int order) {
    MultiSeries fc = h.component(chart).with_order(order).compose(graph, order);
    for (std::size_t j = 0; j < h.dim; ++j) {
        if (j == chart) continue;
        MultiSeries fj = h.component(j).with_order(order).compose(graph, order);
        if (!(fc * graph[j].derivative(0).with_order(order) - fj).is_zero()) return false;
    }
    return true;
}

Outcome residual_property() {
    std::mt19937 rng(6006);
    const int order = 12;
    const std::vector<double> radii{1e-1, 1e-2, 1e-3};
    int series = 0, exact = 0, bad = 0;
    double worst_slope = 1e9;
    PipelineOptions opt;
    opt.mode = "series";
    opt.order = order;
    for (HoloPattern pat : testing::kAllHoloPatterns) {
        for (int t = 0; t < 2; ++t) {
            HoloSystem h = testing::random_holo(rng, pat, order);
            PipelineResult pr = run_pipeline(emit_system_document(to_document(h)), opt);
            if (pr.exit_code != exit_ok) {
                ++bad;
                continue;
            }
            ReportDocument doc = parse_report(pr.output, ReportFormat::json);
            for (const auto& c : doc.charts) {
                if (c.series.empty()) continue;
                ++series;
                std::size_t chart = index_of(doc.variables, c.chart);
                auto graph = graph_from(c, order);
                if (!exact_residual_zero(h, chart, graph, order)) {
                    ++bad;
                    continue;
                }
                std::vector<double> vals;
                for (double r : radii) vals.push_back(residual_numeric_for_graph(h, chart, graph, 12, r));
                if (vals[0] == 0 && vals[1] == 0 && vals[2] == 0) {
                    ++exact;  // the truncated graph is an exact invariant manifold
                    continue;
                }
                bool positive = vals[0] > 0 && vals[1] > 0 && vals[2] > 0;
                double slope = positive ? loglog_slope(radii, vals) : 0;
                worst_slope = std::min(worst_slope, slope);
                if (!positive || slope < order) ++bad;
            }
        }
    }
    Outcome out;
    out.pass = bad == 0 && series > 0;
    out.detail = std::to_string(series) + " emitted series at N = 12 (" + std::to_string(exact) +
                 " exactly invariant), worst decay slope " + fmt("%.2f", worst_slope) + ", " + std::to_string(bad) +
                 " failures";
    return out;
}

// ---- 7 -----------------------------------------------------------------------

Outcome scaling_invariance() {
    std::mt19937 rng(7007);
    int systems = 0, bad = 0;
    for (HoloPattern pat : testing::kAllHoloPatterns) {
        for (int t = 0; t < 2; ++t) {
            HoloSystem h = testing::random_holo(rng, pat, 10);
            auto a = enumerate_centers(h, 10), b = enumerate_centers(scaled(h, 3), 10);
            bool ok = a.size() == b.size();
            for (std::size_t k = 0; ok && k < a.size(); ++k) {
                ok = a[k].chart == b[k].chart && a[k].tangency == b[k].tangency &&
                     a[k].multiplicity == b[k].multiplicity && a[k].graph == b[k].graph &&
                     a[k].free_parameters.size() == b[k].free_parameters.size() &&
                     a[k].period_factor == 3 * b[k].period_factor;
            }
            ++systems;
            if (!ok) ++bad;
        }
    }
    Outcome out;
    out.pass = bad == 0;
    out.detail = std::to_string(systems) + " systems over all normal forms, " + std::to_string(bad) + " differences";
    return out;
}

// ---- 8 -----------------------------------------------------------------------

Outcome rk4_convergence() {
    HoloSystem rot = make_holo_system(SmallMatrix(1, {I}), {MultiSeries(1, 4)});
    auto error = [&](double step) {
        Trajectory tr = integrate(rot, {std::complex<double>(1, 0)}, 2 * std::numbers::pi, step);
        return std::abs(tr.final_state()[0] - std::complex<double>(1, 0));
    };
    double step = 0.2, prev = error(step);
    std::ostringstream ratios;
    bool ok = true;
    int halvings = 0;
    while (prev >= 1e-12 && halvings < 12) {
        step /= 2;
        double err = error(step);
        if (err < 1e-12) break;
        double ratio = prev / err;
        ratios << (halvings ? ", " : "") << fmt("%.2f", ratio);
        ok = ok && ratio >= 12 && ratio <= 20;
        prev = err;
        ++halvings;
    }
    Outcome out;
    out.pass = ok && halvings >= 3;
    out.detail = "ratios per halving from step 0.2: " + ratios.str();
    return out;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"nonresonant uniqueness", nonresonant_uniqueness},
        {"resonant trichotomy", resonant_trichotomy},
        {"b200 decides the x chart", b200_case},
        {"Jordan no-go", jordan_no_go},
        {"Poincaré center", poincare_center},
        {"residual decay", residual_property},
        {"scaling invariance", scaling_invariance},
        {"RK4 convergence", rk4_convergence},
    };
    int failed = 0, index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        if (!o.pass) ++failed;
        std::printf("criterion %d %s: %s (%s)\n", index, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    return failed == 0 ? 0 : 1;
}
