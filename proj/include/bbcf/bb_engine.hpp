#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bbcf/multi_series.hpp"
#include "bbcf/small_matrix.hpp"

namespace bbcf {

// Briot-Bouquet system x*y' = px*x + A*y + nonlinear(x, y) with y in C^n.
// Series variable 0 is x, variables 1..n are y_1..y_n.
struct BBSystem {
    std::size_t n = 0;
    SmallMatrix a;
    ExactVector px;
    std::vector<MultiSeries> nonlinear;  // nvars n+1, terms of degree >= 2 only

    int order() const;
    // px_i*x + sum_j A_ij y_j + nonlinear_i
    MultiSeries full_rhs(std::size_t i) const;
};

BBSystem make_bb_system(SmallMatrix a, ExactVector px, std::vector<MultiSeries> nonlinear);

// Splits complete right-hand sides f_i(x, y) into linear and nonlinear
// parts. Throws PreconditionError when some f_i has a constant term.
BBSystem bb_from_rhs(std::span<const MultiSeries> rhs);

struct FreeParameter {
    int order = 0;             // power of x whose coefficient is free
    std::size_t variable = 0;  // dependent variable index (0-based)
    std::size_t id = 0;        // position in the parameter value list
};

// y_i(x) = sum_{k=1..order} coefficients[k][i] x^k
struct FormalSolution {
    int order = 0;
    std::vector<ExactVector> coefficients;  // index 0 is the zero vector
    std::vector<FreeParameter> free_parameters;

    MultiSeries component(std::size_t i) const;  // one-variable series
    std::size_t dimension() const { return coefficients.empty() ? 0 : coefficients[0].size(); }
};

FormalSolution formal_solve_nonresonant(const BBSystem& bb, int order);

struct ReductionStep {
    BBSystem reduced;                      // valid unless blocked
    ExactVector shift;                     // the x^1 coefficients peeled off
    std::vector<std::size_t> free_columns; // variables whose shift was free
    bool blocked = false;
    ExactComplex obstruction;              // nonzero when blocked
    // (variable, linear-in-x coefficient) for rows of (I - A) that vanish.
    std::vector<std::pair<std::size_t, ExactComplex>> resonant_rows;
};

// One shear y = x*(y~ + w) with (I - A) w = px, followed by division by x.
// Free components of w take `free_values` (zero when absent).
ReductionStep reduction_step(const BBSystem& bb, std::span<const ExactComplex> free_values = {});

enum class BBKind { no_solution, unique, family };
enum class ResonanceCase {
    nonresonant,           // no positive integer eigenvalue
    single,                // one simple positive integer eigenvalue
    distinct_pair,         // two distinct positive integer eigenvalues
    equal_diagonalizable,  // double positive integer eigenvalue, diagonalizable
    equal_jordan,          // double positive integer eigenvalue, Jordan block
};

std::string to_string(BBKind kind);
std::string to_string(ResonanceCase c);

struct ObstructionConstant {
    std::string label;         // p_bar, r_bar, r_hat or defect
    std::size_t variable = 0;  // row of the resonant equation
    int order = 0;             // power of x at which it was read
    ExactComplex value;
};

struct BBClassification {
    BBKind kind = BBKind::unique;
    ResonanceCase resonance = ResonanceCase::nonresonant;
    std::vector<ObstructionConstant> obstructions;
    std::optional<FormalSolution> solution;  // absent for no_solution
    std::optional<int> blocking_order;       // set for no_solution
};

// Full classification by the reduction cascade. `parameters` fixes the free
// coefficients in the order they appear (missing ones are zero).
BBClassification classify(const BBSystem& bb, int order, std::span<const ExactComplex> parameters = {});

// x*y_i'(x) - f_i(x, y(x)) for each component, as one-variable series
// truncated at `order`.
std::vector<MultiSeries> residual(const BBSystem& bb, const FormalSolution& sol, int order);

}  // namespace bbcf
