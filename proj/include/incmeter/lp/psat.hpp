#pragma once

#include "incmeter/core/measure_value.hpp"
#include "incmeter/lp/simplex.hpp"

#include <vector>

namespace incmeter {

/// Optimal distribution of the eta program over its columns.
struct PsatResult {
    Rational eta;                      // the optimal eta
    std::vector<Rational> probability; // per column
    MeasureValue measure() const { return MeasureValue(Rational(1 - eta)); }
};

/// max eta s.t. for every row r: sum of x_j over columns j covering r >= eta,
/// sum x_j = 1, x >= 0, eta <= 1. `covers[j][r]` says column j makes row r true.
inline PsatResult solve_psat_eta(std::size_t rows, const std::vector<std::vector<char>>& covers) {
    if (rows == 0) return PsatResult{1, std::vector<Rational>(covers.size(), Rational(0))};
    if (covers.empty()) throw Error("probabilistic program needs at least one interpretation");
    const std::size_t k = covers.size();
    LinearProgram lp;
    lp.num_vars = k + 1;
    lp.objective.assign(k + 1, Rational(0));
    lp.objective[k] = 1;
    for (std::size_t r = 0; r < rows; ++r) {
        LinearConstraint c;
        c.coeffs.assign(k + 1, Rational(0));
        for (std::size_t j = 0; j < k; ++j)
            if (covers[j][r]) c.coeffs[j] = 1;
        c.coeffs[k] = -1;
        c.rel = Relation::ge;
        c.rhs = 0;
        lp.constraints.push_back(std::move(c));
    }
    LinearConstraint sum;
    sum.coeffs.assign(k + 1, Rational(1));
    sum.coeffs[k] = 0;
    sum.rel = Relation::eq;
    sum.rhs = 1;
    lp.constraints.push_back(std::move(sum));
    LinearConstraint cap;
    cap.coeffs.assign(k + 1, Rational(0));
    cap.coeffs[k] = 1;
    cap.rel = Relation::le;
    cap.rhs = 1;
    lp.constraints.push_back(std::move(cap));

    auto sol = simplex_max(lp);
    if (sol.status != LpStatus::optimal) throw Error("probabilistic program has no optimum");
    PsatResult out;
    out.eta = sol.x[k];
    out.probability.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(k));
    return out;
}

} // namespace incmeter
