#pragma once

#include "incmeter/core/error.hpp"
#include "incmeter/core/value.hpp"

#include <optional>
#include <vector>

namespace incmeter {

enum class Relation { le, eq, ge };

struct LinearConstraint {
    std::vector<Rational> coeffs;
    Relation rel = Relation::le;
    Rational rhs;
};

/// maximize objective . x  subject to constraints, x_j >= lower_j (default 0).
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<Rational> objective;
    std::vector<LinearConstraint> constraints;
    std::vector<Rational> lower;
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
    LpStatus status = LpStatus::infeasible;
    Rational value;
    std::vector<Rational> x;
};

namespace detail {

/// Dense tableau with explicit reduced-cost row; Bland's rule throughout.
class Tableau {
public:
    Tableau(std::size_t cols) : cols_(cols) {}

    void add_row(std::vector<Rational> coeffs, Rational rhs, std::size_t basic) {
        coeffs.resize(cols_);
        coeffs.push_back(std::move(rhs));
        rows_.push_back(std::move(coeffs));
        basis_.push_back(basic);
    }

    std::size_t row_count() const { return rows_.size(); }
    std::size_t basic(std::size_t r) const { return basis_[r]; }
    const Rational& rhs(std::size_t r) const { return rows_[r][cols_]; }
    const Rational& at(std::size_t r, std::size_t c) const { return rows_[r][c]; }

    void remove_row(std::size_t r) {
        rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(r));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

    void pivot(std::size_t r, std::size_t c) {
        Rational p = rows_[r][c];
        for (auto& v : rows_[r])
            if (!is_zero(v)) v /= p;
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (i != r) eliminate(rows_[i], r, c);
        eliminate(cost_, r, c);
        basis_[r] = c;
    }

    /// Maximizes obj over the allowed columns starting from the current basis.
    LpStatus maximize(const std::vector<Rational>& obj, const std::vector<char>& allowed) {
        cost_.assign(cols_ + 1, Rational(0));
        for (std::size_t j = 0; j < cols_; ++j) cost_[j] = obj[j];
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rational& cb = obj[basis_[i]];
            if (is_zero(cb)) continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                if (!is_zero(rows_[i][j])) cost_[j] -= cb * rows_[i][j];
        }
        for (;;) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < cols_; ++j)
                if (allowed[j] && cost_[j] > 0) {
                    enter = j;
                    break;
                }
            if (!enter) return LpStatus::optimal;
            std::optional<std::size_t> leave;
            Rational best;
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                const Rational& a = rows_[i][*enter];
                if (a <= 0) continue;
                Rational ratio = rows_[i][cols_] / a;
                if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (!leave) return LpStatus::unbounded;
            pivot(*leave, *enter);
        }
    }

    std::vector<Rational> solution() const {
        std::vector<Rational> x(cols_, Rational(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) x[basis_[i]] = rows_[i][cols_];
        return x;
    }

private:
    static bool is_zero(const Rational& r) { return r.is_zero(); }

    void eliminate(std::vector<Rational>& row, std::size_t r, std::size_t c) {
        if (is_zero(row[c])) return;
        Rational f = row[c];
        const auto& src = rows_[r];
        for (std::size_t j = 0; j <= cols_; ++j)
            if (!is_zero(src[j])) row[j] -= f * src[j];
    }

    std::size_t cols_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<std::size_t> basis_;
    std::vector<Rational> cost_;
};

} // namespace detail

/// Exact two-phase simplex.
inline LpSolution simplex_max(const LinearProgram& lp) {
    const std::size_t n = lp.num_vars;
    if (lp.objective.size() != n) throw Error("objective length differs from variable count");
    std::vector<Rational> lower = lp.lower;
    lower.resize(n, Rational(0));

    // Shift x = y + lower and orient every row to a non-negative right-hand side.
    struct Row {
        std::vector<Rational> a;
        Relation rel;
        Rational b;
    };
    std::vector<Row> rows;
    for (const auto& c : lp.constraints) {
        if (c.coeffs.size() != n) throw Error("constraint length differs from variable count");
        Row r{c.coeffs, c.rel, c.rhs};
        for (std::size_t j = 0; j < n; ++j) r.b -= r.a[j] * lower[j];
        if (r.b < 0) {
            for (auto& v : r.a) v = -v;
            r.b = -r.b;
            if (r.rel == Relation::le) r.rel = Relation::ge;
            else if (r.rel == Relation::ge) r.rel = Relation::le;
        }
        rows.push_back(std::move(r));
    }

    std::size_t slacks = 0, artificials = 0;
    for (const auto& r : rows) {
        if (r.rel != Relation::eq) ++slacks;
        if (r.rel != Relation::le) ++artificials;
    }
    const std::size_t cols = n + slacks + artificials;
    const std::size_t first_art = n + slacks;
    detail::Tableau t(cols);
    std::size_t s = n, a = first_art;
    for (const auto& r : rows) {
        std::vector<Rational> coeffs(cols, Rational(0));
        for (std::size_t j = 0; j < n; ++j) coeffs[j] = r.a[j];
        std::size_t basic = 0;
        if (r.rel == Relation::le) {
            coeffs[s] = 1;
            basic = s++;
        } else {
            if (r.rel == Relation::ge) coeffs[s++] = -1;
            coeffs[a] = 1;
            basic = a++;
        }
        t.add_row(std::move(coeffs), r.b, basic);
    }

    std::vector<char> all(cols, 1);
    if (artificials) {
        std::vector<Rational> phase1(cols, Rational(0));
        for (std::size_t j = first_art; j < cols; ++j) phase1[j] = -1;
        t.maximize(phase1, all);
        Rational infeas = 0;
        for (std::size_t i = 0; i < t.row_count(); ++i)
            if (t.basic(i) >= first_art) infeas += t.rhs(i);
        if (infeas > 0) return LpSolution{LpStatus::infeasible, 0, {}};
        for (std::size_t i = 0; i < t.row_count();) {
            if (t.basic(i) < first_art) {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < first_art && !col; ++j)
                if (!t.at(i, j).is_zero()) col = j;
            if (col) {
                t.pivot(i, *col);
                ++i;
            } else {
                t.remove_row(i);
            }
        }
    }

    std::vector<char> allowed(cols, 0);
    for (std::size_t j = 0; j < first_art; ++j) allowed[j] = 1;
    std::vector<Rational> obj(cols, Rational(0));
    for (std::size_t j = 0; j < n; ++j) obj[j] = lp.objective[j];
    if (t.maximize(obj, allowed) == LpStatus::unbounded) return LpSolution{LpStatus::unbounded, 0, {}};

    auto y = t.solution();
    LpSolution out{LpStatus::optimal, 0, {}};
    for (std::size_t j = 0; j < n; ++j) {
        out.x.push_back(y[j] + lower[j]);
        out.value += lp.objective[j] * out.x.back();
    }
    return out;
}

} // namespace incmeter
