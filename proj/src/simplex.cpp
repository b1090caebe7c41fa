#include "parl/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parl {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-6;
constexpr int kDegenerateLimit = 60;  // consecutive zero-step pivots before Bland

enum class VStatus : unsigned char { AtLower, AtUpper, AtZero, Basic };

struct Tableau {
    int m = 0;       // rows
    int n = 0;       // structural columns
    int width = 0;   // structural + slack + artificial
    int art0 = 0;    // first artificial column
    std::vector<double> t;       // row-major, m x width
    std::vector<double> objrow;  // reduced costs, size width
    std::vector<double> lb, ub;  // per column
    std::vector<VStatus> status;
    std::vector<int> basis;      // column basic in each row
    std::vector<double> xb;      // value of the basic variable per row
    int pivots = 0;
    int degenerate_run = 0;

    double* row(int r) { return t.data() + static_cast<size_t>(r) * width; }
    const double* row(int r) const { return t.data() + static_cast<size_t>(r) * width; }

    double nonbasic_value(int j) const {
        switch (status[j]) {
            case VStatus::AtLower: return lb[j];
            case VStatus::AtUpper: return ub[j];
            default: return 0.0;
        }
    }

    void pivot(int r, int s) {
        double* pr = row(r);
        const double inv = 1.0 / pr[s];
        for (int j = 0; j < width; ++j) pr[j] *= inv;
        pr[s] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            double* ri = row(i);
            const double f = ri[s];
            if (f == 0.0) continue;
            for (int j = 0; j < width; ++j) ri[j] -= f * pr[j];
            ri[s] = 0.0;
        }
        const double fo = objrow[s];
        if (fo != 0.0) {
            for (int j = 0; j < width; ++j) objrow[j] -= fo * pr[j];
            objrow[s] = 0.0;
        }
        ++pivots;
    }

    // One phase of the bounded-variable simplex, maximizing objrow.
    // Artificial columns never re-enter once locked.
    // Returns false on unboundedness.
    bool optimize(bool lock_artificials, long max_pivots) {
        bool bland = false;
        while (true) {
            if (pivots > max_pivots)
                throw std::runtime_error("solve_lp: pivot budget exhausted (numerical stall)");
            // Entering variable.
            int enter = -1;
            double best = 0.0;
            const int scan_end = lock_artificials ? art0 : width;
            for (int j = 0; j < scan_end; ++j) {
                if (status[j] == VStatus::Basic) continue;
                if (lb[j] == ub[j]) continue;  // fixed
                double d = objrow[j];
                bool eligible = (status[j] == VStatus::AtLower && d > kCostTol) ||
                                (status[j] == VStatus::AtUpper && d < -kCostTol) ||
                                (status[j] == VStatus::AtZero && std::abs(d) > kCostTol);
                if (!eligible) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    enter = j;
                }
            }
            if (enter < 0) return true;  // optimal

            const double dir = status[enter] == VStatus::AtUpper
                                   ? -1.0
                                   : (status[enter] == VStatus::AtZero && objrow[enter] < 0.0
                                          ? -1.0
                                          : 1.0);
            // Ratio test.
            double t_limit = std::numeric_limits<double>::infinity();
            if (std::isfinite(lb[enter]) && std::isfinite(ub[enter]))
                t_limit = ub[enter] - lb[enter];
            int leave_row = -1;
            bool leave_at_lower = true;
            double leave_coef = 0.0;
            for (int r = 0; r < m; ++r) {
                const double coef = row(r)[enter] * dir;
                if (std::abs(coef) <= kPivotTol) continue;
                const int k = basis[r];
                double limit;
                bool at_lower;
                if (coef > 0.0) {
                    if (!std::isfinite(lb[k])) continue;
                    limit = (xb[r] - lb[k]) / coef;
                    at_lower = true;
                } else {
                    if (!std::isfinite(ub[k])) continue;
                    limit = (ub[k] - xb[r]) / (-coef);
                    at_lower = false;
                }
                if (limit < 0.0) limit = 0.0;
                if (limit < t_limit - 1e-12 ||
                    (limit < t_limit + 1e-12 && leave_row >= 0 &&
                     std::abs(coef) > std::abs(leave_coef) + 1e-12)) {
                    t_limit = limit;
                    leave_row = r;
                    leave_at_lower = at_lower;
                    leave_coef = coef;
                }
            }
            if (!std::isfinite(t_limit)) return false;  // unbounded direction

            // Apply the step to all basic values.
            if (t_limit > 0.0) {
                for (int r = 0; r < m; ++r) {
                    const double coef = row(r)[enter] * dir;
                    if (coef != 0.0) xb[r] -= coef * t_limit;
                }
                degenerate_run = 0;
                bland = false;
            } else if (++degenerate_run > kDegenerateLimit) {
                bland = true;
            }

            if (leave_row < 0) {
                // Bound flip: the entering variable jumps to its other bound.
                status[enter] =
                    status[enter] == VStatus::AtLower ? VStatus::AtUpper : VStatus::AtLower;
                continue;
            }
            const int leave = basis[leave_row];
            const double enter_value = nonbasic_value(enter) + dir * t_limit;
            status[leave] = leave_at_lower ? VStatus::AtLower : VStatus::AtUpper;
            if (leave >= art0) {  // an artificial never returns
                lb[leave] = 0.0;
                ub[leave] = 0.0;
                status[leave] = VStatus::AtLower;
            }
            pivot(leave_row, enter);
            basis[leave_row] = enter;
            xb[leave_row] = enter_value;
            status[enter] = VStatus::Basic;
        }
    }
};

}  // namespace

LpResult solve_lp(const MilpModel& model) {
    std::vector<double> lo(model.vars.size()), hi(model.vars.size());
    for (size_t i = 0; i < model.vars.size(); ++i) {
        lo[i] = model.vars[i].lower;
        hi[i] = model.vars[i].upper;
    }
    return solve_lp(model, lo, hi);
}

LpResult solve_lp(const MilpModel& model, const std::vector<double>& lower,
                  const std::vector<double>& upper) {
    const int n = static_cast<int>(model.vars.size());
    const int m = static_cast<int>(model.cons.size());
    if (static_cast<int>(lower.size()) != n || static_cast<int>(upper.size()) != n)
        throw std::invalid_argument("solve_lp: bound vector size mismatch");

    Tableau tb;
    tb.m = m;
    tb.n = n;
    tb.art0 = n + m;
    tb.width = n + 2 * m;
    tb.t.assign(static_cast<size_t>(m) * tb.width, 0.0);
    tb.lb.assign(tb.width, 0.0);
    tb.ub.assign(tb.width, 0.0);
    tb.status.assign(tb.width, VStatus::AtLower);
    tb.basis.resize(m);
    tb.xb.assign(m, 0.0);

    LpResult result;
    for (int j = 0; j < n; ++j) {
        tb.lb[j] = lower[j];
        tb.ub[j] = upper[j];
        if (tb.lb[j] > tb.ub[j] + 1e-12) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        if (std::isfinite(tb.lb[j])) tb.status[j] = VStatus::AtLower;
        else if (std::isfinite(tb.ub[j])) tb.status[j] = VStatus::AtUpper;
        else tb.status[j] = VStatus::AtZero;
    }
    const double inf = std::numeric_limits<double>::infinity();
    for (int r = 0; r < m; ++r) {
        const auto& c = model.cons[r];
        double* row = tb.row(r);
        for (const auto& [idx, coeff] : c.terms) row[idx] += coeff;
        const int slack = n + r;
        row[slack] = 1.0;
        switch (c.sense) {
            case Sense::LessEqual:
                tb.lb[slack] = 0.0;
                tb.ub[slack] = inf;
                tb.status[slack] = VStatus::AtLower;
                break;
            case Sense::GreaterEqual:
                tb.lb[slack] = -inf;
                tb.ub[slack] = 0.0;
                tb.status[slack] = VStatus::AtUpper;
                break;
            case Sense::Equal:
                tb.lb[slack] = 0.0;
                tb.ub[slack] = 0.0;
                tb.status[slack] = VStatus::AtLower;
                break;
        }
    }

    // Residuals with every non-artificial variable at its resting value;
    // artificials absorb them so the initial basis is identity.
    std::vector<double> phase1_obj(tb.width, 0.0);
    for (int r = 0; r < m; ++r) {
        double* row = tb.row(r);
        double residual = model.cons[r].rhs;
        for (int j = 0; j < n + m; ++j)
            if (row[j] != 0.0) residual -= row[j] * tb.nonbasic_value(j);
        const int art = tb.art0 + r;
        const double sigma = residual >= 0.0 ? 1.0 : -1.0;
        row[art] = sigma;
        if (sigma < 0.0)
            for (int j = 0; j < tb.width; ++j) row[j] = -row[j];
        // After normalization the artificial coefficient is +1.
        tb.lb[art] = 0.0;
        tb.ub[art] = inf;
        tb.status[art] = VStatus::Basic;
        tb.basis[r] = art;
        tb.xb[r] = std::abs(residual);
        phase1_obj[art] = -1.0;
    }

    const long max_pivots = 4000L + 60L * (static_cast<long>(m) + n);

    // Phase 1: drive artificial infeasibility to zero.
    bool need_phase1 = false;
    for (int r = 0; r < m; ++r)
        if (tb.xb[r] > kFeasTol) need_phase1 = true;
    tb.objrow = phase1_obj;
    // Reduced costs for the artificial basis: d_j = c_j - sum_r c_B(r) T[r][j].
    for (int r = 0; r < m; ++r) {
        const double* row = tb.row(r);
        for (int j = 0; j < tb.width; ++j) tb.objrow[j] += row[j];  // c_B = -1 each
    }
    for (int r = 0; r < m; ++r) tb.objrow[tb.basis[r]] = 0.0;
    double rhs_scale = 1.0;
    for (const auto& c : model.cons) rhs_scale = std::max(rhs_scale, std::abs(c.rhs));
    if (need_phase1) {
        if (!tb.optimize(false, max_pivots))
            throw std::runtime_error("solve_lp: phase-1 became unbounded (numerical trouble)");
        double infeasibility = 0.0;
        for (int r = 0; r < m; ++r)
            if (tb.basis[r] >= tb.art0) infeasibility += std::abs(tb.xb[r]);
        if (infeasibility > kFeasTol * rhs_scale) {
            result.status = LpStatus::Infeasible;
            result.pivots = tb.pivots;
            return result;
        }
    }
    // Pivot out artificials still basic at zero. Rows whose real
    // coefficients all vanished are redundant; their artificial stays
    // basic, pinned to zero by its bounds.
    for (int r = 0; r < m; ++r) {
        if (tb.basis[r] < tb.art0) continue;
        const double* row = tb.row(r);
        int col = -1;
        double best = 1e-7;
        for (int j = 0; j < tb.art0; ++j)
            if (tb.status[j] != VStatus::Basic && tb.lb[j] != tb.ub[j] &&
                std::abs(row[j]) > best) {
                best = std::abs(row[j]);
                col = j;
            }
        if (col >= 0) {
            const int art = tb.basis[r];
            const double keep = tb.xb[r];
            const double coef = tb.row(r)[col];
            tb.status[art] = VStatus::AtLower;
            tb.lb[art] = tb.ub[art] = 0.0;
            const double entering_value = tb.nonbasic_value(col) + keep / coef;
            tb.pivot(r, col);
            tb.basis[r] = col;
            tb.status[col] = VStatus::Basic;
            tb.xb[r] = entering_value;
        }
    }
    // Lock every artificial column at zero for phase 2.
    for (int j = tb.art0; j < tb.width; ++j) {
        tb.lb[j] = 0.0;
        tb.ub[j] = 0.0;
        if (tb.status[j] != VStatus::Basic) tb.status[j] = VStatus::AtLower;
    }

    // Phase 2: real objective.
    tb.objrow.assign(tb.width, 0.0);
    for (int j = 0; j < n; ++j) tb.objrow[j] = model.objective[j];
    for (int r = 0; r < m; ++r) {
        const int k = tb.basis[r];
        const double cb = k < n ? model.objective[k] : 0.0;
        if (cb == 0.0) continue;
        const double* row = tb.row(r);
        for (int j = 0; j < tb.width; ++j) tb.objrow[j] -= cb * row[j];
    }
    for (int r = 0; r < m; ++r) tb.objrow[tb.basis[r]] = 0.0;
    tb.degenerate_run = 0;
    if (!tb.optimize(true, max_pivots)) {
        result.status = LpStatus::Unbounded;
        result.pivots = tb.pivots;
        return result;
    }

    // Assemble the primal point.
    result.x.assign(n, 0.0);
    for (int j = 0; j < n; ++j)
        if (tb.status[j] != VStatus::Basic) result.x[j] = tb.nonbasic_value(j);
    for (int r = 0; r < m; ++r)
        if (tb.basis[r] < n) result.x[tb.basis[r]] = tb.xb[r];
    // Clamp roundoff into the box.
    for (int j = 0; j < n; ++j)
        result.x[j] = std::min(std::max(result.x[j], lower[j]), upper[j]);
    result.objective = 0.0;
    for (int j = 0; j < n; ++j) result.objective += model.objective[j] * result.x[j];
    result.pivots = tb.pivots;
    result.status = LpStatus::Optimal;
    return result;
}

}  // namespace parl
