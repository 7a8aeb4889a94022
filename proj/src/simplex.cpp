#include "gridpulse/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gridpulse::opt {

namespace {

constexpr double kTol = 1e-9;

// Standard-form data: min c'y, A y = b, y >= 0, b >= 0.
struct Standard {
    Mat a;
    Vec b;
    Vec c;
    double c0 = 0.0;  // constant offset from variable shifts

    // mapping back to user variables: x_j = shift_j + sum(sign * y_col)
    struct VarMap {
        int pos = -1;   // column of the positive part (-1 if none)
        int neg = -1;   // column of the negated part (-1 if none)
        double shift = 0.0;
        bool flipped = false;  // x = shift - y_pos
    };
    std::vector<VarMap> vmap;
};

Standard standardize(const LpProblem& p) {
    const int n = static_cast<int>(p.n());
    const int m_eq = static_cast<int>(p.b_eq.size());
    const int m_ub = static_cast<int>(p.b_ub.size());

    Standard s;
    s.vmap.resize(static_cast<std::size_t>(n));

    // Assign internal columns per variable and collect extra upper-bound rows.
    int cols = 0;
    struct UbRow {
        int var;
        double rhs;
    };
    std::vector<UbRow> ub_rows;
    for (int j = 0; j < n; ++j) {
        const double lb = p.lb(j), ub = p.ub(j);
        if (lb > ub + kTol) throw InfeasibleError("LP: variable bounds cross");
        auto& vm = s.vmap[static_cast<std::size_t>(j)];
        if (std::isfinite(lb)) {
            vm.shift = lb;
            vm.pos = cols++;
            if (std::isfinite(ub)) ub_rows.push_back({j, ub - lb});
        } else if (std::isfinite(ub)) {
            vm.shift = ub;  // x = ub - y
            vm.flipped = true;
            vm.pos = cols++;
        } else {
            vm.pos = cols++;
            vm.neg = cols++;
        }
    }

    const int m = m_eq + m_ub + static_cast<int>(ub_rows.size());
    s.a = Mat::Zero(m, cols);
    s.b = Vec::Zero(m);
    s.c = Vec::Zero(cols);

    auto scatter = [&](int row, int j, double coeff) {
        const auto& vm = s.vmap[static_cast<std::size_t>(j)];
        const double sign = vm.flipped ? -coeff : coeff;
        s.a(row, vm.pos) += sign;
        if (vm.neg >= 0) s.a(row, vm.neg) -= coeff;
        s.b(row) -= coeff * vm.shift;
    };

    for (int i = 0; i < m_eq; ++i) {
        s.b(i) = p.b_eq(i);
        for (int j = 0; j < n; ++j)
            if (p.a_eq(i, j) != 0.0) scatter(i, j, p.a_eq(i, j));
    }
    for (int i = 0; i < m_ub; ++i) {
        const int row = m_eq + i;
        s.b(row) = p.b_ub(i);
        for (int j = 0; j < n; ++j)
            if (p.a_ub(i, j) != 0.0) scatter(row, j, p.a_ub(i, j));
    }
    for (std::size_t k = 0; k < ub_rows.size(); ++k) {
        const int row = m_eq + m_ub + static_cast<int>(k);
        s.b(row) = ub_rows[k].rhs;
        const auto& vm = s.vmap[static_cast<std::size_t>(ub_rows[k].var)];
        s.a(row, vm.pos) = 1.0;
    }

    for (int j = 0; j < n; ++j) {
        const auto& vm = s.vmap[static_cast<std::size_t>(j)];
        const double cj = p.c(j);
        s.c0 += cj * vm.shift;
        s.c(vm.pos) += vm.flipped ? -cj : cj;
        if (vm.neg >= 0) s.c(vm.neg) -= cj;
    }

    // Slacks for the inequality rows (user <= rows and the bound rows).
    const int n_slack = m_ub + static_cast<int>(ub_rows.size());
    if (n_slack > 0) {
        Mat a2 = Mat::Zero(m, cols + n_slack);
        a2.leftCols(cols) = s.a;
        for (int i = 0; i < n_slack; ++i) a2(m_eq + i, cols + i) = 1.0;
        s.a.swap(a2);
        Vec c2 = Vec::Zero(cols + n_slack);
        c2.head(cols) = s.c;
        s.c.swap(c2);
    }

    // Normalize to b >= 0 (slack columns may go negative; phase 1 fixes basis).
    for (int i = 0; i < m; ++i) {
        if (s.b(i) < 0.0) {
            s.a.row(i) = -s.a.row(i);
            s.b(i) = -s.b(i);
        }
    }
    return s;
}

class Tableau {
public:
    Tableau(const Mat& a, const Vec& b) : m_(static_cast<int>(b.size())) {
        n_ = static_cast<int>(a.cols());
        t_ = Mat::Zero(m_ + 1, n_ + 1);
        t_.topLeftCorner(m_, n_) = a;
        t_.col(n_).head(m_) = b;
        basis_.assign(static_cast<std::size_t>(m_), -1);
    }

    int rows() const { return m_; }
    int cols() const { return n_; }
    Mat& t() { return t_; }
    std::vector<int>& basis() { return basis_; }

    void set_costs(const Vec& c) {
        t_.row(m_).head(n_) = c.transpose();
        t_(m_, n_) = 0.0;
        // price out the current basis
        for (int i = 0; i < m_; ++i) {
            const int bj = basis_[static_cast<std::size_t>(i)];
            if (bj >= 0 && std::abs(t_(m_, bj)) > 0.0) t_.row(m_) -= t_(m_, bj) * t_.row(i);
        }
    }

    void pivot(int row, int col) {
        t_.row(row) /= t_(row, col);
        for (int i = 0; i <= m_; ++i) {
            if (i == row) continue;
            const double f = t_(i, col);
            if (f != 0.0) t_.row(i) -= f * t_.row(row);
        }
        basis_[static_cast<std::size_t>(row)] = col;
    }

    // Returns false when optimal. Throws UnboundedError on a descent ray.
    bool step(int active_cols, bool bland) {
        int enter = -1;
        if (bland) {
            for (int j = 0; j < active_cols; ++j) {
                if (t_(m_, j) < -kTol) {
                    enter = j;
                    break;
                }
            }
        } else {
            double best = -kTol;
            for (int j = 0; j < active_cols; ++j) {
                if (t_(m_, j) < best) {
                    best = t_(m_, j);
                    enter = j;
                }
            }
        }
        if (enter < 0) return false;

        int leave = -1;
        double best_ratio = kInf;
        for (int i = 0; i < m_; ++i) {
            const double aij = t_(i, enter);
            if (aij > kTol) {
                const double ratio = t_(i, n_) / aij;
                if (ratio < best_ratio - kTol ||
                    (ratio < best_ratio + kTol && leave >= 0 &&
                     basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) throw UnboundedError("LP is unbounded below");
        pivot(leave, enter);
        return true;
    }

    double objective() const { return -t_(m_, n_); }

private:
    int m_ = 0, n_ = 0;
    Mat t_;
    std::vector<int> basis_;
};

void run_simplex(Tableau& tab, int active_cols, int max_iter) {
    int iter = 0;
    const int bland_after = std::max(200, max_iter / 4);
    while (tab.step(active_cols, iter > bland_after)) {
        if (++iter > max_iter) throw NumericError("simplex: pivot limit reached");
    }
}

}  // namespace

void LpProblem::validate() const {
    const auto nn = static_cast<Eigen::Index>(n());
    if (lb.size() != nn || ub.size() != nn)
        throw ValidationError("LP: bound vectors must match variable count");
    if (a_eq.size() > 0 && a_eq.cols() != nn)
        throw ValidationError("LP: a_eq column count mismatch");
    if (a_ub.size() > 0 && a_ub.cols() != nn)
        throw ValidationError("LP: a_ub column count mismatch");
    if (a_eq.rows() != b_eq.size() || a_ub.rows() != b_ub.size())
        throw ValidationError("LP: row count mismatch");
}

LpSolution solve_lp(const LpProblem& problem) {
    problem.validate();
    Standard s = standardize(problem);
    const int m = static_cast<int>(s.b.size());
    const int n = static_cast<int>(s.a.cols());
    const int max_iter = 50 * (m + n) + 2000;

    // Phase 1: artificial variable per row.
    Mat a1 = Mat::Zero(m, n + m);
    a1.leftCols(n) = s.a;
    for (int i = 0; i < m; ++i) a1(i, n + i) = 1.0;
    Tableau tab(a1, s.b);
    for (int i = 0; i < m; ++i) tab.basis()[static_cast<std::size_t>(i)] = n + i;
    Vec c1 = Vec::Zero(n + m);
    c1.tail(m).setOnes();
    tab.set_costs(c1);
    run_simplex(tab, n + m, max_iter);
    if (tab.objective() > 1e-7 * (1.0 + s.b.cwiseAbs().maxCoeff()))
        throw InfeasibleError("LP is infeasible");

    // Drive remaining artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
        if (tab.basis()[static_cast<std::size_t>(i)] >= n) {
            int piv = -1;
            for (int j = 0; j < n; ++j) {
                if (std::abs(tab.t()(i, j)) > 1e-8) {
                    piv = j;
                    break;
                }
            }
            if (piv >= 0) tab.pivot(i, piv);
            // else the row is redundant; the artificial stays basic at zero
        }
    }

    // Phase 2 on the original costs, artificial columns frozen.
    Vec c2 = Vec::Zero(n + m);
    c2.head(n) = s.c;
    tab.set_costs(c2);
    run_simplex(tab, n, max_iter);

    Vec y = Vec::Zero(n);
    for (int i = 0; i < m; ++i) {
        const int bj = tab.basis()[static_cast<std::size_t>(i)];
        if (bj >= 0 && bj < n) y(bj) = tab.t()(i, tab.cols());
    }

    LpSolution out;
    out.x = Vec::Zero(static_cast<Eigen::Index>(problem.n()));
    for (std::size_t j = 0; j < problem.n(); ++j) {
        const auto& vm = s.vmap[j];
        double v = vm.shift;
        if (vm.flipped)
            v -= y(vm.pos);
        else
            v += y(vm.pos);
        if (vm.neg >= 0) v -= y(vm.neg);
        out.x(static_cast<Eigen::Index>(j)) = v;
    }
    out.objective = tab.objective() + s.c0;
    return out;
}

}  // namespace gridpulse::opt
