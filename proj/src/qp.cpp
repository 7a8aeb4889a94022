#include "gridpulse/qp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gridpulse/simplex.hpp"

namespace gridpulse::opt {

namespace {

constexpr double kTol = 1e-9;

// Equality-constrained step: minimize the QP over {p : A_W (z+p) = b_W} via
// the KKT system. Returns (p, lambda).
std::pair<Vec, Vec> eqp_step(const Mat& h, const Vec& g, const Vec& z, const Mat& aw,
                             const Vec& resid_w) {
    const int n = static_cast<int>(h.rows());
    const int k = static_cast<int>(aw.rows());
    Mat kkt = Mat::Zero(n + k, n + k);
    kkt.topLeftCorner(n, n) = h;
    if (k > 0) {
        kkt.topRightCorner(n, k) = aw.transpose();
        kkt.bottomLeftCorner(k, n) = aw;
    }
    Vec rhs(n + k);
    rhs.head(n) = -(h * z + g);
    rhs.tail(k) = resid_w;
    const Vec sol = kkt.fullPivLu().solve(rhs);
    return {sol.head(n), k > 0 ? Vec(sol.tail(k)) : Vec()};
}

}  // namespace

void QpProblem::validate() const {
    if (h.rows() != h.cols()) throw ValidationError("QP: H must be square");
    if (g.size() != h.rows()) throw ValidationError("QP: g size mismatch");
    if (a.size() > 0 && a.cols() != h.rows()) throw ValidationError("QP: A column mismatch");
    if (a.rows() != b.size()) throw ValidationError("QP: A/b row mismatch");
}

bool qp_feasible(const QpProblem& p, const Vec& z, double tol) {
    if (p.a.rows() == 0) return true;
    return ((p.a * z - p.b).array() <= tol).all();
}

Vec qp_phase1(const QpProblem& p) {
    const int n = static_cast<int>(p.h.rows());
    const int m = static_cast<int>(p.a.rows());
    // min sum(t) s.t. A z - t <= b, t >= 0
    LpProblem lp;
    lp.c = Vec::Zero(n + m);
    lp.c.tail(m).setOnes();
    lp.a_ub = Mat::Zero(m, n + m);
    lp.a_ub.leftCols(n) = p.a;
    lp.a_ub.rightCols(m) = -Mat::Identity(m, m);
    lp.b_ub = p.b;
    lp.lb = Vec::Constant(n + m, -kInf);
    lp.lb.tail(m).setZero();
    lp.ub = Vec::Constant(n + m, kInf);
    const LpSolution sol = solve_lp(lp);
    if (sol.objective > 1e-6 * (1.0 + p.b.cwiseAbs().maxCoeff()))
        throw InfeasibleError("QP constraints have no feasible point");
    return sol.x.head(n);
}

QpSolution solve_qp(const QpProblem& p, const Vec& z0) {
    p.validate();
    const int n = static_cast<int>(p.h.rows());
    const int m = static_cast<int>(p.a.rows());

    Vec z = z0;
    if (!qp_feasible(p, z)) z = qp_phase1(p);

    std::vector<int> working;
    std::vector<char> in_working(static_cast<std::size_t>(m), 0);
    const double feas_tol = 1e-8;
    for (int i = 0; i < m; ++i) {
        if (std::abs(p.a.row(i) * z - p.b(i)) <= feas_tol) {
            // keep the working set linearly independent: add rows greedily
            Mat trial(static_cast<int>(working.size()) + 1, n);
            for (std::size_t k = 0; k < working.size(); ++k) trial.row(static_cast<int>(k)) = p.a.row(working[k]);
            trial.row(static_cast<int>(working.size())) = p.a.row(i);
            if (Eigen::FullPivLU<Mat>(trial).rank() == trial.rows()) {
                working.push_back(i);
                in_working[static_cast<std::size_t>(i)] = 1;
            }
        }
    }

    QpSolution out;
    const int max_iter = 100 * (n + m + 1);
    for (int iter = 0; iter < max_iter; ++iter) {
        out.iterations = iter;
        Mat aw(static_cast<int>(working.size()), n);
        for (std::size_t k = 0; k < working.size(); ++k)
            aw.row(static_cast<int>(k)) = p.a.row(working[k]);
        auto [step, lambda] = eqp_step(p.h, p.g, z, aw, Vec::Zero(aw.rows()));

        if (step.norm() <= 1e-10 * (1.0 + z.norm())) {
            // stationary on the working set; check multipliers
            int drop = -1;
            double most_negative = -1e-9;
            for (int k = 0; k < lambda.size(); ++k) {
                if (lambda(k) < most_negative) {
                    most_negative = lambda(k);
                    drop = k;
                }
            }
            if (drop < 0) {
                out.z = z;
                out.objective = 0.5 * z.dot(p.h * z) + p.g.dot(z);
                return out;
            }
            in_working[static_cast<std::size_t>(working[static_cast<std::size_t>(drop)])] = 0;
            working.erase(working.begin() + drop);
            continue;
        }

        // ratio test against the inactive rows
        double alpha = 1.0;
        int blocking = -1;
        for (int i = 0; i < m; ++i) {
            if (in_working[static_cast<std::size_t>(i)]) continue;
            const double dir = p.a.row(i) * step;
            if (dir > kTol) {
                const double slack = p.b(i) - p.a.row(i) * z;
                const double a_i = slack / dir;
                if (a_i < alpha) {
                    alpha = a_i;
                    blocking = i;
                }
            }
        }
        z += std::max(0.0, alpha) * step;
        if (blocking >= 0) {
            working.push_back(blocking);
            in_working[static_cast<std::size_t>(blocking)] = 1;
        }
    }
    throw NumericError("active-set QP: iteration limit reached");
}

}  // namespace gridpulse::opt
