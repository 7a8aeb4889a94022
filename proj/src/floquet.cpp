#include "gridpulse/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace gridpulse::stability {

namespace {

CVec sorted_eigenvalues(const Mat& m) {
    Eigen::EigenSolver<Mat> es(m);
    if (es.info() != Eigen::Success) throw NumericError("eigenvalue iteration failed");
    CVec ev = es.eigenvalues();
    std::vector<Complex> v(ev.data(), ev.data() + ev.size());
    std::sort(v.begin(), v.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = v[static_cast<std::size_t>(i)];
    return ev;
}

double relative_gap(const CVec& a, const CVec& b) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double scale = std::max(1e-12, std::abs(b(i)));
        worst = std::max(worst, std::abs(a(i) - b(i)) / scale);
    }
    return worst;
}

}  // namespace

void PeriodicLinearSystem::validate() const {
    if (a0.rows() != a0.cols()) throw ValidationError("PeriodicLinearSystem: A0 must be square");
    if (ap.rows() != a0.rows() || ap.cols() != a0.cols())
        throw ValidationError("PeriodicLinearSystem: Ap must match A0 dimensions");
    if (!(omega_p > 0.0)) throw ValidationError("PeriodicLinearSystem: omega_p must be > 0");
}

double operator_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

Mat monodromy_matrix(const PeriodicLinearSystem& sys, int steps_per_period) {
    sys.validate();
    if (steps_per_period < 100)
        throw ValidationError("monodromy: steps_per_period must be >= 100");
    const double t_end = sys.period_s();
    const double h = t_end / steps_per_period;
    const Eigen::Index n = sys.a0.rows();
    Mat phi = Mat::Identity(n, n);
    for (int k = 0; k < steps_per_period; ++k) {
        const double t = k * h;
        const Mat k1 = sys.at(t) * phi;
        const Mat k2 = sys.at(t + 0.5 * h) * (phi + 0.5 * h * k1);
        const Mat k3 = sys.at(t + 0.5 * h) * (phi + 0.5 * h * k2);
        const Mat k4 = sys.at(t + h) * (phi + h * k3);
        phi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return phi;
}

FloquetResult monodromy(const PeriodicLinearSystem& sys, int steps_per_period) {
    const Mat coarse = monodromy_matrix(sys, steps_per_period);
    const Mat fine = monodromy_matrix(sys, 2 * steps_per_period);
    const CVec mu_coarse = sorted_eigenvalues(coarse);
    const CVec mu_fine = sorted_eigenvalues(fine);
    if (relative_gap(mu_coarse, mu_fine) > 1e-6)
        throw NumericError(
            "monodromy: multipliers did not converge under step doubling; "
            "increase steps_per_period");

    FloquetResult result;
    result.monodromy = fine;
    result.multipliers = mu_fine;
    result.spectral_radius = mu_fine.cwiseAbs().maxCoeff();
    result.stable = result.spectral_radius < 1.0;
    return result;
}

PerturbativeResult monodromy_perturbative(const PeriodicLinearSystem& sys, int steps) {
    sys.validate();
    if (steps < 10) throw ValidationError("monodromy_perturbative: steps must be >= 10");
    if (steps % 2 != 0) ++steps;  // composite Simpson needs an even interval count

    PerturbativeResult out;
    const double norm_a0 = operator_norm(sys.a0);
    if (norm_a0 <= 0.0) throw ValidationError("monodromy_perturbative: ||A0|| must be > 0");
    out.epsilon = operator_norm(sys.ap) / norm_a0;
    out.epsilon_warning = out.epsilon >= 0.3;

    const double t_end = sys.period_s();
    const double h = t_end / steps;
    const Eigen::Index n = sys.a0.rows();

    // exp(A0 * k h) built incrementally from one step exponential
    const Mat e_h = (sys.a0 * h).exp();
    std::vector<Mat> e(static_cast<std::size_t>(steps) + 1);
    e[0] = Mat::Identity(n, n);
    for (int k = 1; k <= steps; ++k) e[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(k - 1)] * e_h;

    Mat correction = Mat::Zero(n, n);
    for (int k = 0; k <= steps; ++k) {
        const double s = k * h;
        const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        correction += w * std::cos(sys.omega_p * s) *
                      (e[static_cast<std::size_t>(steps - k)] * sys.ap * e[static_cast<std::size_t>(k)]);
    }
    correction *= h / 3.0;

    out.monodromy = e[static_cast<std::size_t>(steps)] + correction;
    out.multipliers = sorted_eigenvalues(out.monodromy);
    return out;
}

PulseMargin pulse_margin(const PeriodicLinearSystem& sys, double zeta_min, double omega0) {
    sys.validate();
    if (zeta_min <= 0.0) throw ValidationError("pulse_margin: zeta_min must be > 0");
    const double norm_a0 = operator_norm(sys.a0);
    if (norm_a0 <= 0.0) throw ValidationError("pulse_margin: ||A0|| must be > 0");
    PulseMargin margin;
    margin.m_pulse = operator_norm(sys.ap) / norm_a0;
    margin.p_pulse_limit = margin.m_pulse > 0.0
                               ? 2.0 * zeta_min * omega0 / margin.m_pulse
                               : std::numeric_limits<double>::infinity();
    return margin;
}

}  // namespace gridpulse::stability
