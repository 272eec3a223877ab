#ifndef GRAVLOOP_GAUGE_PHASE_HPP
#define GRAVLOOP_GAUGE_PHASE_HPP

#include <cmath>
#include <complex>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "gravloop/constants.hpp"
#include "gravloop/errors.hpp"
#include "gravloop/trajectory.hpp"

namespace gravloop {

using Complex = std::complex<double>;

/// Field strengths of the two space-time regions: g for the gravitational
/// region, a for the accelerated one.
struct FieldConfig {
    double g = 0.0;
    double a = 0.0;

    FieldConfig(double g_value, double a_value) : g(g_value), a(a_value) {
        if (!(std::isfinite(g) && std::isfinite(a))) {
            throw std::domain_error("FieldConfig: fields must be finite");
        }
    }

    /// Equivalence-principle configuration: the accelerated region mirrors
    /// the gravitational field strength, a = g in magnitude.
    static FieldConfig equivalence(double g_value) { return FieldConfig(g_value, g_value); }
};

/// A U(1) element: a complex scalar of unit modulus.
class PhaseFactor {
public:
    explicit PhaseFactor(Complex value) : value_(value) {
        if (!std::isfinite(value_.real()) || !std::isfinite(value_.imag())) {
            throw std::domain_error("PhaseFactor: value must be finite");
        }
        if (std::abs(std::abs(value_) - 1.0) > kUnitModulusTol) {
            throw UnitarityError("PhaseFactor: modulus deviates from 1 beyond tolerance");
        }
    }

    static PhaseFactor from_angle(double angle) {
        return PhaseFactor(std::polar(1.0, angle));
    }

    /// Unchecked constructor for divergence experiments only.
    static PhaseFactor non_unitary(Complex value) { return PhaseFactor(value, Unchecked{}); }

    Complex value() const { return value_; }
    bool is_unitary() const { return std::abs(std::abs(value_) - 1.0) <= kUnitModulusTol; }

private:
    struct Unchecked {};
    PhaseFactor(Complex value, Unchecked) : value_(value) {}

    Complex value_;
};

inline double lagrangian_gravity(double m, double g, double lambda, double lambda_dot) {
    if (!(m > 0.0)) {
        throw std::domain_error("lagrangian_gravity: mass must be > 0");
    }
    if (!std::isfinite(m) || !std::isfinite(g) || !std::isfinite(lambda) || !std::isfinite(lambda_dot)) {
        throw std::domain_error("lagrangian_gravity: non-finite input");
    }
    return 0.5 * m * lambda_dot * lambda_dot - m * g * lambda;
}

inline double lagrangian_accelerated(double m, double a, double lambda_dot, double t) {
    if (!(m > 0.0)) {
        throw std::domain_error("lagrangian_accelerated: mass must be > 0");
    }
    if (!std::isfinite(m) || !std::isfinite(a) || !std::isfinite(lambda_dot) || !std::isfinite(t)) {
        throw std::domain_error("lagrangian_accelerated: non-finite input");
    }
    const double v = lambda_dot + a * t;
    return 0.5 * m * v * v;
}

/// lambda_dot per sample, same length as the trajectory.
inline Eigen::VectorXd velocity_profile(const Trajectory& traj) {
    return sampled_derivative(traj.positions(), traj.dt());
}

enum class LagrangianKind { Gravity, Accelerated };

namespace detail {

/// Composite Simpson on odd sample counts, trapezoid otherwise.
inline double integrate_samples(const Eigen::Ref<const Eigen::VectorXd>& f, double h) {
    const Eigen::Index n = f.size();
    if (n % 2 == 1) {
        double sum = f[0] + f[n - 1];
        for (Eigen::Index i = 1; i < n - 1; ++i) {
            sum += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
        }
        return sum * h / 3.0;
    }
    return h * (f.sum() - 0.5 * (f[0] + f[n - 1]));
}

inline Eigen::VectorXd lagrangian_samples(const Trajectory& traj, const FieldConfig& field,
                                          LagrangianKind kind) {
    const Eigen::VectorXd v = velocity_profile(traj);
    const Eigen::VectorXd t = traj.times();
    const Eigen::VectorXd& x = traj.positions();
    Eigen::VectorXd L(traj.size());
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        L[i] = (kind == LagrangianKind::Gravity)
                   ? lagrangian_gravity(traj.mass(), field.g, x[i], v[i])
                   : lagrangian_accelerated(traj.mass(), field.a, v[i], t[i]);
    }
    return L;
}

} // namespace detail

/// Action S = integral of L over [t_start, t_end] on the sample grid.
inline double action(const Trajectory& traj, const FieldConfig& field, LagrangianKind kind) {
    return detail::integrate_samples(detail::lagrangian_samples(traj, field, kind), traj.dt());
}

inline PhaseFactor phase_from_action(double S, const PhysicalConstants& constants = {}) {
    if (!std::isfinite(S)) {
        throw std::domain_error("phase_from_action: action must be finite");
    }
    return PhaseFactor::from_angle(S / constants.hbar);
}

/// Gauge parameter G(lambda, t) = -m g lambda t - (1/6) m g^2 t^3.
inline double gauge_parameter(double m, double g, double lambda, double t) {
    if (!(m > 0.0)) {
        throw std::domain_error("gauge_parameter: mass must be > 0");
    }
    if (!std::isfinite(m) || !std::isfinite(g) || !std::isfinite(lambda) || !std::isfinite(t)) {
        throw std::domain_error("gauge_parameter: non-finite input");
    }
    return -m * g * lambda * t - m * g * g * t * t * t / 6.0;
}

/// Max over samples of |L_g - (L_a + dG/dt)| with a = g. dG/dt is the total
/// time derivative of G along the path, estimated by the same second-order
/// differencing as velocity_profile, so the residual measures the
/// discretization error of the identity (O(h^2) on smooth paths).
inline double gauge_identity_residual(const Trajectory& traj, double g) {
    const FieldConfig field = FieldConfig::equivalence(g);
    const Eigen::VectorXd Lg = detail::lagrangian_samples(traj, field, LagrangianKind::Gravity);
    const Eigen::VectorXd La = detail::lagrangian_samples(traj, field, LagrangianKind::Accelerated);
    const Eigen::VectorXd t = traj.times();
    const Eigen::VectorXd& x = traj.positions();
    Eigen::VectorXd G(traj.size());
    for (Eigen::Index i = 0; i < traj.size(); ++i) {
        G[i] = gauge_parameter(traj.mass(), g, x[i], t[i]);
    }
    const Eigen::VectorXd dGdt = sampled_derivative(G, traj.dt());
    return (Lg - La - dGdt).cwiseAbs().maxCoeff();
}

/// Ordered product U_n ... U_2 U_1 of unit-modulus factors.
inline PhaseFactor compose_phases(std::span<const PhaseFactor> factors) {
    Complex product(1.0, 0.0);
    for (const PhaseFactor& f : factors) {
        if (!f.is_unitary()) {
            throw UnitarityError("compose_phases: non-unitary factor");
        }
        product = f.value() * product;
    }
    return PhaseFactor(product);
}

} // namespace gravloop

#endif // GRAVLOOP_GAUGE_PHASE_HPP
