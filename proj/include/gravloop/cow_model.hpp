#ifndef GRAVLOOP_COW_MODEL_HPP
#define GRAVLOOP_COW_MODEL_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "gravloop/constants.hpp"
#include "gravloop/errors.hpp"
#include "gravloop/gauge_phase.hpp"
#include "gravloop/loop_interferometer.hpp"
#include "gravloop/trajectory.hpp"

namespace gravloop {

/// COW-style setup: arm A in the gravitational field g over [t1, t2], arm B
/// accelerated with a = g over [t3, t4].
class COWConfig {
public:
    COWConfig(double mass, double g, Trajectory traj_A, Trajectory traj_B,
              PhysicalConstants constants = {})
        : mass_(mass), g_(g), traj_A_(std::move(traj_A)), traj_B_(std::move(traj_B)),
          constants_(constants) {
        if (!(std::isfinite(mass_) && mass_ > 0.0)) {
            throw std::domain_error("COWConfig: mass must be finite and > 0");
        }
        if (!std::isfinite(g_)) {
            throw std::domain_error("COWConfig: g must be finite");
        }
        if (traj_A_.mass() != mass_ || traj_B_.mass() != mass_) {
            throw std::domain_error("COWConfig: trajectory masses must match the particle mass");
        }
    }

    double mass() const { return mass_; }
    double g() const { return g_; }
    const Trajectory& traj_A() const { return traj_A_; }
    const Trajectory& traj_B() const { return traj_B_; }
    const PhysicalConstants& constants() const { return constants_; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["mass"] = mass_;
        j["g"] = g_;
        j["hbar"] = constants_.hbar;
        j["traj_A"] = traj_A_.to_json();
        j["traj_B"] = traj_B_.to_json();
        return j;
    }

    static COWConfig from_json(const nlohmann::json& j) {
        for (const char* key : {"mass", "g", "hbar", "traj_A", "traj_B"}) {
            if (!j.contains(key)) {
                throw std::invalid_argument(std::string("COWConfig: missing field '") + key + "'");
            }
        }
        return COWConfig(j.at("mass").get<double>(), j.at("g").get<double>(),
                         Trajectory::from_json(j.at("traj_A")),
                         Trajectory::from_json(j.at("traj_B")),
                         PhysicalConstants(j.at("hbar").get<double>()));
    }

private:
    double mass_;
    double g_;
    Trajectory traj_A_;
    Trajectory traj_B_;
    PhysicalConstants constants_;
};

struct ArmPhases {
    double phi_g;
    double phi_a;
};

/// phi_g = S_g(traj_A)/hbar, phi_a = S_a(traj_B)/hbar, as real angles.
inline ArmPhases arm_phases(const COWConfig& cfg) {
    const FieldConfig field = FieldConfig::equivalence(cfg.g());
    const double hbar = cfg.constants().hbar;
    return {action(cfg.traj_A(), field, LagrangianKind::Gravity) / hbar,
            action(cfg.traj_B(), field, LagrangianKind::Accelerated) / hbar};
}

/// Total loop factor U = e^{i phi_a} e^{i phi_g}.
inline LoopFactor loop_factor(const COWConfig& cfg) {
    const ArmPhases phases = arm_phases(cfg);
    return LoopFactor(std::polar(1.0, phases.phi_a) * std::polar(1.0, phases.phi_g));
}

/// Coefficient of |0> in the infinite-loop limit for a balanced splitter:
/// 1 / (2 - U^2)^{1/2} with the principal root.
inline Complex cow_limit_amplitude(Complex U) {
    const Complex denom = 2.0 - U * U;
    if (std::abs(denom) < kPoleTol) {
        throw PoleError("cow_limit_amplitude: 2 - U^2 vanishes");
    }
    return 1.0 / std::sqrt(denom);
}

inline Complex output_amplitude_limit(const COWConfig& cfg) {
    return cow_limit_amplitude(loop_factor(cfg).value);
}

/// Gauge-induced phase shift G(lambda, t)/hbar between the two regions.
/// Requires equal traversal times for arms A and B.
inline double gauge_phase_shift(const COWConfig& cfg, double lambda, double t) {
    const double dA = cfg.traj_A().duration();
    const double dB = cfg.traj_B().duration();
    if (std::abs(dA - dB) > 1e-12 * std::max(std::abs(dA), std::abs(dB))) {
        throw PreconditionError("gauge_phase_shift: arm traversal times must be equal");
    }
    return gauge_parameter(cfg.mass(), cfg.g(), lambda, t) / cfg.constants().hbar;
}

} // namespace gravloop

#endif // GRAVLOOP_COW_MODEL_HPP
