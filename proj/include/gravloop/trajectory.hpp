#ifndef GRAVLOOP_TRAJECTORY_HPP
#define GRAVLOOP_TRAJECTORY_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>
#include <json.hpp>

namespace gravloop {

/// A path lambda(t) sampled on a uniform time grid, carrying the particle mass.
class Trajectory {
public:
    Trajectory(double t_start, double t_end, Eigen::VectorXd positions, double mass)
        : t_start_(t_start), t_end_(t_end), positions_(std::move(positions)), mass_(mass) {
        if (!(std::isfinite(t_start_) && std::isfinite(t_end_)) || !(t_end_ > t_start_)) {
            throw std::domain_error("Trajectory: requires finite t_end > t_start");
        }
        if (positions_.size() < 3) {
            throw std::domain_error("Trajectory: requires at least 3 samples");
        }
        if (!positions_.allFinite()) {
            throw std::domain_error("Trajectory: positions must be finite");
        }
        if (!(std::isfinite(mass_) && mass_ > 0.0)) {
            throw std::domain_error("Trajectory: mass must be finite and > 0");
        }
    }

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    double mass() const { return mass_; }
    const Eigen::VectorXd& positions() const { return positions_; }

    Eigen::Index size() const { return positions_.size(); }
    double duration() const { return t_end_ - t_start_; }
    double dt() const { return duration() / static_cast<double>(size() - 1); }

    Eigen::VectorXd times() const {
        return Eigen::VectorXd::LinSpaced(size(), t_start_, t_end_);
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["t_start"] = t_start_;
        j["t_end"] = t_end_;
        j["mass"] = mass_;
        j["positions"] = std::vector<double>(positions_.begin(), positions_.end());
        return j;
    }

    static Trajectory from_json(const nlohmann::json& j) {
        for (const char* key : {"t_start", "t_end", "mass", "positions"}) {
            if (!j.contains(key)) {
                throw std::invalid_argument(std::string("Trajectory: missing field '") + key + "'");
            }
        }
        const auto& pos = j.at("positions");
        if (!pos.is_array()) {
            throw std::invalid_argument("Trajectory: 'positions' must be an array");
        }
        Eigen::VectorXd positions(pos.size());
        for (std::size_t i = 0; i < pos.size(); ++i) {
            positions[static_cast<Eigen::Index>(i)] = pos[i].get<double>();
        }
        return Trajectory(j.at("t_start").get<double>(), j.at("t_end").get<double>(),
                          std::move(positions), j.at("mass").get<double>());
    }

private:
    double t_start_;
    double t_end_;
    Eigen::VectorXd positions_;
    double mass_;
};

/// Second-order derivative of a uniformly sampled series: central differences
/// on interior points, one-sided three-point stencils at the endpoints.
inline Eigen::VectorXd sampled_derivative(const Eigen::Ref<const Eigen::VectorXd>& f, double h) {
    const Eigen::Index n = f.size();
    if (n < 3) {
        throw std::domain_error("sampled_derivative: requires at least 3 samples");
    }
    Eigen::VectorXd d(n);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d.segment(1, n - 2) = (f.tail(n - 2) - f.head(n - 2)) / (2.0 * h);
    d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return d;
}

} // namespace gravloop

#endif // GRAVLOOP_TRAJECTORY_HPP
