#ifndef GRAVLOOP_LOOP_INTERFEROMETER_HPP
#define GRAVLOOP_LOOP_INTERFEROMETER_HPP

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gravloop/constants.hpp"
#include "gravloop/errors.hpp"
#include "gravloop/gauge_phase.hpp"

namespace gravloop {

/// Beam splitter amplitudes: alpha to the outgoing branch, beta to the loop,
/// alpha^2 + beta^2 = 1.
struct BeamSplitterConfig {
    double alpha;
    double beta;

    BeamSplitterConfig(double alpha_value, double beta_value)
        : alpha(alpha_value), beta(beta_value) {
        if (!(std::isfinite(alpha) && std::isfinite(beta)) || alpha < 0.0 || beta < 0.0) {
            throw std::domain_error("BeamSplitterConfig: amplitudes must be finite and >= 0");
        }
        if (std::abs(alpha * alpha + beta * beta - 1.0) > 1e-12) {
            throw std::domain_error("BeamSplitterConfig: alpha^2 + beta^2 must equal 1");
        }
    }

    static BeamSplitterConfig from_alpha(double alpha_value) {
        if (!(alpha_value >= 0.0 && alpha_value <= 1.0)) {
            throw std::domain_error("BeamSplitterConfig: alpha must lie in [0, 1]");
        }
        return BeamSplitterConfig(alpha_value, std::sqrt(std::max(0.0, 1.0 - alpha_value * alpha_value)));
    }
};

/// One full circuit of the loop: U = e^{i phi_ca} e^{i phi_ac}. Non-unitary
/// values are admitted to model equivalence-principle violation.
struct LoopFactor {
    Complex value;

    explicit LoopFactor(Complex value_in) : value(value_in) {
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            throw std::domain_error("LoopFactor: value must be finite");
        }
    }

    static LoopFactor from_angle(double angle) { return LoopFactor(std::polar(1.0, angle)); }

    bool is_unitary() const { return std::abs(std::abs(value) - 1.0) <= kUnitModulusTol; }
};

/// Output-port and in-loop amplitudes after n passes.
struct LoopOutputState {
    Complex out_amp;
    Complex loop_amp;
};

/// Amplitude U^n of the n-loop history branch; n = 0 is the empty product.
inline Complex amplitude_n_loop(const LoopFactor& U, int n) {
    if (n < 0) {
        throw std::domain_error("amplitude_n_loop: loop count must be >= 0");
    }
    return std::pow(U.value, n);
}

/// Partial sum after n passes:
///   out_amp  = alpha ((1 - beta^{2n}) / (1 - beta^2 U^2))^{1/2}  (principal root)
///   loop_amp = beta^n U^n
/// n = 0 returns the input state unchanged (pure reflection).
inline LoopOutputState output_state_n(const BeamSplitterConfig& bs, const LoopFactor& U, int n) {
    if (n < 0) {
        throw std::domain_error("output_state_n: loop count must be >= 0");
    }
    if (n == 0) {
        return {Complex(0.0, 0.0), Complex(1.0, 0.0)};
    }
    const Complex denom = 1.0 - bs.beta * bs.beta * U.value * U.value;
    if (std::abs(denom) <= kPoleTol) {
        throw PoleError("output_state_n: 1 - beta^2 U^2 vanishes");
    }
    const double beta_2n = std::pow(bs.beta, 2.0 * n);
    const Complex out = bs.alpha * std::sqrt(Complex(1.0 - beta_2n, 0.0) / denom);
    const Complex loop = std::pow(bs.beta, n) * std::pow(U.value, n);
    return {out, loop};
}

/// Infinite-loop limit: out_amp = alpha / (1 - beta^2 U^2)^{1/2}, loop_amp = 0.
inline LoopOutputState output_state_limit(const BeamSplitterConfig& bs, const LoopFactor& U) {
    if (!(bs.alpha > 0.0)) {
        throw std::domain_error("output_state_limit: alpha must be > 0");
    }
    if (bs.beta * std::abs(U.value) >= 1.0) {
        throw DivergenceError("output_state_limit: |beta U| >= 1, series diverges");
    }
    const Complex denom = 1.0 - bs.beta * bs.beta * U.value * U.value;
    if (std::abs(denom) <= kPoleTol) {
        throw PoleError("output_state_limit: 1 - beta^2 U^2 vanishes");
    }
    return {bs.alpha / std::sqrt(denom), Complex(0.0, 0.0)};
}

enum class SeriesClass { Convergent, Marginal, Divergent };

struct SeriesVerdict {
    SeriesClass cls;
    bool unitary;
};

inline const char* to_string(SeriesClass cls) {
    switch (cls) {
        case SeriesClass::Convergent: return "Convergent";
        case SeriesClass::Marginal: return "Marginal";
        default: return "Divergent";
    }
}

inline SeriesVerdict classify_series(const BeamSplitterConfig& bs, const LoopFactor& U) {
    const double r = bs.beta * std::abs(U.value);
    SeriesClass cls = SeriesClass::Divergent;
    if (r < 1.0 - 1e-12) {
        cls = SeriesClass::Convergent;
    } else if (std::abs(r - 1.0) <= 1e-12) {
        cls = SeriesClass::Marginal;
    }
    return {cls, U.is_unitary()};
}

struct TraceRow {
    int n;
    Complex out_amp;
    Complex loop_amp;
    std::optional<double> distance_to_limit;
};

/// Rows n = 1..n_max of the partial sums; distance to the infinite-loop limit
/// is populated only for convergent configurations.
inline std::vector<TraceRow> convergence_trace(const BeamSplitterConfig& bs, const LoopFactor& U,
                                               int n_max) {
    if (n_max < 1) {
        throw std::domain_error("convergence_trace: n_max must be >= 1");
    }
    std::optional<Complex> limit;
    if (classify_series(bs, U).cls == SeriesClass::Convergent && bs.alpha > 0.0) {
        limit = output_state_limit(bs, U).out_amp;
    }
    std::vector<TraceRow> rows;
    rows.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const LoopOutputState state = output_state_n(bs, U, n);
        std::optional<double> dist;
        if (limit) {
            dist = std::abs(state.out_amp - *limit);
        }
        rows.push_back({n, state.out_amp, state.loop_amp, dist});
    }
    return rows;
}

} // namespace gravloop

#endif // GRAVLOOP_LOOP_INTERFEROMETER_HPP
