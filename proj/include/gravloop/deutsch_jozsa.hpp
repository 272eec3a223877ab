#ifndef GRAVLOOP_DEUTSCH_JOZSA_HPP
#define GRAVLOOP_DEUTSCH_JOZSA_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "gravloop/gauge_phase.hpp"

namespace gravloop {

inline constexpr int kMaxRegisterQubits = 20;
inline constexpr int kMaxPathSumQubits = 12;

enum class FunctionClass { Constant, Balanced };

/// Truth table of f: {0,1}^n -> {0,1}, restricted to constant or balanced
/// functions. Basis index x is the big-endian integer reading of the qubit
/// string.
class BooleanFunction {
public:
    BooleanFunction(int n, std::vector<std::uint8_t> table)
        : n_(n), table_(std::move(table)) {
        if (n_ < 1 || n_ > kMaxRegisterQubits) {
            throw std::domain_error("BooleanFunction: qubit count out of range");
        }
        if (table_.size() != (std::size_t{1} << n_)) {
            throw std::domain_error("BooleanFunction: table length must be 2^n");
        }
        std::size_t ones = 0;
        for (std::uint8_t bit : table_) {
            if (bit > 1) {
                throw std::domain_error("BooleanFunction: table entries must be bits");
            }
            ones += bit;
        }
        if (ones == 0 || ones == table_.size()) {
            class_ = FunctionClass::Constant;
        } else if (ones == table_.size() / 2) {
            class_ = FunctionClass::Balanced;
        } else {
            throw std::domain_error("BooleanFunction: function is neither constant nor balanced");
        }
    }

    static BooleanFunction constant(int n, bool value) {
        return BooleanFunction(n, std::vector<std::uint8_t>(std::size_t{1} << n, value ? 1 : 0));
    }

    /// Uniformly random balanced function.
    template <class Rng>
    static BooleanFunction random_balanced(int n, Rng& rng) {
        std::vector<std::uint8_t> table(std::size_t{1} << n, 0);
        std::fill(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(table.size() / 2), 1);
        std::shuffle(table.begin(), table.end(), rng);
        return BooleanFunction(n, std::move(table));
    }

    int n() const { return n_; }
    std::uint8_t operator()(std::size_t x) const { return table_[x]; }
    const std::vector<std::uint8_t>& table() const { return table_; }
    FunctionClass classification() const { return class_; }

    BooleanFunction complement() const {
        std::vector<std::uint8_t> flipped(table_.size());
        std::transform(table_.begin(), table_.end(), flipped.begin(),
                       [](std::uint8_t b) { return static_cast<std::uint8_t>(1 - b); });
        return BooleanFunction(n_, std::move(flipped));
    }

    /// JSON form {"n": int, "table": hex}. The hex string packs the bits
    /// f(0), f(1), ... big-endian by basis index: hex digit k holds
    /// f(4k)..f(4k+3) with f(4k) in the most significant bit; trailing bits
    /// of the last digit are zero-padded when 2^n < 4.
    nlohmann::json to_json() const {
        static constexpr char digits[] = "0123456789abcdef";
        std::string hex;
        for (std::size_t k = 0; k < table_.size(); k += 4) {
            unsigned d = 0;
            for (std::size_t b = 0; b < 4; ++b) {
                d <<= 1;
                if (k + b < table_.size()) {
                    d |= table_[k + b];
                }
            }
            hex.push_back(digits[d]);
        }
        return nlohmann::json{{"n", n_}, {"table", hex}};
    }

    static BooleanFunction from_json(const nlohmann::json& j) {
        if (!j.contains("n") || !j.contains("table")) {
            throw std::invalid_argument("BooleanFunction: requires fields 'n' and 'table'");
        }
        const int n = j.at("n").get<int>();
        if (n < 1 || n > kMaxRegisterQubits) {
            throw std::invalid_argument("BooleanFunction: 'n' out of range");
        }
        const std::string hex = j.at("table").get<std::string>();
        const std::size_t size = std::size_t{1} << n;
        if (hex.size() != (size + 3) / 4) {
            throw std::invalid_argument("BooleanFunction: 'table' has wrong length for n");
        }
        std::vector<std::uint8_t> table(size, 0);
        for (std::size_t k = 0; k < hex.size(); ++k) {
            const char c = hex[k];
            unsigned d = 0;
            if (c >= '0' && c <= '9') {
                d = static_cast<unsigned>(c - '0');
            } else if (c >= 'a' && c <= 'f') {
                d = static_cast<unsigned>(c - 'a' + 10);
            } else if (c >= 'A' && c <= 'F') {
                d = static_cast<unsigned>(c - 'A' + 10);
            } else {
                throw std::invalid_argument("BooleanFunction: 'table' is not hexadecimal");
            }
            for (std::size_t b = 0; b < 4 && 4 * k + b < size; ++b) {
                table[4 * k + b] = static_cast<std::uint8_t>((d >> (3 - b)) & 1u);
            }
        }
        return BooleanFunction(n, std::move(table));
    }

private:
    int n_;
    std::vector<std::uint8_t> table_;
    FunctionClass class_;
};

/// n-qubit state vector, 2^n complex amplitudes with unit norm.
class QuantumRegister {
public:
    QuantumRegister(int n, Eigen::VectorXcd amps) : n_(n), amps_(std::move(amps)) {
        if (n_ < 1 || n_ > kMaxRegisterQubits) {
            throw std::domain_error("QuantumRegister: qubit count out of range");
        }
        if (amps_.size() != (Eigen::Index{1} << n_)) {
            throw std::domain_error("QuantumRegister: amplitude count must be 2^n");
        }
        if (std::abs(amps_.squaredNorm() - 1.0) > 1e-10) {
            throw std::domain_error("QuantumRegister: norm must be 1");
        }
    }

    int n() const { return n_; }
    const Eigen::VectorXcd& amps() const { return amps_; }

private:
    int n_;
    Eigen::VectorXcd amps_;
};

/// Coherent gravitational disturbance: phase phi_g imprinted per |1> branch.
struct PerturbationConfig {
    double phi_g = 0.0;

    PerturbationConfig() = default;
    explicit PerturbationConfig(double phi) : phi_g(phi) {
        if (!std::isfinite(phi_g)) {
            throw std::domain_error("PerturbationConfig: phi_g must be finite");
        }
    }
};

inline QuantumRegister uniform_superposition(int n) {
    if (n < 1 || n > kMaxRegisterQubits) {
        throw std::domain_error("uniform_superposition: qubit count out of range");
    }
    const Eigen::Index dim = Eigen::Index{1} << n;
    return QuantumRegister(
        n, Eigen::VectorXcd::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0)));
}

/// Oracle U_f: amps'[x] = (-1)^{f(x)} amps[x].
inline QuantumRegister apply_oracle(const QuantumRegister& reg, const BooleanFunction& f) {
    if (reg.n() != f.n()) {
        throw std::domain_error("apply_oracle: register/function size mismatch");
    }
    Eigen::VectorXcd amps = reg.amps();
    for (Eigen::Index x = 0; x < amps.size(); ++x) {
        if (f(static_cast<std::size_t>(x))) {
            amps[x] = -amps[x];
        }
    }
    return QuantumRegister(reg.n(), std::move(amps));
}

/// U_Lambda: amps'[x] = e^{i phi_g w(x)} amps[x], w(x) the Hamming weight.
inline QuantumRegister apply_perturbation(const QuantumRegister& reg, const PerturbationConfig& p) {
    Eigen::VectorXcd amps = reg.amps();
    for (Eigen::Index x = 0; x < amps.size(); ++x) {
        const int weight = std::popcount(static_cast<std::uint64_t>(x));
        amps[x] *= std::polar(1.0, p.phi_g * weight);
    }
    return QuantumRegister(reg.n(), std::move(amps));
}

/// n-fold tensor Hadamard (normalized fast Walsh-Hadamard transform).
inline QuantumRegister hadamard_all(const QuantumRegister& reg) {
    Eigen::VectorXcd amps = reg.amps();
    const Eigen::Index dim = amps.size();
    for (Eigen::Index half = 1; half < dim; half *= 2) {
        for (Eigen::Index base = 0; base < dim; base += 2 * half) {
            for (Eigen::Index i = base; i < base + half; ++i) {
                const Complex a = amps[i];
                const Complex b = amps[i + half];
                amps[i] = a + b;
                amps[i + half] = a - b;
            }
        }
    }
    amps /= std::sqrt(static_cast<double>(dim));
    return QuantumRegister(reg.n(), std::move(amps));
}

inline double prob_all_zero(const QuantumRegister& reg) {
    return std::norm(reg.amps()[0]);
}

enum class Verdict { Constant, Balanced };

inline const char* to_string(Verdict v) {
    return v == Verdict::Constant ? "Constant" : "Balanced";
}

struct DJResult {
    double prob_zero;
    Verdict verdict;
};

/// Full pipeline: uniform superposition, oracle, perturbation, Hadamards,
/// P(|0...0>). Verdict is Constant iff prob_zero > 1/2.
inline DJResult run_dj(const BooleanFunction& f, const PerturbationConfig& p) {
    QuantumRegister reg = uniform_superposition(f.n());
    reg = apply_oracle(reg, f);
    reg = apply_perturbation(reg, p);
    reg = hadamard_all(reg);
    const double prob = prob_all_zero(reg);
    return {prob, prob > 0.5 ? Verdict::Constant : Verdict::Balanced};
}

/// Independent oracle for run_dj: |2^{-n} sum_x (-1)^{f(x)} e^{i phi_g w(x)}|^2
/// accumulated path by path over the 2^n binary-tree leaves.
inline double path_sum_prob_zero(const BooleanFunction& f, const PerturbationConfig& p) {
    if (f.n() > kMaxPathSumQubits) {
        throw std::length_error("path_sum_prob_zero: path enumeration capped at n <= 12");
    }
    const std::size_t paths = std::size_t{1} << f.n();
    Complex sum(0.0, 0.0);
    for (std::size_t x = 0; x < paths; ++x) {
        // Walk the tree levels: each 1-branch contributes e^{i phi_g}.
        Complex amp(1.0, 0.0);
        for (int level = f.n() - 1; level >= 0; --level) {
            if ((x >> level) & 1u) {
                amp *= std::polar(1.0, p.phi_g);
            }
        }
        if (f(x)) {
            amp = -amp;
        }
        sum += amp;
    }
    return std::norm(sum / static_cast<double>(paths));
}

} // namespace gravloop

#endif // GRAVLOOP_DEUTSCH_JOZSA_HPP
