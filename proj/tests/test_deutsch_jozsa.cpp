#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gravloop/deutsch_jozsa.hpp"

using namespace gravloop;

namespace {
const std::vector<double> phi_set = {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0,
                                     3.0 * std::numbers::pi / 4.0, std::numbers::pi};
}

TEST_CASE("BooleanFunction classification") {
    CHECK(BooleanFunction::constant(3, false).classification() == FunctionClass::Constant);
    CHECK(BooleanFunction::constant(3, true).classification() == FunctionClass::Constant);
    CHECK(BooleanFunction(2, {0, 1, 1, 0}).classification() == FunctionClass::Balanced);
    CHECK_THROWS_AS(BooleanFunction(2, {0, 0, 0, 1}), std::domain_error);
    CHECK_THROWS_AS(BooleanFunction(2, {0, 1, 1}), std::domain_error);
}

TEST_CASE("BooleanFunction hex JSON round trip") {
    std::mt19937 rng(3);
    for (int n = 1; n <= 6; ++n) {
        for (int k = 0; k < 10; ++k) {
            const BooleanFunction f = BooleanFunction::random_balanced(n, rng);
            const BooleanFunction back = BooleanFunction::from_json(f.to_json());
            CHECK(back.n() == f.n());
            CHECK(back.table() == f.table());
        }
    }
    // f = (0,1,1,0) packs to hex "6".
    CHECK(BooleanFunction(2, {0, 1, 1, 0}).to_json().at("table") == "6");
    CHECK_THROWS_AS(BooleanFunction::from_json({{"n", 2}, {"table", "zz"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(BooleanFunction::from_json({{"n", 3}, {"table", "6"}}),
                    std::invalid_argument);
}

TEST_CASE("uniform_superposition") {
    const QuantumRegister one = uniform_superposition(1);
    CHECK(std::abs(one.amps()[0] - Complex(1.0 / std::numbers::sqrt2, 0.0)) < 1e-15);
    CHECK(std::abs(one.amps()[1] - Complex(1.0 / std::numbers::sqrt2, 0.0)) < 1e-15);

    const QuantumRegister two = uniform_superposition(2);
    for (int x = 0; x < 4; ++x) {
        CHECK(std::abs(two.amps()[x] - Complex(0.5, 0.0)) < 1e-15);
    }
    const QuantumRegister three = uniform_superposition(3);
    CHECK(std::abs(three.amps()[5] - Complex(std::pow(2.0, -1.5), 0.0)) < 1e-15);

    CHECK_THROWS_AS(uniform_superposition(0), std::domain_error);
    CHECK_THROWS_AS(uniform_superposition(21), std::domain_error);
}

TEST_CASE("apply_oracle flips marked amplitudes") {
    const QuantumRegister reg = uniform_superposition(1);
    const QuantumRegister same = apply_oracle(reg, BooleanFunction::constant(1, false));
    CHECK((same.amps() - reg.amps()).cwiseAbs().maxCoeff() < 1e-15);

    const QuantumRegister flipped = apply_oracle(reg, BooleanFunction::constant(1, true));
    CHECK((flipped.amps() + reg.amps()).cwiseAbs().maxCoeff() < 1e-15);

    const QuantumRegister marked = apply_oracle(reg, BooleanFunction(1, {0, 1}));
    CHECK(std::abs(marked.amps()[0] - Complex(1.0 / std::numbers::sqrt2, 0.0)) < 1e-15);
    CHECK(std::abs(marked.amps()[1] + Complex(1.0 / std::numbers::sqrt2, 0.0)) < 1e-15);

    CHECK_THROWS_AS(apply_oracle(uniform_superposition(2), BooleanFunction::constant(3, false)),
                    std::domain_error);
}

TEST_CASE("apply_perturbation imprints Hamming-weight phases") {
    const QuantumRegister reg1 = uniform_superposition(1);
    const QuantumRegister same = apply_perturbation(reg1, PerturbationConfig(0.0));
    CHECK((same.amps() - reg1.amps()).cwiseAbs().maxCoeff() < 1e-15);

    const QuantumRegister pi_flip = apply_perturbation(reg1, PerturbationConfig(std::numbers::pi));
    CHECK(std::abs(pi_flip.amps()[1] + Complex(1.0 / std::numbers::sqrt2, 0.0)) < 1e-14);

    const QuantumRegister reg2 = uniform_superposition(2);
    const QuantumRegister quarter =
        apply_perturbation(reg2, PerturbationConfig(std::numbers::pi / 2.0));
    CHECK(std::abs(quarter.amps()[0] - Complex(0.5, 0.0)) < 1e-14);
    CHECK(std::abs(quarter.amps()[1] - Complex(0.0, 0.5)) < 1e-14);
    CHECK(std::abs(quarter.amps()[2] - Complex(0.0, 0.5)) < 1e-14);
    CHECK(std::abs(quarter.amps()[3] + Complex(0.5, 0.0)) < 1e-14);
}

TEST_CASE("hadamard_all") {
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(8);
    zero[0] = 1.0;
    const QuantumRegister ground(3, zero);
    const QuantumRegister flat = hadamard_all(ground);
    CHECK((flat.amps().array() - Complex(std::pow(2.0, -1.5), 0.0)).abs().maxCoeff() < 1e-14);

    const QuantumRegister twice = hadamard_all(flat);
    CHECK((twice.amps() - ground.amps()).cwiseAbs().maxCoeff() < 1e-12);

    Eigen::VectorXcd minus(2);
    minus << Complex(1.0 / std::numbers::sqrt2, 0.0), Complex(-1.0 / std::numbers::sqrt2, 0.0);
    const QuantumRegister out = hadamard_all(QuantumRegister(1, minus));
    CHECK(std::abs(out.amps()[0]) < 1e-14);
    CHECK(std::abs(out.amps()[1] - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("prob_all_zero") {
    CHECK(prob_all_zero(uniform_superposition(4)) == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
    zero[0] = 1.0;
    CHECK(prob_all_zero(QuantumRegister(2, zero)) == doctest::Approx(1.0));
}

TEST_CASE("run_dj unperturbed dichotomy") {
    std::mt19937 rng(31);
    const PerturbationConfig none(0.0);
    for (int n = 1; n <= 6; ++n) {
        for (bool value : {false, true}) {
            const DJResult r = run_dj(BooleanFunction::constant(n, value), none);
            CHECK(r.prob_zero == doctest::Approx(1.0).epsilon(1e-10));
            CHECK(r.verdict == Verdict::Constant);
        }
    }
    for (int n = 2; n <= 6; ++n) {
        for (int k = 0; k < 20; ++k) {
            const DJResult r = run_dj(BooleanFunction::random_balanced(n, rng), none);
            CHECK(r.prob_zero < 1e-10);
            CHECK(r.verdict == Verdict::Balanced);
        }
    }
}

TEST_CASE("run_dj perturbed closed form and misclassification") {
    const DJResult quarter = run_dj(BooleanFunction::constant(2, false),
                                    PerturbationConfig(std::numbers::pi / 2.0));
    CHECK(quarter.prob_zero == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(quarter.verdict == Verdict::Balanced);

    for (int n = 1; n <= 10; ++n) {
        const DJResult full =
            run_dj(BooleanFunction::constant(n, false), PerturbationConfig(std::numbers::pi));
        CHECK(full.prob_zero < 1e-10);
        CHECK(full.verdict == Verdict::Balanced);
        for (double phi : phi_set) {
            const DJResult r = run_dj(BooleanFunction::constant(n, false), PerturbationConfig(phi));
            CHECK(std::abs(r.prob_zero - std::pow(std::cos(phi / 2.0), 2.0 * n)) < 1e-10);
        }
    }
}

TEST_CASE("path_sum_prob_zero matches run_dj") {
    const PerturbationConfig none(0.0);
    CHECK(path_sum_prob_zero(BooleanFunction::constant(3, false), none) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(path_sum_prob_zero(BooleanFunction(2, {0, 1, 1, 0}), none) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(path_sum_prob_zero(BooleanFunction::constant(2, false),
                             PerturbationConfig(std::numbers::pi / 2.0)) ==
          doctest::Approx(0.25).epsilon(1e-12));

    std::mt19937 rng(41);
    // Exhaustive over all 6 balanced functions at n = 2.
    std::vector<BooleanFunction> fs;
    for (int mask = 0; mask < 16; ++mask) {
        std::vector<std::uint8_t> table(4);
        int ones = 0;
        for (int x = 0; x < 4; ++x) {
            table[x] = static_cast<std::uint8_t>((mask >> x) & 1);
            ones += table[x];
        }
        if (ones == 2) {
            fs.emplace_back(2, table);
        }
    }
    CHECK(fs.size() == 6);
    for (int n = 3; n <= 4; ++n) {
        for (int k = 0; k < 100; ++k) {
            fs.push_back(BooleanFunction::random_balanced(n, rng));
        }
    }
    for (const BooleanFunction& f : fs) {
        for (double phi : phi_set) {
            const PerturbationConfig p(phi);
            CHECK(std::abs(run_dj(f, p).prob_zero - path_sum_prob_zero(f, p)) < 1e-10);
        }
    }

    CHECK_THROWS_AS(path_sum_prob_zero(BooleanFunction::constant(13, false), none),
                    std::length_error);
}

TEST_CASE("operations preserve norm and commute") {
    std::mt19937 rng(53);
    for (int n = 2; n <= 5; ++n) {
        const BooleanFunction f = BooleanFunction::random_balanced(n, rng);
        const PerturbationConfig p(0.7);
        QuantumRegister reg = uniform_superposition(n);
        reg = apply_oracle(reg, f);
        CHECK(std::abs(reg.amps().squaredNorm() - 1.0) < 1e-10);
        reg = apply_perturbation(reg, p);
        CHECK(std::abs(reg.amps().squaredNorm() - 1.0) < 1e-10);
        reg = hadamard_all(reg);
        CHECK(std::abs(reg.amps().squaredNorm() - 1.0) < 1e-10);

        const QuantumRegister op = apply_perturbation(apply_oracle(uniform_superposition(n), f), p);
        const QuantumRegister po = apply_oracle(apply_perturbation(uniform_superposition(n), p), f);
        CHECK((op.amps() - po.amps()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("complement functions yield the same verdict") {
    std::mt19937 rng(61);
    for (int n = 2; n <= 5; ++n) {
        for (int k = 0; k < 10; ++k) {
            const BooleanFunction f = BooleanFunction::random_balanced(n, rng);
            for (double phi : phi_set) {
                const PerturbationConfig p(phi);
                CHECK(run_dj(f, p).verdict == run_dj(f.complement(), p).verdict);
            }
        }
        for (double phi : phi_set) {
            const PerturbationConfig p(phi);
            CHECK(run_dj(BooleanFunction::constant(n, false), p).verdict ==
                  run_dj(BooleanFunction::constant(n, true), p).verdict);
        }
    }
}
