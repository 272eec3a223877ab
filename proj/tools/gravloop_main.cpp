// gravloop: command-line front end for the loop-interferometer library.
//
// Subcommands: loop | cow | dj | verify. Exit codes: 0 success,
// 1 verification failure, 2 input/config error, 3 numerical error.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gravloop/constants.hpp"
#include "gravloop/cow_model.hpp"
#include "gravloop/deutsch_jozsa.hpp"
#include "gravloop/errors.hpp"
#include "gravloop/gauge_phase.hpp"
#include "gravloop/loop_interferometer.hpp"
#include "gravloop/trajectory.hpp"

namespace {

using namespace gravloop;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalError = 3;

// 17 significant digits, scientific notation: deterministic across runs.
std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.16e", x);
    return buf;
}

struct CommonOpts {
    std::string output;
    std::string format = "csv";
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    double tolerance = -1.0; // < 0 means per-check defaults
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--output", opts.output, "Write results to this path instead of stdout");
    cmd->add_option("--format", opts.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", opts.workers, "Worker threads for sweep evaluation")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", opts.tolerance, "Override per-check tolerances (verify)");
}

// Parameter echo + result rows, renderable as CSV or JSON.
struct RunReport {
    std::string command;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    RunReport(std::string cmd) : command(std::move(cmd)) {
        metadata.emplace_back("version", kVersion);
        metadata.emplace_back("branch_cut", "principal");
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << "# command=" << command << "\n";
        for (const auto& [k, v] : params) {
            os << "# param " << k << "=" << v << "\n";
        }
        for (const auto& [k, v] : metadata) {
            os << "# meta " << k << "=" << v << "\n";
        }
        for (std::size_t i = 0; i < header.size(); ++i) {
            os << (i ? "," : "") << header[i];
        }
        os << "\n";
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                os << (i ? "," : "") << row[i];
            }
            os << "\n";
        }
        return os.str();
    }

    std::string to_json() const {
        json j;
        j["command"] = command;
        j["parameters"] = json::object();
        for (const auto& [k, v] : params) {
            j["parameters"][k] = v;
        }
        j["metadata"] = json::object();
        for (const auto& [k, v] : metadata) {
            j["metadata"][k] = v;
        }
        j["rows"] = json::array();
        for (const auto& row : rows) {
            json obj = json::object();
            for (std::size_t i = 0; i < header.size(); ++i) {
                obj[header[i]] = (i < row.size() ? row[i] : "");
            }
            j["rows"].push_back(obj);
        }
        return j.dump(2) + "\n";
    }
};

int emit(const RunReport& report, const CommonOpts& opts, int exit_code) {
    const std::string text = (opts.format == "json") ? report.to_json() : report.to_csv();
    if (opts.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.output, std::ios::binary);
        if (!out) {
            std::cerr << "gravloop: cannot open output file '" << opts.output << "'\n";
            return kExitConfigError;
        }
        out << text;
    }
    return exit_code;
}

// Deterministic-order parallel map over [0, count).
template <class Fn>
void parallel_rows(std::size_t count, unsigned workers, Fn&& fn) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                fn(i);
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open file '" + path + "'");
    }
    return json::parse(in);
}

std::complex<double> parse_complex(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("complex values must be given as 're,im'");
    }
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

// ---------------------------------------------------------------- loop ----

struct LoopOpts {
    double alpha = 1.0 / std::numbers::sqrt2;
    std::optional<double> u_angle;
    std::optional<std::string> u_complex;
    int n_max = 30;
};

int run_loop(const LoopOpts& lo, const CommonOpts& opts) {
    const BeamSplitterConfig bs = BeamSplitterConfig::from_alpha(lo.alpha);
    LoopFactor U = LoopFactor::from_angle(lo.u_angle.value_or(0.0));
    if (lo.u_complex) {
        U = LoopFactor(parse_complex(*lo.u_complex));
    }

    RunReport report("loop");
    report.params.emplace_back("alpha", fmt17(bs.alpha));
    report.params.emplace_back("beta", fmt17(bs.beta));
    report.params.emplace_back("re_u", fmt17(U.value.real()));
    report.params.emplace_back("im_u", fmt17(U.value.imag()));
    report.params.emplace_back("n_max", std::to_string(lo.n_max));

    const SeriesVerdict verdict = classify_series(bs, U);
    report.metadata.emplace_back("verdict", to_string(verdict.cls));
    report.metadata.emplace_back("unitary", verdict.unitary ? "true" : "false");
    if (verdict.cls == SeriesClass::Convergent && bs.alpha > 0.0) {
        const LoopOutputState limit = output_state_limit(bs, U);
        report.metadata.emplace_back("re_limit", fmt17(limit.out_amp.real()));
        report.metadata.emplace_back("im_limit", fmt17(limit.out_amp.imag()));
    }

    report.header = {"n", "re_out", "im_out", "re_loop", "im_loop", "distance"};
    for (const TraceRow& row : convergence_trace(bs, U, lo.n_max)) {
        report.rows.push_back({std::to_string(row.n), fmt17(row.out_amp.real()),
                               fmt17(row.out_amp.imag()), fmt17(row.loop_amp.real()),
                               fmt17(row.loop_amp.imag()),
                               row.distance_to_limit ? fmt17(*row.distance_to_limit) : ""});
    }

    int code = kExitOk;
    if (verdict.cls != SeriesClass::Convergent) {
        std::cerr << "gravloop loop: series is " << to_string(verdict.cls)
                  << " (beta*|U| = " << bs.beta * std::abs(U.value) << "), no limit emitted\n";
        code = kExitNumericalError;
    }
    const int emit_code = emit(report, opts, code);
    return emit_code != kExitOk ? emit_code : code;
}

// ----------------------------------------------------------------- cow ----

int run_cow(const std::string& config_path, const CommonOpts& opts) {
    const COWConfig cfg = COWConfig::from_json(load_json_file(config_path));

    const ArmPhases phases = arm_phases(cfg);
    const LoopFactor U = loop_factor(cfg);
    const Complex out = output_amplitude_limit(cfg);
    const double residual = gauge_identity_residual(cfg.traj_A(), cfg.g());

    // Integrated identity on arm A: S_g - S_a = G(end) - G(start).
    const FieldConfig field = FieldConfig::equivalence(cfg.g());
    const Trajectory& a = cfg.traj_A();
    const double sg = action(a, field, LagrangianKind::Gravity);
    const double sa = action(a, field, LagrangianKind::Accelerated);
    const double dG = gauge_parameter(cfg.mass(), cfg.g(), a.positions()[a.size() - 1], a.t_end()) -
                      gauge_parameter(cfg.mass(), cfg.g(), a.positions()[0], a.t_start());
    const double action_identity = std::abs(sg - sa - dG);

    RunReport report("cow");
    report.params.emplace_back("config", config_path);
    report.params.emplace_back("mass", fmt17(cfg.mass()));
    report.params.emplace_back("g", fmt17(cfg.g()));
    report.params.emplace_back("hbar", fmt17(cfg.constants().hbar));
    report.header = {"phi_g", "phi_a", "re_u", "im_u", "re_out", "im_out",
                     "gauge_residual", "action_identity_residual"};
    report.rows.push_back({fmt17(phases.phi_g), fmt17(phases.phi_a), fmt17(U.value.real()),
                           fmt17(U.value.imag()), fmt17(out.real()), fmt17(out.imag()),
                           fmt17(residual), fmt17(action_identity)});
    return emit(report, opts, kExitOk);
}

// ------------------------------------------------------------------ dj ----

struct DjOpts {
    int n = 2;
    std::optional<int> constant_value;
    std::optional<std::string> table_path;
    double phi_min = 0.0;
    double phi_max = std::numbers::pi;
    double phi_step = std::numbers::pi / 8.0;
};

int run_dj_cmd(const DjOpts& djo, const CommonOpts& opts) {
    std::optional<BooleanFunction> f;
    if (djo.table_path) {
        f = BooleanFunction::from_json(load_json_file(*djo.table_path));
    } else if (djo.constant_value) {
        if (*djo.constant_value != 0 && *djo.constant_value != 1) {
            throw std::invalid_argument("--constant takes 0 or 1");
        }
        f = BooleanFunction::constant(djo.n, *djo.constant_value == 1);
    } else {
        throw std::invalid_argument("dj requires --constant or --table");
    }
    if (!(djo.phi_step > 0.0) || djo.phi_max < djo.phi_min) {
        throw std::invalid_argument("dj: requires phi_step > 0 and phi_max >= phi_min");
    }

    std::vector<double> phis;
    for (double phi = djo.phi_min; phi <= djo.phi_max + 1e-12; phi += djo.phi_step) {
        phis.push_back(phi);
    }

    std::vector<DJResult> results(phis.size());
    parallel_rows(phis.size(), opts.workers,
                  [&](std::size_t i) { results[i] = run_dj(*f, PerturbationConfig(phis[i])); });

    const Verdict truth =
        f->classification() == FunctionClass::Constant ? Verdict::Constant : Verdict::Balanced;

    RunReport report("dj");
    report.params.emplace_back("n", std::to_string(f->n()));
    report.params.emplace_back("function", f->to_json().at("table").get<std::string>());
    report.params.emplace_back("classification",
                               f->classification() == FunctionClass::Constant ? "Constant"
                                                                              : "Balanced");
    report.params.emplace_back("phi_min", fmt17(djo.phi_min));
    report.params.emplace_back("phi_max", fmt17(djo.phi_max));
    report.params.emplace_back("phi_step", fmt17(djo.phi_step));

    std::optional<double> first_flip;
    report.header = {"phi_g", "prob_zero", "verdict"};
    for (std::size_t i = 0; i < phis.size(); ++i) {
        if (!first_flip && results[i].verdict != truth) {
            first_flip = phis[i];
        }
        report.rows.push_back(
            {fmt17(phis[i]), fmt17(results[i].prob_zero), to_string(results[i].verdict)});
    }
    report.metadata.emplace_back("first_flip_phi", first_flip ? fmt17(*first_flip) : "none");
    return emit(report, opts, kExitOk);
}

// -------------------------------------------------------------- verify ----

struct Check {
    std::string name;
    double residual;
    double default_tol;
};

Trajectory random_poly_trajectory(std::mt19937& rng, int samples) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> mass_d(0.5, 1.0);
    const double c0 = u(rng);
    const double c1 = u(rng);
    const double c2 = 0.05 + 0.2 * std::abs(u(rng));
    const double c3 = 0.1 * u(rng);
    Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(samples, 0.0, 1.0);
    Eigen::VectorXd x = ((c3 * t.array() + c2) * t.array() + c1) * t.array() + c0;
    return Trajectory(0.0, 1.0, std::move(x), mass_d(rng));
}

std::vector<Check> run_checks(bool inject_nonunitary) {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_real_distribution<double> angle_d(-std::numbers::pi, std::numbers::pi);
    std::vector<Check> checks;

    // Quadrature vs analytic action on a non-polynomial path.
    {
        const int n = 1001;
        Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.0, 1.0);
        Eigen::VectorXd x = t.array().sin();
        const Trajectory traj(0.0, 1.0, std::move(x), 1.0);
        const double s = action(traj, FieldConfig::equivalence(1.0), LagrangianKind::Gravity);
        const double analytic = 0.25 + std::sin(2.0) / 8.0 - (1.0 - std::cos(1.0));
        checks.push_back({"action_quadrature_sine_path", std::abs(s - analytic), 1e-6});
    }

    // Gauge identity residual and its integrated form on random cubic paths.
    {
        double max_residual = 0.0;
        double max_action_diff = 0.0;
        std::uniform_real_distribution<double> g_d(0.2, 0.4);
        for (int k = 0; k < 20; ++k) {
            const Trajectory traj = random_poly_trajectory(rng, 1001);
            const double g = g_d(rng);
            max_residual = std::max(max_residual, gauge_identity_residual(traj, g));
            const FieldConfig field = FieldConfig::equivalence(g);
            const double sg = action(traj, field, LagrangianKind::Gravity);
            const double sa = action(traj, field, LagrangianKind::Accelerated);
            const double dG =
                gauge_parameter(traj.mass(), g, traj.positions()[traj.size() - 1], traj.t_end()) -
                gauge_parameter(traj.mass(), g, traj.positions()[0], traj.t_start());
            max_action_diff = std::max(max_action_diff, std::abs(sg - sa - dG));
        }
        checks.push_back({"gauge_identity_residual", max_residual, 1e-6});
        checks.push_back({"action_difference_identity", max_action_diff, 1e-6});
    }

    // Phase factors: modulus, associativity, loop periodicity.
    {
        double max_mod = 0.0;
        double max_assoc = 0.0;
        for (int k = 0; k < 200; ++k) {
            const PhaseFactor p = phase_from_action(100.0 * (u01(rng) - 0.5));
            max_mod = std::max(max_mod, std::abs(std::abs(p.value()) - 1.0));
            const PhaseFactor a = PhaseFactor::from_angle(angle_d(rng));
            const PhaseFactor b = PhaseFactor::from_angle(angle_d(rng));
            const PhaseFactor c = PhaseFactor::from_angle(angle_d(rng));
            const std::vector<PhaseFactor> bc{c, b};
            const std::vector<PhaseFactor> ab{b, a};
            const std::vector<PhaseFactor> left{compose_phases(bc), a};
            const std::vector<PhaseFactor> right{c, compose_phases(ab)};
            max_assoc = std::max(
                max_assoc, std::abs(compose_phases(left).value() - compose_phases(right).value()));
        }
        checks.push_back({"phase_modulus", max_mod, 1e-12});
        checks.push_back({"compose_associativity", max_assoc, 1e-12});

        double max_period = 0.0;
        for (int k = 0; k < 100; ++k) {
            std::vector<PhaseFactor> factors;
            double sum = 0.0;
            for (int i = 0; i < 6; ++i) {
                const double a = angle_d(rng);
                sum += a;
                factors.push_back(PhaseFactor::from_angle(a));
            }
            const int winding = 1 + (k % 3);
            factors.push_back(PhaseFactor::from_angle(2.0 * std::numbers::pi * winding - sum));
            max_period =
                std::max(max_period, std::abs(compose_phases(factors).value() - Complex(1.0, 0.0)));
        }
        checks.push_back({"loop_periodicity", max_period, 1e-9});
    }

    // Loop interferometer algebra.
    {
        double max_identity = 0.0;
        double max_mag = 0.0;
        double max_norm = 0.0;
        std::uniform_int_distribution<int> n_d(1, 50);
        for (int k = 0; k < 300; ++k) {
            const double alpha = 0.05 + 0.95 * u01(rng);
            const BeamSplitterConfig bs = BeamSplitterConfig::from_alpha(alpha);
            const LoopFactor U = LoopFactor::from_angle(angle_d(rng));
            const int n = n_d(rng);
            const LoopOutputState st = output_state_n(bs, U, n);
            const Complex lhs =
                st.out_amp * st.out_amp * (1.0 - bs.beta * bs.beta * U.value * U.value);
            const double rhs = alpha * alpha * (1.0 - std::pow(bs.beta, 2.0 * n));
            max_identity = std::max(max_identity, std::abs(lhs - rhs));
            max_mag = std::max(max_mag, std::abs(std::abs(st.loop_amp) - std::pow(bs.beta, n)));

            const LoopFactor U1 = LoopFactor(Complex(k % 2 == 0 ? 1.0 : -1.0, 0.0));
            const LoopOutputState st1 = output_state_n(bs, U1, n);
            max_norm = std::max(
                max_norm, std::abs(std::norm(st1.out_amp) + std::norm(st1.loop_amp) - 1.0));
        }
        checks.push_back({"partial_sum_identity", max_identity, 1e-12});
        checks.push_back({"loop_amp_magnitude", max_mag, 1e-12});
        checks.push_back({"normalization_unit_loop", max_norm, 1e-12});

        // Monotone convergence of the distance-to-limit sequence.
        double max_violation = 0.0;
        const BeamSplitterConfig bs = BeamSplitterConfig::from_alpha(1.0 / std::numbers::sqrt2);
        for (const LoopFactor U :
             {LoopFactor::from_angle(0.0), LoopFactor::from_angle(1.0), LoopFactor(Complex(0.9, 0.0))}) {
            const auto rows = convergence_trace(bs, U, 40);
            for (std::size_t i = 1; i < rows.size(); ++i) {
                max_violation = std::max(
                    max_violation, *rows[i].distance_to_limit - *rows[i - 1].distance_to_limit);
            }
        }
        checks.push_back({"convergence_monotone", std::max(0.0, max_violation), 1e-12});

        // Divergence witness for beta*|U| > 1.
        const LoopFactor bad(Complex(1.6, 0.0));
        const auto rows = convergence_trace(bs, bad, 40);
        double max_decrease = 0.0;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            max_decrease = std::max(
                max_decrease, std::abs(rows[i - 1].loop_amp) - std::abs(rows[i].loop_amp));
        }
        const bool divergent = classify_series(bs, bad).cls == SeriesClass::Divergent;
        checks.push_back({"divergence_witness", divergent ? std::max(0.0, max_decrease) : 1.0, 1e-12});
    }

    // COW cross-check against the generic limit formula.
    {
        double max_diff = 0.0;
        const BeamSplitterConfig bs = BeamSplitterConfig::from_alpha(1.0 / std::numbers::sqrt2);
        for (int k = 0; k < 200; ++k) {
            const LoopFactor U = LoopFactor::from_angle(angle_d(rng));
            max_diff = std::max(max_diff, std::abs(cow_limit_amplitude(U.value) -
                                                   output_state_limit(bs, U).out_amp));
        }
        checks.push_back({"cow_limit_cross_check", max_diff, 1e-12});
    }

    // Deutsch-Jozsa invariants.
    {
        double max_norm = 0.0;
        double max_invol = 0.0;
        double max_comm = 0.0;
        double max_oracle = 0.0;
        double max_closed = 0.0;
        double complement_mismatch = 0.0;
        const std::vector<double> phi_set = {0.0, std::numbers::pi / 4.0, std::numbers::pi / 2.0,
                                             3.0 * std::numbers::pi / 4.0, std::numbers::pi};
        for (int n = 2; n <= 4; ++n) {
            for (int k = 0; k < 20; ++k) {
                const BooleanFunction f = BooleanFunction::random_balanced(n, rng);
                for (double phi : phi_set) {
                    const PerturbationConfig p(phi);
                    QuantumRegister reg = uniform_superposition(n);
                    reg = apply_oracle(reg, f);
                    reg = apply_perturbation(reg, p);
                    max_norm = std::max(max_norm, std::abs(reg.amps().squaredNorm() - 1.0));
                    const QuantumRegister twice = hadamard_all(hadamard_all(reg));
                    max_invol = std::max(max_invol, (twice.amps() - reg.amps()).cwiseAbs().maxCoeff());
                    const QuantumRegister op =
                        apply_perturbation(apply_oracle(uniform_superposition(n), f), p);
                    const QuantumRegister po =
                        apply_oracle(apply_perturbation(uniform_superposition(n), p), f);
                    max_comm = std::max(max_comm, (op.amps() - po.amps()).cwiseAbs().maxCoeff());
                    max_oracle = std::max(max_oracle, std::abs(run_dj(f, p).prob_zero -
                                                               path_sum_prob_zero(f, p)));
                    if (run_dj(f, p).verdict != run_dj(f.complement(), p).verdict) {
                        complement_mismatch = 1.0;
                    }
                }
            }
            for (double phi : phi_set) {
                const BooleanFunction f = BooleanFunction::constant(n, false);
                const double expected = std::pow(std::cos(phi / 2.0), 2.0 * n);
                max_closed = std::max(
                    max_closed, std::abs(run_dj(f, PerturbationConfig(phi)).prob_zero - expected));
            }
        }
        checks.push_back({"dj_norm_preservation", max_norm, 1e-10});
        checks.push_back({"dj_hadamard_involution", max_invol, 1e-12});
        checks.push_back({"dj_oracle_perturbation_commute", max_comm, 1e-12});
        checks.push_back({"dj_path_sum_equivalence", max_oracle, 1e-10});
        checks.push_back({"dj_constant_closed_form", max_closed, 1e-10});
        checks.push_back({"dj_complement_invariance", complement_mismatch, 0.5});
    }

    // Unitarity of loop factors built from real actions.
    {
        double max_dev = 0.0;
        for (int k = 0; k < 100; ++k) {
            const LoopFactor U = LoopFactor::from_angle(angle_d(rng));
            max_dev = std::max(max_dev, std::abs(std::abs(U.value) - 1.0));
        }
        if (inject_nonunitary) {
            max_dev = std::max(max_dev, std::abs(std::abs(Complex(1.5, 0.0)) - 1.0));
        }
        checks.push_back({"loop_factor_unitarity", max_dev, kUnitModulusTol});
    }

    return checks;
}

int run_verify(bool inject_nonunitary, const CommonOpts& opts) {
    const std::vector<Check> checks = run_checks(inject_nonunitary);
    std::ostringstream os;
    bool all_pass = true;
    for (const Check& c : checks) {
        const double tol = opts.tolerance >= 0.0 ? opts.tolerance : c.default_tol;
        const bool pass = c.residual <= tol;
        all_pass = all_pass && pass;
        os << (pass ? "PASS" : "FAIL") << " " << c.name << " residual=" << fmt17(c.residual)
           << " tol=" << fmt17(tol) << "\n";
    }
    const std::string text = os.str();
    if (opts.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opts.output, std::ios::binary);
        if (!out) {
            std::cerr << "gravloop: cannot open output file '" << opts.output << "'\n";
            return kExitConfigError;
        }
        out << text;
    }
    return all_pass ? kExitOk : kExitVerifyFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Looped quantum-gravitational interferometer toolkit"};
    app.require_subcommand(1);
    app.footer("Environment: GRAVLOOP_SEED is reserved for future stochastic features "
               "and currently unused.");

    CommonOpts loop_common, cow_common, dj_common, verify_common;

    LoopOpts loop_opts;
    CLI::App* loop_cmd = app.add_subcommand("loop", "Loop amplitude series and convergence trace");
    loop_cmd->add_option("--alpha", loop_opts.alpha, "Outgoing-branch amplitude in (0, 1]");
    auto* u_angle = loop_cmd->add_option("--u-angle", loop_opts.u_angle, "Loop phase angle (rad)");
    loop_cmd->add_option("--u-complex", loop_opts.u_complex, "Loop factor as 're,im'")
        ->excludes(u_angle);
    loop_cmd->add_option("--n-max", loop_opts.n_max, "Number of partial-sum rows")
        ->check(CLI::PositiveNumber);
    add_common(loop_cmd, loop_common);

    std::string cow_config;
    CLI::App* cow_cmd = app.add_subcommand("cow", "Mass-particle COW evaluation");
    cow_cmd->add_option("--config", cow_config, "COWConfig JSON file")->required();
    add_common(cow_cmd, cow_common);

    DjOpts dj_opts;
    CLI::App* dj_cmd = app.add_subcommand("dj", "Deutsch-Jozsa corruption sweep over phi_g");
    dj_cmd->add_option("--n", dj_opts.n, "Qubit count (with --constant)");
    dj_cmd->add_option("--constant", dj_opts.constant_value, "Constant function value, 0 or 1");
    dj_cmd->add_option("--table", dj_opts.table_path, "BooleanFunction JSON table file");
    dj_cmd->add_option("--phi-min", dj_opts.phi_min, "Sweep start (rad)");
    dj_cmd->add_option("--phi-max", dj_opts.phi_max, "Sweep end (rad)");
    dj_cmd->add_option("--phi-step", dj_opts.phi_step, "Sweep step (rad)");
    add_common(dj_cmd, dj_common);

    bool inject_nonunitary = false;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the module invariant suites");
    verify_cmd
        ->add_flag("--inject-nonunitary", inject_nonunitary,
                   "Inject a non-unitary loop factor (negative control)")
        ->group("");
    add_common(verify_cmd, verify_common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (loop_cmd->parsed()) {
            return run_loop(loop_opts, loop_common);
        }
        if (cow_cmd->parsed()) {
            return run_cow(cow_config, cow_common);
        }
        if (dj_cmd->parsed()) {
            return run_dj_cmd(dj_opts, dj_common);
        }
        return run_verify(inject_nonunitary, verify_common);
    } catch (const PoleError& e) {
        std::cerr << "gravloop: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const DivergenceError& e) {
        std::cerr << "gravloop: " << e.what() << "\n";
        return kExitNumericalError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "gravloop: invalid JSON input: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "gravloop: " << e.what() << "\n";
        return kExitConfigError;
    }
}
