// Command-line harness: ideal norms of stored matrices, Dixmier trace
// estimates on model spectra, Kato-function validation, product-formula
// experiments and the full property suite.
//
// Exit codes: 0 success, 1 acceptance/check failure, 2 usage or
// configuration error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "opideal/experiment.hpp"
#include "opideal/selftest.hpp"

namespace {

void print_kv(const char* key, double value) {
    std::printf("%s = %.17e\n", key, value);
}

int cmd_norms(const std::string& matrix_file, const std::string& kind_token) {
    std::ifstream in(matrix_file);
    if (!in) {
        std::fprintf(stderr, "error: cannot open matrix file '%s'\n", matrix_file.c_str());
        return 2;
    }
    const opideal::Matrix m = opideal::read_matrix(in);
    const opideal::NormKind kind = opideal::parse_norm_kind(kind_token, m.dim());
    std::printf("%s = %.17e\n", kind.name().c_str(), opideal::operator_ideal_norm(m, kind));
    return 0;
}

int cmd_trace(const std::string& model, double c, double t, double r, std::size_t n,
              double window, double slope_tol) {
    const opideal::ModelSpectrumKind kind = opideal::parse_model_kind(model);
    double param = 1.0;
    switch (kind) {
    case opideal::ModelSpectrumKind::harmonic:
        param = c;
        break;
    case opideal::ModelSpectrumKind::log_semigroup:
        param = t;
        break;
    case opideal::ModelSpectrumKind::trace_class:
        param = r;
        break;
    }
    const opideal::SingularSpectrum s = opideal::make_model_spectrum(kind, param, n);
    const opideal::TraceEstimate est = opideal::estimate_dixmier_trace(s, window, slope_tol);
    print_kv("value", est.value);
    std::printf("window = [%zu, %zu]\n", est.window_lo, est.window_hi);
    print_kv("slope", est.slope);
    std::printf("converged = %s\n", est.converged ? "true" : "false");
    print_kv("window_min", est.window_min);
    print_kv("window_max", est.window_max);
    print_kv("dixmier_norm", opideal::dixmier_norm(s));
    return 0;
}

int cmd_validate_kato(const std::string& function, double a, double beta) {
    const opideal::KatoFunction h = opideal::make_builtin(function, a);
    const opideal::KatoValidationReport rep = opideal::validate_kato(h, beta);
    std::printf("function = %s\n", h.name.c_str());
    print_kv("value_at_zero", rep.value_at_zero);
    print_kv("right_derivative", rep.right_derivative);
    std::printf("range_ok = %s\n", rep.range_ok ? "true" : "false");
    std::printf("beta = %g\n", rep.beta);
    print_kv("beta_seminorm", rep.beta_seminorm);
    for (const opideal::DeltaSample& d : rep.delta_of_eps)
        std::printf("delta(%.1e) = %.17e\n", d.eps, d.delta);
    std::printf("verdict = %s\n", rep.pass ? "pass" : "fail");
    return rep.pass ? 0 : 1;
}

int cmd_trotter(const std::string& config_path) {
    opideal::ExperimentConfig cfg;
    try {
        if (config_path.empty()) {
            cfg = opideal::ExperimentConfig::default_experiment();
        } else {
            std::ifstream in(config_path);
            if (!in) {
                std::fprintf(stderr, "error: cannot open config '%s'\n", config_path.c_str());
                return 2;
            }
            std::stringstream ss;
            ss << in.rdbuf();
            cfg = opideal::ExperimentConfig::parse(ss.str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    }

    const opideal::ExperimentOutcome outcome = opideal::run_experiment(cfg);
    if (outcome.exit_code == 2) {
        std::fprintf(stderr, "configuration error: %s\n", outcome.failure_detail.c_str());
        return 2;
    }
    std::printf("wrote %s and %s\n", cfg.out_csv.c_str(), cfg.out_json.c_str());
    for (const opideal::SchemeNormResult& r : outcome.results) {
        if (r.fit) {
            const std::string note = r.fit_note.empty() ? "" : " (" + r.fit_note + ")";
            std::printf("%s/%s: gamma = %.4f, prefactor = %.4e, r^2 = %.6f%s\n",
                        opideal::scheme_name(r.scheme).c_str(), r.norm.c_str(), r.fit->gamma,
                        r.fit->prefactor, r.fit->r_squared, note.c_str());
        } else
            std::printf("%s/%s: fit skipped (%s)\n", opideal::scheme_name(r.scheme).c_str(),
                        r.norm.c_str(), r.fit_skip_reason.c_str());
    }
    if (outcome.checks_passed) {
        std::printf("checks_passed = true\n");
        return 0;
    }
    std::printf("checks_passed = false\n");
    std::fprintf(stderr, "check failures: %s\n", outcome.failure_detail.c_str());
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"opideal: symmetric operator-ideal norms, Dixmier traces and product-formula "
                 "convergence rates at matrix scale"};
    app.require_subcommand(1);

    std::string matrix_file, kind_token;
    CLI::App* norms = app.add_subcommand("norms", "ideal norm of a stored matrix");
    norms->add_option("matrix-file", matrix_file, "matrix text file (dim, then re/im pairs)")
        ->required();
    norms->add_option("--kind", kind_token,
                      "operator | schatten:<p|inf> | dixmier | weak:<p> | macaev:<p> | "
                      "pi:alpha:<a>")
        ->required();

    std::string model = "harmonic";
    double c = 1.0, t_param = 1.0, r_param = 0.5, window = 0.5, slope_tol = 0.02;
    std::size_t n_len = 100000;
    CLI::App* trace = app.add_subcommand("trace", "Dixmier trace estimate on a model spectrum");
    trace->add_option("--model", model, "harmonic | log_semigroup | trace_class")->required();
    trace->add_option("--n", n_len, "spectrum length")->required();
    trace->add_option("--c", c, "harmonic coefficient (s_j = c/j)");
    trace->add_option("--t", t_param, "log-semigroup exponent (s_j = j^-t)");
    trace->add_option("--r", r_param, "trace-class ratio (s_j = r^j)");
    trace->add_option("--window", window, "trailing window fraction (default 0.5)");
    trace->add_option("--slope-tol", slope_tol, "convergence slope tolerance (default 0.02)");

    std::string function = "exp";
    double a_param = 1.0, beta = 2.0;
    CLI::App* vk = app.add_subcommand("validate-kato", "validate a built-in Kato function");
    vk->add_option("--function", function, "exp | resolvent_power")->required();
    vk->add_option("--a", a_param, "resolvent power parameter (default 1)");
    vk->add_option("--beta", beta, "class exponent in (1, 2] (default 2)");

    std::string config_path;
    CLI::App* trotter = app.add_subcommand("trotter", "run a product-formula experiment");
    trotter->add_option("--config", config_path,
                        "experiment config file (omit for the default experiment)");

    CLI::App* selftest = app.add_subcommand("selftest", "run the full property suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (norms->parsed())
            return cmd_norms(matrix_file, kind_token);
        if (trace->parsed())
            return cmd_trace(model, c, t_param, r_param, n_len, window, slope_tol);
        if (vk->parsed())
            return cmd_validate_kato(function, a_param, beta);
        if (trotter->parsed())
            return cmd_trotter(config_path);
        if (selftest->parsed())
            return opideal::selftest::run_acceptance_suite(std::cout) ? 0 : 1;
    } catch (const opideal::ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
