#include <cstdint>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "tensormp/cli.hpp"
#include "tensormp/errors.hpp"
#include "tensormp/io.hpp"

using namespace tensormp;

int main(int argc, char** argv) {
    CLI::App app{"Spectral moments of sums of rank-one k-fold tensor-product covariances"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);
    // One declarative file drives any subcommand through its [section];
    // command-line flags override file values.
    app.set_config("--config", "", "INI config file with per-subcommand sections");

    VerifyOptions verify_options;
    auto* verify = app.add_subcommand(
        "verify", "Check the counting lemmas by exhaustive enumeration");
    verify->add_option("--p-max", verify_options.p_max, "verify all orders up to this p")
        ->capture_default_str();

    MomentsOptions moments_options;
    auto* moments =
        app.add_subcommand("moments", "Limit spectral moments, symbolic and numeric");
    moments->add_option("--p-max", moments_options.p_max, "highest moment order")
        ->capture_default_str();
    moments->add_option("--c", moments_options.c, "limit of m/n^k")->capture_default_str();
    moments->add_option("--d", moments_options.d, "limit of k/n")->capture_default_str();
    moments->add_option("--m4", moments_options.m4, "fourth absolute moment of the base law")
        ->capture_default_str();
    moments->add_option("--tau", moments_options.tau_spec,
                        "coefficients: const:V | list:... | twopoint:a,b[,wa]")
        ->capture_default_str();
    moments->add_option("--json", moments_options.json_path, "write a JSON artifact");

    OracleOptions oracle_options;
    auto* oracle =
        app.add_subcommand("oracle", "Exact finite-size moment by full enumeration");
    oracle->add_option("--n", oracle_options.n, "base dimension")->capture_default_str();
    oracle->add_option("--k", oracle_options.k, "tensor factors")->capture_default_str();
    oracle->add_option("--m", oracle_options.m, "columns")->capture_default_str();
    oracle->add_option("--p", oracle_options.p, "moment order")->capture_default_str();
    oracle->add_option("--dist", oracle_options.dist, "base law")->capture_default_str();
    oracle->add_option("--tau", oracle_options.tau_spec, "coefficient rule")
        ->capture_default_str();
    oracle->add_flag("--variance", oracle_options.with_variance, "also the exact variance");
    oracle->add_flag("--naive", oracle_options.naive_check,
                     "cross-check against the naive enumeration");
    oracle->add_option("--json", oracle_options.json_path, "write a JSON artifact");

    SimulateOptions simulate_options;
    std::string tau_spec = "const:1";
    double scheme_c = 0.0, scheme_d = 0.0;
    int histogram_bins = 0;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo spectral statistics");
    simulate->fallthrough(true);  // lets --config appear after the subcommand
    simulate->add_option("--n", simulate_options.n_values, "base dimensions to sweep");
    simulate->add_option("--k", simulate_options.base.k,
                         "tensor factors (overridden by a scheme)")
        ->capture_default_str();
    simulate->add_option("--m", simulate_options.base.m, "columns (overridden by a scheme)")
        ->capture_default_str();
    simulate->add_option("--p-max", simulate_options.base.p_max, "highest moment order")
        ->capture_default_str();
    simulate->add_option("--dist", simulate_options.base.dist, "base law")
        ->capture_default_str();
    simulate->add_option("--replicas", simulate_options.base.replicas,
                         "independent replicas")
        ->capture_default_str();
    simulate->add_option("--seed", simulate_options.base.seed, "RNG seed")
        ->capture_default_str();
    simulate->add_option("--tau", tau_spec, "coefficient rule")->capture_default_str();
    simulate->add_option("--histogram-bins", histogram_bins,
                         "pooled eigenvalue histogram bins");
    auto* scheme_c_option = simulate->add_option("--scheme-c", scheme_c, "limit of m/n^k");
    auto* scheme_d_option = simulate->add_option("--scheme-d", scheme_d, "limit of k/n");
    simulate->add_option("--out", simulate_options.out_dir, "output directory")
        ->capture_default_str();

    ReportOptions report_options;
    auto* report = app.add_subcommand("report", "Join simulation CSVs into one table");
    report->add_option("--in", report_options.in_dir, "directory of summary CSVs")
        ->required();
    report->add_option("--out", report_options.out_file, "combined CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return run_verify(verify_options, std::cout);
        if (moments->parsed()) return run_moments(moments_options, std::cout);
        if (oracle->parsed()) return run_oracle(oracle_options, std::cout);
        if (simulate->parsed()) {
            simulate_options.base.taus = TauRule::parse(tau_spec);
            if (histogram_bins > 0) simulate_options.base.histogram_bins = histogram_bins;
            const bool have_c = scheme_c_option->count() > 0;
            const bool have_d = scheme_d_option->count() > 0;
            if (have_c != have_d) throw DomainError("a scheme needs both c and d");
            if (have_c) simulate_options.base.scheme = Scheme{scheme_c, scheme_d};
            if (!simulate_options.n_values.empty())
                simulate_options.base.n = simulate_options.n_values.front();
            if (app.get_config_ptr() && app.get_config_ptr()->count() > 0)
                simulate_options.config_path = app.get_config_ptr()->as<std::string>();
            return run_simulate(simulate_options, std::cout);
        }
        if (report->parsed()) return run_report(report_options, std::cout);
    } catch (const BudgetError& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
