#include "tensormp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tensormp/errors.hpp"
#include "tensormp/io.hpp"
#include "tensormp/moments.hpp"
#include "tensormp/oracle.hpp"

namespace tensormp {

namespace fs = std::filesystem;

int run_verify(const VerifyOptions& options, std::ostream& out) {
    if (options.p_max < 1) throw DomainError("p_max must be >= 1");
    if (options.p_max > kVerifyOrderCap)
        throw BudgetError("verification is capped at p <= " + std::to_string(kVerifyOrderCap));

    bool all_ok = true;
    out << "lemma verification up to p = " << options.p_max << "\n";
    out << "  p   counts  uniqueness  crossing  delta3/4   class-one sizes\n";
    for (int p = 1; p <= options.p_max; ++p) {
        bool counts_ok = true, unique_ok = true, crossing_ok = true, formulas_ok = true;
        std::vector<std::int64_t> sizes;
        for (int s = 1; s <= p; ++s) {
            const auto class_one = enumerate_class_one(s, p);
            sizes.push_back(static_cast<std::int64_t>(class_one.size()));
            if (sizes.back() != narayana(p, s)) counts_ok = false;
            for (const auto& alpha : class_one) {
                if (count_delta3_bruteforce(alpha) != delta3_count_formula(alpha))
                    formulas_ok = false;
                if (count_delta4_bruteforce(alpha) != delta4_count_formula(alpha))
                    formulas_ok = false;
            }
        }
        const auto i_candidates = enumerate_all_canonical(p);
        for (const auto& alpha : i_candidates) {
            const auto witness = class_one_witness(alpha);
            int found = 0;
            Sequence found_seq;
            for (const auto& i_seq : i_candidates)
                if (build_walk_graph(i_seq.entries, alpha).delta_class == DeltaClass::D1) {
                    ++found;
                    found_seq = i_seq.entries;
                }
            if (found > 1) unique_ok = false;
            if (found != (witness ? 1 : 0)) unique_ok = false;
            if (witness && found == 1 && *witness != found_seq) unique_ok = false;
            if (has_crossing_pattern(alpha) && witness) crossing_ok = false;
        }

        all_ok = all_ok && counts_ok && unique_ok && crossing_ok && formulas_ok;
        auto mark = [](bool ok) { return ok ? "ok    " : "FAIL  "; };
        out << std::setw(3) << p << "   " << mark(counts_ok) << "  " << mark(unique_ok)
            << "    " << mark(crossing_ok) << "  " << mark(formulas_ok) << "  [";
        for (std::size_t j = 0; j < sizes.size(); ++j) out << (j ? " " : "") << sizes[j];
        out << "]\n";
    }
    out << (all_ok ? "verification passed" : "verification FAILED") << "\n";
    return all_ok ? 0 : 1;
}

MomentsReport build_moments_report(const MomentsOptions& options) {
    if (options.p_max < 1) throw DomainError("p_max must be >= 1");
    const auto rule = TauRule::parse(options.tau_spec);
    const auto tau = rule.limit_moments(std::max(options.p_max, 1));
    const LimitParams params{.c = options.c, .d = options.d, .m4 = options.m4};
    const bool tau_is_one = rule.kind == TauRule::Kind::Constant && rule.value == 1.0;

    MomentsReport report;
    report.options = options;
    report.theta = params.theta();
    for (int p = 1; p <= options.p_max; ++p) {
        const auto poly = limit_moment_symbolic(p);
        report.gammas.push_back(poly.evaluate(params, tau));
        report.mp_values.push_back(mp_moment(p, options.c));
        report.symbolic.push_back(poly.to_string(tau_is_one));
    }
    if (options.p_max >= 2) {
        std::span<const double> gammas(report.gammas.data(),
                                       static_cast<std::size_t>(options.p_max / 2) * 2);
        const auto carleman = carleman_report(gammas, options.c, report.theta);
        report.carleman_partial_sums = carleman.partial_sums;
        report.carleman_saturating = carleman.super_exponential;
    }
    std::ostringstream note;
    note << "gamma_1 = c*m1 = " << format_double(report.gammas.front())
         << "; the unit-normalized convention gamma_1 = 1 differs whenever c*m1 != 1";
    report.gamma1_note = note.str();
    return report;
}

int run_moments(const MomentsOptions& options, std::ostream& out) {
    const auto report = build_moments_report(options);
    out << "limit moments: c=" << options.c << " d=" << options.d << " m4=" << options.m4
        << " theta=" << format_double(report.theta) << " tau=" << options.tau_spec << "\n";
    out << "  p  gamma_p                 mp_moment(p,c)          symbolic\n";
    for (int p = 1; p <= options.p_max; ++p) {
        out << std::setw(3) << p << "  " << std::setw(22) << format_double(report.gammas[p - 1])
            << "  " << std::setw(22) << format_double(report.mp_values[p - 1]) << "  "
            << report.symbolic[p - 1] << "\n";
    }
    out << "note: " << report.gamma1_note << "\n";
    if (!report.carleman_partial_sums.empty()) {
        out << "carleman partial sums:";
        for (double s : report.carleman_partial_sums) out << " " << format_double(s);
        out << (report.carleman_saturating ? "  (saturating: moment growth is super-exponential)"
                                           : "  (still growing)")
            << "\n";
    }

    if (!options.json_path.empty()) {
        nlohmann::json polys = nlohmann::json::array();
        for (int p = 1; p <= options.p_max; ++p)
            polys.push_back(limit_moment_symbolic(p).to_json());
        const auto manifest = RunManifest::create("moments", "", "", 0);
        nlohmann::json payload{{"schema_version", kSchemaVersion},
                               {"manifest", manifest_to_json(manifest)},
                               {"params",
                                {{"c", options.c},
                                 {"d", options.d},
                                 {"m4", options.m4},
                                 {"theta", report.theta},
                                 {"tau", options.tau_spec}}},
                               {"gamma", report.gammas},
                               {"mp", report.mp_values},
                               {"gamma1_note", report.gamma1_note},
                               {"polynomials", polys}};
        if (!report.carleman_partial_sums.empty()) {
            payload["carleman"] = {{"partial_sums", report.carleman_partial_sums},
                                   {"saturating", report.carleman_saturating}};
        }
        write_json_file(options.json_path, payload);
        out << "wrote " << options.json_path << "\n";
    }
    return 0;
}

int run_oracle(const OracleOptions& options, std::ostream& out) {
    const auto& dist = DistributionSpec::from_name(options.dist);
    const auto taus = TauRule::parse(options.tau_spec).realize(options.m);

    const double canonical = exact_expected_trace_moment(options.n, options.k, options.m,
                                                         options.p, taus, dist);
    out << "oracle: n=" << options.n << " k=" << options.k << " m=" << options.m
        << " p=" << options.p << " dist=" << options.dist << " tau=" << options.tau_spec
        << "\n";
    out << "exact (1/n^k) E[Tr M^p] = " << format_double(canonical) << "\n";

    std::optional<double> naive;
    if (options.naive_check) {
        naive = exact_expected_trace_moment(options.n, options.k, options.m, options.p, taus,
                                            dist, OraclePath::Naive);
        out << "naive path              = " << format_double(*naive)
            << "  |diff| = " << format_double(std::abs(*naive - canonical)) << "\n";
    }
    std::optional<double> variance;
    if (options.with_variance) {
        variance = exact_variance_trace_moment(options.n, options.k, options.m, options.p,
                                               taus, dist);
        out << "exact Var((1/n^k) Tr M^p) = " << format_double(*variance) << "\n";
    }

    if (!options.json_path.empty()) {
        const auto manifest = RunManifest::create("oracle", "", "", 0);
        nlohmann::json payload{{"schema_version", kSchemaVersion},
                               {"manifest", manifest_to_json(manifest)},
                               {"config",
                                {{"n", options.n},
                                 {"k", options.k},
                                 {"m", options.m},
                                 {"p", options.p},
                                 {"dist", options.dist},
                                 {"tau", options.tau_spec}}},
                               {"expected_trace_moment", canonical}};
        if (naive) payload["expected_trace_moment_naive"] = *naive;
        if (variance) payload["variance"] = *variance;
        write_json_file(options.json_path, payload);
        out << "wrote " << options.json_path << "\n";
    }
    return 0;
}

int run_simulate(const SimulateOptions& options, std::ostream& out) {
    std::vector<int> n_values = options.n_values;
    if (n_values.empty()) n_values.push_back(options.base.n);

    std::vector<SpectralSummary> summaries;
    for (int n : n_values) {
        ExperimentConfig config = options.base;
        config.n = n;
        summaries.push_back(run_experiment(config));
        const auto& summary = summaries.back();
        out << "n=" << summary.config.n << " k=" << summary.config.k
            << " m=" << summary.config.m << " replicas=" << summary.config.replicas << "\n";
        for (const auto& stat : summary.moments) {
            out << "  p=" << stat.p << " mean=" << format_double(stat.mean);
            if (stat.std_error) out << " stderr=" << format_double(*stat.std_error);
            if (stat.theory)
                out << " theory=" << format_double(*stat.theory)
                    << " gap=" << format_double(stat.mean - *stat.theory);
            out << "\n";
        }
        if (summary.theory_note) out << "  note: " << *summary.theory_note << "\n";
    }

    const fs::path dir(options.out_dir);
    fs::create_directories(dir);
    const auto manifest =
        RunManifest::create("simulate", options.config_path, options.out_dir,
                            options.base.seed);
    const auto rows = summary_rows(summaries);
    write_summary_csv(dir / "summary.csv", rows, manifest);
    write_json_file(dir / "summary.json", summaries_to_json(summaries, manifest));
    out << "wrote " << (dir / "summary.csv").string() << " and "
        << (dir / "summary.json").string() << "\n";
    return 0;
}

int run_report(const ReportOptions& options, std::ostream& out) {
    const fs::path dir(options.in_dir);
    if (!fs::is_directory(dir)) throw DomainError("not a directory: " + options.in_dir);

    std::vector<fs::path> inputs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            inputs.push_back(entry.path());
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty()) throw DomainError("no CSV inputs in " + options.in_dir);

    std::vector<SummaryRow> rows;
    for (const auto& path : inputs) {
        const auto part = read_summary_csv(path);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    std::sort(rows.begin(), rows.end(), [](const SummaryRow& a, const SummaryRow& b) {
        return std::tie(a.p, a.n, a.k, a.m) < std::tie(b.p, b.n, b.k, b.m);
    });

    out << "convergence table (" << rows.size() << " rows from " << inputs.size()
        << " files)\n";
    int last_p = -1;
    for (const auto& row : rows) {
        if (row.p != last_p) {
            out << "p = " << row.p << "\n";
            last_p = row.p;
        }
        out << "  n=" << row.n << " k=" << row.k << " m=" << row.m
            << " mean=" << format_double(row.mean);
        if (row.theory) out << " theory=" << format_double(*row.theory);
        if (row.gap()) out << " gap=" << format_double(*row.gap());
        out << "\n";
    }

    const auto manifest = RunManifest::create("report", options.in_dir, options.out_file, 0);
    write_summary_csv(options.out_file, rows, manifest);
    out << "wrote " << options.out_file << "\n";
    return 0;
}

}  // namespace tensormp
