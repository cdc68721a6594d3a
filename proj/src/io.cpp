#include "tensormp/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tensormp/errors.hpp"

namespace tensormp {

RunManifest RunManifest::create(std::string subcommand, std::string config_path,
                                std::string output_dir, std::uint64_t seed) {
    RunManifest manifest;
    manifest.subcommand = std::move(subcommand);
    manifest.config_path = std::move(config_path);
    manifest.output_dir = std::move(output_dir);
    manifest.seed = seed;

    const std::time_t now = std::time(nullptr);
    char buffer[32];
    std::tm utc{};
    gmtime_r(&now, &utc);
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    manifest.timestamp = buffer;
    return manifest;
}

std::vector<SummaryRow> summary_rows(std::span<const SpectralSummary> summaries) {
    std::vector<SummaryRow> rows;
    for (const auto& summary : summaries)
        for (const auto& stat : summary.moments) {
            SummaryRow row;
            row.n = summary.config.n;
            row.k = summary.config.k;
            row.m = summary.config.m;
            row.p = stat.p;
            row.mean = stat.mean;
            row.variance = stat.variance;
            row.std_error = stat.std_error;
            row.theory = stat.theory;
            rows.push_back(row);
        }
    return rows;
}

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

namespace {

std::string optional_field(const std::optional<double>& value) {
    return value ? format_double(*value) : std::string();
}

std::optional<double> parse_optional(const std::string& field) {
    if (field.empty()) return std::nullopt;
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) throw DomainError("bad number in CSV: " + field);
    return value;
}

constexpr const char* kCsvHeader = "n,k,m,p,mean,var,stderr,theory,gap";

}  // namespace

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows,
                       const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open for writing: " + path.string());
    out << "# tensormp " << manifest.tool_version << " subcommand=" << manifest.subcommand
        << " seed=" << manifest.seed << " time=" << manifest.timestamp << "\n";
    out << kCsvHeader << "\n";
    for (const auto& row : rows) {
        out << row.n << ',' << row.k << ',' << row.m << ',' << row.p << ','
            << format_double(row.mean) << ',' << optional_field(row.variance) << ','
            << optional_field(row.std_error) << ',' << optional_field(row.theory) << ','
            << optional_field(row.gap()) << "\n";
    }
    if (!out) throw DomainError("write failed: " + path.string());
}

std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open for reading: " + path.string());
    std::vector<SummaryRow> rows;
    std::string line;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            if (line != kCsvHeader) throw DomainError("unexpected CSV header in " + path.string());
            seen_header = true;
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream stream(line);
        std::string field;
        while (std::getline(stream, field, ',')) fields.push_back(field);
        while (fields.size() < 9) fields.emplace_back();
        if (fields.size() != 9) throw DomainError("bad CSV row: " + line);

        SummaryRow row;
        row.n = std::stoi(fields[0]);
        row.k = std::stoi(fields[1]);
        row.m = std::stoi(fields[2]);
        row.p = std::stoi(fields[3]);
        const auto mean = parse_optional(fields[4]);
        if (!mean) throw DomainError("missing mean in CSV row: " + line);
        row.mean = *mean;
        row.variance = parse_optional(fields[5]);
        row.std_error = parse_optional(fields[6]);
        row.theory = parse_optional(fields[7]);
        rows.push_back(row);
    }
    if (!seen_header) throw DomainError("no header found in " + path.string());
    return rows;
}

nlohmann::json manifest_to_json(const RunManifest& manifest) {
    return {{"tool_version", manifest.tool_version},
            {"subcommand", manifest.subcommand},
            {"config_path", manifest.config_path},
            {"output_dir", manifest.output_dir},
            {"timestamp", manifest.timestamp},
            {"seed", manifest.seed}};
}

namespace {

nlohmann::json histogram_to_json(const Histogram& hist) {
    return {{"edges", hist.edges},
            {"counts", hist.counts},
            {"below", hist.below},
            {"above", hist.above},
            {"zero_mass", hist.zero_mass},
            {"weight_per_eigenvalue", hist.weight_per_eigenvalue}};
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json out{{"n", config.n},           {"k", config.k},
                       {"m", config.m},           {"p_max", config.p_max},
                       {"dist", config.dist},     {"replicas", config.replicas},
                       {"seed", config.seed},     {"tau", config.taus.to_string()}};
    if (config.scheme) out["scheme"] = {{"c", config.scheme->c}, {"d", config.scheme->d}};
    if (config.histogram_bins) out["histogram_bins"] = *config.histogram_bins;
    return out;
}

}  // namespace

nlohmann::json summaries_to_json(std::span<const SpectralSummary> summaries,
                                 const RunManifest& manifest) {
    nlohmann::json experiments = nlohmann::json::array();
    for (const auto& summary : summaries) {
        nlohmann::json moments = nlohmann::json::array();
        for (const auto& stat : summary.moments) {
            nlohmann::json entry{{"p", stat.p}, {"mean", stat.mean}};
            if (stat.variance) entry["var"] = *stat.variance;
            if (stat.std_error) entry["stderr"] = *stat.std_error;
            if (stat.theory) {
                entry["theory"] = *stat.theory;
                entry["gap"] = stat.mean - *stat.theory;
            }
            moments.push_back(entry);
        }
        nlohmann::json experiment{{"config", config_to_json(summary.config)},
                                  {"ratio_k_over_n", summary.ratio_k_over_n},
                                  {"ratio_m_over_nk", summary.ratio_m_over_nk},
                                  {"moments", moments}};
        if (summary.histogram) experiment["histogram"] = histogram_to_json(*summary.histogram);
        if (summary.theory_note) experiment["theory_note"] = *summary.theory_note;
        experiments.push_back(experiment);
    }
    return {{"schema_version", kSchemaVersion},
            {"manifest", manifest_to_json(manifest)},
            {"experiments", experiments}};
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& payload) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open for writing: " + path.string());
    out << payload.dump(2) << "\n";
    if (!out) throw DomainError("write failed: " + path.string());
}

}  // namespace tensormp
