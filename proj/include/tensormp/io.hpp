#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tensormp/simulator.hpp"

namespace tensormp {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

/// Provenance block embedded in every artifact.
struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::string output_dir;
    std::string tool_version = kToolVersion;
    std::string timestamp;
    std::uint64_t seed = 0;

    static RunManifest create(std::string subcommand, std::string config_path,
                              std::string output_dir, std::uint64_t seed);
};

/// One (n, p) row of the summary table. gap = mean - theory when theory is
/// present.
struct SummaryRow {
    int n = 0, k = 0, m = 0, p = 0;
    double mean = 0.0;
    std::optional<double> variance;
    std::optional<double> std_error;
    std::optional<double> theory;

    std::optional<double> gap() const {
        if (!theory) return std::nullopt;
        return mean - *theory;
    }
};

std::vector<SummaryRow> summary_rows(std::span<const SpectralSummary> summaries);

/// Shortest round-trip decimal form (17 significant digits).
std::string format_double(double value);

void write_summary_csv(const std::filesystem::path& path, std::span<const SummaryRow> rows,
                       const RunManifest& manifest);
std::vector<SummaryRow> read_summary_csv(const std::filesystem::path& path);

nlohmann::json manifest_to_json(const RunManifest& manifest);
nlohmann::json summaries_to_json(std::span<const SpectralSummary> summaries,
                                 const RunManifest& manifest);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& payload);

}  // namespace tensormp
