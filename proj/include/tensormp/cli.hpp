#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tensormp/simulator.hpp"

namespace tensormp {

inline constexpr int kVerifyOrderCap = 7;

struct VerifyOptions {
    int p_max = 4;
};

/// Lemma battery: class-one counts against the Narayana formula, witness
/// uniqueness against brute force, crossing exclusion, and the closed-form
/// site counts. Prints one table row per order; returns 0 on a clean pass,
/// 1 on any mismatch. Orders above the cap are refused.
int run_verify(const VerifyOptions& options, std::ostream& out);

struct MomentsOptions {
    int p_max = 4;
    double c = 1.0;
    double d = 0.0;
    double m4 = 1.0;
    std::string tau_spec = "const:1";
    std::string json_path;
};

struct MomentsReport {
    MomentsOptions options;
    double theta = 1.0;
    std::vector<double> gammas;
    std::vector<double> mp_values;
    std::vector<std::string> symbolic;
    std::vector<double> carleman_partial_sums;
    bool carleman_saturating = false;
    std::string gamma1_note;
};

MomentsReport build_moments_report(const MomentsOptions& options);
int run_moments(const MomentsOptions& options, std::ostream& out);

struct OracleOptions {
    int n = 2, k = 1, m = 1, p = 1;
    std::string dist = "gaussian";
    std::string tau_spec = "const:1";
    bool with_variance = false;
    bool naive_check = false;
    std::string json_path;
};

int run_oracle(const OracleOptions& options, std::ostream& out);

struct SimulateOptions {
    ExperimentConfig base;
    std::vector<int> n_values;  // empty: just base.n
    std::string out_dir = ".";
    std::string config_path;
};

int run_simulate(const SimulateOptions& options, std::ostream& out);

struct ReportOptions {
    std::string in_dir;
    std::string out_file;
};

int run_report(const ReportOptions& options, std::ostream& out);

}  // namespace tensormp
