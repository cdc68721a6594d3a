#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tensormp/distributions.hpp"
#include "tensormp/moments.hpp"

namespace tensormp {

/// Limiting scheme k/n -> d, m/n^k -> c used to size experiments.
struct Scheme {
    double c = 1.0;
    double d = 1.0;
};

/// Coefficient rule: constant, explicit per-column list, or a two-point
/// mixture realized as a deterministic proportional split.
struct TauRule {
    enum class Kind { Constant, List, TwoPoint };

    Kind kind = Kind::Constant;
    double value = 1.0;
    std::vector<double> list;
    double a = 1.0, b = 1.0, weight_a = 0.5;

    std::vector<double> realize(int m) const;
    TauMoments limit_moments(int q_max) const;

    /// "const:V" | "list:v1,v2,..." | "twopoint:a,b[,weight_a]"
    static TauRule parse(const std::string& spec);
    std::string to_string() const;
};

struct ExperimentConfig {
    int n = 2;
    int k = 1;
    int m = 1;
    int p_max = 2;
    std::string dist = "gaussian";
    TauRule taus;
    int replicas = 1;
    std::uint64_t seed = 0;
    std::optional<Scheme> scheme;
    std::optional<int> histogram_bins;

    /// With a scheme, derive k = round(d n) and m = round(c n^k), both
    /// floored at 1. Validates everything and resolves the distribution.
    ExperimentConfig resolved() const;
    void validate() const;
};

inline constexpr int kMaxColumns = 100000;  // cap on m after scheme rounding

/// The m x k base vectors of one replica, each of length n and already
/// scaled by 1/sqrt(n). Entry streams are a pure function of
/// (seed, replica, alpha, l), so any vector can be regenerated in isolation.
class BaseVectors {
  public:
    BaseVectors(int n, int k, int m) : n_(n), k_(k), m_(m), data_(
        static_cast<std::size_t>(n) * k * m) {}

    int n() const { return n_; }
    int k() const { return k_; }
    int m() const { return m_; }

    std::span<std::complex<double>> at(int alpha, int l) {
        return {data_.data() + (static_cast<std::size_t>(alpha) * k_ + l) * n_,
                static_cast<std::size_t>(n_)};
    }
    std::span<const std::complex<double>> at(int alpha, int l) const {
        return {data_.data() + (static_cast<std::size_t>(alpha) * k_ + l) * n_,
                static_cast<std::size_t>(n_)};
    }

  private:
    int n_, k_, m_;
    std::vector<std::complex<double>> data_;
};

BaseVectors sample_base_vectors(const ExperimentConfig& config, int replica_index);

/// G[alpha][beta] = prod_l <y_alpha^(l), y_beta^(l)>, conjugate-linear in the
/// first argument. Hermitian positive semidefinite.
Eigen::MatrixXcd gram_matrix(const BaseVectors& vectors);

/// (1/n^k) Tr((T G)^p) for p = 1..p_max, T = diag(taus). Works for any real
/// taus; the imaginary residue of each trace must stay below 1e-8 relative.
std::vector<double> trace_moments_from_gram(const Eigen::MatrixXcd& gram,
                                            std::span<const double> taus, int p_max, int n,
                                            int k);

struct Histogram {
    std::vector<double> edges;
    std::vector<std::int64_t> counts;  // one per bin, right-open except the last
    std::int64_t below = 0;
    std::int64_t above = 0;
    double zero_mass = 0.0;            // atom from the n^k - m null directions
    double weight_per_eigenvalue = 0.0;

    double mass_between(double lo, double hi) const;
};

/// Spectrum histogram of T^{1/2} G T^{1/2} (requires all taus > 0), plus the
/// explicit zero atom when m < n^k.
Histogram eigen_histogram(const Eigen::MatrixXcd& gram, std::span<const double> taus,
                          std::span<const double> edges, int n, int k);

struct MomentStat {
    int p = 0;
    double mean = 0.0;
    std::optional<double> variance;
    std::optional<double> std_error;
    std::optional<double> theory;
};

struct SpectralSummary {
    ExperimentConfig config;          // resolved
    std::vector<double> taus;         // realized coefficients
    double ratio_k_over_n = 0.0;      // actual k/n after rounding
    double ratio_m_over_nk = 0.0;     // actual m/n^k after rounding
    std::vector<MomentStat> moments;
    std::optional<Histogram> histogram;
    std::optional<std::string> theory_note;
};

SpectralSummary run_experiment(const ExperimentConfig& config);

struct VarianceDecayRow {
    int n = 0, k = 0, m = 0;
    double variance = 0.0;
    double var_times_nk = 0.0;
};

struct VarianceDecayReport {
    int p = 0;
    std::vector<VarianceDecayRow> rows;
    double fitted_exponent = 0.0;  // beta in Var ~ (n^k)^(-beta); NaN if unfit
};

/// Empirical variance across an n-family at fixed p, with the n^k envelope.
VarianceDecayReport variance_decay_report(std::span<const ExperimentConfig> family, int p);

}  // namespace tensormp
