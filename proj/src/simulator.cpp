#include "tensormp/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tensormp/errors.hpp"
#include "tensormp/rng.hpp"

namespace tensormp {

std::vector<double> TauRule::realize(int m) const {
    if (m < 1) throw DomainError("m must be >= 1");
    switch (kind) {
        case Kind::Constant:
            return std::vector<double>(m, value);
        case Kind::List:
            if (static_cast<int>(list.size()) != m)
                throw DomainError("tau list length must equal m");
            return list;
        case Kind::TwoPoint: {
            const int count_a = static_cast<int>(std::lround(weight_a * m));
            std::vector<double> out(m, b);
            std::fill(out.begin(), out.begin() + std::min(count_a, m), a);
            return out;
        }
    }
    throw DomainError("bad tau rule");
}

TauMoments TauRule::limit_moments(int q_max) const {
    switch (kind) {
        case Kind::Constant:
            return TauMoments::constant(value, q_max);
        case Kind::List:
            return TauMoments::from_sequence(list, q_max);
        case Kind::TwoPoint:
            return TauMoments::two_point(a, b, weight_a, q_max);
    }
    throw DomainError("bad tau rule");
}

TauRule TauRule::parse(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) throw DomainError("tau spec needs the form kind:args");
    const std::string kind = spec.substr(0, colon);
    const std::string args = spec.substr(colon + 1);

    auto split_numbers = [&](const std::string& text) {
        std::vector<double> out;
        std::stringstream stream(text);
        std::string piece;
        while (std::getline(stream, piece, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(piece, &used));
                if (used != piece.size()) throw std::invalid_argument(piece);
            } catch (const std::logic_error&) {
                throw DomainError("bad number in tau spec: " + piece);
            }
        }
        return out;
    };

    TauRule rule;
    if (kind == "const") {
        const auto nums = split_numbers(args);
        if (nums.size() != 1) throw DomainError("const tau takes one value");
        rule.kind = Kind::Constant;
        rule.value = nums[0];
    } else if (kind == "list") {
        rule.kind = Kind::List;
        rule.list = split_numbers(args);
        if (rule.list.empty()) throw DomainError("tau list must be nonempty");
    } else if (kind == "twopoint") {
        const auto nums = split_numbers(args);
        if (nums.size() != 2 && nums.size() != 3)
            throw DomainError("twopoint tau takes a,b[,weight_a]");
        rule.kind = Kind::TwoPoint;
        rule.a = nums[0];
        rule.b = nums[1];
        rule.weight_a = nums.size() == 3 ? nums[2] : 0.5;
        if (rule.weight_a < 0.0 || rule.weight_a > 1.0)
            throw DomainError("twopoint weight must be in [0,1]");
    } else {
        throw DomainError("unknown tau rule: " + kind);
    }
    return rule;
}

std::string TauRule::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Constant:
            out << "const:" << value;
            break;
        case Kind::List:
            out << "list:";
            for (std::size_t j = 0; j < list.size(); ++j) out << (j ? "," : "") << list[j];
            break;
        case Kind::TwoPoint:
            out << "twopoint:" << a << "," << b << "," << weight_a;
            break;
    }
    return out.str();
}

void ExperimentConfig::validate() const {
    if (n < 2) throw DomainError("n must be >= 2");
    if (k < 1 || m < 1) throw DomainError("k and m must be >= 1");
    if (m > kMaxColumns) throw BudgetError("m exceeds the column cap");
    if (p_max < 1 || p_max > 32) throw DomainError("p_max must be in [1,32]");
    if (replicas < 1) throw DomainError("replicas must be >= 1");
    if (histogram_bins && *histogram_bins < 1) throw DomainError("histogram bins must be >= 1");
    DistributionSpec::from_name(dist);
    taus.realize(m);
}

ExperimentConfig ExperimentConfig::resolved() const {
    ExperimentConfig out = *this;
    if (scheme) {
        if (scheme->c <= 0.0 || scheme->d < 0.0) throw DomainError("scheme needs c > 0, d >= 0");
        out.k = std::max(1, static_cast<int>(std::lround(scheme->d * n)));
        const double nk = std::pow(static_cast<double>(n), out.k);
        const double m_real = scheme->c * nk;
        if (m_real > static_cast<double>(kMaxColumns))
            throw BudgetError("scheme-derived m exceeds the column cap");
        out.m = std::max(1, static_cast<int>(std::lround(m_real)));
    }
    out.validate();
    return out;
}

namespace {

using std::numbers::pi;

std::complex<double> sample_entry(const CounterStream& stream, DistributionSpec::Id id,
                                  std::uint64_t entry) {
    switch (id) {
        case DistributionSpec::Id::ComplexGaussian: {
            // |xi|^2 ~ Exp(1) with a uniform phase.
            const double radius = std::sqrt(-std::log(stream.uniform(2 * entry)));
            const double angle = 2.0 * pi * stream.uniform(2 * entry + 1);
            return {radius * std::cos(angle), radius * std::sin(angle)};
        }
        case DistributionSpec::Id::Phase: {
            const double angle = 2.0 * pi * stream.uniform(2 * entry);
            return {std::cos(angle), std::sin(angle)};
        }
        case DistributionSpec::Id::Rademacher:
            return {(stream.word(2 * entry) >> 63) ? 1.0 : -1.0, 0.0};
        case DistributionSpec::Id::RealGaussian: {
            const double radius = std::sqrt(-2.0 * std::log(stream.uniform(2 * entry)));
            return {radius * std::cos(2.0 * pi * stream.uniform(2 * entry + 1)), 0.0};
        }
    }
    throw DomainError("bad distribution id");
}

}  // namespace

BaseVectors sample_base_vectors(const ExperimentConfig& config, int replica_index) {
    config.validate();
    const auto id = DistributionSpec::from_name(config.dist).id();
    BaseVectors vectors(config.n, config.k, config.m);
    const double scale = 1.0 / std::sqrt(static_cast<double>(config.n));
    for (int alpha = 0; alpha < config.m; ++alpha)
        for (int l = 0; l < config.k; ++l) {
            const CounterStream stream(
                CounterStream::derive_key(config.seed, replica_index, alpha, l));
            auto column = vectors.at(alpha, l);
            for (int e = 0; e < config.n; ++e) column[e] = scale * sample_entry(stream, id, e);
        }
    return vectors;
}

Eigen::MatrixXcd gram_matrix(const BaseVectors& vectors) {
    const int m = vectors.m();
    Eigen::MatrixXcd gram = Eigen::MatrixXcd::Ones(m, m);
    Eigen::MatrixXcd slot(vectors.n(), m);
    for (int l = 0; l < vectors.k(); ++l) {
        for (int alpha = 0; alpha < m; ++alpha) {
            const auto column = vectors.at(alpha, l);
            for (int e = 0; e < vectors.n(); ++e) slot(e, alpha) = column[e];
        }
        gram = gram.cwiseProduct((slot.adjoint() * slot).eval());
    }
    return gram;
}

std::vector<double> trace_moments_from_gram(const Eigen::MatrixXcd& gram,
                                            std::span<const double> taus, int p_max, int n,
                                            int k) {
    const auto m = gram.rows();
    if (gram.cols() != m) throw DomainError("gram matrix must be square");
    if (static_cast<Eigen::Index>(taus.size()) != m)
        throw DomainError("tau list must match the gram dimension");
    if (p_max < 1) throw DomainError("p_max must be >= 1");

    Eigen::MatrixXcd weighted = gram;
    for (Eigen::Index row = 0; row < m; ++row) weighted.row(row) *= taus[row];

    // Powers up to ceil(p_max/2); higher traces contract two powers.
    const int half = (p_max + 1) / 2;
    std::vector<Eigen::MatrixXcd> powers;
    powers.reserve(half);
    powers.push_back(weighted);
    for (int j = 2; j <= half; ++j) powers.push_back((powers.back() * weighted).eval());

    const double norm = std::pow(static_cast<double>(n), k);
    const double magnitude = std::max(weighted.norm(), 1e-300);

    std::vector<double> moments;
    moments.reserve(p_max);
    for (int p = 1; p <= p_max; ++p) {
        std::complex<double> trace;
        if (p <= half) {
            trace = powers[p - 1].trace();
        } else {
            const auto& left = powers[p / 2 - 1];
            const auto& right = powers[p - p / 2 - 1];
            trace = left.cwiseProduct(right.transpose()).sum();
        }
        const double tolerance = 1e-8 * std::max(std::abs(trace.real()),
                                                 std::pow(magnitude, p));
        if (std::abs(trace.imag()) > tolerance)
            throw NumericalError("trace moment has a large imaginary residue");
        moments.push_back(trace.real() / norm);
    }
    return moments;
}

double Histogram::mass_between(double lo, double hi) const {
    double mass = 0.0;
    for (std::size_t bin = 0; bin + 1 < edges.size(); ++bin)
        if (edges[bin] >= lo && edges[bin + 1] <= hi)
            mass += weight_per_eigenvalue * static_cast<double>(counts[bin]);
    if (lo <= 0.0 && hi >= 0.0) mass += zero_mass;
    return mass;
}

Histogram eigen_histogram(const Eigen::MatrixXcd& gram, std::span<const double> taus,
                          std::span<const double> edges, int n, int k) {
    const auto m = gram.rows();
    if (static_cast<Eigen::Index>(taus.size()) != m)
        throw DomainError("tau list must match the gram dimension");
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
        throw DomainError("histogram edges must be sorted with at least two entries");
    for (double t : taus)
        if (t <= 0.0)
            throw DomainError("eigenvalue histograms need strictly positive tau");

    Eigen::VectorXd sqrt_tau(m);
    for (Eigen::Index j = 0; j < m; ++j) sqrt_tau(j) = std::sqrt(taus[j]);
    const Eigen::MatrixXcd symmetrized =
        sqrt_tau.asDiagonal() * gram * sqrt_tau.asDiagonal();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(symmetrized,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
    Eigen::VectorXd lambda = solver.eigenvalues();  // ascending

    const double scale = std::max(lambda.cwiseAbs().maxCoeff(), 1.0);
    if (lambda.minCoeff() < -1e-9 * scale)
        throw NumericalError("gram spectrum has a negative eigenvalue beyond tolerance");

    const double nk = std::pow(static_cast<double>(n), k);
    Histogram hist;
    hist.edges.assign(edges.begin(), edges.end());
    hist.counts.assign(edges.size() - 1, 0);
    hist.weight_per_eigenvalue = 1.0 / nk;

    // With m > n^k the gram side carries m - n^k spurious null directions;
    // drop them before binning. They must be numerically zero.
    Eigen::Index start = 0;
    if (static_cast<double>(m) > nk) {
        start = m - static_cast<Eigen::Index>(std::llround(nk));
        for (Eigen::Index j = 0; j < start; ++j)
            if (std::abs(lambda(j)) > 1e-9 * scale)
                throw NumericalError("expected null direction carries a nonzero eigenvalue");
    } else {
        hist.zero_mass = (nk - static_cast<double>(m)) / nk;
    }

    for (Eigen::Index j = start; j < m; ++j) {
        const double value = lambda(j);
        if (value < hist.edges.front()) {
            ++hist.below;
        } else if (value > hist.edges.back()) {
            ++hist.above;
        } else {
            auto it = std::upper_bound(hist.edges.begin(), hist.edges.end(), value);
            std::size_t bin = static_cast<std::size_t>(it - hist.edges.begin());
            bin = bin == 0 ? 0 : bin - 1;
            if (bin >= hist.counts.size()) bin = hist.counts.size() - 1;  // right edge
            ++hist.counts[bin];
        }
    }
    return hist;
}

namespace {

std::optional<std::vector<double>> theory_targets(const ExperimentConfig& config) {
    if (!config.scheme) return std::nullopt;
    const auto& dist = DistributionSpec::from_name(config.dist);
    const LimitParams params{.c = config.scheme->c, .d = config.scheme->d, .m4 = dist.m4()};
    const auto tau_limit = config.taus.limit_moments(config.p_max);
    std::vector<double> targets;
    targets.reserve(config.p_max);
    for (int p = 1; p <= config.p_max; ++p)
        targets.push_back(limit_moment_value(p, params, tau_limit));
    return targets;
}

}  // namespace

SpectralSummary run_experiment(const ExperimentConfig& raw_config) {
    const ExperimentConfig config = raw_config.resolved();
    const auto taus = config.taus.realize(config.m);

    SpectralSummary summary;
    summary.config = config;
    summary.taus = taus;
    summary.ratio_k_over_n = static_cast<double>(config.k) / config.n;
    summary.ratio_m_over_nk =
        static_cast<double>(config.m) / std::pow(static_cast<double>(config.n), config.k);

    std::vector<std::vector<double>> samples(config.p_max);
    std::vector<double> pooled_eigenvalues;

    for (int replica = 0; replica < config.replicas; ++replica) {
        const auto vectors = sample_base_vectors(config, replica);
        const auto gram = gram_matrix(vectors);
        const auto moments =
            trace_moments_from_gram(gram, taus, config.p_max, config.n, config.k);
        for (int p = 1; p <= config.p_max; ++p) samples[p - 1].push_back(moments[p - 1]);

        if (config.histogram_bins) {
            Eigen::VectorXd sqrt_tau(config.m);
            for (int j = 0; j < config.m; ++j) {
                if (taus[j] <= 0.0)
                    throw DomainError("eigenvalue histograms need strictly positive tau");
                sqrt_tau(j) = std::sqrt(taus[j]);
            }
            const Eigen::MatrixXcd symmetrized =
                sqrt_tau.asDiagonal() * gram * sqrt_tau.asDiagonal();
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(symmetrized,
                                                                   Eigen::EigenvaluesOnly);
            if (solver.info() != Eigen::Success) throw NumericalError("eigensolver failed");
            const auto& lambda = solver.eigenvalues();
            pooled_eigenvalues.insert(pooled_eigenvalues.end(), lambda.begin(), lambda.end());
        }
    }

    const auto targets = theory_targets(config);
    for (int p = 1; p <= config.p_max; ++p) {
        MomentStat stat;
        stat.p = p;
        const auto& values = samples[p - 1];
        long double sum = 0.0L;
        for (double v : values) sum += v;
        stat.mean = static_cast<double>(sum / values.size());
        if (config.replicas >= 2) {
            long double ss = 0.0L;
            for (double v : values) {
                const long double centered = v - stat.mean;
                ss += centered * centered;
            }
            const double variance = static_cast<double>(ss / (values.size() - 1));
            stat.variance = variance;
            stat.std_error = std::sqrt(variance / values.size());
        }
        if (targets) stat.theory = (*targets)[p - 1];
        summary.moments.push_back(stat);
    }

    if (config.histogram_bins) {
        // One shared histogram over the pooled replica spectra.
        const double lo = 0.0;
        double hi = 1.0;
        for (double v : pooled_eigenvalues) hi = std::max(hi, v);
        hi *= 1.0 + 1e-12;
        const int bins = *config.histogram_bins;
        Histogram hist;
        hist.edges.resize(bins + 1);
        for (int j = 0; j <= bins; ++j)
            hist.edges[j] = lo + (hi - lo) * static_cast<double>(j) / bins;
        hist.counts.assign(bins, 0);
        const double nk = std::pow(static_cast<double>(config.n), config.k);
        hist.weight_per_eigenvalue = 1.0 / (nk * config.replicas);
        hist.zero_mass = std::max(0.0, (nk - config.m) / nk);
        for (double value : pooled_eigenvalues) {
            if (value < lo) {
                ++hist.below;
                continue;
            }
            auto bin = static_cast<std::size_t>((value - lo) / (hi - lo) * bins);
            if (bin >= hist.counts.size()) {
                ++hist.above;
                continue;
            }
            ++hist.counts[bin];
        }
        summary.histogram = std::move(hist);
    }

    if (DistributionSpec::from_name(config.dist).is_real() && config.scheme)
        summary.theory_note = "theory targets are derived for complex base variables";
    return summary;
}

VarianceDecayReport variance_decay_report(std::span<const ExperimentConfig> family, int p) {
    if (family.size() < 2) throw DomainError("variance decay needs at least two family members");
    VarianceDecayReport report;
    report.p = p;
    std::vector<double> log_nk, log_var;
    for (const auto& member : family) {
        const auto config = member.resolved();
        if (config.p_max < p) throw DomainError("family member has p_max below requested p");
        if (config.replicas < 2) throw DomainError("variance needs replicas >= 2");
        const auto summary = run_experiment(config);
        const auto& stat = summary.moments[p - 1];
        VarianceDecayRow row;
        row.n = config.n;
        row.k = config.k;
        row.m = config.m;
        row.variance = *stat.variance;
        const double nk = std::pow(static_cast<double>(config.n), config.k);
        row.var_times_nk = row.variance * nk;
        report.rows.push_back(row);
        if (row.variance > 0.0) {
            log_nk.push_back(std::log(nk));
            log_var.push_back(std::log(row.variance));
        }
    }
    if (log_nk.size() >= 2) {
        // Least-squares slope of log Var against log n^k.
        const auto size = static_cast<double>(log_nk.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t j = 0; j < log_nk.size(); ++j) {
            sx += log_nk[j];
            sy += log_var[j];
            sxx += log_nk[j] * log_nk[j];
            sxy += log_nk[j] * log_var[j];
        }
        report.fitted_exponent = -(size * sxy - sx * sy) / (size * sxx - sx * sx);
    } else {
        report.fitted_exponent = std::numeric_limits<double>::quiet_NaN();
    }
    return report;
}

}  // namespace tensormp
