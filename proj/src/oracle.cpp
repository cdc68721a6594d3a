#include "tensormp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "tensormp/errors.hpp"

namespace tensormp {

namespace {

using ComplexL = std::complex<long double>;

/// Compensated (Kahan) accumulator; complex addition is componentwise, so the
/// classic scheme applies unchanged.
class KahanSum {
  public:
    void add(ComplexL x) {
        const ComplexL y = x - compensation_;
        const ComplexL t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }
    ComplexL value() const { return sum_; }

  private:
    ComplexL sum_{0.0L, 0.0L};
    ComplexL compensation_{0.0L, 0.0L};
};

ComplexL int_power(ComplexL base, int exp) {
    ComplexL acc{1.0L, 0.0L};
    for (int j = 0; j < exp; ++j) acc *= base;
    return acc;
}

/// Product of mixed moments over factor groups keyed by (vector, coordinate).
ComplexL group_product(const std::map<std::pair<int, int>, std::pair<int, int>>& groups,
                       const DistributionSpec& dist) {
    ComplexL product{1.0L, 0.0L};
    for (const auto& [key, mult] : groups) {
        const auto m = dist.mixed_moment(mult.first, mult.second);
        if (m == std::complex<double>(0.0, 0.0)) return {0.0L, 0.0L};
        product *= ComplexL(m.real(), m.imag());
    }
    return product;
}

void add_walk_groups(std::map<std::pair<int, int>, std::pair<int, int>>& groups,
                     const Sequence& i_seq, const Sequence& alpha) {
    const int p = static_cast<int>(alpha.size());
    for (int t = 0; t < p; ++t) {
        ++groups[{alpha[t], i_seq[t]}].first;                 // down, plain factor
        ++groups[{alpha[(t + 1) % p], i_seq[t]}].second;      // up, conjugated factor
    }
}

ComplexL walk_value(const Sequence& i_seq, const Sequence& alpha, const DistributionSpec& dist) {
    std::map<std::pair<int, int>, std::pair<int, int>> groups;
    add_walk_groups(groups, i_seq, alpha);
    return group_product(groups, dist);
}

/// Odometer over [base]^length with 1-based digits.
bool next_index(Sequence& digits, int base) {
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if (*it < base) {
            ++*it;
            return true;
        }
        *it = 1;
    }
    return false;
}

long double falling_factorial(int n, int r) {
    long double acc = 1.0L;
    for (int j = 0; j < r; ++j) acc *= static_cast<long double>(n - j);
    return acc;
}

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t cap) {
    std::uint64_t acc = 1;
    for (int j = 0; j < exp; ++j) {
        if (acc > cap / std::max<std::uint64_t>(base, 1)) return cap + 1;
        acc *= base;
    }
    return acc;
}

/// Number of canonical sequences of length p (Bell number), saturated at cap.
std::uint64_t bell_number_capped(int p, std::uint64_t cap) {
    std::vector<std::uint64_t> row{1};
    for (int j = 1; j < p; ++j) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t value : row) {
            const std::uint64_t sum = next.back() + value;
            next.push_back(std::min(sum, cap + 1));
        }
        row = std::move(next);
        if (row.back() > cap) return cap + 1;
    }
    return row.back();
}

void validate_config(int n, int k, int m, int p, std::span<const double> taus) {
    if (n < 1 || k < 1 || m < 1 || p < 1)
        throw DomainError("oracle requires n, k, m, p >= 1");
    if (static_cast<int>(taus.size()) != m)
        throw DomainError("tau list must have length m");
}

std::vector<long double> tau_power_sums(std::span<const double> taus, int q_max) {
    std::vector<long double> sums(q_max + 1, 0.0L);
    for (double t : taus) {
        long double p = 1.0L;
        for (int q = 1; q <= q_max; ++q) {
            p *= t;
            sums[q] += p;
        }
    }
    return sums;
}

/// Sum over injective relabelings phi: [s] -> [m] of prod_t tau_phi(t)^e_t,
/// by Moebius inversion over set partitions of [s]: merging a block B turns
/// it into the power sum P(sum of its exponents) with sign (-1)^{|B|-1}
/// and weight (|B|-1)!.
long double injective_tau_sum(const std::vector<int>& exponents,
                              const std::vector<long double>& power_sums) {
    const int s = static_cast<int>(exponents.size());
    long double result = 0.0L;
    for (const auto& partition : enumerate_all_canonical(s)) {
        std::vector<int> block_exponent(partition.s, 0);
        std::vector<int> block_size(partition.s, 0);
        for (int t = 0; t < s; ++t) {
            block_exponent[partition.entries[t] - 1] += exponents[t];
            ++block_size[partition.entries[t] - 1];
        }
        long double term = 1.0L;
        for (int b = 0; b < partition.s; ++b) {
            long double weight = 1.0L;
            for (int j = 2; j < block_size[b]; ++j) weight *= j;
            if (block_size[b] % 2 == 0) weight = -weight;
            term *= weight * power_sums[block_exponent[b]];
        }
        result += term;
    }
    return result;
}

double finish_real(ComplexL value, const char* what) {
    const long double scale = std::max<long double>(std::abs(value.real()), 1e-30L);
    if (std::abs(value.imag()) > 1e-10L * scale)
        throw NumericalError(std::string(what) + ": imaginary residue too large");
    return static_cast<double>(value.real());
}

}  // namespace

WalkExpectation expectation_walk(const Sequence& i_seq, const Sequence& alpha,
                                 const DistributionSpec& dist, int n) {
    if (i_seq.size() != alpha.size() || alpha.empty())
        throw DomainError("expectation_walk needs equal nonempty sequences");
    if (n < 1) throw DomainError("n must be >= 1");
    const auto value = walk_value(i_seq, alpha, dist);
    return {std::complex<double>(static_cast<double>(value.real()),
                                 static_cast<double>(value.imag())),
            -static_cast<int>(alpha.size())};
}

WalkExpectation expectation_pair_walk(const Sequence& i_seq, const Sequence& alpha,
                                      const Sequence& j_seq, const Sequence& beta,
                                      const DistributionSpec& dist, int n) {
    if (i_seq.size() != alpha.size() || j_seq.size() != beta.size() || alpha.empty() ||
        beta.empty())
        throw DomainError("expectation_pair_walk needs matching nonempty sequences");
    if (n < 1) throw DomainError("n must be >= 1");
    std::map<std::pair<int, int>, std::pair<int, int>> groups;
    add_walk_groups(groups, i_seq, alpha);
    add_walk_groups(groups, j_seq, beta);
    const auto value = group_product(groups, dist);
    return {std::complex<double>(static_cast<double>(value.real()),
                                 static_cast<double>(value.imag())),
            -static_cast<int>(alpha.size() + beta.size())};
}

namespace {

double expected_trace_moment_naive(int n, int k, int m, int p, std::span<const double> taus,
                                   const DistributionSpec& dist, const OracleBudget& budget) {
    const std::uint64_t cap = budget.max_group_evals;
    const std::uint64_t m_pow = checked_pow(m, p, cap);
    const std::uint64_t n_pow = checked_pow(n, p, cap);
    if (m_pow > cap || n_pow > cap || m_pow > cap / n_pow)
        throw BudgetError("naive enumeration exceeds the evaluation budget");

    const long double n_to_p = std::pow(static_cast<long double>(n), p);
    KahanSum outer;
    Sequence alpha(p, 1);
    do {
        long double tau_product = 1.0L;
        for (int v : alpha) tau_product *= taus[v - 1];
        if (tau_product == 0.0L) continue;

        KahanSum inner;
        Sequence i_seq(p, 1);
        do {
            inner.add(walk_value(i_seq, alpha, dist));
        } while (next_index(i_seq, n));
        outer.add(tau_product * int_power(inner.value() / n_to_p, k));
    } while (next_index(alpha, m));

    const long double n_to_k = std::pow(static_cast<long double>(n), k);
    return finish_real(outer.value() / n_to_k, "exact_expected_trace_moment");
}

double expected_trace_moment_canonical(int n, int k, int p, std::span<const double> taus,
                                       const DistributionSpec& dist, const OracleBudget& budget) {
    const std::uint64_t cap = budget.max_group_evals;
    const std::uint64_t canonical_count = bell_number_capped(p, cap);
    if (canonical_count > cap || canonical_count > cap / canonical_count)
        throw BudgetError("canonical enumeration exceeds the evaluation budget");

    const auto i_candidates = enumerate_all_canonical(p);

    const long double n_to_p = std::pow(static_cast<long double>(n), p);
    const auto power_sums = tau_power_sums(taus, p);
    KahanSum outer;
    for (int s = 1; s <= p; ++s) {
        for (const auto& alpha : enumerate_canonical(s, p)) {
            const long double tau_weight =
                injective_tau_sum(degree_profile(alpha).deg, power_sums);
            if (tau_weight == 0.0L) continue;

            KahanSum inner;
            for (const auto& i_canon : i_candidates) {
                const auto value = walk_value(i_canon.entries, alpha.entries, dist);
                if (value == ComplexL{0.0L, 0.0L}) continue;
                inner.add(falling_factorial(n, i_canon.s) * value);
            }
            outer.add(tau_weight * int_power(inner.value() / n_to_p, k));
        }
    }
    const long double n_to_k = std::pow(static_cast<long double>(n), k);
    return finish_real(outer.value() / n_to_k, "exact_expected_trace_moment");
}

}  // namespace

double exact_expected_trace_moment(int n, int k, int m, int p, std::span<const double> taus,
                                   const DistributionSpec& dist, OraclePath path,
                                   const OracleBudget& budget) {
    validate_config(n, k, m, p, taus);
    return path == OraclePath::Naive
               ? expected_trace_moment_naive(n, k, m, p, taus, dist, budget)
               : expected_trace_moment_canonical(n, k, p, taus, dist, budget);
}

double exact_variance_trace_moment(int n, int k, int m, int p, std::span<const double> taus,
                                   const DistributionSpec& dist, const OracleBudget& budget) {
    validate_config(n, k, m, p, taus);
    const std::uint64_t cap = budget.max_group_evals;
    const std::uint64_t half = checked_pow(static_cast<std::uint64_t>(m) * n, p, cap);
    if (half > cap || half > cap / half)
        throw BudgetError("variance enumeration exceeds the evaluation budget");

    const long double n_to_p = std::pow(static_cast<long double>(n), p);

    // Per-alpha inner sums S_alpha = sum_i E(i, alpha), reused across pairs.
    std::vector<Sequence> alphas;
    std::vector<ComplexL> single_sums;
    {
        Sequence alpha(p, 1);
        do {
            KahanSum inner;
            Sequence i_seq(p, 1);
            do {
                inner.add(walk_value(i_seq, alpha, dist));
            } while (next_index(i_seq, n));
            alphas.push_back(alpha);
            single_sums.push_back(inner.value() / n_to_p);
        } while (next_index(alpha, m));
    }

    KahanSum total;
    std::vector<char> in_alpha(m + 1, 0);
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
        const auto& alpha = alphas[ai];
        std::fill(in_alpha.begin(), in_alpha.end(), 0);
        for (int v : alpha) in_alpha[v] = 1;
        long double tau_a = 1.0L;
        for (int v : alpha) tau_a *= taus[v - 1];

        for (std::size_t bi = 0; bi < alphas.size(); ++bi) {
            const auto& beta = alphas[bi];
            const bool intersects =
                std::any_of(beta.begin(), beta.end(), [&](int v) { return in_alpha[v]; });
            if (!intersects) continue;  // independent pairs cancel exactly

            long double tau_b = 1.0L;
            for (int v : beta) tau_b *= taus[v - 1];
            const long double tau_product = tau_a * tau_b;
            if (tau_product == 0.0L) continue;

            KahanSum joint;
            Sequence i_seq(p, 1);
            do {
                Sequence j_seq(p, 1);
                do {
                    std::map<std::pair<int, int>, std::pair<int, int>> groups;
                    add_walk_groups(groups, i_seq, alpha);
                    add_walk_groups(groups, j_seq, beta);
                    joint.add(group_product(groups, dist));
                } while (next_index(j_seq, n));
            } while (next_index(i_seq, n));

            const ComplexL joint_sum = joint.value() / (n_to_p * n_to_p);
            const ComplexL product_sum = single_sums[ai] * single_sums[bi];
            total.add(tau_product * (int_power(joint_sum, k) - int_power(product_sum, k)));
        }
    }

    const long double n_to_2k = std::pow(static_cast<long double>(n), 2 * k);
    return finish_real(total.value() / n_to_2k, "exact_variance_trace_moment");
}

}  // namespace tensormp
