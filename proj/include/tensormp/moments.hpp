#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tensormp/combinatorics.hpp"

namespace tensormp {

/// Parameters of the limiting scheme: c = lim m/n^k, d = lim k/n, and the
/// fourth absolute moment m4 of the base variable. The amplification factor
/// is theta = exp(d (m4 - 1)).
struct LimitParams {
    double c = 1.0;
    double d = 0.0;
    double m4 = 1.0;

    double theta() const;
};

/// Limits m_q = lim (1/m) sum_j tau_j^q for q = 1..max_order.
class TauMoments {
  public:
    static TauMoments constant(double value, int q_max);
    static TauMoments from_sequence(std::span<const double> taus, int q_max);
    static TauMoments two_point(double a, double b, double weight_a, int q_max);

    double moment(int q) const;  // DomainError when q is out of range
    int max_order() const { return static_cast<int>(moments_.size()); }

  private:
    std::vector<double> moments_;
};

/// One monomial class of the limit moment: all class-one sequences sharing
/// (s, theta exponent, degree multiset). The coefficient counts them.
struct MomentTermKey {
    int s = 0;
    int theta_exp = 0;
    std::vector<int> degrees;  // sorted descending, sums to p

    auto operator<=>(const MomentTermKey&) const = default;
};

class MomentPolynomial {
  public:
    MomentPolynomial(int p, std::map<MomentTermKey, std::int64_t> terms);

    int order() const { return p_; }
    const std::map<MomentTermKey, std::int64_t>& terms() const { return terms_; }

    double evaluate(const LimitParams& params, const TauMoments& tau) const;
    double evaluate_at_theta(double c, double theta, const TauMoments& tau) const;

    /// Coefficients after setting tau == 1, merged by (s, theta exponent).
    std::map<std::pair<int, int>, std::int64_t> tau_one_terms() const;

    std::string to_string(bool tau_one = false) const;
    nlohmann::json to_json() const;

  private:
    int p_;
    std::map<MomentTermKey, std::int64_t> terms_;
};

inline constexpr int kDefaultMomentOrderBound = 12;

/// Exact expansion of the p-th limit moment over class-one sequences.
/// Term count grows like the Catalan numbers; orders beyond the bound are
/// refused with BudgetError.
MomentPolynomial limit_moment_symbolic(int p, int order_bound = kDefaultMomentOrderBound);

double limit_moment_value(int p, const LimitParams& params, const TauMoments& tau,
                          int order_bound = kDefaultMomentOrderBound);

/// The d = 0 specialization (theta = 1).
double limit_moment_d0(int p, double c, const TauMoments& tau,
                       int order_bound = kDefaultMomentOrderBound);

/// p-th moment of the Marchenko-Pastur law: sum_s Narayana(p,s) c^s.
double mp_moment(int p, double c);

struct CarlemanReport {
    std::vector<double> terms;          // gamma_{2p}^{-1/(2p)}
    std::vector<double> partial_sums;
    std::vector<double> lower_bound_ratio;  // gamma_p / (c theta^{p(p-1)/2})
    bool super_exponential = false;     // terms collapse; the sum visibly saturates
};

/// Diagnostics for the moment-growth condition sum gamma_{2p}^{-1/(2p)} = inf.
/// gammas must hold gamma_1..gamma_{2P}; the ratio column uses the tau == 1
/// lower bound c theta^{p(p-1)/2}.
CarlemanReport carleman_report(std::span<const double> gammas, double c, double theta);

}  // namespace tensormp
