#include "tensormp/moments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tensormp/errors.hpp"

namespace tensormp {

double LimitParams::theta() const { return std::exp(d * (m4 - 1.0)); }

TauMoments TauMoments::constant(double value, int q_max) {
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    TauMoments tau;
    tau.moments_.resize(q_max);
    double power = 1.0;
    for (int q = 1; q <= q_max; ++q) {
        power *= value;
        tau.moments_[q - 1] = power;
    }
    return tau;
}

TauMoments TauMoments::from_sequence(std::span<const double> taus, int q_max) {
    if (taus.empty()) throw DomainError("tau sequence must be nonempty");
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    TauMoments tau;
    tau.moments_.assign(q_max, 0.0);
    for (double t : taus) {
        double power = 1.0;
        for (int q = 1; q <= q_max; ++q) {
            power *= t;
            tau.moments_[q - 1] += power;
        }
    }
    for (double& m : tau.moments_) m /= static_cast<double>(taus.size());
    return tau;
}

TauMoments TauMoments::two_point(double a, double b, double weight_a, int q_max) {
    if (weight_a < 0.0 || weight_a > 1.0) throw DomainError("two-point weight must be in [0,1]");
    if (q_max < 1) throw DomainError("q_max must be >= 1");
    TauMoments tau;
    tau.moments_.resize(q_max);
    double pa = 1.0, pb = 1.0;
    for (int q = 1; q <= q_max; ++q) {
        pa *= a;
        pb *= b;
        tau.moments_[q - 1] = weight_a * pa + (1.0 - weight_a) * pb;
    }
    return tau;
}

double TauMoments::moment(int q) const {
    if (q < 1 || q > max_order()) throw DomainError("tau moment order out of range");
    return moments_[q - 1];
}

MomentPolynomial::MomentPolynomial(int p, std::map<MomentTermKey, std::int64_t> terms)
    : p_(p), terms_(std::move(terms)) {}

namespace {

// Per-s accumulation with a running power of c keeps the floating structure
// identical to mp_moment, so the theta = 1, tau = 1 specialization compares
// bit-for-bit.
template <typename PerS>
double sum_over_s(int p, double c, PerS&& inner) {
    long double acc = 0.0L;
    long double c_pow = 1.0L;
    for (int s = 1; s <= p; ++s) {
        c_pow *= c;
        acc += c_pow * inner(s);
    }
    return static_cast<double>(acc);
}

}  // namespace

double MomentPolynomial::evaluate(const LimitParams& params, const TauMoments& tau) const {
    return evaluate_at_theta(params.c, params.theta(), tau);
}

double MomentPolynomial::evaluate_at_theta(double c, double theta, const TauMoments& tau) const {
    return sum_over_s(p_, c, [&](int s) {
        long double inner = 0.0L;
        for (const auto& [key, coeff] : terms_) {
            if (key.s != s) continue;
            long double monomial = std::pow(static_cast<long double>(theta), key.theta_exp);
            for (int d : key.degrees) monomial *= tau.moment(d);
            inner += static_cast<long double>(coeff) * monomial;
        }
        return inner;
    });
}

std::map<std::pair<int, int>, std::int64_t> MomentPolynomial::tau_one_terms() const {
    std::map<std::pair<int, int>, std::int64_t> merged;
    for (const auto& [key, coeff] : terms_) merged[{key.s, key.theta_exp}] += coeff;
    return merged;
}

std::string MomentPolynomial::to_string(bool tau_one) const {
    std::ostringstream out;
    bool first = true;
    auto emit = [&](std::int64_t coeff, int s, int e, const std::vector<int>* degrees) {
        if (!first) out << " + ";
        first = false;
        if (coeff != 1) out << coeff << " ";
        out << "c";
        if (s != 1) out << "^" << s;
        if (e > 0) {
            out << " theta";
            if (e != 1) out << "^" << e;
        }
        if (degrees) {
            std::map<int, int> mult;
            for (int d : *degrees) ++mult[d];
            for (const auto& [d, m] : mult) {
                out << " m" << d;
                if (m != 1) out << "^" << m;
            }
        }
    };
    if (tau_one) {
        // Highest s first reads like a polynomial in c; within s, theta
        // powers descending.
        auto merged = tau_one_terms();
        std::vector<std::pair<std::pair<int, int>, std::int64_t>> order(merged.begin(), merged.end());
        std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
            if (a.first.first != b.first.first) return a.first.first < b.first.first;
            return a.first.second > b.first.second;
        });
        for (const auto& [key, coeff] : order) emit(coeff, key.first, key.second, nullptr);
    } else {
        for (const auto& [key, coeff] : terms_) emit(coeff, key.s, key.theta_exp, &key.degrees);
    }
    return out.str();
}

nlohmann::json MomentPolynomial::to_json() const {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [key, coeff] : terms_) {
        terms.push_back({{"s", key.s},
                         {"theta_exp", key.theta_exp},
                         {"degrees", key.degrees},
                         {"coeff", coeff}});
    }
    return {{"p", p_}, {"terms", terms}};
}

MomentPolynomial limit_moment_symbolic(int p, int order_bound) {
    if (p < 1) throw DomainError("moment order must be >= 1");
    if (p > order_bound) throw BudgetError("moment order exceeds the configured bound");

    std::map<MomentTermKey, std::int64_t> terms;
    for (const auto& alpha : enumerate_class_one_all(p)) {
        MomentTermKey key;
        key.s = alpha.s;
        key.degrees = degree_profile(alpha).deg;
        std::sort(key.degrees.begin(), key.degrees.end(), std::greater<>());
        key.theta_exp = 0;
        for (int d : key.degrees) key.theta_exp += static_cast<int>(binomial(d, 2));
        ++terms[key];
    }
    return MomentPolynomial(p, std::move(terms));
}

double limit_moment_value(int p, const LimitParams& params, const TauMoments& tau,
                          int order_bound) {
    return limit_moment_symbolic(p, order_bound).evaluate(params, tau);
}

double limit_moment_d0(int p, double c, const TauMoments& tau, int order_bound) {
    return limit_moment_symbolic(p, order_bound).evaluate_at_theta(c, 1.0, tau);
}

double mp_moment(int p, double c) {
    if (p < 1) throw DomainError("moment order must be >= 1");
    return sum_over_s(p, c,
                      [&](int s) { return static_cast<long double>(narayana(p, s)); });
}

CarlemanReport carleman_report(std::span<const double> gammas, double c, double theta) {
    if (gammas.empty() || gammas.size() % 2 != 0)
        throw DomainError("carleman_report needs gamma_1..gamma_{2P}");
    CarlemanReport report;
    const int big_p = static_cast<int>(gammas.size()) / 2;
    double running = 0.0;
    for (int p = 1; p <= big_p; ++p) {
        const double even = gammas[2 * p - 1];
        if (even <= 0.0) throw DomainError("nonpositive even moment");
        const double term = std::pow(even, -1.0 / (2.0 * p));
        report.terms.push_back(term);
        running += term;
        report.partial_sums.push_back(running);
    }
    for (std::size_t idx = 0; idx < gammas.size(); ++idx) {
        const int p = static_cast<int>(idx) + 1;
        const double bound = c * std::pow(theta, 0.5 * p * (p - 1));
        report.lower_bound_ratio.push_back(gammas[idx] / bound);
    }
    report.super_exponential = report.terms.back() < 0.25 * report.terms.front();
    return report;
}

}  // namespace tensormp
