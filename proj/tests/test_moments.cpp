#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "tensormp/errors.hpp"
#include "tensormp/moments.hpp"

using namespace tensormp;

namespace {

using TauOneTerms = std::map<std::pair<int, int>, std::int64_t>;

double direct_class_one_sum(int p, double c, double theta, const TauMoments& tau) {
    long double acc = 0.0L;
    for (int s = 1; s <= p; ++s) {
        for (const auto& alpha : enumerate_class_one(s, p)) {
            const auto profile = degree_profile(alpha);
            int exponent = 0;
            long double m_product = 1.0L;
            for (int d : profile.deg) {
                exponent += static_cast<int>(binomial(d, 2));
                m_product *= tau.moment(d);
            }
            acc += std::pow(static_cast<long double>(c), s) *
                   std::pow(static_cast<long double>(theta), exponent) * m_product;
        }
    }
    return static_cast<double>(acc);
}

}  // namespace

TEST_CASE("symbolic polynomials match the frozen low-order expansions") {
    // gamma_2 = c theta + c^2
    CHECK(limit_moment_symbolic(2).tau_one_terms() ==
          TauOneTerms{{{1, 1}, 1}, {{2, 0}, 1}});
    // gamma_3 = c theta^3 + 3 c^2 theta + c^3
    CHECK(limit_moment_symbolic(3).tau_one_terms() ==
          TauOneTerms{{{1, 3}, 1}, {{2, 1}, 3}, {{3, 0}, 1}});
    // gamma_4 = c theta^6 + 4 c^2 theta^3 + 2 c^2 theta^2 + 6 c^3 theta + c^4
    CHECK(limit_moment_symbolic(4).tau_one_terms() ==
          TauOneTerms{{{1, 6}, 1}, {{2, 3}, 4}, {{2, 2}, 2}, {{3, 1}, 6}, {{4, 0}, 1}});
}

TEST_CASE("order bound is enforced") {
    CHECK_THROWS_AS(limit_moment_symbolic(13), BudgetError);
    CHECK_NOTHROW(limit_moment_symbolic(13, 16));
    CHECK_THROWS_AS(limit_moment_symbolic(0), DomainError);
}

TEST_CASE("limit_moment_value examples") {
    const auto tau1 = TauMoments::constant(1.0, 8);

    const double g2 = limit_moment_value(2, {.c = 1.0, .d = 1.0, .m4 = 2.0}, tau1);
    CHECK(g2 == doctest::Approx(std::exp(1.0) + 1.0).epsilon(1e-12));

    CHECK(limit_moment_value(2, {.c = 1.0, .d = 0.0, .m4 = 7.0}, tau1) == doctest::Approx(2.0));

    const double g3 = limit_moment_symbolic(3).evaluate_at_theta(2.0, 1.0, tau1);
    CHECK(g3 == doctest::Approx(22.0));

    // gamma_1 comes out of the general formula as c * m1.
    CHECK(limit_moment_value(1, {.c = 1.7, .d = 1.0, .m4 = 2.0},
                             TauMoments::constant(2.0, 2)) == doctest::Approx(3.4));
}

TEST_CASE("limit_moment_d0 and its tau dependence") {
    const auto tau1 = TauMoments::constant(1.0, 8);
    CHECK(limit_moment_d0(2, 1.0, tau1) == doctest::Approx(2.0));
    CHECK(limit_moment_d0(4, 1.0, tau1) == doctest::Approx(14.0));

    const std::vector<double> tau_vals{1.0, 1.0, 2.0};  // m1 = 4/3, m2 = 2
    const auto tau = TauMoments::from_sequence(tau_vals, 4);
    CHECK(tau.moment(1) == doctest::Approx(4.0 / 3.0));
    CHECK(tau.moment(2) == doctest::Approx(2.0));
    // p=2: c m2 + c^2 m1^2
    CHECK(limit_moment_d0(2, 1.0, tau) == doctest::Approx(2.0 + 16.0 / 9.0));
}

TEST_CASE("mp_moment") {
    CHECK(mp_moment(1, 0.7) == doctest::Approx(0.7));
    CHECK(mp_moment(2, 1.0) == doctest::Approx(2.0));
    CHECK(mp_moment(3, 0.5) == doctest::Approx(1.375));
}

TEST_CASE("theta = 1, tau = 1 specialization equals mp_moment exactly") {
    const auto tau1 = TauMoments::constant(1.0, 8);
    for (int p = 1; p <= 8; ++p) {
        const auto poly = limit_moment_symbolic(p);
        for (double c : {0.3, 1.0, 2.5}) {
            CHECK(poly.evaluate_at_theta(c, 1.0, tau1) == mp_moment(p, c));
        }
        // Integer-level identity: per-s coefficient sums are Narayana numbers.
        std::map<int, std::int64_t> per_s;
        for (const auto& [key, coeff] : poly.terms()) per_s[key.s] += coeff;
        for (int s = 1; s <= p; ++s) CHECK(per_s[s] == narayana(p, s));
    }
}

TEST_CASE("term structure invariants") {
    for (int p = 1; p <= 8; ++p) {
        const auto poly = limit_moment_symbolic(p);
        std::int64_t total = 0;
        for (const auto& [key, coeff] : poly.terms()) {
            int deg_sum = 0, exp_sum = 0;
            for (int d : key.degrees) {
                deg_sum += d;
                exp_sum += static_cast<int>(binomial(d, 2));
            }
            CHECK(deg_sum == p);
            CHECK(exp_sum == key.theta_exp);
            CHECK(key.theta_exp >= 0);
            CHECK(key.theta_exp <= p * (p - 1) / 2);
            if (key.theta_exp == p * (p - 1) / 2 && p > 1) CHECK(key.s == 1);
            total += coeff;
        }
        CHECK(total == catalan(p));
    }
}

TEST_CASE("monotone in c and theta for tau = 1") {
    const auto tau1 = TauMoments::constant(1.0, 8);
    for (int p : {2, 3, 5}) {
        const auto poly = limit_moment_symbolic(p);
        double prev = 0.0;
        for (double c : {0.2, 0.5, 1.0, 2.0}) {
            const double value = poly.evaluate_at_theta(c, 1.3, tau1);
            CHECK(value > prev);
            prev = value;
        }
        prev = 0.0;
        for (double theta : {1.0, 1.5, 2.0, 3.0}) {
            const double value = poly.evaluate_at_theta(0.8, theta, tau1);
            CHECK(value > prev);
            prev = value;
        }
    }
}

TEST_CASE("polynomial evaluation matches a direct loop over class-one sequences") {
    const auto tau = TauMoments::two_point(1.0, 2.0, 0.5, 8);
    for (int p = 1; p <= 8; ++p) {
        const auto poly = limit_moment_symbolic(p);
        for (double theta : {1.0, std::exp(1.0)}) {
            const double direct = direct_class_one_sum(p, 0.9, theta, tau);
            const double grouped = poly.evaluate_at_theta(0.9, theta, tau);
            CHECK(grouped == doctest::Approx(direct).epsilon(5e-14));
        }
    }
}

TEST_CASE("tau_moments_from_sequence examples") {
    const std::vector<double> ones{1.0, 1.0, 1.0};
    const auto t1 = TauMoments::from_sequence(ones, 3);
    for (int q = 1; q <= 3; ++q) CHECK(t1.moment(q) == doctest::Approx(1.0));

    const std::vector<double> pm{1.0, -1.0};
    const auto t2 = TauMoments::from_sequence(pm, 2);
    CHECK(t2.moment(1) == doctest::Approx(0.0));
    CHECK(t2.moment(2) == doctest::Approx(1.0));

    const std::vector<double> twos{2.0, 2.0, 2.0, 2.0};
    CHECK(TauMoments::from_sequence(twos, 3).moment(3) == doctest::Approx(8.0));

    CHECK_THROWS_AS(TauMoments::from_sequence(std::vector<double>{}, 2), DomainError);
    CHECK_THROWS_AS(t2.moment(3), DomainError);
}

TEST_CASE("carleman_report") {
    const auto tau1 = TauMoments::constant(1.0, 12);

    SUBCASE("MP case keeps growing") {
        std::vector<double> gammas;
        for (int p = 1; p <= 12; ++p) gammas.push_back(mp_moment(p, 1.0));
        const auto report = carleman_report(gammas, 1.0, 1.0);
        REQUIRE(report.terms.size() == 6);
        // Even MP moments are Catalan numbers <= 4^{2p}, so every term is
        // at least 1/4 and the partial sums never flatten out.
        for (double term : report.terms) CHECK(term >= 0.25);
        for (std::size_t i = 1; i < report.partial_sums.size(); ++i)
            CHECK(report.partial_sums[i] >= report.partial_sums[i - 1] + 0.25);
        CHECK_FALSE(report.super_exponential);
    }

    SUBCASE("theta = e dominates the first-term bound") {
        const double theta = std::exp(1.0);
        std::vector<double> gammas;
        for (int p = 1; p <= 12; ++p)
            gammas.push_back(limit_moment_symbolic(p).evaluate_at_theta(1.0, theta, tau1));
        const auto report = carleman_report(gammas, 1.0, theta);
        for (int p = 1; p <= 6; ++p) CHECK(report.lower_bound_ratio[p - 1] >= 1.0);
        CHECK(report.super_exponential);
    }

    SUBCASE("constant moments sum linearly") {
        const std::vector<double> gammas(8, 1.0);
        const auto report = carleman_report(gammas, 1.0, 1.0);
        CHECK(report.partial_sums.back() == doctest::Approx(4.0));
    }

    SUBCASE("errors") {
        CHECK_THROWS_AS(carleman_report(std::vector<double>{1.0, -2.0}, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(carleman_report(std::vector<double>{1.0}, 1.0, 1.0), DomainError);
    }
}

TEST_CASE("symbolic rendering") {
    CHECK(limit_moment_symbolic(2).to_string(true) == "c theta + c^2");
    CHECK(limit_moment_symbolic(4).to_string(true) ==
          "c theta^6 + 4 c^2 theta^3 + 2 c^2 theta^2 + 6 c^3 theta + c^4");
}
