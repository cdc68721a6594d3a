#include "tensormp/distributions.hpp"

#include <cmath>

#include "tensormp/errors.hpp"

namespace tensormp {

const DistributionSpec& DistributionSpec::complex_gaussian() {
    static const DistributionSpec spec(Id::ComplexGaussian, "gaussian");
    return spec;
}

const DistributionSpec& DistributionSpec::phase() {
    static const DistributionSpec spec(Id::Phase, "phase");
    return spec;
}

const DistributionSpec& DistributionSpec::rademacher() {
    static const DistributionSpec spec(Id::Rademacher, "rademacher");
    return spec;
}

const DistributionSpec& DistributionSpec::real_gaussian() {
    static const DistributionSpec spec(Id::RealGaussian, "real-gaussian");
    return spec;
}

const DistributionSpec& DistributionSpec::from_name(const std::string& name) {
    for (const auto* spec : {&complex_gaussian(), &phase(), &rademacher(), &real_gaussian()})
        if (spec->name() == name) return *spec;
    throw DomainError("unknown distribution: " + name);
}

std::vector<std::string> DistributionSpec::names() {
    return {"gaussian", "phase", "rademacher", "real-gaussian"};
}

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int j = 2; j <= n; ++j) f *= j;
    return f;
}

double double_factorial_odd(int n) {
    // n odd: n!! = n (n-2) ... 1
    double f = 1.0;
    for (int j = n; j >= 1; j -= 2) f *= j;
    return f;
}

}  // namespace

std::complex<double> DistributionSpec::mixed_moment(int a, int b) const {
    if (a < 0 || b < 0) throw DomainError("negative moment order");
    switch (id_) {
        case Id::ComplexGaussian:
            return a == b ? factorial(a) : 0.0;
        case Id::Phase:
            return a == b ? 1.0 : 0.0;
        case Id::Rademacher:
            return (a + b) % 2 == 0 ? 1.0 : 0.0;
        case Id::RealGaussian:
            return (a + b) % 2 == 0 ? double_factorial_odd(a + b - 1) : 0.0;
    }
    throw DomainError("bad distribution id");
}

double DistributionSpec::abs_moment(int p) const {
    if (p < 0) throw DomainError("negative moment order");
    switch (id_) {
        case Id::ComplexGaussian:
            // |xi|^2 is Exp(1), so E|xi|^p = Gamma(p/2 + 1).
            return std::tgamma(0.5 * p + 1.0);
        case Id::Phase:
        case Id::Rademacher:
            return 1.0;
        case Id::RealGaussian:
            return std::pow(2.0, 0.5 * p) * std::tgamma(0.5 * (p + 1)) / std::sqrt(M_PI);
    }
    throw DomainError("bad distribution id");
}

}  // namespace tensormp
