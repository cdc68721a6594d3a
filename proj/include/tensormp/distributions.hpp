#pragma once

#include <complex>
#include <string>
#include <vector>

namespace tensormp {

/// Moment-level description of the centered, unit-variance base variable.
/// mixed_moment(a,b) = E[xi^a conj(xi)^b]; abs_moment(p) = E|xi|^p.
class DistributionSpec {
  public:
    enum class Id { ComplexGaussian, Phase, Rademacher, RealGaussian };

    static const DistributionSpec& complex_gaussian();
    static const DistributionSpec& phase();
    static const DistributionSpec& rademacher();
    static const DistributionSpec& real_gaussian();

    static const DistributionSpec& from_name(const std::string& name);
    static std::vector<std::string> names();

    Id id() const { return id_; }
    const std::string& name() const { return name_; }
    bool is_real() const { return id_ == Id::Rademacher || id_ == Id::RealGaussian; }

    std::complex<double> mixed_moment(int a, int b) const;
    double abs_moment(int p) const;
    double m4() const { return abs_moment(4); }

  private:
    DistributionSpec(Id id, std::string name) : id_(id), name_(std::move(name)) {}

    Id id_;
    std::string name_;
};

}  // namespace tensormp
