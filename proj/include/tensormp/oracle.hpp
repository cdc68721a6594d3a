#pragma once

#include <complex>
#include <cstdint>
#include <span>

#include "tensormp/combinatorics.hpp"
#include "tensormp/distributions.hpp"

namespace tensormp {

/// Expected value of one trace term, split as value * n^{scale_exponent}.
/// The value is zero whenever the walk leaves a factor unpaired.
struct WalkExpectation {
    std::complex<double> value;
    int scale_exponent = 0;
};

struct OracleBudget {
    std::uint64_t max_group_evals = 100'000'000;
};

enum class OraclePath { Naive, Canonical };

/// E over the walk of (i_seq, alpha): factors grouped by (vector index,
/// coordinate); a group met by a down edges and b up edges contributes
/// mixed_moment(a, b). Entries of distinct groups are independent.
WalkExpectation expectation_walk(const Sequence& i_seq, const Sequence& alpha,
                                 const DistributionSpec& dist, int n);

/// Same for the union of two walks sharing the vector family.
WalkExpectation expectation_pair_walk(const Sequence& i_seq, const Sequence& alpha,
                                      const Sequence& j_seq, const Sequence& beta,
                                      const DistributionSpec& dist, int n);

/// Exact (1/n^k) E[Tr M^p] by full enumeration. The naive path sums over
/// [m]^p x [n]^p; the canonical path reduces both sums to canonical
/// representatives weighted by injective-relabel counts. Both agree to
/// rounding; the canonical path is the fast default.
double exact_expected_trace_moment(int n, int k, int m, int p, std::span<const double> taus,
                                   const DistributionSpec& dist,
                                   OraclePath path = OraclePath::Canonical,
                                   const OracleBudget& budget = {});

/// Exact Var((1/n^k) Tr M^p) via the restricted double sum over intersecting
/// index pairs, with E' and E*E terms.
double exact_variance_trace_moment(int n, int k, int m, int p, std::span<const double> taus,
                                   const DistributionSpec& dist,
                                   const OracleBudget& budget = {});

}  // namespace tensormp
