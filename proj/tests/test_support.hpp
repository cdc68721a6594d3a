#pragma once

// Test-only reference constructions: explicit n^k-dimensional tensor columns
// and exhaustive discrete expectations. Deliberately independent of the
// library's Gram and walk-expectation code paths.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

namespace tensormp::testsupport {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// Kronecker product of k length-n vectors (first factor varies slowest).
inline VectorXcd kron_column(const std::vector<VectorXcd>& factors) {
    VectorXcd acc = VectorXcd::Ones(1);
    for (const auto& f : factors) {
        VectorXcd next(acc.size() * f.size());
        for (Eigen::Index a = 0; a < acc.size(); ++a)
            for (Eigen::Index b = 0; b < f.size(); ++b) next(a * f.size() + b) = acc(a) * f(b);
        acc = std::move(next);
    }
    return acc;
}

/// M = sum_alpha tau_alpha Y_alpha Y_alpha^* from per-(alpha,l) base vectors.
/// vectors[alpha][l] has length n and already carries the 1/sqrt(n) scale.
inline MatrixXcd materialize_m(const std::vector<std::vector<VectorXcd>>& vectors,
                               const std::vector<double>& taus) {
    const std::size_t m = vectors.size();
    const Eigen::Index dim = kron_column(vectors[0]).size();
    MatrixXcd big = MatrixXcd::Zero(dim, dim);
    for (std::size_t alpha = 0; alpha < m; ++alpha) {
        const VectorXcd column = kron_column(vectors[alpha]);
        big += taus[alpha] * column * column.adjoint();
    }
    return big;
}

inline std::vector<double> dense_trace_moments(const MatrixXcd& big, int p_max, double norm) {
    std::vector<double> out;
    MatrixXcd power = MatrixXcd::Identity(big.rows(), big.cols());
    for (int p = 1; p <= p_max; ++p) {
        power = power * big;
        out.push_back(power.trace().real() / norm);
    }
    return out;
}

/// Exhaustive expectation of (1/n^k) Tr M^p over all assignments of the
/// n*m*k base entries to a finite alphabet (uniform weights). Returns the
/// mean and the mean of the square.
struct DiscreteMoments {
    double mean = 0.0;
    double mean_square = 0.0;
};

inline DiscreteMoments discrete_expectation(int n, int k, int m, int p,
                                            const std::vector<double>& taus,
                                            const std::vector<std::complex<double>>& alphabet) {
    const int entries = n * m * k;
    const std::size_t states = [&] {
        std::size_t acc = 1;
        for (int j = 0; j < entries; ++j) acc *= alphabet.size();
        return acc;
    }();

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    double norm = 1.0;
    for (int j = 0; j < k; ++j) norm *= n;

    long double mean = 0.0L, mean_square = 0.0L;
    std::vector<std::size_t> digit(entries, 0);
    for (std::size_t state = 0; state < states; ++state) {
        std::size_t rest = state;
        for (int j = 0; j < entries; ++j) {
            digit[j] = rest % alphabet.size();
            rest /= alphabet.size();
        }
        std::vector<std::vector<VectorXcd>> vectors(m, std::vector<VectorXcd>(k));
        int cursor = 0;
        for (int alpha = 0; alpha < m; ++alpha)
            for (int l = 0; l < k; ++l) {
                VectorXcd v(n);
                for (int e = 0; e < n; ++e) v(e) = scale * alphabet[digit[cursor++]];
                vectors[alpha][l] = std::move(v);
            }
        const MatrixXcd big = materialize_m(vectors, taus);
        const double x = dense_trace_moments(big, p, norm).back();
        mean += x;
        mean_square += x * x;
    }
    return {static_cast<double>(mean / states), static_cast<double>(mean_square / states)};
}

}  // namespace tensormp::testsupport
