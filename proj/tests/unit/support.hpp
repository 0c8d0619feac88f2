#pragma once

#include "evpos/lattice.hpp"
#include "evpos/matrix.hpp"
#include "evpos/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

namespace evpos::testing {

inline ComplexMatrix random_matrix(CounterRng& rng, std::size_t rows, std::size_t cols) {
    ComplexMatrix a(rows, cols);
    for (auto& z : a.data()) z = {rng.normal(), rng.normal()};
    return a;
}

inline ComplexMatrix random_matrix(CounterRng& rng, std::size_t n) { return random_matrix(rng, n, n); }

inline CVector random_vector(CounterRng& rng, std::size_t n) {
    CVector v(n);
    for (auto& z : v) z = {rng.normal(), rng.normal()};
    return v;
}

inline CVector random_positive(CounterRng& rng, std::size_t n) {
    CVector v(n);
    for (auto& z : v) z = rng.uniform(0.05, 1.0);
    return v;
}

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& a) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return m;
}

inline Eigen::VectorXcd to_eigen(std::span<const Complex> x) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) v(static_cast<Eigen::Index>(k)) = x[k];
    return v;
}

inline double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
    double d = 0.0;
    for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k) d = std::max(d, std::abs(a[k] - b[k]));
    return d;
}

/// Greedy matching distance between two multisets of complex numbers.
inline double multiset_distance(CVector a, CVector b) {
    double worst = 0.0;
    for (const auto& z : a) {
        auto best = std::min_element(b.begin(), b.end(), [&](Complex u, Complex v) {
            return std::abs(u - z) < std::abs(v - z);
        });
        worst = std::max(worst, std::abs(*best - z));
        b.erase(best);
    }
    return worst;
}

inline const std::vector<Norm>& sequence_norms() {
    static const std::vector<Norm> norms{Norm::ell1(), Norm::ell2(), Norm::ell_inf()};
    return norms;
}

}  // namespace evpos::testing
