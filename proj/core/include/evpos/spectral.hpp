#pragma once

#include "evpos/lattice.hpp"
#include "evpos/matrix.hpp"

#include <cstddef>
#include <vector>

namespace evpos {

inline constexpr std::size_t max_spectral_dimension = 128;
inline constexpr double default_rank_tolerance = 1e-8;

struct Spectrum {
    /// Repeated according to algebraic multiplicity; sorted by decreasing
    /// modulus, then by argument.
    CVector eigenvalues;
    double spectral_radius = 0.0;
    double solver_tolerance = 0.0;
};

/// Householder reduction to Hessenberg form followed by single-shift complex
/// QR with Wilkinson shifts. Throws SolverFailure when the iteration budget
/// is exhausted.
[[nodiscard]] Spectrum eigenvalues(const ComplexMatrix& a, double tol = 1e-12);

struct SingularValueDecomposition {
    std::vector<double> values;  // descending
    ComplexMatrix u;             // left singular vectors (columns)
    ComplexMatrix v;             // right singular vectors (columns)
};

/// One-sided complex Jacobi; A = U diag(values) V^H.
[[nodiscard]] SingularValueDecomposition svd(const ComplexMatrix& a);
[[nodiscard]] std::vector<double> singular_values(const ComplexMatrix& a);

/// Solves (lambda I - A) y = x by LU with partial pivoting. Throws
/// SingularResolvent when a pivot falls below n * eps * max|entry|.
[[nodiscard]] CVector resolvent_apply(const ComplexMatrix& a, Complex lambda,
                                      std::span<const Complex> x);
[[nodiscard]] LatticeVector resolvent_apply(const ComplexMatrix& a, Complex lambda,
                                            const LatticeVector& x);
/// (lambda I - A)^-1 as a matrix.
[[nodiscard]] ComplexMatrix resolvent(const ComplexMatrix& a, Complex lambda);

/// Induced norm for Ell1 (max column sum), EllInf (max row sum) and Ell2
/// (largest singular value).
[[nodiscard]] double operator_norm(const ComplexMatrix& a, const Norm& norm);

/// Singular values at or below `threshold` are treated as zero.
[[nodiscard]] std::size_t numeric_rank(const ComplexMatrix& a, double threshold);
/// Orthonormal basis (columns) of the numeric null space.
[[nodiscard]] ComplexMatrix null_space(const ComplexMatrix& a, double threshold);

struct PoleOrderDetail {
    unsigned order = 0;
    std::vector<std::size_t> ranks;  // rank of (lambda0 - A)^k, k = 1, 2, ...
    /// Some singular value of a power lies within a factor 100 of its
    /// rank threshold, so the rank decision is tolerance-sensitive.
    bool near_threshold = false;
    double scale = 0.0;
};

/// Index of lambda0: the least k with rank (lambda0 - A)^k = rank (lambda0 - A)^(k+1),
/// thresholds tol * s^k with s = max(||A||_2, |lambda0|). Throws NotAnEigenvalue
/// when sigma_min(lambda0 - A) > tol * s.
[[nodiscard]] PoleOrderDetail pole_order_detail(const ComplexMatrix& a, Complex lambda0,
                                                double tol = default_rank_tolerance);
[[nodiscard]] unsigned pole_order(const ComplexMatrix& a, Complex lambda0,
                                  double tol = default_rank_tolerance);

struct LaurentCoefficient {
    ComplexMatrix coefficient;
    double extrapolation_error = 0.0;  // last two diagonal Richardson entries
    double kernel_residual = 0.0;      // ||(lambda0 - A) Q|| / ||Q|| (Frobenius)
};

/// Q_{-m} = lim (r - lambda0)^m R(r, A) as r decreases to lambda0, by Richardson
/// extrapolation over r = lambda0 (1 + 2^-j), j = 8..16.
[[nodiscard]] LaurentCoefficient laurent_leading_detail(const ComplexMatrix& a, double lambda0,
                                                        unsigned m);
[[nodiscard]] ComplexMatrix laurent_leading_coefficient(const ComplexMatrix& a, double lambda0,
                                                        unsigned m);

/// dim ker(lambda - A): singular values of lambda - A below tol * max(||A||_2, |lambda|).
[[nodiscard]] std::size_t geometric_multiplicity(const ComplexMatrix& a, Complex lambda,
                                                 double tol = default_rank_tolerance);

/// Eigenvalues with |lambda| >= spr (1 - tol), deduplicated within tol * spr.
/// A zero spectral radius gives {0}.
[[nodiscard]] CVector peripheral_spectrum(const Spectrum& spec, double tol = 1e-8);

/// Distance from z to the nearest eigenvalue and that eigenvalue.
struct NearestEigenvalue {
    Complex value;
    double distance = 0.0;
};
[[nodiscard]] NearestEigenvalue nearest_eigenvalue(const Spectrum& spec, Complex z);

}  // namespace evpos
