#pragma once

#include "evpos/lattice.hpp"
#include "evpos/matrix.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace evpos {

// Function-space models live on the interval [-1, 1].
inline constexpr double domain_lower = -1.0;
inline constexpr double domain_upper = 1.0;

// ------------------------------------------------------------ functions

struct Constant {
    Complex value{1.0};
};

/// coefficient * x^degree
struct Monomial {
    unsigned degree = 1;
    Complex coefficient{1.0};
};

/// coefficient * sgn(x) |x|^exponent
struct SignedPower {
    double exponent = 1.0;
    Complex coefficient{1.0};
};

/// Samples on the model's grid; evaluated off-grid by linear interpolation.
struct Tabulated {
    CVector values;
};

using FunctionRep = std::variant<Constant, Monomial, SignedPower, Tabulated>;

/// Closed-form functions share the shape c * sgn(x)^odd * |x|^exponent.
struct PowerTerm {
    Complex coefficient;
    bool odd = false;
    double exponent = 0.0;
};

[[nodiscard]] std::optional<PowerTerm> power_term(const FunctionRep& f);

// ---------------------------------------------------------- functionals

/// g -> scale * integral over [-1, 1] of weight * g
struct WeightedIntegral {
    FunctionRep weight = Constant{1.0};
    Complex scale{1.0};
};

/// g -> sum_j coefficients[j] * g(points[j])
struct PointCombination {
    std::vector<double> points;
    CVector coefficients;
};

using FunctionalRep = std::variant<WeightedIntegral, PointCombination>;

/// Piecewise-linear bump: 1 at `peak`, 0 outside [peak - left, peak + right].
struct HatFunction {
    double peak = 0.0;
    double left = 0.0;
    double right = 0.0;

    /// Support clipped to [-1, 1].
    static HatFunction centered(double peak, double width);
    [[nodiscard]] double operator()(double x) const;
    [[nodiscard]] double integral() const { return 0.5 * (left + right); }
};

/// Value of f at x. Tabulated functions need the sampling grid.
[[nodiscard]] Complex evaluate(const FunctionRep& f, double x, const Norm& space);
[[nodiscard]] CVector sample(const FunctionRep& f, const Norm& space);

/// <phi, f> in closed form when both sides allow it, by grid quadrature otherwise.
[[nodiscard]] Complex pair(const FunctionalRep& phi, const FunctionRep& f, const Norm& space);
/// <phi, x> for grid samples x.
[[nodiscard]] Complex pair(const FunctionalRep& phi, std::span<const Complex> x, const Norm& space);
/// <phi, hat>, exact for closed-form weights.
[[nodiscard]] Complex pair(const FunctionalRep& phi, const HatFunction& hat, const Norm& space);

/// Row r with <phi, x> = sum_k r_k x_k on the grid.
[[nodiscard]] CVector functional_row(const FunctionalRep& phi, const Norm& space);

/// Integral over [lo, hi] of (alpha + gamma x) * t(x).
[[nodiscard]] Complex integrate_linear_times_power(double lo, double hi, double alpha,
                                                   double gamma, const PowerTerm& t);

// --------------------------------------------------------------- models

struct DenseModel {
    ComplexMatrix matrix;
    Norm norm;
};

/// T = sum_i f_i (x) phi_i with diagonal duality <phi_i, f_j> = lambda_i delta_ij.
class RankKModel {
public:
    static constexpr double duality_tolerance = 1e-10;

    RankKModel(std::vector<FunctionRep> functions, std::vector<FunctionalRep> functionals,
               Norm space);

    [[nodiscard]] std::size_t rank() const noexcept { return functions_.size(); }
    [[nodiscard]] std::size_t dimension() const noexcept { return space_.nodes().size(); }
    [[nodiscard]] const std::vector<FunctionRep>& functions() const noexcept { return functions_; }
    [[nodiscard]] const std::vector<FunctionalRep>& functionals() const noexcept {
        return functionals_;
    }
    [[nodiscard]] const Norm& space() const noexcept { return space_; }
    [[nodiscard]] const ComplexMatrix& duality() const noexcept { return duality_; }
    /// lambda_i = <phi_i, f_i>
    [[nodiscard]] const CVector& eigenvalues() const noexcept { return lambdas_; }
    /// Samples of f_i on the grid.
    [[nodiscard]] const std::vector<CVector>& function_samples() const noexcept {
        return samples_;
    }

    /// lambda_i^(n-1) <phi_i, x>; n >= 1.
    [[nodiscard]] CVector power_coefficients(unsigned n, std::span<const Complex> x) const;
    [[nodiscard]] CVector power_coefficients(unsigned n, const FunctionRep& g) const;
    [[nodiscard]] CVector power_coefficients(unsigned n, const HatFunction& g) const;

    /// sum_i c_i f_i(x) at an arbitrary point of [-1, 1].
    [[nodiscard]] Complex combination_at(std::span<const Complex> c, double x) const;
    [[nodiscard]] CVector combination_samples(std::span<const Complex> c) const;

private:
    std::vector<FunctionRep> functions_;
    std::vector<FunctionalRep> functionals_;
    Norm space_;
    ComplexMatrix duality_;
    CVector lambdas_;
    std::vector<CVector> samples_;
};

struct DiagonalModel {
    CVector symbol;
    Norm norm;
};

/// (Tx)_{k+1} = w_k x_k, (Tx)_1 = 0 on C^(weights + 1).
struct WeightedShiftModel {
    CVector weights;
    Norm norm;
};

using OperatorModel = std::variant<DenseModel, RankKModel, DiagonalModel, WeightedShiftModel>;

[[nodiscard]] std::string model_kind(const OperatorModel& t);
[[nodiscard]] std::size_t dimension(const OperatorModel& t);
[[nodiscard]] const Norm& space_norm(const OperatorModel& t);

/// Entry (i, j) = <phi_i, f_j>. Throws DomainError when off-diagonal entries
/// exceed the duality tolerance.
[[nodiscard]] ComplexMatrix duality_matrix(const std::vector<FunctionRep>& functions,
                                           const std::vector<FunctionalRep>& functionals,
                                           const Norm& space);
[[nodiscard]] inline const ComplexMatrix& duality_matrix(const RankKModel& t) {
    return t.duality();
}

[[nodiscard]] LatticeVector apply(const OperatorModel& t, const LatticeVector& x);
/// T^n x; n = 0 is rejected for rank-k models.
[[nodiscard]] LatticeVector power_apply(const OperatorModel& t, unsigned n, const LatticeVector& x);

/// <x', T^n x> with the bilinear pairing; rank-k models integrate against the
/// grid quadrature weights.
[[nodiscard]] Complex pairing(const OperatorModel& t, unsigned n, const LatticeVector& x,
                              const LatticeVector& xprime);
[[nodiscard]] Complex pairing(const OperatorModel& t, unsigned n, const LatticeVector& x,
                              const FunctionalRep& xprime);

/// Conjugate transpose. Dense only.
[[nodiscard]] DenseModel adjoint(const OperatorModel& t);

/// Matrix acting on grid samples. Diagonal and shift models are truncated to
/// `n`; rank-k models require n to equal the grid size.
[[nodiscard]] DenseModel to_dense(const OperatorModel& t, std::size_t n);
[[nodiscard]] DenseModel to_dense(const OperatorModel& t);

// ------------------------------------------------------------- witnesses

enum class WitnessKind { Scan, Singular };

struct PointWitness {
    double point = 0.0;
    Complex value;
    WitnessKind kind = WitnessKind::Scan;
};

/// Looks for a point of [-1, 1] where sum_i c_i f_i is not positive
/// (imaginary part or negative real part beyond tol * scale). Scans a fixed
/// point set and, when a singular term dominates near 0, solves for the
/// crossing analytically.
[[nodiscard]] std::optional<PointWitness> find_negativity(const RankKModel& t,
                                                          std::span<const Complex> c,
                                                          double tol, double scale);

/// Scan points: the grid, the endpoints and 1025 equispaced points, never 0.
[[nodiscard]] std::vector<double> witness_scan_points(const Norm& space);

enum class HatWitnessKind { Atom, Density };

/// (T^n g)(point) for a hat g. An Atom witness places g at a point mass of
/// the kernel measure with negative weight, so the violation grows as the
/// hat narrows.
struct HatWitness {
    unsigned n = 1;
    double point = 0.0;
    HatFunction hat;
    double epsilon = 0.0;
    Complex value;
    HatWitnessKind kind = HatWitnessKind::Atom;
    bool monotone = false;
};

/// Searches for g >= 0 with T^n g not positive. The atom family uses
/// epsilon = 2^-(n+1), halving while needed.
[[nodiscard]] std::optional<HatWitness> find_hat_witness(const RankKModel& t, unsigned n,
                                                         double tol);

/// (T^n g)(x) for a hat g.
[[nodiscard]] Complex hat_image_at(const RankKModel& t, unsigned n, const HatFunction& g,
                                   double x);

}  // namespace evpos
