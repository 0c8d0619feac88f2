#pragma once

#include "evpos/matrix.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace evpos {

// Finite-dimensional complex Banach lattices: C^N with the usual order
// (x >= 0 iff every entry is real and nonnegative) and one of five norms.

struct Ell1 {
    bool operator==(const Ell1&) const = default;
};
struct Ell2 {
    bool operator==(const Ell2&) const = default;
};
struct EllInf {
    bool operator==(const EllInf&) const = default;
};

/// (sum_k w_k |x_k|^p)^{1/p}; entries are samples at `nodes`.
struct LpQuadrature {
    double p = 2.0;
    std::vector<double> nodes;
    std::vector<double> weights;
    bool operator==(const LpQuadrature&) const = default;
};

/// max_k |x_k| over sampled nodes. Sup-norm statements are grid-relative.
struct GridSup {
    std::vector<double> nodes;
    bool operator==(const GridSup&) const = default;
};

using NormKind = std::variant<Ell1, Ell2, EllInf, LpQuadrature, GridSup>;

/// Immutable, cheaply copyable handle to a validated NormKind.
class Norm {
public:
    Norm();  // Ell1
    explicit Norm(NormKind kind);

    static Norm ell1();
    static Norm ell2();
    static Norm ell_inf();
    static Norm lp_quadrature(double p, std::vector<double> nodes, std::vector<double> weights);
    /// Composite midpoint rule with `cells` equal cells on [a, b].
    static Norm lp_midpoint(double p, std::size_t cells, double a = -1.0, double b = 1.0);
    static Norm grid_sup(std::vector<double> nodes);
    /// `count` equispaced nodes including both endpoints.
    static Norm grid_sup_uniform(std::size_t count, double a = -1.0, double b = 1.0);

    [[nodiscard]] const NormKind& kind() const noexcept { return *kind_; }
    [[nodiscard]] std::string name() const;

    /// Node count for sampled spaces, nullopt for plain sequence norms.
    [[nodiscard]] std::optional<std::size_t> dimension() const;
    [[nodiscard]] bool sampled() const { return dimension().has_value(); }
    [[nodiscard]] std::span<const double> nodes() const;
    /// Integration weights over the sampling grid: the quadrature weights
    /// for LpQuadrature, the trapezoid rule for GridSup.
    [[nodiscard]] std::vector<double> quadrature_weights() const;

    [[nodiscard]] double evaluate(std::span<const Complex> x) const;

    friend bool operator==(const Norm& a, const Norm& b);

private:
    std::shared_ptr<const NormKind> kind_;
};

/// A complex vector in a specific lattice.
class LatticeVector {
public:
    LatticeVector(CVector entries, Norm norm);

    static LatticeVector zeros(std::size_t n, Norm norm);
    static LatticeVector basis(std::size_t n, std::size_t k, Norm norm);
    static LatticeVector ones(std::size_t n, Norm norm);
    static LatticeVector from_real(std::span<const double> values, Norm norm);

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }
    [[nodiscard]] const Complex& operator[](std::size_t k) const noexcept { return entries_[k]; }
    [[nodiscard]] const Norm& norm() const noexcept { return norm_; }

    [[nodiscard]] LatticeVector with_entries(CVector entries) const {
        return {std::move(entries), norm_};
    }

    friend LatticeVector operator+(const LatticeVector& a, const LatticeVector& b);
    friend LatticeVector operator-(const LatticeVector& a, const LatticeVector& b);
    friend LatticeVector operator*(Complex s, const LatticeVector& a);

private:
    CVector entries_;
    Norm norm_;
};

[[nodiscard]] LatticeVector real_part(const LatticeVector& x);
[[nodiscard]] LatticeVector imag_part(const LatticeVector& x);
[[nodiscard]] LatticeVector complex_modulus(const LatticeVector& x);
/// (Re x)^+
[[nodiscard]] LatticeVector positive_part(const LatticeVector& x);
/// (Re x)^-
[[nodiscard]] LatticeVector negative_part(const LatticeVector& x);

[[nodiscard]] double norm_value(const LatticeVector& x);

/// Distance to the positive cone, d+(x) = || -(Re x)^- + i Im x ||.
[[nodiscard]] double cone_distance(const LatticeVector& x);
[[nodiscard]] double cone_distance(const Norm& norm, std::span<const Complex> x);
/// Scalar case (the lattice C with cone [0, inf)).
[[nodiscard]] double cone_distance(Complex z);

/// Brute-force grid minimisation of ||x - y|| over y >= 0 on the lattice
/// {0, r, 2r, ...} with coordinates up to 2 max_k |x_k|. Independent of
/// the closed-form formula; dimension is capped at 6.
[[nodiscard]] double cone_distance_oracle(const LatticeVector& x, double resolution);

inline constexpr std::size_t oracle_dimension_cap = 6;

/// Every entry has |Im| <= tol and Re >= -tol.
[[nodiscard]] bool is_positive(std::span<const Complex> x, double tol);

}  // namespace evpos
