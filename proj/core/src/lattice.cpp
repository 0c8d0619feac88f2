#include "evpos/lattice.hpp"

#include "evpos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evpos {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void require_increasing(std::span<const double> nodes, const char* what) {
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        if (!std::isfinite(nodes[k])) throw DomainError(std::string(what) + ": non-finite node");
        if (k > 0 && !(nodes[k] > nodes[k - 1]))
            throw DomainError(std::string(what) + ": nodes must be strictly increasing");
    }
}

void validate(const NormKind& kind) {
    std::visit(overloaded{
                   [](const LpQuadrature& q) {
                       if (!(q.p >= 1.0) || !std::isfinite(q.p))
                           throw DomainError("LpQuadrature: p must be a finite real >= 1");
                       if (q.nodes.size() != q.weights.size())
                           throw DomainError("LpQuadrature: nodes/weights length mismatch");
                       if (q.nodes.empty()) throw DomainError("LpQuadrature: empty grid");
                       require_increasing(q.nodes, "LpQuadrature");
                       for (double w : q.weights)
                           if (!(w > 0.0) || !std::isfinite(w))
                               throw DomainError("LpQuadrature: weights must be positive and finite");
                   },
                   [](const GridSup& g) {
                       if (g.nodes.empty()) throw DomainError("GridSup: empty grid");
                       require_increasing(g.nodes, "GridSup");
                   },
                   [](const auto&) {},
               },
               kind);
}

}  // namespace

// ---------------------------------------------------------------- Norm

Norm::Norm() : kind_(std::make_shared<const NormKind>(Ell1{})) {}

Norm::Norm(NormKind kind) {
    validate(kind);
    kind_ = std::make_shared<const NormKind>(std::move(kind));
}

Norm Norm::ell1() { return Norm(Ell1{}); }
Norm Norm::ell2() { return Norm(Ell2{}); }
Norm Norm::ell_inf() { return Norm(EllInf{}); }

Norm Norm::lp_quadrature(double p, std::vector<double> nodes, std::vector<double> weights) {
    return Norm(LpQuadrature{p, std::move(nodes), std::move(weights)});
}

Norm Norm::lp_midpoint(double p, std::size_t cells, double a, double b) {
    if (cells == 0 || !(b > a)) throw DomainError("lp_midpoint: need cells > 0 and b > a");
    const double h = (b - a) / static_cast<double>(cells);
    std::vector<double> nodes(cells), weights(cells, h);
    for (std::size_t k = 0; k < cells; ++k) nodes[k] = a + (static_cast<double>(k) + 0.5) * h;
    return lp_quadrature(p, std::move(nodes), std::move(weights));
}

Norm Norm::grid_sup(std::vector<double> nodes) { return Norm(GridSup{std::move(nodes)}); }

Norm Norm::grid_sup_uniform(std::size_t count, double a, double b) {
    if (count < 2 || !(b > a)) throw DomainError("grid_sup_uniform: need >= 2 nodes and b > a");
    std::vector<double> nodes(count);
    for (std::size_t k = 0; k < count; ++k)
        nodes[k] = a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1);
    nodes.back() = b;
    return grid_sup(std::move(nodes));
}

std::string Norm::name() const {
    return std::visit(overloaded{
                          [](const Ell1&) { return std::string("ell1"); },
                          [](const Ell2&) { return std::string("ell2"); },
                          [](const EllInf&) { return std::string("ellinf"); },
                          [](const LpQuadrature&) { return std::string("lp_quadrature"); },
                          [](const GridSup&) { return std::string("grid_sup"); },
                      },
                      *kind_);
}

std::optional<std::size_t> Norm::dimension() const {
    if (const auto* q = std::get_if<LpQuadrature>(kind_.get())) return q->nodes.size();
    if (const auto* g = std::get_if<GridSup>(kind_.get())) return g->nodes.size();
    return std::nullopt;
}

std::span<const double> Norm::nodes() const {
    if (const auto* q = std::get_if<LpQuadrature>(kind_.get())) return q->nodes;
    if (const auto* g = std::get_if<GridSup>(kind_.get())) return g->nodes;
    return {};
}

std::vector<double> Norm::quadrature_weights() const {
    if (const auto* q = std::get_if<LpQuadrature>(kind_.get())) return q->weights;
    if (const auto* g = std::get_if<GridSup>(kind_.get())) {
        const auto& x = g->nodes;
        std::vector<double> w(x.size(), 0.0);
        for (std::size_t k = 0; k + 1 < x.size(); ++k) {
            const double h = x[k + 1] - x[k];
            w[k] += 0.5 * h;
            w[k + 1] += 0.5 * h;
        }
        return w;
    }
    throw UnsupportedModel("quadrature weights need a sampled space (LpQuadrature or GridSup)");
}

double Norm::evaluate(std::span<const Complex> x) const {
    if (auto n = dimension(); n && *n != x.size())
        throw DimensionMismatch("vector length does not match the sampling grid");
    return std::visit(
        overloaded{
            [&](const Ell1&) {
                double s = 0.0;
                for (const auto& z : x) s += std::abs(z);
                return s;
            },
            [&](const Ell2&) { return norm2(x); },
            [&](const EllInf&) {
                double m = 0.0;
                for (const auto& z : x) m = std::max(m, std::abs(z));
                return m;
            },
            [&](const GridSup&) {
                double m = 0.0;
                for (const auto& z : x) m = std::max(m, std::abs(z));
                return m;
            },
            [&](const LpQuadrature& q) {
                double s = 0.0;
                if (q.p == 1.0) {
                    for (std::size_t k = 0; k < x.size(); ++k) s += q.weights[k] * std::abs(x[k]);
                    return s;
                }
                if (q.p == 2.0) {
                    for (std::size_t k = 0; k < x.size(); ++k) s += q.weights[k] * std::norm(x[k]);
                    return std::sqrt(s);
                }
                for (std::size_t k = 0; k < x.size(); ++k)
                    s += q.weights[k] * std::pow(std::abs(x[k]), q.p);
                return std::pow(s, 1.0 / q.p);
            },
        },
        *kind_);
}

bool operator==(const Norm& a, const Norm& b) {
    return a.kind_ == b.kind_ || *a.kind_ == *b.kind_;
}

// ------------------------------------------------------- LatticeVector

LatticeVector::LatticeVector(CVector entries, Norm norm)
    : entries_(std::move(entries)), norm_(std::move(norm)) {
    if (auto n = norm_.dimension(); n && *n != entries_.size())
        throw DimensionMismatch("LatticeVector length " + std::to_string(entries_.size()) +
                                " does not match grid size " + std::to_string(*n));
}

LatticeVector LatticeVector::zeros(std::size_t n, Norm norm) {
    return {CVector(n), std::move(norm)};
}

LatticeVector LatticeVector::basis(std::size_t n, std::size_t k, Norm norm) {
    CVector e(n);
    e.at(k) = 1.0;
    return {std::move(e), std::move(norm)};
}

LatticeVector LatticeVector::ones(std::size_t n, Norm norm) {
    return {CVector(n, 1.0), std::move(norm)};
}

LatticeVector LatticeVector::from_real(std::span<const double> values, Norm norm) {
    return {CVector(values.begin(), values.end()), std::move(norm)};
}

LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("LatticeVector +");
    CVector c(a.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] + b[k];
    return {std::move(c), a.norm()};
}

LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
    if (a.size() != b.size()) throw DimensionMismatch("LatticeVector -");
    CVector c(a.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = a[k] - b[k];
    return {std::move(c), a.norm()};
}

LatticeVector operator*(Complex s, const LatticeVector& a) {
    CVector c(a.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = s * a[k];
    return {std::move(c), a.norm()};
}

// ------------------------------------------------------ order structure

namespace {

template <class F>
LatticeVector map_entries(const LatticeVector& x, F f) {
    CVector out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = f(x[k]);
    return x.with_entries(std::move(out));
}

}  // namespace

LatticeVector real_part(const LatticeVector& x) {
    return map_entries(x, [](Complex z) { return Complex(z.real()); });
}

LatticeVector imag_part(const LatticeVector& x) {
    return map_entries(x, [](Complex z) { return Complex(z.imag()); });
}

LatticeVector complex_modulus(const LatticeVector& x) {
    return map_entries(x, [](Complex z) { return Complex(std::abs(z)); });
}

LatticeVector positive_part(const LatticeVector& x) {
    return map_entries(x, [](Complex z) { return Complex(std::max(z.real(), 0.0)); });
}

LatticeVector negative_part(const LatticeVector& x) {
    return map_entries(x, [](Complex z) { return Complex(std::max(-z.real(), 0.0)); });
}

double norm_value(const LatticeVector& x) { return x.norm().evaluate(x.entries()); }

double cone_distance(Complex z) {
    return std::hypot(std::max(-z.real(), 0.0), z.imag());
}

double cone_distance(const Norm& norm, std::span<const Complex> x) {
    CVector residual(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        residual[k] = Complex(-std::max(-x[k].real(), 0.0), x[k].imag());
    return norm.evaluate(residual);
}

double cone_distance(const LatticeVector& x) { return cone_distance(x.norm(), x.entries()); }

double cone_distance_oracle(const LatticeVector& x, double resolution) {
    if (x.size() > oracle_dimension_cap)
        throw DomainError("cone_distance_oracle: dimension " + std::to_string(x.size()) +
                          " exceeds cap " + std::to_string(oracle_dimension_cap));
    if (!(resolution > 0.0)) throw DomainError("cone_distance_oracle: resolution must be > 0");

    double bound = 0.0;
    for (const auto& z : x.entries()) bound = std::max(bound, std::abs(z));
    bound *= 2.0;
    const auto steps = static_cast<std::size_t>(std::floor(bound / resolution));

    // Every supported norm is a lattice norm of the coordinate moduli and
    // is monotone in each |x_k - y_k|, so the minimum over the product grid
    // is attained by choosing, per coordinate, the grid point closest to
    // x_k. Scanning each coordinate's grid exhaustively therefore yields
    // exactly the product-grid minimum.
    CVector best(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        double best_dist = std::numeric_limits<double>::infinity();
        Complex best_res{};
        for (std::size_t s = 0; s <= steps; ++s) {
            const double t = static_cast<double>(s) * resolution;
            const Complex res = x[k] - t;
            const double d = std::abs(res);
            if (d < best_dist) {
                best_dist = d;
                best_res = res;
            }
        }
        best[k] = best_res;
    }
    return x.norm().evaluate(best);
}

bool is_positive(std::span<const Complex> x, double tol) {
    return std::all_of(x.begin(), x.end(), [tol](const Complex& z) {
        return z.real() >= -tol && std::abs(z.imag()) <= tol;
    });
}

}  // namespace evpos
