#include "evpos/operators.hpp"

#include "evpos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace evpos {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

Complex ipow(Complex z, unsigned n) {
    Complex r = 1.0;
    while (n) {
        if (n & 1U) r *= z;
        z *= z;
        n >>= 1U;
    }
    return r;
}

Complex evaluate_term(const PowerTerm& t, double x) {
    if (x == 0.0) {
        if (t.exponent > 0.0) return 0.0;
        if (t.exponent == 0.0) return t.odd ? Complex(0.0) : t.coefficient;
        throw DomainError("function is singular at 0");
    }
    const double sign = (t.odd && x < 0.0) ? -1.0 : 1.0;
    return t.coefficient * (sign * std::pow(std::abs(x), t.exponent));
}

Complex interpolate(std::span<const Complex> values, std::span<const double> nodes, double x) {
    if (values.size() != nodes.size() || nodes.empty())
        throw DimensionMismatch("tabulated function does not match the grid");
    if (nodes.size() == 1) return values[0];
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t k = static_cast<std::size_t>(it - nodes.begin());
    k = std::clamp<std::size_t>(k, 1, nodes.size() - 1);
    const double x0 = nodes[k - 1], x1 = nodes[k];
    const double s = (x - x0) / (x1 - x0);
    return (1.0 - s) * values[k - 1] + s * values[k];
}

// integral of x^e over [p, q], 0 <= p < q
double moment(double p, double q, double e) {
    if (e == -1.0) {
        if (p <= 0.0) throw DomainError("divergent integral of 1/|x| at 0");
        return std::log(q / p);
    }
    if (p == 0.0 && e < -1.0) throw DomainError("divergent integral at 0");
    return (std::pow(q, e + 1.0) - (p == 0.0 ? 0.0 : std::pow(p, e + 1.0))) / (e + 1.0);
}

// Integral of the linear ramp from 0 at `zero_end` to 1 at `one_end`
// against t. Narrow ramps away from 0 go through local Gauss-Legendre nodes;
// the global moment form loses everything to cancellation there.
Complex ramp_integral(double zero_end, double one_end, const PowerTerm& t) {
    const double lo = std::min(zero_end, one_end), hi = std::max(zero_end, one_end);
    const double width = hi - lo;
    if (!(width > 0.0)) return 0.0;
    const bool one_sided = lo >= 0.0 || hi <= 0.0;
    if (one_sided && width < 1e-3 * std::min(std::abs(lo), std::abs(hi))) {
        static constexpr double node[] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                          0.9602898564975363};
        static constexpr double weight[] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                            0.1012285362903763};
        Complex sum = 0.0;
        for (int k = 0; k < 4; ++k)
            for (double sgn : {-1.0, 1.0}) {
                const double s = 0.5 * (1.0 + sgn * node[k]);
                sum += weight[k] * s * evaluate_term(t, zero_end + s * (one_end - zero_end));
            }
        return 0.5 * width * sum;
    }
    const double slope = 1.0 / (one_end - zero_end);
    return integrate_linear_times_power(lo, hi, -zero_end * slope, slope, t);
}

PowerTerm product(const PowerTerm& a, const PowerTerm& b) {
    return {a.coefficient * b.coefficient, a.odd != b.odd, a.exponent + b.exponent};
}

Complex integral_over_domain(const PowerTerm& t) {
    if (!(t.exponent > -1.0))
        throw DomainError("integrand c|x|^b needs b > -1 on [-1, 1]");
    if (t.odd) return 0.0;
    return 2.0 * t.coefficient / (t.exponent + 1.0);
}

void require_in_domain(double x, const char* what) {
    if (!(x >= domain_lower && x <= domain_upper))
        throw DomainError(std::string(what) + ": point outside [-1, 1]");
}

}  // namespace

// ------------------------------------------------------------ functions

std::optional<PowerTerm> power_term(const FunctionRep& f) {
    return std::visit(overloaded{
                          [](const Constant& c) -> std::optional<PowerTerm> {
                              return PowerTerm{c.value, false, 0.0};
                          },
                          [](const Monomial& m) -> std::optional<PowerTerm> {
                              return PowerTerm{m.coefficient, (m.degree % 2U) == 1U,
                                               static_cast<double>(m.degree)};
                          },
                          [](const SignedPower& s) -> std::optional<PowerTerm> {
                              return PowerTerm{s.coefficient, true, s.exponent};
                          },
                          [](const Tabulated&) -> std::optional<PowerTerm> { return std::nullopt; },
                      },
                      f);
}

HatFunction HatFunction::centered(double peak, double width) {
    require_in_domain(peak, "hat peak");
    if (!(width > 0.0)) throw DomainError("hat width must be positive");
    return {peak, std::min(width, peak - domain_lower), std::min(width, domain_upper - peak)};
}

double HatFunction::operator()(double x) const {
    if (x < peak - left || x > peak + right) return 0.0;
    if (x == peak) return 1.0;
    if (x < peak) return left > 0.0 ? (x - (peak - left)) / left : 0.0;
    return right > 0.0 ? ((peak + right) - x) / right : 0.0;
}

Complex evaluate(const FunctionRep& f, double x, const Norm& space) {
    if (const auto* tab = std::get_if<Tabulated>(&f)) return interpolate(tab->values, space.nodes(), x);
    return evaluate_term(*power_term(f), x);
}

CVector sample(const FunctionRep& f, const Norm& space) {
    const auto nodes = space.nodes();
    if (const auto* tab = std::get_if<Tabulated>(&f)) {
        if (tab->values.size() != nodes.size())
            throw DimensionMismatch("tabulated function does not match the grid");
        return tab->values;
    }
    const PowerTerm t = *power_term(f);
    CVector out(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) out[k] = evaluate_term(t, nodes[k]);
    return out;
}

CVector functional_row(const FunctionalRep& phi, const Norm& space) {
    const auto nodes = space.nodes();
    CVector row(nodes.size());
    std::visit(overloaded{
                   [&](const WeightedIntegral& w) {
                       const auto q = space.quadrature_weights();
                       const CVector wv = sample(w.weight, space);
                       for (std::size_t k = 0; k < nodes.size(); ++k)
                           row[k] = w.scale * wv[k] * q[k];
                   },
                   [&](const PointCombination& pc) {
                       if (nodes.size() == 1) {
                           for (const auto& c : pc.coefficients) row[0] += c;
                           return;
                       }
                       for (std::size_t j = 0; j < pc.points.size(); ++j) {
                           const double x = pc.points[j];
                           auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
                           std::size_t k = static_cast<std::size_t>(it - nodes.begin());
                           k = std::clamp<std::size_t>(k, 1, nodes.size() - 1);
                           const double s = (x - nodes[k - 1]) / (nodes[k] - nodes[k - 1]);
                           row[k - 1] += (1.0 - s) * pc.coefficients[j];
                           row[k] += s * pc.coefficients[j];
                       }
                   },
               },
               phi);
    return row;
}

Complex pair(const FunctionalRep& phi, std::span<const Complex> x, const Norm& space) {
    if (x.size() != space.nodes().size()) throw DimensionMismatch("pairing: vector/grid mismatch");
    return bilinear(functional_row(phi, space), x);
}

Complex pair(const FunctionalRep& phi, const FunctionRep& f, const Norm& space) {
    return std::visit(
        overloaded{
            [&](const WeightedIntegral& w) -> Complex {
                const auto tw = power_term(w.weight);
                const auto tf = power_term(f);
                if (tw && tf) return w.scale * integral_over_domain(product(*tw, *tf));
                return pair(phi, sample(f, space), space);
            },
            [&](const PointCombination& pc) -> Complex {
                Complex s = 0.0;
                for (std::size_t j = 0; j < pc.points.size(); ++j)
                    s += pc.coefficients[j] * evaluate(f, pc.points[j], space);
                return s;
            },
        },
        phi);
}

Complex integrate_linear_times_power(double lo, double hi, double alpha, double gamma,
                                     const PowerTerm& t) {
    if (!(hi > lo)) return 0.0;
    Complex total = 0.0;
    if (hi > 0.0) {
        const double p = std::max(lo, 0.0);
        total += t.coefficient * (alpha * moment(p, hi, t.exponent) +
                                  gamma * moment(p, hi, t.exponent + 1.0));
    }
    if (lo < 0.0) {
        const double q = std::min(hi, 0.0);
        const double sign = t.odd ? -1.0 : 1.0;
        total += sign * t.coefficient *
                 (alpha * moment(-q, -lo, t.exponent) - gamma * moment(-q, -lo, t.exponent + 1.0));
    }
    return total;
}

Complex pair(const FunctionalRep& phi, const HatFunction& hat, const Norm& space) {
    return std::visit(
        overloaded{
            [&](const WeightedIntegral& w) -> Complex {
                if (const auto tw = power_term(w.weight)) {
                    Complex s = 0.0;
                    if (hat.left > 0.0) s += ramp_integral(hat.peak - hat.left, hat.peak, *tw);
                    if (hat.right > 0.0) s += ramp_integral(hat.peak + hat.right, hat.peak, *tw);
                    return w.scale * s;
                }
                const auto nodes = space.nodes();
                CVector g(nodes.size());
                for (std::size_t k = 0; k < nodes.size(); ++k) g[k] = hat(nodes[k]);
                return pair(phi, g, space);
            },
            [&](const PointCombination& pc) -> Complex {
                Complex s = 0.0;
                for (std::size_t j = 0; j < pc.points.size(); ++j)
                    s += pc.coefficients[j] * hat(pc.points[j]);
                return s;
            },
        },
        phi);
}

// ---------------------------------------------------------- rank-k model

ComplexMatrix duality_matrix(const std::vector<FunctionRep>& functions,
                             const std::vector<FunctionalRep>& functionals, const Norm& space) {
    const std::size_t k = functions.size();
    if (functionals.size() != k) throw DimensionMismatch("rank-k: functions/functionals count");
    ComplexMatrix d(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) d(i, j) = pair(functionals[i], functions[j], space);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (i != j && std::abs(d(i, j)) > RankKModel::duality_tolerance)
                throw DomainError("rank-k: duality matrix is not diagonal (entry (" +
                                  std::to_string(i) + "," + std::to_string(j) + ") = " +
                                  std::to_string(std::abs(d(i, j))) + ")");
    return d;
}

RankKModel::RankKModel(std::vector<FunctionRep> functions, std::vector<FunctionalRep> functionals,
                       Norm space)
    : functions_(std::move(functions)), functionals_(std::move(functionals)),
      space_(std::move(space)) {
    if (functions_.empty()) throw DomainError("rank-k: need at least one term");
    if (functions_.size() != functionals_.size())
        throw DimensionMismatch("rank-k: functions/functionals count");
    if (!space_.sampled()) throw UnsupportedModel("rank-k: space must be LpQuadrature or GridSup");
    const auto nodes = space_.nodes();
    for (double x : nodes) require_in_domain(x, "grid node");

    const auto* lp = std::get_if<LpQuadrature>(&space_.kind());
    const bool has_zero_node = std::binary_search(nodes.begin(), nodes.end(), 0.0);
    auto check_function = [&](const FunctionRep& f) {
        if (const auto* tab = std::get_if<Tabulated>(&f)) {
            if (tab->values.size() != nodes.size())
                throw DimensionMismatch("rank-k: tabulated function does not match the grid");
            return;
        }
        const PowerTerm t = *power_term(f);
        if (t.exponent < 0.0) {
            if (has_zero_node) throw DomainError("rank-k: singular function with a grid node at 0");
            if (lp && !(t.exponent > -1.0 / lp->p))
                throw DomainError("rank-k: signed power exponent must exceed -1/p");
        }
    };
    for (const auto& f : functions_) check_function(f);
    for (const auto& phi : functionals_) {
        if (const auto* pc = std::get_if<PointCombination>(&phi)) {
            if (pc->points.size() != pc->coefficients.size())
                throw DimensionMismatch("rank-k: point/coefficient count");
            for (double x : pc->points) require_in_domain(x, "functional point");
        } else {
            check_function(std::get<WeightedIntegral>(phi).weight);
        }
    }

    duality_ = duality_matrix(functions_, functionals_, space_);
    lambdas_.resize(rank());
    for (std::size_t i = 0; i < rank(); ++i) lambdas_[i] = duality_(i, i);
    samples_.reserve(rank());
    for (const auto& f : functions_) samples_.push_back(sample(f, space_));
}

CVector RankKModel::power_coefficients(unsigned n, std::span<const Complex> x) const {
    if (n == 0) throw DomainError("rank-k power needs n >= 1");
    CVector c(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        c[i] = ipow(lambdas_[i], n - 1) * pair(functionals_[i], x, space_);
    return c;
}

CVector RankKModel::power_coefficients(unsigned n, const FunctionRep& g) const {
    if (n == 0) throw DomainError("rank-k power needs n >= 1");
    CVector c(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        c[i] = ipow(lambdas_[i], n - 1) * pair(functionals_[i], g, space_);
    return c;
}

CVector RankKModel::power_coefficients(unsigned n, const HatFunction& g) const {
    if (n == 0) throw DomainError("rank-k power needs n >= 1");
    CVector c(rank());
    for (std::size_t i = 0; i < rank(); ++i)
        c[i] = ipow(lambdas_[i], n - 1) * pair(functionals_[i], g, space_);
    return c;
}

Complex RankKModel::combination_at(std::span<const Complex> c, double x) const {
    Complex s = 0.0;
    for (std::size_t i = 0; i < rank(); ++i)
        if (c[i] != Complex(0.0)) s += c[i] * evaluate(functions_[i], x, space_);
    return s;
}

CVector RankKModel::combination_samples(std::span<const Complex> c) const {
    CVector y(dimension());
    for (std::size_t i = 0; i < rank(); ++i)
        for (std::size_t k = 0; k < y.size(); ++k) y[k] += c[i] * samples_[i][k];
    return y;
}

// --------------------------------------------------------------- models

std::string model_kind(const OperatorModel& t) {
    return std::visit(overloaded{
                          [](const DenseModel&) { return std::string("dense"); },
                          [](const RankKModel&) { return std::string("rank_k"); },
                          [](const DiagonalModel&) { return std::string("diagonal"); },
                          [](const WeightedShiftModel&) { return std::string("weighted_shift"); },
                      },
                      t);
}

std::size_t dimension(const OperatorModel& t) {
    return std::visit(overloaded{
                          [](const DenseModel& d) { return d.matrix.rows(); },
                          [](const RankKModel& r) { return r.dimension(); },
                          [](const DiagonalModel& d) { return d.symbol.size(); },
                          [](const WeightedShiftModel& s) { return s.weights.size() + 1; },
                      },
                      t);
}

const Norm& space_norm(const OperatorModel& t) {
    return std::visit(overloaded{
                          [](const DenseModel& d) -> const Norm& { return d.norm; },
                          [](const RankKModel& r) -> const Norm& { return r.space(); },
                          [](const DiagonalModel& d) -> const Norm& { return d.norm; },
                          [](const WeightedShiftModel& s) -> const Norm& { return s.norm; },
                      },
                      t);
}

namespace {

void require_size(const OperatorModel& t, const LatticeVector& x) {
    if (x.size() != dimension(t))
        throw DimensionMismatch("vector of length " + std::to_string(x.size()) +
                                " for an operator of dimension " + std::to_string(dimension(t)));
}

}  // namespace

LatticeVector apply(const OperatorModel& t, const LatticeVector& x) {
    return power_apply(t, 1, x);
}

LatticeVector power_apply(const OperatorModel& t, unsigned n, const LatticeVector& x) {
    require_size(t, x);
    if (n == 0) {
        if (std::holds_alternative<RankKModel>(t))
            throw DomainError("rank-k power_apply needs n >= 1");
        return x;
    }
    return std::visit(
        overloaded{
            [&](const DenseModel& d) {
                if (!d.matrix.square()) throw DimensionMismatch("dense model must be square");
                if (n == 1) return x.with_entries(d.matrix * x.entries());
                return x.with_entries(matrix_power(d.matrix, n) * x.entries());
            },
            [&](const RankKModel& r) {
                return x.with_entries(r.combination_samples(r.power_coefficients(n, x.entries())));
            },
            [&](const DiagonalModel& d) {
                CVector y(x.size());
                for (std::size_t k = 0; k < y.size(); ++k) y[k] = ipow(d.symbol[k], n) * x[k];
                return x.with_entries(std::move(y));
            },
            [&](const WeightedShiftModel& s) {
                const std::size_t dim = x.size();
                CVector y(dim);
                for (std::size_t k = 0; k + n < dim; ++k) {
                    Complex w = 1.0;
                    for (std::size_t j = k; j < k + n; ++j) w *= s.weights[j];
                    y[k + n] = w * x[k];
                }
                return x.with_entries(std::move(y));
            },
        },
        t);
}

Complex pairing(const OperatorModel& t, unsigned n, const LatticeVector& x,
                const LatticeVector& xprime) {
    require_size(t, x);
    if (xprime.size() != x.size()) throw DimensionMismatch("pairing: functional length");
    if (const auto* r = std::get_if<RankKModel>(&t)) {
        const auto q = r->space().quadrature_weights();
        const CVector y = n == 0 ? CVector(x.entries().begin(), x.entries().end())
                                 : r->combination_samples(r->power_coefficients(n, x.entries()));
        Complex s = 0.0;
        for (std::size_t k = 0; k < y.size(); ++k) s += q[k] * xprime[k] * y[k];
        return s;
    }
    const LatticeVector y = power_apply(t, n, x);
    return bilinear(xprime.entries(), y.entries());
}

Complex pairing(const OperatorModel& t, unsigned n, const LatticeVector& x,
                const FunctionalRep& xprime) {
    const auto* r = std::get_if<RankKModel>(&t);
    if (!r) throw UnsupportedModel("functional pairing needs a rank-k model");
    require_size(t, x);
    if (n == 0) return pair(xprime, x.entries(), r->space());
    const CVector c = r->power_coefficients(n, x.entries());
    Complex s = 0.0;
    for (std::size_t i = 0; i < r->rank(); ++i)
        if (c[i] != Complex(0.0)) s += c[i] * pair(xprime, r->functions()[i], r->space());
    return s;
}

DenseModel adjoint(const OperatorModel& t) {
    const auto* d = std::get_if<DenseModel>(&t);
    if (!d) throw UnsupportedModel("adjoint is defined for dense models only");
    Norm dual = d->norm;
    if (std::holds_alternative<Ell1>(d->norm.kind())) dual = Norm::ell_inf();
    else if (std::holds_alternative<EllInf>(d->norm.kind())) dual = Norm::ell1();
    return {d->matrix.adjoint(), dual};
}

DenseModel to_dense(const OperatorModel& t, std::size_t n) {
    return std::visit(
        overloaded{
            [&](const DenseModel& d) {
                if (n != d.matrix.rows()) throw DimensionMismatch("to_dense: dimension");
                return d;
            },
            [&](const RankKModel& r) {
                if (n != r.dimension())
                    throw DimensionMismatch("to_dense: rank-k dimension is fixed by the grid");
                ComplexMatrix m(n, n);
                for (std::size_t i = 0; i < r.rank(); ++i) {
                    const CVector row = functional_row(r.functionals()[i], r.space());
                    const CVector& f = r.function_samples()[i];
                    for (std::size_t a = 0; a < n; ++a)
                        for (std::size_t b = 0; b < n; ++b) m(a, b) += f[a] * row[b];
                }
                return DenseModel{std::move(m), r.space()};
            },
            [&](const DiagonalModel& d) {
                if (n == 0 || n > d.symbol.size()) throw DimensionMismatch("to_dense: truncation");
                return DenseModel{ComplexMatrix::diagonal(std::span(d.symbol).first(n)), d.norm};
            },
            [&](const WeightedShiftModel& s) {
                if (n == 0 || n > s.weights.size() + 1)
                    throw DimensionMismatch("to_dense: truncation");
                ComplexMatrix m(n, n);
                for (std::size_t k = 0; k + 1 < n; ++k) m(k + 1, k) = s.weights[k];
                return DenseModel{std::move(m), s.norm};
            },
        },
        t);
}

DenseModel to_dense(const OperatorModel& t) { return to_dense(t, dimension(t)); }

// ------------------------------------------------------------- witnesses

std::vector<double> witness_scan_points(const Norm& space) {
    std::vector<double> pts(space.nodes().begin(), space.nodes().end());
    constexpr int m = 1025;
    for (int k = 0; k < m; ++k)
        pts.push_back(domain_lower + (domain_upper - domain_lower) * k / (m - 1));
    pts.push_back(domain_lower);
    pts.push_back(domain_upper);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    pts.erase(std::remove(pts.begin(), pts.end(), 0.0), pts.end());
    return pts;
}

std::optional<PointWitness> find_negativity(const RankKModel& t, std::span<const Complex> c,
                                            double tol, double scale) {
    const double threshold = tol * std::max(scale, std::numeric_limits<double>::min());

    struct Term {
        PowerTerm term;
        bool tabulated;
    };
    std::vector<Term> terms;
    bool any_tabulated = false;
    for (std::size_t i = 0; i < t.rank(); ++i) {
        if (c[i] == Complex(0.0)) continue;
        if (auto p = power_term(t.functions()[i])) {
            p->coefficient *= c[i];
            terms.push_back({*p, false});
        } else {
            any_tabulated = true;
        }
    }

    if (!any_tabulated && !terms.empty()) {
        double b_min = 0.0;
        for (const auto& tm : terms) b_min = std::min(b_min, tm.term.exponent);
        if (b_min < 0.0) {
            double rest = 0.0;
            for (const auto& tm : terms)
                if (tm.term.exponent != b_min) rest += std::abs(tm.term.coefficient);
            for (double side : {-1.0, 1.0}) {
                Complex lead = 0.0;
                for (const auto& tm : terms)
                    if (tm.term.exponent == b_min)
                        lead += tm.term.coefficient * ((tm.term.odd && side < 0.0) ? -1.0 : 1.0);
                const double d = cone_distance(lead);
                if (!(d > 1e-14 * std::abs(lead))) continue;
                // Near 0 the leading term is lead |x|^b_min; the remainder is
                // bounded by `rest` |x|^(larger exponent), so twice the
                // remainder is overtaken at |x| = (d / 2 rest)^(1/|b_min|).
                double r = rest > 0.0 ? std::pow(d / (2.0 * rest), 1.0 / -b_min) : 1.0;
                r = std::min(r, domain_upper);
                for (int halving = 0; halving < 2000 && r > 1e-300; ++halving, r *= 0.5) {
                    const double x = side * r;
                    const Complex v = t.combination_at(c, x);
                    if (cone_distance(v) > threshold) return PointWitness{x, v, WitnessKind::Singular};
                }
            }
        }
    }

    std::optional<PointWitness> worst;
    double worst_d = threshold;
    thread_local std::vector<double> cached_nodes, cached_points;
    const auto nodes = t.space().nodes();
    if (!std::equal(nodes.begin(), nodes.end(), cached_nodes.begin(), cached_nodes.end())) {
        cached_nodes.assign(nodes.begin(), nodes.end());
        cached_points = witness_scan_points(t.space());
    }
    for (double x : cached_points) {
        Complex v;
        try {
            v = t.combination_at(c, x);
        } catch (const DomainError&) {
            continue;
        }
        const double d = cone_distance(v);
        if (d > worst_d) {
            worst_d = d;
            worst = PointWitness{x, v, WitnessKind::Scan};
        }
    }
    return worst;
}

Complex hat_image_at(const RankKModel& t, unsigned n, const HatFunction& g, double x) {
    return t.combination_at(t.power_coefficients(n, g), x);
}

namespace {

// Violation of (T^n g)(x) relative to the size of its terms.
double relative_violation(const RankKModel& t, unsigned n, const HatFunction& g, double x,
                          Complex* value) {
    const CVector c = t.power_coefficients(n, g);
    double size = 0.0;
    Complex v = 0.0;
    for (std::size_t i = 0; i < t.rank(); ++i) {
        const Complex term = c[i] * evaluate(t.functions()[i], x, t.space());
        size += std::abs(term);
        v += term;
    }
    if (value) *value = v;
    return size > 0.0 ? cone_distance(v) / size : 0.0;
}

}  // namespace

std::optional<HatWitness> find_hat_witness(const RankKModel& t, unsigned n, double tol) {
    if (n == 0) throw DomainError("rank-k power needs n >= 1");
    const std::size_t k = t.rank();
    CVector beta(k);
    for (std::size_t i = 0; i < k; ++i) {
        beta[i] = 1.0;
        for (unsigned j = 1; j < n; ++j) beta[i] *= t.eigenvalues()[i];
    }
    auto taus = witness_scan_points(t.space());
    // singular functions blow up at 0, so probe geometrically closer to it
    const bool singular = std::any_of(t.functions().begin(), t.functions().end(), [](const auto& f) {
        const auto p = power_term(f);
        return p && p->exponent < 0.0;
    });
    if (singular)
        for (int j = 8; j <= 1000; j += 4) {
            taus.push_back(std::ldexp(1.0, -j));
            taus.push_back(-std::ldexp(1.0, -j));
        }

    // kernel measure mu = sum_i beta_i f_i(tau) phi_i; first its point masses
    std::map<double, std::vector<std::pair<std::size_t, Complex>>> atoms;
    for (std::size_t i = 0; i < k; ++i)
        if (const auto* pc = std::get_if<PointCombination>(&t.functionals()[i]))
            for (std::size_t j = 0; j < pc->points.size(); ++j)
                atoms[pc->points[j]].emplace_back(i, pc->coefficients[j]);

    double best = 0.0;
    double best_tau = 0.0, best_point = 0.0;
    for (double tau : taus) {
        CVector m(k);
        for (std::size_t i = 0; i < k; ++i)
            m[i] = beta[i] * evaluate(t.functions()[i], tau, t.space());
        for (const auto& [p, contributions] : atoms) {
            Complex w = 0.0;
            double size = 0.0;
            for (const auto& [i, coeff] : contributions) {
                w += m[i] * coeff;
                size += std::abs(m[i] * coeff);
            }
            const double d = size > 0.0 ? cone_distance(w) / size : 0.0;
            if (d > tol && d > best) {
                best = d;
                best_tau = tau;
                best_point = p;
            }
        }
    }

    if (best > 0.0) {
        double eps = std::ldexp(1.0, -static_cast<int>(n) - 1);
        for (int halving = 0; halving < 60; ++halving, eps *= 0.5) {
            const HatFunction g = HatFunction::centered(best_point, eps);
            Complex v;
            if (relative_violation(t, n, g, best_tau, &v) <= tol) continue;
            HatWitness w{n, best_tau, g, eps, v, HatWitnessKind::Atom, true};
            double previous = cone_distance(v);
            for (int s = 1; s <= 3; ++s) {
                Complex vs;
                relative_violation(t, n, HatFunction::centered(best_point, std::ldexp(eps, -s)),
                                   best_tau, &vs);
                const double ds = cone_distance(vs);
                if (ds < previous * (1.0 - 1e-12)) w.monotone = false;
                previous = ds;
            }
            return w;
        }
    }

    // absolutely continuous part: density sum_i m_i scale_i w_i(x)
    std::vector<std::size_t> dens;
    for (std::size_t i = 0; i < k; ++i)
        if (std::holds_alternative<WeightedIntegral>(t.functionals()[i])) dens.push_back(i);
    if (dens.empty()) return std::nullopt;

    std::vector<double> xs;
    constexpr int mx = 257;
    for (int j = 0; j < mx; ++j) {
        const double x = domain_lower + (domain_upper - domain_lower) * j / (mx - 1);
        if (x != 0.0) xs.push_back(x);
    }
    std::vector<CVector> table(dens.size(), CVector(xs.size()));
    for (std::size_t a = 0; a < dens.size(); ++a) {
        const auto& w = std::get<WeightedIntegral>(t.functionals()[dens[a]]);
        for (std::size_t j = 0; j < xs.size(); ++j)
            table[a][j] = w.scale * evaluate(w.weight, xs[j], t.space());
    }
    for (double tau : taus) {
        CVector m(dens.size());
        for (std::size_t a = 0; a < dens.size(); ++a)
            m[a] = beta[dens[a]] * evaluate(t.functions()[dens[a]], tau, t.space());
        for (std::size_t j = 0; j < xs.size(); ++j) {
            Complex d = 0.0;
            double size = 0.0;
            for (std::size_t a = 0; a < dens.size(); ++a) {
                d += m[a] * table[a][j];
                size += std::abs(m[a] * table[a][j]);
            }
            if (!(size > 0.0) || cone_distance(d) / size <= tol) continue;
            double eps = std::min(0.25, std::abs(xs[j]) * 0.5);
            for (int halving = 0; halving < 40; ++halving, eps *= 0.5) {
                const HatFunction g = HatFunction::centered(xs[j], eps);
                Complex v;
                if (relative_violation(t, n, g, tau, &v) > tol)
                    return HatWitness{n, tau, g, eps, v, HatWitnessKind::Density, false};
            }
        }
    }
    return std::nullopt;
}

}  // namespace evpos
