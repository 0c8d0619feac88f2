#include "evpos/positivity.hpp"

#include "evpos/errors.hpp"
#include "evpos/rng.hpp"
#include "evpos/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace evpos {

using nlohmann::json;

// --------------------------------------------------------------- names

std::string to_string(Notion n) {
    switch (n) {
        case Notion::UniformEventual: return "uniform_eventual";
        case Notion::IndividualEventual: return "individual_eventual";
        case Notion::WeakEventual: return "weak_eventual";
        case Notion::UniformAsymptotic: return "uniform_asymptotic";
        case Notion::IndividualAsymptotic: return "individual_asymptotic";
        case Notion::WeakAsymptotic: return "weak_asymptotic";
    }
    return "unknown";
}

std::string to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Confirmed: return "confirmed";
        case VerdictStatus::Refuted: return "refuted_with_witness";
        case VerdictStatus::Undetermined: return "undetermined_up_to_horizon";
    }
    return "unknown";
}

Notion notion_from_string(const std::string& s) {
    for (Notion n : {Notion::UniformEventual, Notion::IndividualEventual, Notion::WeakEventual,
                     Notion::UniformAsymptotic, Notion::IndividualAsymptotic,
                     Notion::WeakAsymptotic})
        if (to_string(n) == s) return n;
    throw SchemaError("notion", "unknown notion '" + s + "'");
}

VerdictStatus status_from_string(const std::string& s) {
    for (VerdictStatus v :
         {VerdictStatus::Confirmed, VerdictStatus::Refuted, VerdictStatus::Undetermined})
        if (to_string(v) == s) return v;
    throw SchemaError("status", "unknown status '" + s + "'");
}

std::string to_string(TestProvenance p) {
    switch (p) {
        case TestProvenance::BasisVectors: return "basis_vectors";
        case TestProvenance::ZeroOneVectors: return "zero_one_vectors";
        case TestProvenance::SeededRandom: return "seeded_random";
        case TestProvenance::UserSupplied: return "user_supplied";
        case TestProvenance::Canonical: return "canonical";
    }
    return "unknown";
}

// --------------------------------------------------------- test vectors

namespace {

LatticeVector normalized(CVector entries, const Norm& norm) {
    const double n = norm.evaluate(entries);
    if (!(n > 0.0)) throw DomainError("test vector has zero norm");
    for (auto& z : entries) z /= n;
    return {std::move(entries), norm};
}

LatticeVector normalized_functional(CVector entries, const Norm& norm) {
    double m = 0.0;
    for (const auto& z : entries) m = std::max(m, std::abs(z));
    if (!(m > 0.0)) throw DomainError("test functional is zero");
    for (auto& z : entries) z /= m;
    return {std::move(entries), norm};
}

CVector random_positive(std::size_t dim, CounterRng& rng) {
    CVector v(dim);
    for (auto& z : v) z = rng.uniform();
    if (std::all_of(v.begin(), v.end(), [](Complex z) { return z == Complex(0.0); })) v[0] = 1.0;
    return v;
}

}  // namespace

ConeTestSet ConeTestSet::basis(std::size_t dim, const Norm& norm) {
    ConeTestSet s;
    s.provenance = TestProvenance::BasisVectors;
    for (std::size_t k = 0; k < dim; ++k) {
        CVector e(dim);
        e[k] = 1.0;
        s.vectors.push_back(normalized(e, norm));
        s.functionals.push_back(normalized_functional(e, norm));
        s.vector_labels.push_back("e_" + std::to_string(k + 1));
        s.functional_labels.push_back("e_" + std::to_string(k + 1));
    }
    return s;
}

ConeTestSet ConeTestSet::seeded_random(std::size_t dim, const Norm& norm, std::size_t count,
                                       std::uint64_t seed) {
    ConeTestSet s;
    s.provenance = TestProvenance::SeededRandom;
    const CounterRng root(seed, 0x7e57);
    for (std::size_t k = 0; k < count; ++k) {
        CounterRng rv = root.split(2 * k);
        CounterRng rf = root.split(2 * k + 1);
        s.vectors.push_back(normalized(random_positive(dim, rv), norm));
        s.functionals.push_back(normalized_functional(random_positive(dim, rf), norm));
        s.vector_labels.push_back("random_" + std::to_string(k));
        s.functional_labels.push_back("random_" + std::to_string(k));
    }
    return s;
}

ConeTestSet ConeTestSet::canonical(std::size_t dim, const Norm& norm, std::uint64_t seed,
                                   std::size_t random_count) {
    ConeTestSet s = basis(dim, norm);
    s.provenance = TestProvenance::Canonical;
    const CVector ones(dim, 1.0);
    s.vectors.push_back(normalized(ones, norm));
    s.functionals.push_back(normalized_functional(ones, norm));
    s.vector_labels.emplace_back("ones");
    s.functional_labels.emplace_back("ones");
    ConeTestSet r = seeded_random(dim, norm, random_count, seed);
    for (std::size_t k = 0; k < random_count; ++k) {
        s.vectors.push_back(std::move(r.vectors[k]));
        s.functionals.push_back(std::move(r.functionals[k]));
        s.vector_labels.push_back(std::move(r.vector_labels[k]));
        s.functional_labels.push_back(std::move(r.functional_labels[k]));
    }
    return s;
}

ConeTestSet ConeTestSet::user(std::vector<LatticeVector> vectors,
                              std::vector<LatticeVector> functionals) {
    ConeTestSet s;
    s.provenance = TestProvenance::UserSupplied;
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        const auto& v = vectors[k];
        if (!is_positive(v.entries(), 0.0)) throw DomainError("user test vector is not positive");
        s.vectors.push_back(normalized(CVector(v.entries().begin(), v.entries().end()), v.norm()));
        s.vector_labels.push_back("user_" + std::to_string(k));
    }
    for (std::size_t k = 0; k < functionals.size(); ++k) {
        const auto& f = functionals[k];
        if (!is_positive(f.entries(), 0.0))
            throw DomainError("user test functional is not positive");
        s.functionals.push_back(
            normalized_functional(CVector(f.entries().begin(), f.entries().end()), f.norm()));
        s.functional_labels.push_back("user_" + std::to_string(k));
    }
    return s;
}

double dual_norm(const Norm& norm, std::span<const Complex> xprime) {
    const auto& kind = norm.kind();
    double s = 0.0;
    if (std::holds_alternative<Ell1>(kind)) {
        for (const auto& z : xprime) s = std::max(s, std::abs(z));
        return s;
    }
    if (std::holds_alternative<EllInf>(kind)) {
        for (const auto& z : xprime) s += std::abs(z);
        return s;
    }
    if (std::holds_alternative<Ell2>(kind)) return norm2(xprime);
    const auto w = norm.quadrature_weights();
    if (const auto* lp = std::get_if<LpQuadrature>(&kind)) {
        // pairing sum_k w_k x'_k y_k against (sum_k w_k |y_k|^p)^(1/p)
        if (lp->p == 1.0) {
            for (const auto& z : xprime) s = std::max(s, std::abs(z));
            return s;
        }
        const double q = lp->p / (lp->p - 1.0);
        for (std::size_t k = 0; k < xprime.size(); ++k) s += w[k] * std::pow(std::abs(xprime[k]), q);
        return std::pow(s, 1.0 / q);
    }
    for (std::size_t k = 0; k < xprime.size(); ++k) s += w[k] * std::abs(xprime[k]);
    return s;
}

double model_spectral_radius(const OperatorModel& t) {
    if (const auto* r = std::get_if<RankKModel>(&t)) {
        double s = 0.0;
        for (const auto& l : r->eigenvalues()) s = std::max(s, std::abs(l));
        return s;
    }
    if (const auto* d = std::get_if<DiagonalModel>(&t)) {
        double s = 0.0;
        for (const auto& l : d->symbol) s = std::max(s, std::abs(l));
        return s;
    }
    if (std::holds_alternative<WeightedShiftModel>(t)) return 0.0;
    return eigenvalues(std::get<DenseModel>(t).matrix).spectral_radius;
}

// ------------------------------------------------------------- helpers

namespace {

bool is_rank_k(const OperatorModel& t) { return std::holds_alternative<RankKModel>(t); }

double entry_violation(const ComplexMatrix& m, std::size_t* row, std::size_t* col) {
    double v = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const double d = cone_distance(m(i, j));
            if (d > v) {
                v = d;
                if (row) *row = i;
                if (col) *col = j;
            }
        }
    return v;
}

unsigned quarter_start(unsigned horizon) { return horizon - horizon / 4; }

/// Start of the positive tail; nullopt unless it covers the last quarter of the horizon.
std::optional<unsigned> tail_start(const std::vector<bool>& positive) {
    if (positive.empty() || !positive.back()) return std::nullopt;
    const auto horizon = static_cast<unsigned>(positive.size() - 1);
    unsigned n0 = horizon;
    while (n0 > 0 && positive[n0 - 1]) --n0;
    if (n0 > quarter_start(horizon)) return std::nullopt;
    return n0;
}

/// Indices in the last quarter where `violation` reaches the persistence threshold.
std::vector<unsigned> persistent_indices(const std::vector<double>& violation, unsigned horizon) {
    std::vector<unsigned> out;
    for (unsigned n = quarter_start(horizon); n <= horizon && n < violation.size(); ++n)
        if (violation[n] >= persistence_threshold) out.push_back(n);
    return out;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

json vector_json(std::span<const Complex> v) {
    json a = json::array();
    for (const auto& z : v) a.push_back(complex_json(z));
    return a;
}

PositivityVerdict make_verdict(Notion notion, unsigned horizon, double tol) {
    PositivityVerdict v;
    v.notion = notion;
    v.horizon = horizon;
    v.tolerance = tol;
    return v;
}

/// Rescaled dense view S = A / spr (A itself when spr = 0).
struct DenseView {
    ComplexMatrix s;
    Norm norm;
    double spr = 0.0;
};

DenseView dense_view(const OperatorModel& t) {
    DenseModel d = to_dense(t);
    const double spr = model_spectral_radius(t);
    if (spr > 0.0) d.matrix *= Complex(1.0 / spr);
    return {std::move(d.matrix), d.norm, spr};
}

/// Orbit S^n x, n = 0..horizon, of each test vector.
std::vector<std::vector<CVector>> dense_orbits(const ComplexMatrix& s, const ConeTestSet& tests,
                                               unsigned horizon) {
    std::vector<std::vector<CVector>> out(tests.vectors.size());
    for (std::size_t a = 0; a < tests.vectors.size(); ++a) {
        out[a].reserve(horizon + 1);
        CVector y(tests.vectors[a].entries().begin(), tests.vectors[a].entries().end());
        out[a].push_back(y);
        for (unsigned n = 1; n <= horizon; ++n) {
            y = s * y;
            out[a].push_back(y);
        }
    }
    return out;
}

std::vector<double> function_sup(const RankKModel& r) {
    std::vector<double> out;
    for (const auto& f : r.function_samples()) {
        double m = 0.0;
        for (const auto& z : f) m = std::max(m, std::abs(z));
        out.push_back(m);
    }
    return out;
}

Complex ipow(Complex z, unsigned n) {
    Complex r = 1.0;
    while (n) {
        if (n & 1U) r *= z;
        z *= z;
        n >>= 1U;
    }
    return r;
}

/// c_i = (lambda_i / spr)^(n-1) a_i / spr, the coefficients of S^n x.
CVector scaled_coefficients(const RankKModel& r, std::span<const Complex> a, unsigned n,
                            double spr) {
    CVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        c[i] = ipow(r.eigenvalues()[i] / spr, n - 1) * a[i] / spr;
    return c;
}

/// Coefficients of S^n x for n = 0..horizon (entry 0 unused); zero when spr = 0.
std::vector<CVector> scaled_orbit(const RankKModel& r, std::span<const Complex> a,
                                  unsigned horizon, double spr) {
    std::vector<CVector> out(horizon + 1, CVector(a.size()));
    if (!(spr > 0.0)) return out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Complex ratio = r.eigenvalues()[i] / spr;
        Complex c = a[i] / spr;
        for (unsigned n = 1; n <= horizon; ++n, c *= ratio) out[n][i] = c;
    }
    return out;
}

/// b_i(x') = sum_k q_k x'_k f_i(node_k), the quadrature pairing with f_i.
CVector functional_images(const RankKModel& r, const LatticeVector& xprime) {
    const auto q = r.space().quadrature_weights();
    CVector b(r.rank());
    for (std::size_t i = 0; i < r.rank(); ++i)
        for (std::size_t k = 0; k < q.size(); ++k)
            b[i] += q[k] * xprime[k] * r.function_samples()[i][k];
    return b;
}

CVector first_coefficients(const RankKModel& r, const LatticeVector& x) {
    CVector a(r.rank());
    for (std::size_t i = 0; i < r.rank(); ++i) a[i] = pair(r.functionals()[i], x.entries(), r.space());
    return a;
}

}  // namespace

// ------------------------------------------------------ positive operator

bool power_is_positive(const OperatorModel& t, unsigned n, double tol) {
    if (const auto* r = std::get_if<RankKModel>(&t)) {
        if (n == 0) return true;
        if (find_hat_witness(*r, n, tol)) return false;
        const ConeTestSet tests = ConeTestSet::canonical(r->dimension(), r->space());
        const auto sup = function_sup(*r);
        for (const auto& x : tests.vectors) {
            const CVector c = r->power_coefficients(n, x.entries());
            double scale = 0.0;
            for (std::size_t i = 0; i < c.size(); ++i) scale += std::abs(c[i]) * sup[i];
            if (find_negativity(*r, c, tol, scale)) return false;
        }
        return true;
    }
    const ComplexMatrix m = matrix_power(to_dense(t).matrix, n);
    return entry_violation(m, nullptr, nullptr) <= tol * std::max(m.max_abs(), 1.0);
}

bool is_positive_operator(const OperatorModel& t, double tol) {
    if (const auto* d = std::get_if<DenseModel>(&t))
        return entry_violation(d->matrix, nullptr, nullptr) <= tol;
    if (const auto* d = std::get_if<DiagonalModel>(&t))
        return std::all_of(d->symbol.begin(), d->symbol.end(),
                           [tol](Complex z) { return cone_distance(z) <= tol; });
    if (const auto* s = std::get_if<WeightedShiftModel>(&t))
        return std::all_of(s->weights.begin(), s->weights.end(),
                           [tol](Complex z) { return cone_distance(z) <= tol; });
    const auto& r = std::get<RankKModel>(t);
    const ConeTestSet tests = ConeTestSet::canonical(r.dimension(), r.space());
    for (const auto& x : tests.vectors) {
        const LatticeVector y = apply(t, x);
        if (cone_distance(y) > tol * norm_value(x)) return false;
    }
    return power_is_positive(t, 1, tol);
}

// ------------------------------------------------------ eventual notions

PositivityVerdict uniform_eventual(const OperatorModel& t, unsigned horizon, double tol) {
    if (horizon < 1) throw DomainError("uniform_eventual: horizon must be >= 1");
    PositivityVerdict v = make_verdict(Notion::UniformEventual, horizon, tol);
    std::vector<bool> positive(horizon + 1, true);
    v.decay.assign(horizon + 1, 0.0);

    if (const auto* r = std::get_if<RankKModel>(&t)) {
        bool family = true;
        json witnesses = json::array();
        for (unsigned n = 1; n <= horizon; ++n) {
            const auto w = find_hat_witness(*r, n, tol);
            if (w) {
                positive[n] = false;
                v.decay[n] = cone_distance(w->value);
                witnesses.push_back({{"n", n},
                                     {"evaluation_point", w->point},
                                     {"hat_peak", w->hat.peak},
                                     {"epsilon", w->epsilon},
                                     {"value", complex_json(w->value)},
                                     {"kind", w->kind == HatWitnessKind::Atom ? "atom" : "density"},
                                     {"monotone_in_epsilon", w->monotone}});
            }
            if (!w || w->kind != HatWitnessKind::Atom || !w->monotone) family = false;
        }
        if (family) {
            v.status = VerdictStatus::Refuted;
            v.witness = {{"kind", "hat_family"}, {"per_power", std::move(witnesses)}};
            v.note = "hat functions concentrating at a negative point mass of the kernel "
                     "violate positivity at every tested power";
            return v;
        }
        if (auto n0 = tail_start(positive)) {
            v.status = VerdictStatus::Confirmed;
            v.n0 = *n0;
        }
        return v;
    }

    const DenseView view = dense_view(t);
    ComplexMatrix m = ComplexMatrix::identity(view.s.rows());
    std::vector<double> scaled(horizon + 1, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> where(horizon + 1);
    std::vector<Complex> entries(horizon + 1);
    for (unsigned n = 0; n <= horizon; ++n) {
        if (n > 0) m = view.s * m;
        std::size_t i = 0, j = 0;
        const double viol = entry_violation(m, &i, &j);
        const double scale = m.max_abs();
        positive[n] = viol <= tol * scale || scale == 0.0;
        v.decay[n] = scale > 0.0 ? viol / scale : 0.0;
        scaled[n] = viol;
        where[n] = {i, j};
        entries[n] = m(i, j);
    }
    if (auto n0 = tail_start(positive)) {
        v.status = VerdictStatus::Confirmed;
        v.n0 = *n0;
        return v;
    }
    if (view.spr > 0.0) {
        const auto hits = persistent_indices(scaled, horizon);
        if (hits.size() >= 2) {
            const unsigned n = hits.back();
            v.status = VerdictStatus::Refuted;
            v.witness = {{"kind", "matrix_entry"},
                         {"n", n},
                         {"row", where[n].first},
                         {"col", where[n].second},
                         {"scaled_entry", complex_json(entries[n])},
                         {"spectral_radius", view.spr},
                         {"persistent_powers", hits}};
            v.note = "entry of (T/spr)^n stays off the cone by at least " +
                     std::to_string(persistence_threshold) + " in the horizon tail";
        }
    }
    return v;
}

PositivityVerdict individual_eventual(const OperatorModel& t, const ConeTestSet& tests,
                                      unsigned horizon, double tol) {
    if (horizon < 1) throw DomainError("individual_eventual: horizon must be >= 1");
    PositivityVerdict v = make_verdict(Notion::IndividualEventual, horizon, tol);
    v.decay.assign(horizon + 1, 0.0);
    unsigned n0_max = 0;
    bool all_confirmed = true;

    if (const auto* r = std::get_if<RankKModel>(&t)) {
        const double spr = model_spectral_radius(t);
        const auto sup = function_sup(*r);
        for (std::size_t a = 0; a < tests.vectors.size(); ++a) {
            const LatticeVector& x = tests.vectors[a];
            const CVector coeffs = first_coefficients(*r, x);
            std::vector<bool> positive(horizon + 1, true);
            bool singular_everywhere = true;
            json points = json::array();
            for (unsigned n = 1; n <= horizon; ++n) {
                CVector c(r->rank());
                double scale = 0.0;
                for (std::size_t i = 0; i < c.size(); ++i) {
                    c[i] = ipow(r->eigenvalues()[i], n - 1) * coeffs[i];
                    scale += std::abs(c[i]) * sup[i];
                }
                const auto w = find_negativity(*r, c, tol, scale);
                positive[n] = !w;
                if (w) points.push_back({{"n", n}, {"point", w->point}, {"value", complex_json(w->value)}});
                if (!w || w->kind != WitnessKind::Singular) singular_everywhere = false;
                if (spr > 0.0) {
                    const CVector s = scaled_coefficients(*r, coeffs, n, spr);
                    v.decay[n] = std::max(v.decay[n],
                                          cone_distance(r->space(), r->combination_samples(s)) /
                                              norm_value(x));
                }
            }
            if (singular_everywhere) {
                v.status = VerdictStatus::Refuted;
                v.witness = {{"kind", "analytic_points"},
                             {"test_vector", tests.vector_labels[a]},
                             {"per_power", std::move(points)}};
                v.note = "a singular term drives T^n x negative next to 0 for every tested power";
                return v;
            }
            if (auto n0 = tail_start(positive)) n0_max = std::max(n0_max, *n0);
            else all_confirmed = false;
        }
        if (all_confirmed) {
            v.status = VerdictStatus::Confirmed;
            v.n0 = n0_max;
        }
        return v;
    }

    const DenseView view = dense_view(t);
    const auto orbits = dense_orbits(view.s, tests, horizon);
    std::optional<std::size_t> refuting;
    std::vector<unsigned> refuting_hits;
    for (std::size_t a = 0; a < orbits.size(); ++a) {
        const double nx = norm_value(tests.vectors[a]);
        std::vector<bool> positive(horizon + 1);
        std::vector<double> scaled(horizon + 1);
        for (unsigned n = 0; n <= horizon; ++n) {
            const CVector& y = orbits[a][n];
            const double d = cone_distance(view.norm, y);
            positive[n] = d <= tol * std::max(nx, view.norm.evaluate(y));
            scaled[n] = d / nx;
            v.decay[n] = std::max(v.decay[n], scaled[n]);
        }
        if (auto n0 = tail_start(positive)) n0_max = std::max(n0_max, *n0);
        else all_confirmed = false;
        if (view.spr > 0.0 && !refuting) {
            auto hits = persistent_indices(scaled, horizon);
            if (hits.size() >= 2) {
                refuting = a;
                refuting_hits = std::move(hits);
            }
        }
    }
    if (all_confirmed) {
        v.status = VerdictStatus::Confirmed;
        v.n0 = n0_max;
    } else if (refuting) {
        const unsigned n = refuting_hits.back();
        v.status = VerdictStatus::Refuted;
        v.witness = {{"kind", "test_vector"},
                     {"test_vector", tests.vector_labels[*refuting]},
                     {"n", n},
                     {"d_plus_scaled", cone_distance(view.norm, orbits[*refuting][n])},
                     {"persistent_powers", refuting_hits}};
        v.note = "d+((T/spr)^n x) stays above " + std::to_string(persistence_threshold) +
                 " in the horizon tail";
    }
    return v;
}

PositivityVerdict weak_eventual(const OperatorModel& t, const ConeTestSet& tests, unsigned horizon,
                                double tol) {
    if (horizon < 1) throw DomainError("weak_eventual: horizon must be >= 1");
    PositivityVerdict v = make_verdict(Notion::WeakEventual, horizon, tol);
    v.decay.assign(horizon + 1, 0.0);
    unsigned n0_max = 0;
    bool all_confirmed = true;
    std::optional<std::pair<std::size_t, std::size_t>> refuting;
    std::vector<unsigned> refuting_hits;
    Complex refuting_value;
    const Norm& norm = space_norm(t);
    const double spr = model_spectral_radius(t);

    auto assess = [&](std::size_t a, std::size_t b, const std::vector<Complex>& values,
                      const std::vector<double>& magnitude, double unit) {
        std::vector<bool> positive(horizon + 1);
        std::vector<double> scaled(horizon + 1);
        for (unsigned n = 0; n <= horizon; ++n) {
            const double d = cone_distance(values[n]);
            positive[n] = d <= tol * magnitude[n] || magnitude[n] == 0.0;
            scaled[n] = d / unit;
            v.decay[n] = std::max(v.decay[n], scaled[n]);
        }
        if (auto n0 = tail_start(positive)) n0_max = std::max(n0_max, *n0);
        else all_confirmed = false;
        if (spr > 0.0 && !refuting) {
            auto hits = persistent_indices(scaled, horizon);
            if (hits.size() >= 2) {
                refuting = {a, b};
                refuting_value = values[hits.back()];
                refuting_hits = std::move(hits);
            }
        }
    };

    std::vector<Complex> values(horizon + 1);
    std::vector<double> magnitude(horizon + 1);
    if (const auto* r = std::get_if<RankKModel>(&t)) {
        const auto q = r->space().quadrature_weights();
        std::vector<std::vector<CVector>> scaled;
        for (const auto& x : tests.vectors)
            scaled.push_back(scaled_orbit(*r, first_coefficients(*r, x), horizon, spr));
        for (std::size_t b = 0; b < tests.functionals.size(); ++b) {
            const LatticeVector& xp = tests.functionals[b];
            const CVector images = functional_images(*r, xp);
            const double dn = dual_norm(norm, xp.entries());
            for (std::size_t a = 0; a < tests.vectors.size(); ++a) {
                const LatticeVector& x = tests.vectors[a];
                values[0] = 0.0;
                magnitude[0] = 0.0;
                for (std::size_t k = 0; k < q.size(); ++k) {
                    values[0] += q[k] * xp[k] * x[k];
                    magnitude[0] += std::abs(q[k] * xp[k] * x[k]);
                }
                for (unsigned n = 1; n <= horizon; ++n) {
                    const CVector& c = scaled[a][n];
                    values[n] = 0.0;
                    magnitude[n] = 0.0;
                    for (std::size_t i = 0; i < c.size(); ++i) {
                        values[n] += c[i] * images[i];
                        magnitude[n] += std::abs(c[i] * images[i]);
                    }
                }
                assess(a, b, values, magnitude, norm_value(x) * dn);
            }
        }
    } else {
        const DenseView view = dense_view(t);
        const auto orbits = dense_orbits(view.s, tests, horizon);
        for (std::size_t b = 0; b < tests.functionals.size(); ++b) {
            const LatticeVector& xp = tests.functionals[b];
            const double dn = dual_norm(norm, xp.entries());
            for (std::size_t a = 0; a < orbits.size(); ++a) {
                for (unsigned n = 0; n <= horizon; ++n) {
                    const CVector& y = orbits[a][n];
                    values[n] = 0.0;
                    magnitude[n] = 0.0;
                    for (std::size_t k = 0; k < y.size(); ++k) {
                        values[n] += xp[k] * y[k];
                        magnitude[n] += std::abs(xp[k] * y[k]);
                    }
                }
                assess(a, b, values, magnitude, norm_value(tests.vectors[a]) * dn);
            }
        }
    }

    if (all_confirmed) {
        v.status = VerdictStatus::Confirmed;
        v.n0 = n0_max;
    } else if (refuting) {
        v.status = VerdictStatus::Refuted;
        v.witness = {{"kind", "test_pair"},
                     {"test_vector", tests.vector_labels[refuting->first]},
                     {"test_functional", tests.functional_labels[refuting->second]},
                     {"n", refuting_hits.back()},
                     {"scaled_pairing", complex_json(refuting_value)},
                     {"persistent_powers", refuting_hits}};
        v.note = "d+(<x', (T/spr)^n x>) stays above " + std::to_string(persistence_threshold) +
                 " in the horizon tail";
    }
    return v;
}

// -------------------------------------------------------------- delta_n

namespace {

/// x -> S^n x for a fixed n.
class ScaledPower {
public:
    ScaledPower(const OperatorModel& t, unsigned n, double spr) : t_(t), n_(n), spr_(spr) {
        if (const auto* r = std::get_if<RankKModel>(&t)) {
            for (const auto& phi : r->functionals()) rows_.push_back(functional_row(phi, r->space()));
        } else {
            ComplexMatrix s = to_dense(t).matrix;
            s *= Complex(1.0 / spr);
            m_ = matrix_power(s, n);
        }
    }

    CVector operator()(std::span<const Complex> x) const {
        if (const auto* r = std::get_if<RankKModel>(&t_)) {
            if (n_ == 0) return CVector(x.begin(), x.end());
            CVector a(r->rank());
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t k = 0; k < x.size(); ++k) a[i] += rows_[i][k] * x[k];
            return r->combination_samples(scaled_coefficients(*r, a, n_, spr_));
        }
        return m_ * x;
    }

private:
    const OperatorModel& t_;
    unsigned n_;
    double spr_;
    ComplexMatrix m_;
    std::vector<CVector> rows_;
};

double require_spr(const OperatorModel& t, double tol) {
    const double spr = model_spectral_radius(t);
    if (!(spr > tol))
        throw NotClassifiable("spectral radius " + std::to_string(spr) +
                              " is not positive; asymptotic notions are undefined");
    return spr;
}

DeltaResult zero_one_sup(const ScaledPower& sp, const Norm& norm, std::size_t dim) {
    std::vector<CVector> cols(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        CVector e(dim);
        e[j] = 1.0;
        cols[j] = sp(e);
    }
    CVector y(dim);
    std::uint64_t mask = 0;
    double best = 0.0;
    std::uint64_t best_mask = 1;
    const std::uint64_t count = std::uint64_t{1} << dim;
    for (std::uint64_t g = 1; g < count; ++g) {
        const std::uint64_t gray = g ^ (g >> 1U);
        const std::uint64_t flip = gray ^ mask;
        const auto j = static_cast<std::size_t>(__builtin_ctzll(flip));
        const double sign = (gray & flip) ? 1.0 : -1.0;
        for (std::size_t k = 0; k < dim; ++k) y[k] += sign * cols[j][k];
        mask = gray;
        const double d = cone_distance(norm, y);
        if (d > best) {
            best = d;
            best_mask = gray;
        }
    }
    CVector x(dim);
    for (std::size_t j = 0; j < dim; ++j)
        if (best_mask & (std::uint64_t{1} << j)) x[j] = 1.0;
    return {best, LatticeVector(std::move(x), norm), true};
}

DeltaResult basis_sup(const ScaledPower& sp, const Norm& norm, std::size_t dim) {
    double best = 0.0;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < dim; ++j) {
        CVector e(dim);
        e[j] = 1.0;
        const double d = cone_distance(norm, sp(e)) / norm.evaluate(e);
        if (d > best) {
            best = d;
            arg = j;
        }
    }
    CVector x(dim);
    x[arg] = 1.0 / norm.evaluate(CVector(1, 1.0));
    return {best, LatticeVector(std::move(x), norm), true};
}

DeltaResult monte_carlo_sup(const ScaledPower& sp, const Norm& norm, std::size_t dim,
                            const MonteCarlo& mc) {
    const CounterRng root(mc.seed, 0xde17a);
    auto value = [&](const CVector& x) { return cone_distance(norm, sp(x)); };
    auto normalize = [&](CVector& x) {
        const double n = norm.evaluate(x);
        if (n > 0.0)
            for (auto& z : x) z /= n;
        return n > 0.0;
    };
    CVector best_x(dim, 1.0);
    normalize(best_x);
    double best = value(best_x);
    for (std::size_t s = 0; s < mc.samples; ++s) {
        CounterRng rng = root.split(s);
        CVector x(dim);
        switch (s % 4) {
            case 1: x[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(dim) - 1))] = 1.0; break;
            case 2:
                for (auto& z : x) z = rng.uniform() < 0.5 ? 1.0 : 0.0;
                break;
            default:
                for (auto& z : x) z = rng.uniform();
        }
        if (!normalize(x)) continue;
        const double d = value(x);
        if (d > best) {
            best = d;
            best_x = std::move(x);
        }
    }
    double step = 0.5;
    for (unsigned round = 0; round < mc.ascent_rounds; ++round, step *= 0.5) {
        for (std::size_t k = 0; k < dim; ++k) {
            for (double sign : {1.0, -1.0}) {
                CVector x = best_x;
                double top = 0.0;
                for (const auto& z : x) top = std::max(top, z.real());
                x[k] = std::max(0.0, x[k].real() + sign * step * top);
                if (!normalize(x)) continue;
                const double d = value(x);
                if (d > best) {
                    best = d;
                    best_x = std::move(x);
                }
            }
        }
    }
    return {best, LatticeVector(std::move(best_x), norm), false};
}

}  // namespace

DeltaResult delta_n(const OperatorModel& t, unsigned n, const DeltaStrategy& strategy) {
    const double spr = require_spr(t, 0.0);
    const Norm& norm = space_norm(t);
    const std::size_t dim = dimension(t);
    const ScaledPower sp(t, n, spr);
    if (const auto* mc = std::get_if<MonteCarlo>(&strategy)) return monte_carlo_sup(sp, norm, dim, *mc);
    const auto& kind = norm.kind();
    if (std::holds_alternative<Ell1>(kind)) return basis_sup(sp, norm, dim);
    if (std::holds_alternative<EllInf>(kind) || std::holds_alternative<GridSup>(kind)) {
        if (dim > zero_one_single_cap)
            throw StrategyUnavailable("delta_n: 0/1 enumeration needs dimension <= " +
                                      std::to_string(zero_one_single_cap));
        return zero_one_sup(sp, norm, dim);
    }
    throw StrategyUnavailable("delta_n: no finite extreme-point set for " + norm.name());
}

// --------------------------------------------------- asymptotic notions

namespace {

struct TailDecision {
    VerdictStatus status = VerdictStatus::Undetermined;
    unsigned settle = 0;  // first n from which the sequence stays <= tol
    unsigned peak = 0;    // argmax over the second half of the tail
};

TailDecision decide_tail(const std::vector<double>& seq, unsigned horizon, double tol) {
    TailDecision d;
    const unsigned start = quarter_start(horizon);
    const unsigned mid = start + (horizon - start + 1) / 2;
    double tail_max = 0.0, first = 0.0, second = 0.0;
    d.peak = mid;
    for (unsigned n = start; n <= horizon; ++n) {
        tail_max = std::max(tail_max, seq[n]);
        if (n < mid) first = std::max(first, seq[n]);
        else if (seq[n] > second) {
            second = seq[n];
            d.peak = n;
        }
    }
    if (tail_max <= tol) {
        d.status = VerdictStatus::Confirmed;
        d.settle = horizon;
        while (d.settle > 0 && seq[d.settle - 1] <= tol) --d.settle;
    } else if (second >= 100.0 * tol && second >= first) {
        d.status = VerdictStatus::Refuted;
    }
    return d;
}

void finish(PositivityVerdict& v, const TailDecision& d) {
    v.status = d.status;
    if (d.status == VerdictStatus::Confirmed) v.n0 = d.settle;
}

}  // namespace

std::array<PositivityVerdict, 3> classify_asymptotic(const OperatorModel& t, unsigned horizon,
                                                     double tol, const ConeTestSet& tests,
                                                     std::uint64_t seed) {
    if (horizon < 4) throw DomainError("classify_asymptotic: horizon must be >= 4");
    const double spr = require_spr(t, tol);
    const Norm& norm = space_norm(t);
    const std::size_t dim = dimension(t);
    const auto& kind = norm.kind();

    PositivityVerdict uni = make_verdict(Notion::UniformAsymptotic, horizon, tol);
    PositivityVerdict ind = make_verdict(Notion::IndividualAsymptotic, horizon, tol);
    PositivityVerdict weak = make_verdict(Notion::WeakAsymptotic, horizon, tol);
    uni.decay.assign(horizon + 1, 0.0);
    ind.decay.assign(horizon + 1, 0.0);
    weak.decay.assign(horizon + 1, 0.0);

    // uniform: delta_n
    std::vector<std::optional<LatticeVector>> maximizers(horizon + 1);
    bool exact = true;
    const bool ell1 = std::holds_alternative<Ell1>(kind);
    const bool zero_one = (std::holds_alternative<EllInf>(kind) ||
                           std::holds_alternative<GridSup>(kind)) &&
                          dim <= zero_one_sequence_cap;
    if (ell1 && !is_rank_k(t)) {
        const DenseView view = dense_view(t);
        ComplexMatrix m = ComplexMatrix::identity(dim);
        for (unsigned n = 0; n <= horizon; ++n) {
            if (n > 0) m = view.s * m;
            double best = 0.0;
            std::size_t arg = 0;
            for (std::size_t j = 0; j < dim; ++j) {
                const double d = cone_distance(norm, m.column(j));
                if (d > best) {
                    best = d;
                    arg = j;
                }
            }
            uni.decay[n] = best;
            maximizers[n] = LatticeVector::basis(dim, arg, norm);
        }
    } else {
        for (unsigned n = 0; n <= horizon; ++n) {
            const ScaledPower sp(t, n, spr);
            DeltaResult r = zero_one ? zero_one_sup(sp, norm, dim)
                                     : monte_carlo_sup(sp, norm, dim,
                                                       MonteCarlo{32, seed + n, dim <= 64 ? 2U : 0U});
            exact = exact && r.exact;
            uni.decay[n] = r.value;
            maximizers[n] = std::move(r.maximizer);
        }
    }
    const TailDecision du = decide_tail(uni.decay, horizon, tol);
    finish(uni, du);
    if (!exact) {
        uni.note = "delta_n is a Monte Carlo lower bound";
        if (uni.status == VerdictStatus::Confirmed) {
            uni.status = VerdictStatus::Undetermined;
            uni.n0 = 0;
            uni.note += "; a small lower bound does not confirm uniform decay";
        }
    }
    if (uni.status == VerdictStatus::Refuted) {
        const auto& x = *maximizers[du.peak];
        uni.witness = {{"kind", "extreme_point"},
                       {"n", du.peak},
                       {"vector", vector_json(x.entries())},
                       {"delta", uni.decay[du.peak]},
                       {"exact", exact}};
    }

    // individual and weak on the test set
    std::vector<std::vector<double>> ind_seq(tests.vectors.size(),
                                             std::vector<double>(horizon + 1, 0.0));
    std::vector<std::vector<CVector>> orbits;  // dense: S^n x
    std::vector<std::vector<CVector>> scaled;  // rank-k: coefficients of S^n x
    const auto* r = std::get_if<RankKModel>(&t);
    if (r) {
        for (const auto& x : tests.vectors)
            scaled.push_back(scaled_orbit(*r, first_coefficients(*r, x), horizon, spr));
        for (std::size_t a = 0; a < tests.vectors.size(); ++a) {
            const double nx = norm_value(tests.vectors[a]);
            ind_seq[a][0] = cone_distance(tests.vectors[a]) / nx;
            for (unsigned n = 1; n <= horizon; ++n)
                ind_seq[a][n] = cone_distance(norm, r->combination_samples(scaled[a][n])) / nx;
        }
    } else {
        const DenseView view = dense_view(t);
        orbits = dense_orbits(view.s, tests, horizon);
        for (std::size_t a = 0; a < tests.vectors.size(); ++a) {
            const double nx = norm_value(tests.vectors[a]);
            for (unsigned n = 0; n <= horizon; ++n)
                ind_seq[a][n] = cone_distance(norm, orbits[a][n]) / nx;
        }
    }
    for (const auto& s : ind_seq)
        for (unsigned n = 0; n <= horizon; ++n) ind.decay[n] = std::max(ind.decay[n], s[n]);
    const TailDecision di = decide_tail(ind.decay, horizon, tol);
    finish(ind, di);
    if (ind.status == VerdictStatus::Refuted) {
        std::size_t arg = 0;
        for (std::size_t a = 0; a < ind_seq.size(); ++a)
            if (ind_seq[a][di.peak] > ind_seq[arg][di.peak]) arg = a;
        ind.witness = {{"kind", "test_vector"},
                       {"test_vector", tests.vector_labels[arg]},
                       {"n", di.peak},
                       {"d_plus_scaled", ind_seq[arg][di.peak]}};
    }

    double weak_best = -1.0;
    std::pair<std::size_t, std::size_t> weak_arg{0, 0};
    std::vector<double> seq(horizon + 1);
    const auto q = r ? r->space().quadrature_weights() : std::vector<double>{};
    for (std::size_t b = 0; b < tests.functionals.size(); ++b) {
        const LatticeVector& xp = tests.functionals[b];
        const double dn = dual_norm(norm, xp.entries());
        const CVector images = r ? functional_images(*r, xp) : CVector{};
        for (std::size_t a = 0; a < tests.vectors.size(); ++a) {
            const double unit = norm_value(tests.vectors[a]) * dn;
            for (unsigned n = 0; n <= horizon; ++n) {
                Complex val = 0.0;
                if (r) {
                    if (n == 0) {
                        for (std::size_t k = 0; k < q.size(); ++k)
                            val += q[k] * xp[k] * tests.vectors[a][k];
                    } else {
                        const CVector& c = scaled[a][n];
                        for (std::size_t i = 0; i < c.size(); ++i) val += c[i] * images[i];
                    }
                } else {
                    val = bilinear(xp.entries(), orbits[a][n]);
                }
                seq[n] = cone_distance(val) / unit;
                weak.decay[n] = std::max(weak.decay[n], seq[n]);
            }
            double late = 0.0;
            for (unsigned n = quarter_start(horizon); n <= horizon; ++n) late = std::max(late, seq[n]);
            if (late > weak_best) {
                weak_best = late;
                weak_arg = {a, b};
            }
        }
    }
    const TailDecision dw = decide_tail(weak.decay, horizon, tol);
    finish(weak, dw);
    if (weak.status == VerdictStatus::Refuted)
        weak.witness = {{"kind", "test_pair"},
                        {"test_vector", tests.vector_labels[weak_arg.first]},
                        {"test_functional", tests.functional_labels[weak_arg.second]},
                        {"n", dw.peak},
                        {"d_plus_scaled", weak_best}};

    return {std::move(uni), std::move(ind), std::move(weak)};
}

std::vector<std::string> hierarchy_violations(const std::vector<PositivityVerdict>& verdicts) {
    auto find = [&](Notion n) -> const PositivityVerdict* {
        for (const auto& v : verdicts)
            if (v.notion == n) return &v;
        return nullptr;
    };
    std::vector<std::string> out;
    const std::pair<Notion, Notion> chain[] = {
        {Notion::UniformEventual, Notion::IndividualEventual},
        {Notion::IndividualEventual, Notion::WeakEventual},
        {Notion::UniformEventual, Notion::WeakEventual},
        {Notion::UniformAsymptotic, Notion::IndividualAsymptotic},
        {Notion::IndividualAsymptotic, Notion::WeakAsymptotic},
        {Notion::UniformAsymptotic, Notion::WeakAsymptotic},
    };
    for (const auto& [upper, lower] : chain) {
        const auto* u = find(upper);
        const auto* l = find(lower);
        if (u && l && u->confirmed() && l->refuted())
            out.push_back(to_string(upper) + " confirmed but " + to_string(lower) + " refuted");
    }
    return out;
}

}  // namespace evpos
