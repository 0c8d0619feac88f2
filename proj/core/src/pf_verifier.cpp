#include "evpos/pf_verifier.hpp"

#include "evpos/errors.hpp"
#include "evpos/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace evpos {

using nlohmann::json;

std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::NotApplicable: return "not_applicable";
        case CheckStatus::Vacuous: return "vacuous_pass";
    }
    return "unknown";
}

CheckStatus check_status_from_string(const std::string& s) {
    for (CheckStatus c : {CheckStatus::Pass, CheckStatus::Fail, CheckStatus::NotApplicable,
                          CheckStatus::Vacuous})
        if (to_string(c) == s) return c;
    throw SchemaError("status", "unknown check status '" + s + "'");
}

std::string to_string(EigenvectorRoute r) {
    return r == EigenvectorRoute::Laurent ? "laurent" : "eigenbasis";
}

bool CheckResult::hypotheses_met() const {
    return !hypotheses.empty() &&
           std::all_of(hypotheses.begin(), hypotheses.end(), [](const auto& h) { return h.met; });
}

void settle(CheckResult& r) {
    r.status = r.margin >= -r.tolerance ? CheckStatus::Pass : CheckStatus::Fail;
}

void attach_hypothesis(CheckResult& r, std::string name, bool met, std::string detail) {
    r.hypotheses.push_back({std::move(name), met, std::move(detail)});
    if (r.status != CheckStatus::Fail) return;
    r.note = r.hypotheses_met() ? "contradiction: conclusion fails with all hypotheses met"
                                : "hypotheses unmet: no contradiction";
}

namespace {

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

void require_unit_spr(const ComplexMatrix& a, const char* who) {
    const double spr = eigenvalues(a).spectral_radius;
    if (std::abs(spr - 1.0) > unit_spr_tolerance)
        throw DomainError(std::string(who) + ": expects spr(A) = 1, got " + std::to_string(spr));
}

void require_positive(const LatticeVector& x, const char* who) {
    if (!is_positive(x.entries(), 0.0))
        throw DomainError(std::string(who) + ": x must be a positive vector");
}

/// omega at several r from one orbit of x.
struct OmegaSeries {
    std::vector<CVector> values;
    double orbit_sup = 0.0;
};

OmegaSeries omega_series(const ComplexMatrix& a, const std::vector<double>& rs,
                         std::span<const Complex> x, const Norm& norm, unsigned n_trunc) {
    OmegaSeries out;
    out.values.assign(rs.size(), CVector(x.size()));
    std::vector<double> w(rs.size());
    for (std::size_t k = 0; k < rs.size(); ++k) w[k] = 1.0 / rs[k];
    CVector y(x.begin(), x.end()), next(x.size());
    const std::size_t dim = x.size();
    for (unsigned n = 0; n <= n_trunc; ++n) {
        if (n > 0) {
            for (std::size_t i = 0; i < dim; ++i) {
                // plain arithmetic avoids the library's NaN-recovering complex multiply
                double re = 0.0, im = 0.0;
                const auto row = a.row(i);
                for (std::size_t j = 0; j < dim; ++j) {
                    re += row[j].real() * y[j].real() - row[j].imag() * y[j].imag();
                    im += row[j].real() * y[j].imag() + row[j].imag() * y[j].real();
                }
                next[i] = {re, im};
            }
            y.swap(next);
        }
        out.orbit_sup = std::max(out.orbit_sup, norm.evaluate(y));
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double s = std::sqrt(std::norm(y[i])) - y[i].real();
            if (s == 0.0) continue;
            for (std::size_t k = 0; k < rs.size(); ++k) out.values[k][i] += w[k] * s;
        }
        for (std::size_t k = 0; k < rs.size(); ++k) w[k] /= rs[k];
    }
    return out;
}

double omega_tail(double orbit_sup, double r, unsigned n_trunc) {
    return 2.0 * orbit_sup * std::pow(r, -static_cast<double>(n_trunc) - 1.0) / (r - 1.0);
}

}  // namespace

UnitRescaling rescale_to_unit_spr(const ComplexMatrix& a) {
    const double spr = eigenvalues(a).spectral_radius;
    if (!(spr > 0.0)) throw NotClassifiable("rescale_to_unit_spr: spectral radius is 0");
    ComplexMatrix s = a;
    s *= Complex(1.0 / spr);
    return {std::move(s), spr};
}

CheckResult verify_spr_in_spectrum(const ComplexMatrix& a, double tol) {
    CheckResult r;
    r.name = "spr_in_spectrum";
    const Spectrum spec = eigenvalues(a);
    const double spr = spec.spectral_radius;
    r.payload["spectral_radius"] = spr;
    if (spr == 0.0) {
        r.status = CheckStatus::Vacuous;
        r.note = "spectral radius is 0";
        return r;
    }
    const NearestEigenvalue near = nearest_eigenvalue(spec, Complex(spr));
    r.tolerance = 0.0;
    r.margin = tol * spr - near.distance;
    r.payload["nearest_eigenvalue"] = complex_json(near.value);
    r.payload["distance"] = near.distance;
    r.payload["relative_tolerance"] = tol;
    settle(r);
    return r;
}

// ----------------------------------------------------------------- omega

unsigned omega_truncation(double r, double target, unsigned cap) {
    if (!(r > 1.0)) throw DomainError("omega_truncation: r must be > 1");
    // r^-(N+1) / (r - 1) <= target
    const double n = (std::log(1.0 / ((r - 1.0) * target))) / std::log(r) - 1.0;
    if (n <= 0.0) return 1;
    return static_cast<unsigned>(std::min(std::ceil(n), static_cast<double>(cap)));
}

OmegaValue omega(const ComplexMatrix& a, double r, const LatticeVector& x, unsigned n_trunc) {
    if (!(r > 1.0) || !std::isfinite(r)) throw DomainError("omega: r must be > 1");
    if (x.size() != a.rows()) throw DimensionMismatch("omega: vector size differs from matrix");
    require_unit_spr(a, "omega");
    require_positive(x, "omega");
    OmegaSeries s = omega_series(a, {r}, x.entries(), x.norm(), n_trunc);
    return {std::move(s.values[0]), omega_tail(s.orbit_sup, r, n_trunc), n_trunc + 1};
}

CheckResult resolvent_estimate_check(const ComplexMatrix& a, Complex lambda,
                                     const LatticeVector& x, unsigned n_trunc, double tol) {
    const double r = std::abs(lambda);
    if (!(r > 1.0 + 1e-6)) throw DomainError("resolvent_estimate_check: |lambda| must exceed 1");
    const OmegaValue w = omega(a, r, x, n_trunc);
    const CVector lhs = resolvent_apply(a, lambda, x.entries());
    const CVector rhs = resolvent_apply(a, Complex(r), x.entries());
    CheckResult c;
    c.name = "resolvent_estimate";
    c.margin = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t k = 0; k < lhs.size(); ++k) {
        const double slack = rhs[k].real() + w.value[k].real() - std::abs(lhs[k]);
        if (slack < c.margin) {
            c.margin = slack;
            arg = k;
        }
    }
    c.tolerance = tol + w.tail_bound;
    c.payload = {{"lambda", complex_json(lambda)},
                 {"tightest_entry", arg},
                 {"tail_bound", w.tail_bound},
                 {"terms", w.terms}};
    settle(c);
    return c;
}

namespace {

// Smallest n0 with A^k real and entrywise >= 0 for every k in [n0, 2 n0).
// Every n >= n0 is a sum of such k, so A^n >= 0 from n0 on.
std::optional<unsigned> nonnegative_power_window(const ComplexMatrix& a, unsigned max_power) {
    auto nonnegative = [](const ComplexMatrix& m) {
        return std::all_of(m.data().begin(), m.data().end(),
                           [](const Complex& z) { return z.imag() == 0.0 && z.real() >= 0.0; });
    };
    std::vector<bool> ok(2 * max_power + 1, false);
    ComplexMatrix p = ComplexMatrix::identity(a.rows());
    for (unsigned k = 1; k < ok.size(); ++k) {
        p = a * p;
        ok[k] = nonnegative(p);
    }
    for (unsigned n0 = 1; n0 <= max_power; ++n0) {
        bool all = true;
        for (unsigned k = n0; k < 2 * n0 && all; ++k) all = ok[k];
        if (all) return n0;
    }
    return std::nullopt;
}

}  // namespace

CheckResult uniform_error_decay_check(const ComplexMatrix& a, const Norm& norm,
                                      const std::vector<unsigned>& js,
                                      std::optional<VerdictStatus> uniform_asymptotic) {
    CheckResult c;
    c.name = "uniform_error_decay";
    if (js.empty()) throw DomainError("uniform_error_decay_check: empty j list");
    const UnitRescaling unit = rescale_to_unit_spr(a);
    if (!uniform_asymptotic) {
        const DenseModel model{a, norm};
        const auto verdicts = classify_asymptotic(
            model, default_asymptotic_horizon, default_classifier_tolerance,
            ConeTestSet::canonical(a.rows(), norm));
        uniform_asymptotic = verdicts[0].status;
    }
    attach_hypothesis(c, "uniform_asymptotic", *uniform_asymptotic == VerdictStatus::Confirmed,
                      to_string(*uniform_asymptotic));
    if (*uniform_asymptotic != VerdictStatus::Confirmed) {
        c.status = CheckStatus::NotApplicable;
        c.note = "uniform asymptotic positivity not confirmed";
        return c;
    }

    const std::size_t dim = a.rows();
    std::vector<CVector> points;
    bool exhaustive = true;
    const auto& kind = norm.kind();
    if ((std::holds_alternative<EllInf>(kind) || std::holds_alternative<GridSup>(kind)) &&
        dim <= 8) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << dim); ++mask) {
            CVector x(dim);
            for (std::size_t j = 0; j < dim; ++j)
                if (mask & (std::uint64_t{1} << j)) x[j] = 1.0;
            points.push_back(std::move(x));
        }
    } else if (std::holds_alternative<Ell1>(kind)) {
        for (std::size_t j = 0; j < dim; ++j) {
            CVector x(dim);
            x[j] = 1.0;
            points.push_back(std::move(x));
        }
    } else {
        exhaustive = false;
        for (const auto& v : ConeTestSet::canonical(dim, norm).vectors)
            points.emplace_back(v.entries().begin(), v.entries().end());
    }

    std::vector<double> rs;
    for (unsigned j : js) rs.push_back(1.0 + std::ldexp(1.0, -static_cast<int>(j)));
    const double r_min = *std::min_element(rs.begin(), rs.end());
    unsigned n_trunc = omega_truncation(r_min, 1e-10);
    // past a nonnegative power window every term |y| - Re y vanishes
    const auto window = nonnegative_power_window(unit.matrix, 64);
    if (window && *window < n_trunc) n_trunc = *window;
    std::vector<double> m(rs.size(), 0.0);
    double tail = 0.0;
    for (auto& x : points) {
        const double nx = norm.evaluate(x);
        for (auto& z : x) z /= nx;
        const OmegaSeries s = omega_series(unit.matrix, rs, x, norm, n_trunc);
        for (std::size_t k = 0; k < rs.size(); ++k) {
            m[k] = std::max(m[k], (rs[k] - 1.0) * norm.evaluate(s.values[k]));
            if (!window)
                tail = std::max(tail, (rs[k] - 1.0) * omega_tail(s.orbit_sup, rs[k], n_trunc));
        }
    }
    // non-increasing within 10 percent, and a hundredfold drop overall
    const double floor = 1e-14;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < m.size(); ++k)
        margin = std::min(margin, 1.1 * m[k - 1] + floor - m[k]);
    margin = std::min(margin, 1e-2 * m.front() + floor - m.back());
    c.margin = margin;
    c.tolerance = tail;
    c.payload = {{"j", js}, {"m", m}, {"terms", n_trunc + 1}, {"exhaustive", exhaustive},
                 {"spr", unit.spr}};
    if (window) c.payload["nonnegative_from"] = *window;
    settle(c);
    return c;
}

CheckResult real_modulus_bound_check(const LatticeVector& x) {
    CheckResult c;
    c.name = "real_modulus_bound";
    const double lhs = norm_value(complex_modulus(x) - real_part(x));
    const double rhs = 2.0 * cone_distance(x);
    c.margin = rhs - lhs;
    c.tolerance = 1e-12 * norm_value(x);
    c.payload = {{"modulus_minus_real", lhs}, {"twice_cone_distance", rhs}};
    settle(c);
    return c;
}

// -------------------------------------------------------- norm attainment

NormAttainment cone_norm_attainment(const ComplexMatrix& a, const Norm& norm) {
    const auto& kind = norm.kind();
    if (!std::holds_alternative<Ell1>(kind) && !std::holds_alternative<EllInf>(kind) &&
        !std::holds_alternative<Ell2>(kind))
        throw UnsupportedModel("cone_norm_attainment: norm " + norm.name() + " not supported");
    const std::size_t n = a.cols();
    const double op = operator_norm(a, norm);
    if (op == 0.0) return {LatticeVector::zeros(n, norm), 1.0, true};

    CVector z(n);
    if (std::holds_alternative<Ell1>(kind)) {
        std::size_t best = 0;
        double top = -1.0;
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
            if (s > top) {
                top = s;
                best = j;
            }
        }
        z[best] = 1.0;
    } else if (std::holds_alternative<EllInf>(kind)) {
        std::size_t best = 0;
        double top = -1.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += std::abs(a(i, j));
            if (s > top) {
                top = s;
                best = i;
            }
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double m = std::abs(a(best, j));
            z[j] = m > 0.0 ? std::conj(a(best, j)) / m : Complex(1.0);
        }
    } else {
        z = svd(a).v.column(0);
    }

    // z = (Re z)^+ - (Re z)^- + i (Im z)^+ - i (Im z)^-
    double best_norm = -1.0;
    CVector best;
    for (int piece = 0; piece < 4; ++piece) {
        CVector p(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double v = piece < 2 ? z[k].real() : z[k].imag();
            p[k] = (piece % 2 == 0) ? std::max(v, 0.0) : std::max(-v, 0.0);
        }
        const double val = norm.evaluate(a * p);
        if (val > best_norm) {
            best_norm = val;
            best = std::move(p);
        }
    }
    return {LatticeVector(std::move(best), norm), best_norm / op, false};
}

// ---------------------------------------------------- positive eigenvector

PhaseAlignment phase_aligned_cone_distance(const Norm& norm, std::span<const Complex> v) {
    const double nv = norm.evaluate(v);
    if (!(nv > 0.0)) throw DomainError("phase_aligned_cone_distance: zero vector");
    CVector w(v.size());
    auto at = [&](double theta) {
        const Complex phase = std::polar(1.0, theta);
        for (std::size_t k = 0; k < v.size(); ++k) w[k] = phase * v[k];
        return cone_distance(norm, w) / nv;
    };
    PhaseAlignment best{std::numeric_limits<double>::infinity(), 0.0};
    const double step = 2.0 * std::numbers::pi / static_cast<double>(phase_grid_points);
    for (std::size_t k = 0; k < phase_grid_points; ++k) {
        const double theta = step * static_cast<double>(k);
        const double d = at(theta);
        if (d < best.distance) best = {d, theta};
    }
    // golden-section refinement around the best grid phase
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best.theta - step, hi = best.theta + step;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = at(x1), f2 = at(x2);
    for (int it = 0; it < 80; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = at(x2);
        }
    }
    const double theta = 0.5 * (lo + hi);
    const double d = at(theta);
    if (d < best.distance) best = {d, theta};
    return best;
}

namespace {

struct AlignedVector {
    CVector v;
    double distance = 0.0;
    double residual = 0.0;
};

AlignedVector align(const ComplexMatrix& a, double spr, CVector v, const Norm& norm) {
    const PhaseAlignment pa = phase_aligned_cone_distance(norm, v);
    const Complex phase = std::polar(1.0, pa.theta);
    const double nv = norm.evaluate(v);
    for (auto& z : v) z *= phase / nv;
    const CVector r = shifted(a, Complex(spr)) * v;
    return {std::move(v), pa.distance, norm.evaluate(r)};
}

std::optional<CVector> first_image(const ComplexMatrix& q, const ConeTestSet& tests, double tol) {
    const double scale = std::max(1.0, q.max_abs());
    for (const auto& x : tests.vectors) {
        CVector y = q * x.entries();
        if (norm2(y) > tol * scale) return y;
    }
    return std::nullopt;
}

}  // namespace

PositiveEigenvector positive_eigenvector(const ComplexMatrix& a, const Norm& norm, double tol) {
    const Spectrum spec = eigenvalues(a);
    const double spr = spec.spectral_radius;
    if (!(spr > 0.0)) throw NotClassifiable("positive_eigenvector: spectral radius is 0");
    const NearestEigenvalue near = nearest_eigenvalue(spec, Complex(spr));
    if (near.distance > spr_membership_tolerance * spr)
        throw NotAnEigenvalue("positive_eigenvector: spr is not an eigenvalue (distance " +
                              std::to_string(near.distance) + ")");

    const ConeTestSet tests = ConeTestSet::canonical(a.rows(), norm);
    const unsigned m = pole_order(a, Complex(spr));
    EigenvectorRoute via = EigenvectorRoute::Laurent;
    std::optional<CVector> primal, dual;
    try {
        const ComplexMatrix q = laurent_leading_coefficient(a, spr, m);
        primal = first_image(q, tests, tol);
        dual = first_image(q.adjoint(), tests, tol);
    } catch (const SolverFailure&) {
        // fall back to projections onto the kernels
        via = EigenvectorRoute::Eigenbasis;
        const double thr = default_rank_tolerance * std::max(spr, operator_norm(a, Norm::ell2()));
        const ComplexMatrix k = null_space(shifted(a, Complex(spr)), thr);
        const ComplexMatrix kd = null_space(shifted(a.adjoint(), Complex(spr)), thr);
        primal = first_image(k * k.adjoint(), tests, tol);
        dual = first_image(kd * kd.adjoint(), tests, tol);
    }
    if (!primal || !dual)
        throw SolverFailure("positive_eigenvector: every canonical positive vector is "
                            "annihilated by the leading Laurent coefficient");
    AlignedVector p = align(a, spr, std::move(*primal), norm);
    AlignedVector d = align(a.adjoint(), spr, std::move(*dual), norm);
    return PositiveEigenvector{spr,
                               LatticeVector(std::move(p.v), norm),
                               LatticeVector(std::move(d.v), norm),
                               m,
                               via,
                               p.residual,
                               d.residual,
                               p.distance,
                               d.distance};
}

// ------------------------------------------------------ peripheral checks

PowerBoundEstimate power_bounded_estimate(const ComplexMatrix& a, unsigned horizon) {
    const UnitRescaling unit = rescale_to_unit_spr(a);
    PowerBoundEstimate e;
    ComplexMatrix p = ComplexMatrix::identity(a.rows());
    double first = 0.0, second = 0.0;
    for (unsigned n = 0; n <= horizon; ++n) {
        if (n > 0) p = unit.matrix * p;
        const double v = operator_norm(p, Norm::ell2());
        e.sup_norm = std::max(e.sup_norm, v);
        double& half = 2 * n <= horizon ? first : second;
        half = std::max(half, v);
    }
    e.bounded_trend = second <= 1.5 * first;
    for (int j = 1; j <= 14; ++j) {
        const double lambda = unit.spr * (1.0 + std::ldexp(1.0, -j));
        const double rn = operator_norm(resolvent(a, Complex(lambda)), Norm::ell2());
        e.abel_sup = std::max(e.abel_sup, (lambda - unit.spr) * rn);
    }
    return e;
}

CheckResult peripheral_cyclicity_check(const ComplexMatrix& a, int K, double tol) {
    CheckResult c;
    c.name = "peripheral_cyclicity";
    const Spectrum spec = eigenvalues(a);
    const double spr = spec.spectral_radius;
    if (spr == 0.0) {
        c.status = CheckStatus::Vacuous;
        c.note = "spectral radius is 0";
        return c;
    }
    const CVector per = peripheral_spectrum(spec, std::max(tol, 1e-10));
    json tests = json::array();
    double worst = 0.0;
    for (const auto& l : per) {
        const double theta = std::arg(l);
        for (int k = -K; k <= K; ++k) {
            const Complex target = std::polar(spr, static_cast<double>(k) * theta);
            const NearestEigenvalue near = nearest_eigenvalue(spec, target);
            worst = std::max(worst, near.distance);
            tests.push_back({{"lambda", complex_json(l)},
                             {"k", k},
                             {"nearest", complex_json(near.value)},
                             {"distance", near.distance}});
        }
    }
    json pj = json::array();
    for (const auto& l : per) pj.push_back(complex_json(l));
    c.payload = {{"peripheral_spectrum", std::move(pj)}, {"K", K}, {"tests", std::move(tests)}};
    c.margin = tol * spr - worst;
    settle(c);
    return c;
}

CheckResult multiplicity_monotonicity_check(const ComplexMatrix& a, const std::vector<int>& n_list,
                                            double tol) {
    CheckResult c;
    c.name = "multiplicity_monotonicity";
    const Spectrum spec = eigenvalues(a);
    const double spr = spec.spectral_radius;
    if (spr == 0.0) {
        c.status = CheckStatus::Vacuous;
        c.note = "spectral radius is 0";
        return c;
    }
    const CVector per = peripheral_spectrum(spec, std::max(tol, 1e-10));
    json tests = json::array();
    double margin = std::numeric_limits<double>::infinity();
    bool cyclic = true;
    for (const auto& l : per) {
        const auto base = static_cast<double>(geometric_multiplicity(a, l));
        const double theta = std::arg(l);
        for (int n : n_list) {
            const Complex target = std::polar(spr, static_cast<double>(n) * theta);
            const NearestEigenvalue near = nearest_eigenvalue(spec, target);
            json t = {{"lambda", complex_json(l)}, {"n", n}, {"target", complex_json(target)}};
            if (near.distance > tol * spr) {
                cyclic = false;
                margin = std::min(margin, -1.0);
                t["cyclicity_failure"] = true;
                t["distance"] = near.distance;
            } else {
                const auto other = static_cast<double>(geometric_multiplicity(a, near.value));
                margin = std::min(margin, other - base);
                t["multiplicity"] = base;
                t["target_multiplicity"] = other;
            }
            tests.push_back(std::move(t));
        }
    }
    c.margin = std::isfinite(margin) ? margin : 0.0;
    c.payload = {{"tests", std::move(tests)}, {"cyclic", cyclic}};
    settle(c);
    if (!cyclic) c.note = "peripheral point spectrum is not cyclic";
    return c;
}

}  // namespace evpos
