#include "evpos/spectral.hpp"

#include "evpos/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace evpos {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

void require_square(const ComplexMatrix& a, const char* what) {
    if (!a.square()) throw DimensionMismatch(std::string(what) + ": matrix must be square");
    if (a.rows() > max_spectral_dimension)
        throw DomainError(std::string(what) + ": dimension " + std::to_string(a.rows()) +
                          " exceeds " + std::to_string(max_spectral_dimension));
}

void to_hessenberg(ComplexMatrix& h) {
    const std::size_t n = h.rows();
    if (n < 3) return;
    CVector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex(1.0);
        const Complex alpha = -phase * xnorm;
        std::fill(v.begin(), v.end(), Complex{});
        v[k + 1] = x0 - alpha;
        for (std::size_t i = k + 2; i < n; ++i) v[i] = h(i, k);
        double vnorm = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm += std::norm(v[i]);
        if (vnorm == 0.0) continue;
        // H <- (I - 2 v v^H / |v|^2) H (I - 2 v v^H / |v|^2)
        const double beta = 2.0 / vnorm;
        for (std::size_t j = k; j < n; ++j) {
            Complex s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= s * std::conj(v[j]);
        }
        h(k + 1, k) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

struct Givens {
    double c;
    Complex s;
};

Givens make_givens(Complex x, Complex y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ay == 0.0) return {1.0, 0.0};
    if (ax == 0.0) return {0.0, std::conj(y) / ay};
    const double r = std::hypot(ax, ay);
    return {ax / r, (x / ax) * std::conj(y) / r};
}

Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
    const Complex half = 0.5 * (a - d);
    const Complex disc = std::sqrt(half * half + b * c);
    const Complex mu1 = d - b * c / (half + disc);
    const Complex mu2 = d - b * c / (half - disc);
    const bool ok1 = std::isfinite(mu1.real()) && std::isfinite(mu1.imag());
    const bool ok2 = std::isfinite(mu2.real()) && std::isfinite(mu2.imag());
    if (ok1 && ok2) return std::abs(mu1 - d) <= std::abs(mu2 - d) ? mu1 : mu2;
    if (ok1) return mu1;
    if (ok2) return mu2;
    return d;
}

struct LuFactor {
    ComplexMatrix lu;
    std::vector<std::size_t> perm;
};

LuFactor lu_factor(ComplexMatrix m, Complex lambda) {
    const std::size_t n = m.rows();
    const double threshold = static_cast<double>(std::max<std::size_t>(n, 1)) * eps *
                             std::max(m.max_abs(), std::numeric_limits<double>::min());
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        double best = std::abs(m(k, k));
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(m(i, k)) > best) {
                best = std::abs(m(i, k));
                p = i;
            }
        if (best <= threshold) {
            std::ostringstream os;
            os << "resolvent is numerically singular at lambda = " << lambda << " (pivot " << best
               << ")";
            throw SingularResolvent(lambda, os.str());
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            std::swap(perm[k], perm[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = m(i, k) / m(k, k);
            m(i, k) = f;
            if (f == Complex{}) continue;
            for (std::size_t j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
        }
    }
    return {std::move(m), std::move(perm)};
}

CVector lu_solve(const LuFactor& f, std::span<const Complex> b) {
    const std::size_t n = f.lu.rows();
    CVector y(n);
    for (std::size_t i = 0; i < n; ++i) {
        Complex s = b[f.perm[i]];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        Complex s = y[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * y[j];
        y[i] = s / f.lu(i, i);
    }
    return y;
}

}  // namespace

// ---------------------------------------------------------- eigenvalues

Spectrum eigenvalues(const ComplexMatrix& a, double tol) {
    require_square(a, "eigenvalues");
    if (!(tol > 0.0)) throw DomainError("eigenvalues: tolerance must be positive");
    const std::size_t n = a.rows();
    Spectrum spec;
    spec.solver_tolerance = tol;
    if (n == 0) return spec;
    for (const auto& z : a.data())
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw DomainError("eigenvalues: non-finite matrix entry");

    ComplexMatrix h = a;
    to_hessenberg(h);
    const double anorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());

    CVector values(n);
    std::size_t hi = n - 1;
    unsigned iter = 0;
    unsigned total = 0;
    const unsigned budget = 60U * static_cast<unsigned>(n) + 60U;
    while (true) {
        std::size_t l = hi;
        while (l > 0) {
            const double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
            const double ref = s > 0.0 ? s : anorm;
            if (std::abs(h(l, l - 1)) <= eps * ref) {
                h(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == hi) {
            values[hi] = h(hi, hi);
            if (hi == 0) break;
            --hi;
            iter = 0;
            continue;
        }
        if (++total > budget)
            throw SolverFailure("eigenvalues: QR iteration did not converge within " +
                                std::to_string(budget) + " steps");
        ++iter;

        Complex mu;
        if (iter % 10 == 0) {
            const double extra = std::abs(h(hi, hi - 1).real()) +
                                 (hi >= 2 ? std::abs(h(hi - 1, hi - 2).real()) : 0.0);
            mu = h(hi, hi) + Complex(0.75 * extra, 0.5 * extra);
        } else {
            mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        for (std::size_t i = l; i <= hi; ++i) h(i, i) -= mu;
        std::vector<Givens> rot(hi - l);
        for (std::size_t k = l; k < hi; ++k) {
            const Givens g = make_givens(h(k, k), h(k + 1, k));
            rot[k - l] = g;
            for (std::size_t j = k; j <= hi; ++j) {
                const Complex x = h(k, j), y = h(k + 1, j);
                h(k, j) = g.c * x + g.s * y;
                h(k + 1, j) = -std::conj(g.s) * x + g.c * y;
            }
        }
        for (std::size_t k = l; k < hi; ++k) {
            const Givens g = rot[k - l];
            const std::size_t top = std::min(k + 2, hi);
            for (std::size_t i = l; i <= top; ++i) {
                const Complex x = h(i, k), y = h(i, k + 1);
                h(i, k) = g.c * x + std::conj(g.s) * y;
                h(i, k + 1) = -g.s * x + g.c * y;
            }
        }
        for (std::size_t i = l; i <= hi; ++i) h(i, i) += mu;
    }

    std::sort(values.begin(), values.end(), [](Complex x, Complex y) {
        const double ax = std::abs(x), ay = std::abs(y);
        if (ax != ay) return ax > ay;
        return std::arg(x) < std::arg(y);
    });
    spec.eigenvalues = std::move(values);
    for (const auto& z : spec.eigenvalues)
        spec.spectral_radius = std::max(spec.spectral_radius, std::abs(z));
    return spec;
}

// ------------------------------------------------------------------ SVD

SingularValueDecomposition svd(const ComplexMatrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<CVector> u(n, CVector(m)), v(n, CVector(n));
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < m; ++i) u[j][i] = a(i, j);
        v[j][j] = 1.0;
    }
    bool rotated = true;
    for (int sweep = 0; sweep < 80 && rotated; ++sweep) {
        rotated = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double alpha = 0.0, beta = 0.0;
                Complex gamma = 0.0;
                for (std::size_t r = 0; r < m; ++r) {
                    alpha += std::norm(u[i][r]);
                    beta += std::norm(u[j][r]);
                    gamma += std::conj(u[i][r]) * u[j][r];
                }
                const double g = std::abs(gamma);
                if (g == 0.0 || g <= eps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const Complex e = gamma / g;
                const double zeta = (beta - alpha) / (2.0 * g);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                auto rotate = [&](CVector& x, CVector& y) {
                    for (std::size_t r = 0; r < x.size(); ++r) {
                        const Complex xi = x[r], yj = y[r];
                        x[r] = c * xi - s * std::conj(e) * yj;
                        y[r] = s * e * xi + c * yj;
                    }
                };
                rotate(u[i], u[j]);
                rotate(v[i], v[j]);
            }
        }
        if (sweep == 79 && rotated) throw SolverFailure("svd: Jacobi sweeps did not converge");
    }

    std::vector<double> sigma(n);
    for (std::size_t j = 0; j < n; ++j) sigma[j] = norm2(u[j]);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

    SingularValueDecomposition out;
    out.values.resize(n);
    out.u = ComplexMatrix(m, n);
    out.v = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        out.values[k] = sigma[j];
        for (std::size_t r = 0; r < m; ++r)
            out.u(r, k) = sigma[j] > 0.0 ? u[j][r] / sigma[j] : Complex(0.0);
        for (std::size_t r = 0; r < n; ++r) out.v(r, k) = v[j][r];
    }
    return out;
}

std::vector<double> singular_values(const ComplexMatrix& a) { return svd(a).values; }

// ------------------------------------------------------------ resolvent

CVector resolvent_apply(const ComplexMatrix& a, Complex lambda, std::span<const Complex> x) {
    require_square(a, "resolvent_apply");
    if (x.size() != a.rows()) throw DimensionMismatch("resolvent_apply: vector length");
    return lu_solve(lu_factor(shifted(a, lambda), lambda), x);
}

LatticeVector resolvent_apply(const ComplexMatrix& a, Complex lambda, const LatticeVector& x) {
    return x.with_entries(resolvent_apply(a, lambda, x.entries()));
}

ComplexMatrix resolvent(const ComplexMatrix& a, Complex lambda) {
    require_square(a, "resolvent");
    const std::size_t n = a.rows();
    const LuFactor f = lu_factor(shifted(a, lambda), lambda);
    ComplexMatrix inv(n, n);
    CVector e(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), Complex{});
        e[j] = 1.0;
        inv.set_column(j, lu_solve(f, e));
    }
    return inv;
}

// ---------------------------------------------------------------- norms

double operator_norm(const ComplexMatrix& a, const Norm& norm) {
    if (std::holds_alternative<Ell1>(norm.kind())) {
        double m = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
            m = std::max(m, s);
        }
        return m;
    }
    if (std::holds_alternative<EllInf>(norm.kind())) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (const auto& z : a.row(i)) s += std::abs(z);
            m = std::max(m, s);
        }
        return m;
    }
    if (std::holds_alternative<Ell2>(norm.kind())) {
        if (a.empty()) return 0.0;
        return singular_values(a).front();
    }
    throw UnsupportedModel("operator_norm: unsupported norm " + norm.name());
}

std::size_t numeric_rank(const ComplexMatrix& a, double threshold) {
    const auto s = singular_values(a);
    return static_cast<std::size_t>(
        std::count_if(s.begin(), s.end(), [threshold](double x) { return x > threshold; }));
}

ComplexMatrix null_space(const ComplexMatrix& a, double threshold) {
    const auto d = svd(a);
    std::vector<std::size_t> cols;
    for (std::size_t k = 0; k < d.values.size(); ++k)
        if (d.values[k] <= threshold) cols.push_back(k);
    ComplexMatrix basis(a.cols(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < a.cols(); ++r) basis(r, c) = d.v(r, cols[c]);
    return basis;
}

// ------------------------------------------------------- pole structure

PoleOrderDetail pole_order_detail(const ComplexMatrix& a, Complex lambda0, double tol) {
    require_square(a, "pole_order");
    const std::size_t n = a.rows();
    if (n == 0) throw NotAnEigenvalue("pole_order: empty matrix");
    const double anorm = operator_norm(a, Norm::ell2());
    double s = std::max(anorm, std::abs(lambda0));
    if (s == 0.0) s = 1.0;

    const ComplexMatrix m = shifted(a, lambda0);
    const auto first = singular_values(m);
    if (!(first.back() <= tol * s)) {
        std::ostringstream os;
        os << "pole_order: " << lambda0 << " is not an eigenvalue (sigma_min " << first.back()
           << " > " << tol * s << ")";
        throw NotAnEigenvalue(os.str());
    }

    // defective eigenvalues split by about eps^(1/m); count the cluster
    const Spectrum spec = eigenvalues(a);
    std::size_t cluster = 0;
    for (const auto& z : spec.eigenvalues)
        if (std::abs(z - lambda0) <= 1e-4 * s) ++cluster;
    const std::size_t kmax = std::min(n, std::max<std::size_t>(cluster, 1)) + 1;

    PoleOrderDetail out;
    out.scale = s;
    ComplexMatrix power = m;
    std::vector<double> sv = first;
    for (std::size_t k = 1; k <= kmax; ++k) {
        const double threshold = tol * std::pow(s, static_cast<double>(k));
        std::size_t rank = 0;
        for (double x : sv) {
            if (x > threshold) ++rank;
            if (x > threshold / 100.0 && x < threshold * 100.0) out.near_threshold = true;
        }
        out.ranks.push_back(rank);
        if (k >= 2 && out.ranks[k - 1] == out.ranks[k - 2]) {
            out.order = static_cast<unsigned>(k - 1);
            return out;
        }
        if (k < kmax) {
            power = power * m;
            sv = singular_values(power);
        }
    }
    out.order = static_cast<unsigned>(kmax);
    return out;
}

unsigned pole_order(const ComplexMatrix& a, Complex lambda0, double tol) {
    return pole_order_detail(a, lambda0, tol).order;
}

LaurentCoefficient laurent_leading_detail(const ComplexMatrix& a, double lambda0, unsigned m) {
    require_square(a, "laurent_leading_coefficient");
    if (!(lambda0 > 0.0)) throw DomainError("laurent_leading_coefficient: lambda0 must be > 0");
    if (m == 0) throw DomainError("laurent_leading_coefficient: pole order must be >= 1");

    constexpr int j_first = 8, j_last = 16;
    constexpr int levels = j_last - j_first + 1;
    // F(h) = h^m R(lambda0 + h) = Q_-m + Q_-m+1 h + ..., sampled at h = lambda0 2^-j
    std::vector<std::vector<ComplexMatrix>> table(levels);
    for (int j = 0; j < levels; ++j) {
        const double h = lambda0 * std::ldexp(1.0, -(j_first + j));
        ComplexMatrix f = resolvent(a, lambda0 + h);
        f *= std::pow(h, static_cast<double>(m));
        table[j].push_back(std::move(f));
        for (int k = 1; k <= j; ++k) {
            const double p = std::ldexp(1.0, k);
            ComplexMatrix t = table[j][k - 1] * p;
            t -= table[j - 1][k - 1];
            t *= 1.0 / (p - 1.0);
            table[j].push_back(std::move(t));
        }
    }
    LaurentCoefficient out;
    out.coefficient = table[levels - 1][levels - 1];
    const double qnorm = out.coefficient.frobenius_norm();
    out.extrapolation_error = (table[levels - 1][levels - 1] - table[levels - 1][levels - 2])
                                  .frobenius_norm();
    out.kernel_residual = qnorm > 0.0
                              ? (shifted(a, lambda0) * out.coefficient).frobenius_norm() / qnorm
                              : std::numeric_limits<double>::infinity();
    if (!(out.kernel_residual <= 1e-6) || !(out.extrapolation_error <= 1e-6 * qnorm)) {
        std::ostringstream os;
        os << "laurent_leading_coefficient: extrapolation did not converge (kernel residual "
           << out.kernel_residual << ", extrapolation error " << out.extrapolation_error
           << ", |Q| " << qnorm << ", m " << m << ")";
        throw SolverFailure(os.str());
    }
    return out;
}

ComplexMatrix laurent_leading_coefficient(const ComplexMatrix& a, double lambda0, unsigned m) {
    return laurent_leading_detail(a, lambda0, m).coefficient;
}

std::size_t geometric_multiplicity(const ComplexMatrix& a, Complex lambda, double tol) {
    require_square(a, "geometric_multiplicity");
    if (a.rows() == 0) return 0;
    double s = std::max(operator_norm(a, Norm::ell2()), std::abs(lambda));
    if (s == 0.0) s = 1.0;
    const auto sv = singular_values(shifted(a, lambda));
    return static_cast<std::size_t>(
        std::count_if(sv.begin(), sv.end(), [&](double x) { return x <= tol * s; }));
}

CVector peripheral_spectrum(const Spectrum& spec, double tol) {
    if (spec.spectral_radius == 0.0) return {Complex(0.0)};
    CVector out;
    for (const auto& z : spec.eigenvalues) {
        if (std::abs(z) < spec.spectral_radius * (1.0 - tol)) continue;
        const bool dup = std::any_of(out.begin(), out.end(), [&](Complex w) {
            return std::abs(w - z) <= tol * spec.spectral_radius;
        });
        if (!dup) out.push_back(z);
    }
    return out;
}

NearestEigenvalue nearest_eigenvalue(const Spectrum& spec, Complex z) {
    NearestEigenvalue best{Complex(std::numeric_limits<double>::quiet_NaN()),
                           std::numeric_limits<double>::infinity()};
    for (const auto& w : spec.eigenvalues) {
        const double d = std::abs(w - z);
        if (d < best.distance) best = {w, d};
    }
    return best;
}

}  // namespace evpos
