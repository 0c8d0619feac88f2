#pragma once

#include "evpos/lattice.hpp"
#include "evpos/matrix.hpp"
#include "evpos/positivity.hpp"
#include "evpos/spectral.hpp"

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace evpos {

enum class CheckStatus { Pass, Fail, NotApplicable, Vacuous };
[[nodiscard]] std::string to_string(CheckStatus s);
[[nodiscard]] CheckStatus check_status_from_string(const std::string& s);

/// A measured hypothesis of a theorem check.
struct Hypothesis {
    std::string name;
    bool met = false;
    std::string detail;
};

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::NotApplicable;
    double margin = 0.0;  // positive: satisfied with room
    double tolerance = 0.0;
    nlohmann::json payload = nlohmann::json::object();
    std::vector<Hypothesis> hypotheses;
    std::string note;

    [[nodiscard]] bool passed() const {
        return status == CheckStatus::Pass || status == CheckStatus::Vacuous;
    }
    [[nodiscard]] bool hypotheses_met() const;
    /// Failed with every (non-empty) hypothesis measured as met.
    [[nodiscard]] bool contradiction() const {
        return status == CheckStatus::Fail && hypotheses_met();
    }
};

/// Pass or Fail from the margin: pass iff margin >= -tolerance.
void settle(CheckResult& r);
/// Appends a hypothesis and refreshes the note of failed checks.
void attach_hypothesis(CheckResult& r, std::string name, bool met, std::string detail = {});

inline constexpr double spr_membership_tolerance = 1e-8;
inline constexpr double unit_spr_tolerance = 1e-8;

/// A / spr(A) and spr(A). Throws NotClassifiable when spr = 0.
struct UnitRescaling {
    ComplexMatrix matrix;
    double spr = 0.0;
};
[[nodiscard]] UnitRescaling rescale_to_unit_spr(const ComplexMatrix& a);

/// min over eigenvalues of |lambda - spr| <= tol spr.
[[nodiscard]] CheckResult verify_spr_in_spectrum(const ComplexMatrix& a,
                                                 double tol = spr_membership_tolerance);

struct OmegaValue {
    CVector value;
    double tail_bound = 0.0;
    unsigned terms = 0;
};

/// sum_{n <= n_trunc} r^-(n+1) (|A^n x| - Re A^n x). Requires spr(A) = 1 and x >= 0.
[[nodiscard]] OmegaValue omega(const ComplexMatrix& a, double r, const LatticeVector& x,
                               unsigned n_trunc);
/// Smallest truncation with r^-(N+1) / (r - 1) <= target, capped at `cap`.
[[nodiscard]] unsigned omega_truncation(double r, double target = 1e-12,
                                        unsigned cap = 400000);

/// |R(lambda) x| <= Re R(|lambda|) x + omega(|lambda|, x) entrywise.
[[nodiscard]] CheckResult resolvent_estimate_check(const ComplexMatrix& a, Complex lambda,
                                                   const LatticeVector& x, unsigned n_trunc,
                                                   double tol = 1e-10);

/// m(r) = max over extreme points x of (r - 1) ||omega(r, x)|| at r = 1 + 2^-j.
/// Not applicable unless uniform asymptotic positivity is confirmed; the
/// verdict is computed when not supplied.
[[nodiscard]] CheckResult uniform_error_decay_check(
    const ComplexMatrix& a, const Norm& norm, const std::vector<unsigned>& js,
    std::optional<VerdictStatus> uniform_asymptotic = std::nullopt);

/// || |x| - Re x || <= 2 d+(x).
[[nodiscard]] CheckResult real_modulus_bound_check(const LatticeVector& x);

struct NormAttainment {
    LatticeVector x;
    double ratio = 1.0;
    bool zero_operator = false;
};

/// Positive x with ||x|| <= 1 and ||A x|| >= ||A|| / 8. Ell1, EllInf, Ell2 only.
[[nodiscard]] NormAttainment cone_norm_attainment(const ComplexMatrix& a, const Norm& norm);

enum class EigenvectorRoute { Laurent, Eigenbasis };
[[nodiscard]] std::string to_string(EigenvectorRoute r);

inline constexpr double eigenvector_residual_tolerance = 1e-6;
inline constexpr double eigenvector_cone_tolerance = 1e-6;
inline constexpr std::size_t phase_grid_points = 256;

struct PositiveEigenvector {
    double value = 0.0;
    LatticeVector primal;
    LatticeVector adjoint;
    unsigned pole_order = 0;
    EigenvectorRoute via = EigenvectorRoute::Laurent;
    double primal_residual = 0.0;  // ||(spr - A) v|| / ||v||
    double adjoint_residual = 0.0;
    double primal_cone_distance = 0.0;  // min over phases, relative
    double adjoint_cone_distance = 0.0;

    [[nodiscard]] bool satisfies_bounds() const {
        return primal_residual <= eigenvector_residual_tolerance &&
               adjoint_residual <= eigenvector_residual_tolerance &&
               primal_cone_distance <= eigenvector_cone_tolerance &&
               adjoint_cone_distance <= eigenvector_cone_tolerance;
    }
};

/// Minimum over unit phases of d+(e^{i theta} v) / ||v|| and the minimizing phase.
struct PhaseAlignment {
    double distance = 0.0;
    double theta = 0.0;
};
[[nodiscard]] PhaseAlignment phase_aligned_cone_distance(const Norm& norm,
                                                         std::span<const Complex> v);

/// Perron pair from the leading Laurent coefficient at spr. Throws
/// SolverFailure when every canonical positive vector is annihilated.
[[nodiscard]] PositiveEigenvector positive_eigenvector(const ComplexMatrix& a, const Norm& norm,
                                                       double tol = 1e-8);

struct PowerBoundEstimate {
    double sup_norm = 0.0;   // max_{n <= horizon} ||(A / spr)^n||_2
    double abel_sup = 0.0;   // max_j (lambda - spr) ||R(lambda, A)||_2, lambda = spr (1 + 2^-j)
    /// The second half of the horizon stays within 1.5 times the first half.
    bool bounded_trend = false;
};

[[nodiscard]] PowerBoundEstimate power_bounded_estimate(const ComplexMatrix& a,
                                                        unsigned horizon = 200);

/// spr e^{i k theta} lies within tol spr of an eigenvalue for every peripheral
/// eigenvalue spr e^{i theta} and |k| <= K.
[[nodiscard]] CheckResult peripheral_cyclicity_check(const ComplexMatrix& a, int K,
                                                     double tol = 1e-8);

/// dim ker(spr e^{i theta} - A) <= dim ker(spr e^{i n theta} - A) for n in n_list.
[[nodiscard]] CheckResult multiplicity_monotonicity_check(const ComplexMatrix& a,
                                                          const std::vector<int>& n_list,
                                                          double tol = 1e-8);

}  // namespace evpos
