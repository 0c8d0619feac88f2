// Acceptance gate: one PASS/FAIL line per criterion.
//   evpos_acceptance        runs 1..9
//   evpos_acceptance K      runs criterion K only

#include "evpos/catalog.hpp"
#include "evpos/operators.hpp"
#include "evpos/pf_verifier.hpp"
#include "evpos/positivity.hpp"
#include "evpos/rates.hpp"
#include "evpos/report.hpp"
#include "evpos/spectral.hpp"
#include "evpos/suite.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace evpos;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t acceptance_seed = 20240611;

struct Outcome {
    bool pass = true;
    std::vector<std::string> failures;
    std::vector<std::string> notes;
    double seconds = 0.0;
    double budget = 0.0;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            failures.push_back(what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
};

// Verdict lists of every instance touched, for the hierarchy criterion.
struct Collector {
    std::vector<std::pair<std::string, std::vector<PositivityVerdict>>> instances;
    void add(std::string label, std::vector<PositivityVerdict> v) {
        instances.emplace_back(std::move(label), std::move(v));
    }
};

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const LatticeVector* find_test_vector(const ConeTestSet& s, const std::string& label) {
    for (std::size_t k = 0; k < s.vectors.size(); ++k)
        if (s.vector_labels[k] == label) return &s.vectors[k];
    return nullptr;
}

std::vector<PositivityVerdict> verdicts_of(const AnalysisReport& r) { return r.classification; }

// ------------------------------------------------------------------ 1

Outcome criterion_1(Collector* col) {
    Outcome o;
    o.budget = 1.0;
    const auto t0 = Clock::now();
    const RankKModel r = individual_not_uniform_model(201);

    const auto tests = ConeTestSet::seeded_random(r.dimension(), r.space(), 20, acceptance_seed);
    o.require(tests.vectors.size() == 20, "expected 20 seeded positive functions");
    const auto ie = individual_eventual(r, tests);
    o.require(ie.confirmed(), "individual eventual not confirmed: " + ie.note);
    o.require(ie.n0 <= default_eventual_horizon, "individual eventual n0 beyond the horizon");
    for (std::size_t k = 0; k < tests.vectors.size(); ++k) {
        // finite n0 per function: positive over the tail of the horizon
        bool tail_ok = true;
        for (unsigned n = std::max(ie.n0, 1u); n <= default_eventual_horizon; ++n)
            tail_ok = tail_ok && is_positive(power_apply(r, n, tests.vectors[k]).entries(), 1e-10);
        o.require(tail_ok, tests.vector_labels[k] + " not positive past n0");
    }

    const auto ue = uniform_eventual(r);
    o.require(ue.refuted(), "uniform eventual not refuted");
    if (ue.refuted()) {
        o.require(ue.witness.at("kind") == "hat_family", "uniform witness is not a hat family");
        const auto& per = ue.witness.at("per_power");
        o.require(per.size() == default_eventual_horizon, "hat witness missing for some power");
        for (const auto& w : per) {
            const unsigned n = w.at("n");
            const HatFunction g = HatFunction::centered(w.at("hat_peak"), w.at("epsilon"));
            const double v = hat_image_at(r, n, g, w.at("evaluation_point")).real();
            o.require(v < 0.0 && std::abs(v - w.at("value").at(0).get<double>()) <= 1e-12,
                      "stored hat witness does not re-evaluate negative at n = " + std::to_string(n));
        }
    }

    // Closed form: the hat with g(1) = 1, g(-1) = 0 and epsilon = 2^-(n+1)
    // gives (T^n g)(-1) = eps/4 - 2^-(n+1) <= eps/2 - 2^-(n+1) < 0.
    double worst = 0.0;
    bool literal_positive = true;
    for (unsigned n = 1; n <= 30; ++n) {
        const double eps = std::ldexp(1.0, -static_cast<int>(n) - 1);
        const double bound = eps / 2.0 - std::ldexp(1.0, -static_cast<int>(n) - 1);
        const double exact = eps / 4.0 - std::ldexp(1.0, -static_cast<int>(n) - 1);
        const Complex v = hat_image_at(r, n, HatFunction{1.0, eps, 0.0}, -1.0);
        worst = std::max(worst, std::abs(v - exact));
        o.require(v.real() <= bound + 1e-12 && bound < 0.0,
                  "hat bound violated at n = " + std::to_string(n));
        // the hat peaked at -1 is negative at +1 with the same value
        const HatFunction at_minus_one{-1.0, 0.0, eps};
        const Complex lit = hat_image_at(r, n, at_minus_one, -1.0);
        const Complex lit_plus = hat_image_at(r, n, at_minus_one, 1.0);
        o.require(std::abs(lit_plus - exact) <= 1e-12, "hat peaked at -1, value at +1 off at n = " + std::to_string(n));
        literal_positive = literal_positive && std::abs(lit - (eps / 4.0 + std::ldexp(1.0, -static_cast<int>(n) - 1))) <= 1e-12;
    }
    o.require(worst <= 1e-12, "closed form off by " + fmt(worst));
    o.note("hat with g(1)=1, g(-1)=0: (T^n g)(-1) = eps/4 - 2^-(n+1) for n <= 30, max error " + fmt(worst));
    if (literal_positive)
        o.note("hat with g(-1)=1, g(1)=0: eps/4 + 2^-(n+1) > 0 at -1 and eps/4 - 2^-(n+1) < 0 at +1");

    o.seconds = seconds_since(t0);
    if (col) {
        const auto rep = run_classify(input_from_example("ex2.2a"));
        col->add("ex2.2a", verdicts_of(rep));
        col->add("criterion 1 direct", {ue, ie});
    }
    return o;
}

// ------------------------------------------------------------------ 2

Outcome criterion_2(Collector* col) {
    Outcome o;
    o.budget = 1.0;
    const auto t0 = Clock::now();
    const double p = 2.0;
    const RankKModel r = weak_not_individual_model(p, 200);

    // scale c of the singular functional, validated through the pairing matrix
    const Complex c = std::get<WeightedIntegral>(r.functionals()[1]).scale;
    const ComplexMatrix& d = duality_matrix(r);
    o.require(std::abs(c - 3.0 / 16.0) <= 1e-10, "singular functional scale " + fmt(std::abs(c)));
    o.require(std::abs(d(1, 1) - 0.5) <= 1e-10, "self-pairing of the singular term " + fmt(std::abs(d(1, 1))));
    o.require(std::abs(d(0, 1)) <= 1e-10 && std::abs(d(1, 0)) <= 1e-10, "pairing matrix not diagonal");
    o.note("scale " + fmt(c.real()) + ", pairing matrix diagonal (" + fmt(d(0, 0).real()) + ", " + fmt(d(1, 1).real()) + ")");

    const auto pairs = ConeTestSet::seeded_random(r.dimension(), r.space(), 20, acceptance_seed);
    const auto we = weak_eventual(r, pairs);
    o.require(we.confirmed(), "weak eventual not confirmed on 20 seeded pairs: " + we.note);

    const auto tests = ConeTestSet::canonical(r.dimension(), r.space(), acceptance_seed);
    const auto ie = individual_eventual(r, tests);
    o.require(ie.refuted(), "individual eventual not refuted");
    if (ie.refuted()) {
        o.require(ie.witness.at("kind") == "analytic_points", "individual witness is not analytic");
        const LatticeVector* x = find_test_vector(tests, ie.witness.at("test_vector"));
        o.require(x != nullptr, "witness test vector not found");
        o.require(ie.witness.at("per_power").size() == default_eventual_horizon, "analytic witness missing for some power");
        if (x) {
            for (const auto& w : ie.witness.at("per_power")) {
                const unsigned n = w.at("n");
                const Complex v = r.combination_at(r.power_coefficients(n, x->entries()), w.at("point"));
                o.require(v.real() < 0.0, "analytic point not negative at n = " + std::to_string(n));
            }
        }
    }

    // g = 1 + x: a = <phi_1, g>, b = <phi_2, g> > 0; x_n = -(b / (2 a 2^(n-1)))^(2p)
    CVector g(r.dimension());
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = 1.0 + r.space().nodes()[k];
    const double a = pair(r.functionals()[0], g, r.space()).real();
    const double b = pair(r.functionals()[1], g, r.space()).real();
    o.require(b > 0.0, "second functional does not see g = 1 + x");
    for (unsigned n = 1; n <= 30; ++n) {
        const double xn = -std::pow(b / (2.0 * a * std::ldexp(1.0, static_cast<int>(n) - 1)), 2.0 * p);
        const Complex v = r.combination_at(r.power_coefficients(n, g), xn);
        o.require(v.real() < 0.0, "Re(T^n g)(x_n) >= 0 at n = " + std::to_string(n));
    }
    const LatticeVector gv(g, r.space());
    double d40 = 0.0;
    unsigned first_small = 0;
    for (unsigned n = 1; n <= 40; ++n) {
        d40 = cone_distance(power_apply(r, n, gv));
        if (first_small == 0 && d40 < 1e-6) first_small = n;
    }
    o.require(d40 < 1e-6, "d+(T^40 g) = " + fmt(d40));
    o.note("g = 1 + x: Re(T^n g)(x_n) < 0 for n <= 30 while d+(T^n g) < 1e-6 from n = " +
           std::to_string(first_small) + " on (d+(T^40 g) = " + fmt(d40) + "); the negative set |x| < |x_1| = " +
           fmt(std::pow(b / (2.0 * a), 2.0 * p)) + " sits inside the innermost quadrature cell");

    // The constant function is annihilated by the second functional.
    const CVector one(r.dimension(), Complex(1.0));
    const double b_one = std::abs(pair(r.functionals()[1], one, r.space()));
    double one_neg = 0.0;
    for (unsigned n = 1; n <= 30; ++n)
        for (double xq : witness_scan_points(r.space()))
            one_neg = std::min(one_neg, r.combination_at(r.power_coefficients(n, one), xq).real());
    o.note("constant 1 as test function: <second functional, 1> = " + fmt(b_one) + ", min Re(T^n 1) over the scan = " +
           fmt(one_neg) + "; T^n 1 = 1 is positive, so no negative point exists for it");

    o.seconds = seconds_since(t0);
    if (col) {
        const auto rep = run_classify(input_from_example("ex2.2b"));
        col->add("ex2.2b", verdicts_of(rep));
        col->add("criterion 2 direct", {ie, we});
    }
    return o;
}

// ------------------------------------------------------------------ 3

Outcome criterion_3(Collector* col) {
    Outcome o;
    o.budget = 2.0;
    const auto t0 = Clock::now();
    const std::size_t n = 50;
    const CatalogEntry e = catalog_entry("ex5.1", n);
    const ComplexMatrix a = to_dense(e.model).matrix;
    const Spectrum spec = eigenvalues(a);
    o.require(std::abs(spec.spectral_radius - 49.0 / 50.0) <= 1e-10, "spr = " + fmt(spec.spectral_radius));

    const CheckResult spr = verify_spr_in_spectrum(a);
    o.require(spr.status == CheckStatus::Fail, "spr_in_spectrum did not fail");
    const double dist = spr.payload.at("distance");
    o.require(std::abs(dist - 49.0 / 50.0) <= 1e-8, "nearest-eigenvalue distance " + fmt(dist));

    const auto tests = ConeTestSet::canonical(n, Norm::ell1(), acceptance_seed);
    const auto v = classify_asymptotic(e.model, default_asymptotic_horizon, default_classifier_tolerance, tests);
    const std::string en = "e_" + std::to_string(n);
    for (const auto& x : v) o.require(x.refuted(), to_string(x.notion) + " not refuted");
    if (v[0].refuted()) {
        const auto& vec = v[0].witness.at("vector");
        bool is_en = vec.size() == n;
        for (std::size_t k = 0; is_en && k < n; ++k)
            is_en = vec.at(k).at(0).get<double>() == (k == n - 1 ? 1.0 : 0.0) && vec.at(k).at(1).get<double>() == 0.0;
        o.require(is_en, "uniform witness is not " + en);
    }
    if (v[1].refuted()) o.require(v[1].witness.at("test_vector") == en, "individual witness is not " + en);
    if (v[2].refuted()) o.require(v[2].witness.at("test_vector") == en, "weak witness vector is not " + en);

    const AnalysisReport rep = run_classify(input_from_example("ex5.1", n));
    const CheckResult* c = rep.check("spr_in_spectrum");
    o.require(c && c->status == CheckStatus::Fail && !c->contradiction(), "report spr check");
    o.require(c && c->note.find("hypotheses unmet") != std::string::npos, "report lacks the hypotheses-unmet flag");
    o.require(rep.contradictions.empty(), "report has contradictions");
    if (c) o.note("report note: " + c->note);

    o.seconds = seconds_since(t0);
    if (col) {
        col->add("ex5.1", verdicts_of(rep));
        col->add("criterion 3 direct", {v[0], v[1], v[2]});
    }
    return o;
}

// ------------------------------------------------------------------ 4

Outcome criterion_4(Collector* col) {
    Outcome o;
    const auto t0 = Clock::now();
    const DenseModel t = rotating_diagonal_model();

    std::vector<unsigned> literal_misses;
    double oracle_err = 0.0;
    for (unsigned n = 0; n <= 40; ++n) {
        const DeltaResult d = delta_n(t, n, ExtremePoints{});
        if (!d.exact) o.require(false, "extreme-point delta not exact at n = " + std::to_string(n));
        if (std::abs(d.value - std::ldexp(1.0, -static_cast<int>(n))) > 1e-12) literal_misses.push_back(n);
        // S^n e_2 = (i/2)^n e_2; S^n e_1 = e_1
        const double oracle = cone_distance(std::pow(Complex(0.0, 0.5), static_cast<int>(n)));
        oracle_err = std::max(oracle_err, std::abs(d.value - oracle));
    }
    if (!literal_misses.empty()) {
        std::ostringstream s;
        s << "delta_n = 2^-n fails at n =";
        for (unsigned n : literal_misses) s << ' ' << n;
        s << " (there (i/2)^n = 2^-n > 0 and delta_n = 0)";
        o.require(false, s.str());
    }
    o.require(oracle_err <= 1e-12, "delta_n differs from |Im z| + max(-Re z, 0), z = (i/2)^n, by " + fmt(oracle_err));
    o.note("delta_n matches |Im z| + max(-Re z, 0) with z = (i/2)^n for n <= 40, max error " + fmt(oracle_err));

    const auto tests = ConeTestSet::canonical(2, Norm::ell1(), acceptance_seed);
    const auto v = classify_asymptotic(t, default_asymptotic_horizon, default_classifier_tolerance, tests);
    for (const auto& x : v) o.require(x.confirmed(), to_string(x.notion) + " not confirmed");

    const CheckResult spr = verify_spr_in_spectrum(t.matrix);
    o.require(spr.status == CheckStatus::Pass, "spr_in_spectrum: " + to_string(spr.status));

    const PositiveEigenvector pe = positive_eigenvector(t.matrix, Norm::ell1());
    o.require(pe.pole_order == 1, "pole order " + std::to_string(pe.pole_order));
    auto along_e1 = [](const LatticeVector& x) {
        return std::abs(x[1]) <= 1e-6 * std::abs(x[0]) && std::abs(x[0]) > 0.0;
    };
    o.require(along_e1(pe.primal) && along_e1(pe.adjoint), "eigenvectors not proportional to e_1");
    o.require(pe.primal_cone_distance <= 1e-6 && pe.adjoint_cone_distance <= 1e-6,
              "phase-aligned cone distance " + fmt(std::max(pe.primal_cone_distance, pe.adjoint_cone_distance)));

    o.seconds = seconds_since(t0);
    if (col) {
        col->add("rem3.2b", verdicts_of(run_classify(input_from_example("rem3.2b"))));
        col->add("criterion 4 direct", {v[0], v[1], v[2]});
    }
    return o;
}

// ------------------------------------------------------------------ 5

Outcome criterion_5(Collector* col) {
    Outcome o;
    o.budget = 10.0;
    const auto t0 = Clock::now();
    const SuiteSummary s = run_suite(SuiteKind::Random, acceptance_seed, 100);
    o.require(s.entries.size() == 100, "suite ran " + std::to_string(s.entries.size()) + " instances");
    o.require(s.contradictions == 0, std::to_string(s.contradictions) + " contradictions");
    o.require(s.solver_failures == 0, std::to_string(s.solver_failures) + " solver failures");
    std::size_t bad = 0;
    for (std::size_t k = 0; k < s.entries.size(); ++k) {
        const auto& e = s.entries[k];
        const RandomInstance inst = random_instance(acceptance_seed, k);
        bool ok = e.mismatches.empty();
        ok = ok && inst.spec.dim >= 2 && inst.spec.dim <= 12;
        const auto* ue = e.report.verdict(Notion::UniformEventual);
        ok = ok && ue && ue->confirmed() && ue->n0 <= inst.n0_bound;
        // independent: T^n0 entrywise positive
        const auto gen = make_eventually_positive(inst.spec.dim, inst.spec.gap, inst.spec.seed);
        if (ue && ue->confirmed()) {
            const ComplexMatrix pw = matrix_power(gen.matrix, ue->n0);
            for (const auto& z : pw.data()) ok = ok && z.real() >= 0.0 && std::abs(z.imag()) <= 1e-12 * (1 + std::abs(z));
        }
        const Spectrum spec = eigenvalues(gen.matrix);
        ok = ok && nearest_eigenvalue(spec, Complex(spec.spectral_radius)).distance <= 1e-8 * spec.spectral_radius;
        const PositiveEigenvector pe = positive_eigenvector(gen.matrix, Norm::ell1());
        ok = ok && pe.primal_cone_distance <= 1e-6 && pe.adjoint_cone_distance <= 1e-6;
        ok = ok && peripheral_spectrum(spec).size() == 1;
        if (!ok) {
            if (bad++ == 0) o.require(false, "instance " + e.label + " misses a generator guarantee");
        }
    }
    if (bad > 1) o.require(false, std::to_string(bad) + " instances in total miss a guarantee");
    o.note("100 instances, " + std::to_string(s.contradictions) + " contradictions, suite time " + fmt(s.seconds) + " s");
    o.seconds = seconds_since(t0);
    if (col)
        for (const auto& e : s.entries) col->add(e.label, verdicts_of(e.report));
    return o;
}

// ------------------------------------------------------------------ 6

Outcome criterion_6(Collector* col) {
    Outcome o;
    o.budget = 5.0;
    const auto t0 = Clock::now();
    const std::vector<int> ns{-3, -2, -1, 0, 1, 2, 3};
    for (unsigned k : {2u, 3u, 4u, 6u}) {
        for (std::size_t inner : {std::size_t{2}, std::size_t{24} / k}) {
            if (inner * k > 24 || inner < 1) continue;
            const std::string label = "k=" + std::to_string(k) + " inner=" + std::to_string(inner);
            const ComplexMatrix a = make_cyclic_block(k, inner, acceptance_seed + k);
            const Spectrum spec = eigenvalues(a);
            const CVector per = peripheral_spectrum(spec);
            o.require(per.size() == k, label + ": " + std::to_string(per.size()) + " peripheral eigenvalues");
            // each k-th root of unity times spr is matched within 1e-8
            double worst = 0.0;
            for (unsigned j = 0; j < k; ++j) {
                const Complex target = spec.spectral_radius * std::polar(1.0, 2.0 * std::numbers::pi * j / k);
                double best = std::numeric_limits<double>::infinity();
                for (const auto& z : per) best = std::min(best, std::abs(z - target));
                worst = std::max(worst, best);
            }
            o.require(worst <= 1e-8, label + ": root-of-unity mismatch " + fmt(worst));
            const CheckResult cyc = peripheral_cyclicity_check(a, 12);
            o.require(cyc.status == CheckStatus::Pass, label + ": peripheral_cyclicity " + to_string(cyc.status));
            const CheckResult mult = multiplicity_monotonicity_check(a, ns);
            o.require(mult.status == CheckStatus::Pass, label + ": multiplicity_monotonicity " + to_string(mult.status));
            if (col) {
                ModelInput in{label, DenseModel{a, Norm::ell1()}, {}};
                col->add("cyclic " + label, verdicts_of(run_classify(in)));
            }
        }
    }
    o.seconds = seconds_since(t0);
    return o;
}

// ------------------------------------------------------------------ 7

Outcome criterion_7(Collector* col) {
    Outcome o;
    o.budget = 60.0;
    const SweepSizes sizes;  // 10^4 vectors, 10^3 matrices / triples / sequences
    if (col) {
        // the matrices behind the asymptotic-decay sweeps
        for (std::size_t m = 0; m < sizes.family_size; ++m) {
            const ComplexMatrix a = rescale_to_unit_spr(sweep_family_matrix(acceptance_seed, m)).matrix;
            ModelInput in{"family_" + std::to_string(m), DenseModel{a, Norm::ell1()}, {}};
            col->add(in.operator_id, verdicts_of(run_classify(in)));
        }
        return o;
    }
    const auto t0 = Clock::now();
    o.require(sizes.vectors == 10000, "vector sweep size");
    for (const auto& p : property_sweeps(acceptance_seed, sizes)) {
        o.require(p.failures == 0, p.name + ": " + std::to_string(p.failures) + " failures, first " + p.first_failure);
        o.note(p.name + ": " + std::to_string(p.trials) + " trials, worst margin " + fmt(p.worst_margin));
    }
    o.seconds = seconds_since(t0);
    return o;
}

// ------------------------------------------------------------------ 8

Outcome criterion_8(Collector*) {
    Outcome o;
    o.budget = 0.0;
    const auto t0 = Clock::now();
    Collector col;
    for (auto* f : {criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7})
        (void)f(&col);
    std::size_t violations = 0, verdicts = 0;
    for (const auto& [label, v] : col.instances) {
        verdicts += v.size();
        for (const auto& msg : hierarchy_violations(v)) {
            if (violations++ < 5) o.require(false, label + ": " + msg);
        }
    }
    o.require(violations == 0, std::to_string(violations) + " hierarchy violations");
    o.note(std::to_string(col.instances.size()) + " instances, " + std::to_string(verdicts) + " verdicts, " +
           std::to_string(violations) + " violations");
    o.seconds = seconds_since(t0);
    return o;
}

// ------------------------------------------------------------------ 9

Outcome criterion_9(Collector*) {
    Outcome o;
    o.budget = 1.0;
    const auto t0 = Clock::now();
    const std::size_t len = 200;
    std::vector<double> geo(len), harm(len);
    for (std::size_t n = 0; n < len; ++n) {
        geo[n] = std::ldexp(1.0, -static_cast<int>(n));
        harm[n] = 1.0 / static_cast<double>(n + 1);
    }
    const auto g = summability_report(DecaySequence(geo), {PowerRate{1.0}});
    o.require(g.entries.at(0).trend == Trend::Summable, "geometric trend " + to_string(g.entries.at(0).trend));
    double worst = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        const double closed = 2.0 - std::ldexp(1.0, -static_cast<int>(n));
        worst = std::max(worst, std::abs(g.entries[0].partial_sums[n] - closed));
    }
    o.require(worst <= 1e-6, "geometric partial sums off by " + fmt(worst));

    const auto h = summability_report(DecaySequence(harm), {PowerRate{1.0}});
    o.require(h.entries.at(0).trend == Trend::Divergent, "harmonic trend " + to_string(h.entries.at(0).trend));

    const std::size_t glen = 32;
    std::vector<double> f(harm.begin(), harm.begin() + glen), a(geo.begin(), geo.begin() + glen);
    std::reverse(a.begin(), a.end());
    const auto gv = governs(MajorantSequence(f), DecaySequence(a));
    o.require(gv.governed && std::abs(gv.c - 1.0) <= 1e-12, "governs constant " + fmt(gv.c));

    const MajorantSequence fg(geo);
    double prev = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 12; ++j) {
        const double r = 1.0 + std::ldexp(1.0, -j);
        const double s = (r - 1.0) * alpha(fg, r).value;
        o.require(s < prev, "(r-1) alpha(r) not decreasing at j = " + std::to_string(j));
        prev = s;
    }
    o.require(prev < 1e-3, "(r-1) alpha(r) at j = 12 is " + fmt(prev));
    o.note("geometric partial-sum error " + fmt(worst) + ", governs c = " + fmt(gv.c) + ", (r-1) alpha at j = 12: " + fmt(prev));
    o.seconds = seconds_since(t0);
    return o;
}

const char* const titles[] = {
    "",
    "individual-eventual without uniform-eventual (rank-2, grid sup)",
    "weak-eventual without individual-eventual (rank-2, L2 quadrature)",
    "truncated alternating diagonal: spr outside the spectrum",
    "diag(1, i/2): extreme-point delta_n and Perron pair",
    "random eventually positive suite (100 instances)",
    "cyclic peripheral spectrum",
    "property sweeps",
    "hierarchy invariant across criteria 1-7",
    "rate analysis",
};

bool run(int k) {
    static const std::function<Outcome(Collector*)> fns[] = {nullptr,     criterion_1, criterion_2,
                                                             criterion_3, criterion_4, criterion_5,
                                                             criterion_6, criterion_7, criterion_8,
                                                             criterion_9};
    Outcome o;
    try {
        o = fns[k](nullptr);
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    if (o.budget > 0.0 && o.seconds >= o.budget)
        o.require(false, "runtime " + fmt(o.seconds) + " s exceeds " + fmt(o.budget) + " s");
    std::printf("criterion %d: %s  %s  (%.2f s)\n", k, o.pass ? "PASS" : "FAIL", titles[k], o.seconds);
    for (const auto& f : o.failures) std::printf("    fail: %s\n", f.c_str());
    for (const auto& n : o.notes) std::printf("    note: %s\n", n.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> which;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) {
            const int k = std::atoi(argv[i]);
            if (k < 1 || k > 9) {
                std::fprintf(stderr, "criterion must be 1..9\n");
                return 2;
            }
            which.push_back(k);
        }
    } else {
        for (int k = 1; k <= 9; ++k) which.push_back(k);
    }
    int failed = 0;
    for (int k : which) failed += !run(k);
    return failed == 0 ? 0 : 1;
}
