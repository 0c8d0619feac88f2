#include "evpos/suite.hpp"

#include "evpos/errors.hpp"
#include "evpos/rates.hpp"
#include "evpos/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>

namespace evpos {

using nlohmann::json;

std::string to_string(SuiteKind k) {
    switch (k) {
        case SuiteKind::Properties: return "properties";
        case SuiteKind::Paper: return "paper";
        case SuiteKind::Random: return "random";
    }
    return "unknown";
}

SuiteKind suite_from_string(const std::string& s) {
    if (s == "properties") return SuiteKind::Properties;
    if (s == "paper") return SuiteKind::Paper;
    if (s == "random") return SuiteKind::Random;
    throw DomainError("unknown suite '" + s + "'");
}

namespace {

// Substream identifiers of the individual sweeps.
enum Stream : std::uint64_t {
    oracle_stream = 1,
    domination_stream,
    modulus_stream,
    attainment_stream,
    family_stream,
    rearrangement_stream,
    random_suite_stream,
};

class Tally {
public:
    explicit Tally(std::string name) { out_.name = std::move(name); }

    void record(double margin, const std::string& what) {
        ++out_.trials;
        if (out_.trials == 1 || margin < out_.worst_margin) out_.worst_margin = margin;
        if (margin < 0.0 || std::isnan(margin)) {
            if (out_.failures++ == 0) out_.first_failure = what;
        }
    }
    PropertyOutcome done() { return std::move(out_); }

private:
    PropertyOutcome out_;
};

Norm cycled_norm(std::size_t k) {
    switch (k % 3) {
        case 0: return Norm::ell1();
        case 1: return Norm::ell2();
        default: return Norm::ell_inf();
    }
}

CVector complex_normal(CounterRng& rng, std::size_t n) {
    CVector v(n);
    for (auto& z : v) z = {rng.normal(), rng.normal()};
    return v;
}

std::string trial_label(std::size_t k) { return "trial " + std::to_string(k); }

}  // namespace

ComplexMatrix sweep_family_matrix(std::uint64_t seed, std::size_t m) {
    CounterRng rng = CounterRng(seed).split(family_stream).split(m);
    const std::size_t dim = 2 + rng.uniform_int(0, family_max_dimension - 2);
    const double gap = rng.uniform(random_min_gap, random_max_gap);
    return make_eventually_positive(dim, gap, rng.next_u64()).matrix;
}

std::vector<PropertyOutcome> property_sweeps(std::uint64_t seed, const SweepSizes& sizes) {
    std::vector<PropertyOutcome> out;
    const CounterRng root(seed);

    {
        Tally t("cone_distance_vs_oracle");
        for (std::size_t k = 0; k < sizes.vectors; ++k) {
            CounterRng rng = root.split(oracle_stream).split(k);
            const std::size_t dim = 1 + k % oracle_max_dimension;
            const LatticeVector x(complex_normal(rng, dim), cycled_norm(k / oracle_max_dimension));
            const double formula = cone_distance(x);
            const double brute = cone_distance_oracle(x, oracle_resolution);
            // the grid minimum can only exceed the exact one, by at most dim * resolution
            const double slack = std::min(brute - formula + 1e-12,
                                          static_cast<double>(dim) * oracle_resolution - (brute - formula));
            t.record(slack, trial_label(k));
        }
        out.push_back(t.done());
    }
    {
        Tally dom("cone_distance_domination");
        Tally mod("real_modulus_bound");
        for (std::size_t k = 0; k < sizes.vectors; ++k) {
            CounterRng rng = root.split(domination_stream).split(k);
            const std::size_t dim = 1 + rng.uniform_int(0, sweep_max_dimension - 1);
            const LatticeVector x(complex_normal(rng, dim), cycled_norm(k));
            const double nx = norm_value(x);
            dom.record(nx - cone_distance(x) + 1e-12 * nx, trial_label(k));
            const CheckResult c = real_modulus_bound_check(x);
            mod.record(c.margin + 1e-12 * nx, trial_label(k));
        }
        out.push_back(dom.done());
        out.push_back(mod.done());
    }
    {
        Tally t("cone_norm_attainment");
        for (std::size_t k = 0; k < sizes.matrices; ++k) {
            CounterRng rng = root.split(attainment_stream).split(k);
            const std::size_t dim = 1 + rng.uniform_int(0, sweep_max_dimension - 1);
            ComplexMatrix a(dim, dim);
            for (auto& z : a.data()) z = {rng.normal(), rng.normal()};
            const auto na = cone_norm_attainment(a, cycled_norm(k));
            t.record(na.ratio - 0.125 + 1e-12, trial_label(k));
        }
        out.push_back(t.done());
    }
    {
        Tally res("resolvent_estimate");
        Tally omg("omega_nonnegative");
        Tally dec("uniform_error_decay");
        const std::size_t family = std::max<std::size_t>(sizes.family_size, 1);
        const std::size_t per = (sizes.triples + family - 1) / family;
        std::size_t triples = 0;
        std::vector<unsigned> js;
        for (unsigned j = 1; j <= 10; ++j) js.push_back(j);
        for (std::size_t m = 0; m < family && triples < sizes.triples; ++m) {
            const ComplexMatrix s = rescale_to_unit_spr(sweep_family_matrix(seed, m)).matrix;
            const std::size_t dim = s.rows();
            CounterRng rng = root.split(family_stream).split(m).split(1);
            const std::string label = "matrix " + std::to_string(m);
            for (std::size_t q = 0; q < per && triples < sizes.triples; ++q, ++triples) {
                const double radius = rng.uniform(1.1, 3.0);
                const Complex lambda = std::polar(radius, rng.uniform(-std::numbers::pi, std::numbers::pi));
                CVector xv(dim);
                for (auto& z : xv) z = rng.uniform(0.05, 1.0);
                const LatticeVector x(xv, Norm::ell1());
                const unsigned n = omega_truncation(radius);
                const CheckResult c = resolvent_estimate_check(s, lambda, x, n);
                res.record(c.margin + c.tolerance, label + " triple " + std::to_string(q));
                const OmegaValue w = omega(s, radius, x, n);
                double worst = std::numeric_limits<double>::infinity();
                for (const auto& z : w.value)
                    worst = std::min({worst, z.real(), -std::abs(z.imag())});
                omg.record(worst + 1e-12 * norm_value(x), label + " triple " + std::to_string(q));
            }
            const CheckResult d = uniform_error_decay_check(s, Norm::ell1(), js);
            dec.record(d.status == CheckStatus::Pass ? 1.0 : -1.0, label + ": " + to_string(d.status) + " " + d.note);
        }
        out.push_back(res.done());
        out.push_back(omg.done());
        out.push_back(dec.done());
    }
    {
        Tally dom("rearrangement_domination");
        Tally idem("rearrangement_idempotent");
        for (std::size_t k = 0; k < sizes.sequences; ++k) {
            CounterRng rng = root.split(rearrangement_stream).split(k);
            const std::size_t len = 1 + rng.uniform_int(0, 63);
            std::vector<double> a(len);
            for (auto& v : a) v = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
            const double r = 1.0 + rng.uniform(0.01, 2.0);
            const auto star = decreasing_rearrangement(a);
            double lhs = 0.0, rhs = 0.0, w = 1.0 / r;
            for (std::size_t n = 0; n < len; ++n, w /= r) {
                lhs += a[n] * w;
                rhs += star[n] * w;
            }
            dom.record(rhs - lhs + 1e-12 * rhs, trial_label(k));
            auto sorted_a = a;
            std::sort(sorted_a.begin(), sorted_a.end());
            auto sorted_star = star;
            std::sort(sorted_star.begin(), sorted_star.end());
            const bool ok = decreasing_rearrangement(star) == star && sorted_a == sorted_star;
            idem.record(ok ? 0.0 : -1.0, trial_label(k));
        }
        out.push_back(dom.done());
        out.push_back(idem.done());
    }
    return out;
}

// ----------------------------------------------------------- random suite

RandomInstance random_instance(std::uint64_t seed, std::size_t trial) {
    CounterRng rng = CounterRng(seed).split(random_suite_stream).split(trial);
    GeneratorSpec g;
    g.kind = GeneratorSpec::Kind::EventuallyPositive;
    g.dim = random_min_dimension +
            static_cast<std::size_t>(rng.uniform_int(0, random_max_dimension - random_min_dimension));
    g.gap = rng.uniform(random_min_gap, random_max_gap);
    g.seed = rng.next_u64();
    return {g, make_eventually_positive(g.dim, g.gap, g.seed).n0_bound};
}

RunOptions random_suite_options(std::uint64_t seed) {
    RunOptions o;
    o.horizon = default_eventual_horizon;
    o.asymptotic_horizon = 60;
    o.seed = seed;
    return o;
}

std::vector<std::string> random_instance_mismatches(const AnalysisReport& r, const RandomInstance& inst) {
    std::vector<std::string> out;
    const auto* ue = r.verdict(Notion::UniformEventual);
    if (!ue || !ue->confirmed())
        out.push_back("uniform_eventual not confirmed");
    else if (ue->n0 > inst.n0_bound)
        out.push_back("uniform_eventual n0 " + std::to_string(ue->n0) + " exceeds the bound " +
                      std::to_string(inst.n0_bound));
    for (const char* name : {"spr_in_spectrum", "positive_eigenvector", "peripheral_cyclicity"}) {
        const auto* c = r.check(name);
        if (!c || c->status != CheckStatus::Pass)
            out.push_back(std::string(name) + ": " + (c ? to_string(c->status) : "missing"));
    }
    if (!r.spectrum || peripheral_spectrum(*r.spectrum).size() != 1)
        out.push_back("peripheral spectrum is not a singleton");
    return out;
}

// --------------------------------------------------------------- suites

SuiteSummary run_suite(SuiteKind kind, std::uint64_t seed, std::optional<std::size_t> trials) {
    const auto t0 = std::chrono::steady_clock::now();
    SuiteSummary s;
    s.kind = kind;
    s.seed = seed;
    auto add = [&](SuiteEntry e) {
        s.contradictions += e.report.contradictions.size();
        s.solver_failures += e.report.solver_failures.size();
        s.mismatches += e.mismatches.size();
        s.entries.push_back(std::move(e));
    };
    switch (kind) {
        case SuiteKind::Properties: {
            SweepSizes sizes;
            if (trials) {
                sizes.vectors = *trials;
                sizes.matrices = sizes.triples = sizes.sequences = std::max<std::size_t>(*trials / 10, 1);
                sizes.family_size = std::max<std::size_t>(sizes.triples / 10, 1);
            }
            s.trials = sizes.vectors;
            s.properties = property_sweeps(seed, sizes);
            for (const auto& p : s.properties) s.contradictions += p.failures;
            break;
        }
        case SuiteKind::Paper: {
            RunOptions opt;
            opt.seed = seed;
            for (auto& entry : literature_catalog()) {
                ModelInput in{entry.name, entry.model, json{{"example", entry.name}}};
                AnalysisReport r = run_classify(in, opt);
                auto mm = expectation_mismatches(r, entry.expected);
                add({entry.name, std::move(r), std::move(mm)});
            }
            s.trials = s.entries.size();
            break;
        }
        case SuiteKind::Random: {
            s.trials = trials.value_or(100);
            const RunOptions opt = random_suite_options(seed);
            for (std::size_t k = 0; k < s.trials; ++k) {
                const RandomInstance inst = random_instance(seed, k);
                AnalysisReport r = run_classify(input_from_generator(inst.spec), opt);
                auto mm = random_instance_mismatches(r, inst);
                add({to_string(inst.spec), std::move(r), std::move(mm)});
            }
            break;
        }
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return s;
}

json to_json(const SuiteSummary& s) {
    json entries = json::array(), props = json::array();
    for (const auto& e : s.entries)
        entries.push_back({{"label", e.label}, {"mismatches", e.mismatches}, {"report", to_json(e.report)}});
    for (const auto& p : s.properties)
        props.push_back({{"name", p.name},
                         {"trials", p.trials},
                         {"failures", p.failures},
                         {"worst_margin", p.worst_margin},
                         {"first_failure", p.first_failure}});
    return {{"suite", to_string(s.kind)},
            {"seed", s.seed},
            {"trials", s.trials},
            {"summary",
             {{"contradictions", s.contradictions},
              {"solver_failures", s.solver_failures},
              {"mismatches", s.mismatches},
              {"seconds", s.seconds}}},
            {"properties", props},
            {"entries", entries}};
}

int exit_code(const SuiteSummary& s) {
    if (s.contradictions > 0) return exit_contradiction;
    if (s.solver_failures > 0) return exit_solver_failure;
    return exit_ok;
}

}  // namespace evpos
