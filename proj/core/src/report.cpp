#include "evpos/report.hpp"

#include "evpos/errors.hpp"
#include "evpos/model_io.hpp"
#include "evpos/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace evpos {

using nlohmann::json;

namespace {

// Non-finite doubles travel as strings so reports round-trip exactly.
json real_json(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

double real_from(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw SchemaError(where, "expected a number");
}

json reals_json(const std::vector<double>& v) {
    json out = json::array();
    for (double x : v) out.push_back(real_json(x));
    return out;
}

std::vector<double> reals_from(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < j.size(); ++k)
        out.push_back(real_from(j[k], where + "[" + std::to_string(k) + "]"));
    return out;
}

void allow_only(const json& j, const std::string& where,
                std::initializer_list<std::string_view> keys) {
    if (!j.is_object()) throw SchemaError(where, "expected an object");
    for (const auto& [key, value] : j.items())
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw SchemaError(where + "." + key, "unknown field");
}

const json& at(const json& j, const std::string& where, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where + "." + key, "missing required field");
    return *it;
}

std::vector<std::string> strings_from(const json& j, const std::string& where) {
    if (!j.is_array()) throw SchemaError(where, "expected an array of strings");
    std::vector<std::string> out;
    for (const auto& s : j) {
        if (!s.is_string()) throw SchemaError(where, "expected an array of strings");
        out.push_back(s.get<std::string>());
    }
    return out;
}

template <class E>
E enum_from(const json& j, const std::string& where, E (*parse)(const std::string&)) {
    if (!j.is_string()) throw SchemaError(where, "expected a string");
    try {
        return parse(j.get<std::string>());
    } catch (const Error& e) {
        throw SchemaError(where, e.what());
    }
}

bool dense_like(const OperatorModel& t) { return !std::holds_alternative<RankKModel>(t); }

Spectrum rank_k_spectrum(const RankKModel& r) {
    Spectrum s;
    s.eigenvalues = r.eigenvalues();
    s.eigenvalues.resize(std::max(r.dimension(), r.rank()), Complex(0.0));
    std::stable_sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](Complex a, Complex b) {
        if (std::abs(a) != std::abs(b)) return std::abs(a) > std::abs(b);
        return std::arg(a) < std::arg(b);
    });
    for (const auto& l : s.eigenvalues) s.spectral_radius = std::max(s.spectral_radius, std::abs(l));
    return s;
}

CheckResult not_applicable(std::string name, std::string note) {
    CheckResult c;
    c.name = std::move(name);
    c.status = CheckStatus::NotApplicable;
    c.note = std::move(note);
    return c;
}

std::string verdict_detail(const PositivityVerdict* v) {
    return v ? to_string(v->notion) + " " + to_string(v->status) : "not classified";
}

bool is_confirmed(const PositivityVerdict* v) { return v && v->confirmed(); }

class Runner {
public:
    Runner(const ModelInput& in, const RunOptions& opt) : in_(in), opt_(opt) {
        r_.operator_id = in.operator_id;
        r_.model_descriptor = in.descriptor;
        r_.seed = opt.seed;
        r_.versions = {{"tool", std::string(tool_version)},
                       {"schema", std::string(report_schema_version)},
                       {"model_schema", std::string(model_schema_version)},
                       {"rng", std::string(CounterRng::algorithm)}};
    }

    AnalysisReport run() {
        spectrum();
        classify();
        orbit();
        checks();
        std::sort(r_.checks.begin(), r_.checks.end(),
                  [](const CheckResult& a, const CheckResult& b) { return a.name < b.name; });
        contradictions();
        return std::move(r_);
    }

private:
    template <class F>
    bool guarded(const std::string& stage, F&& f) {
        try {
            f();
            return true;
        } catch (const SolverFailure& e) {
            r_.solver_failures.push_back(stage + ": " + e.what());
        } catch (const SingularResolvent& e) {
            r_.solver_failures.push_back(stage + ": " + e.what());
        }
        return false;
    }

    void spectrum() {
        const auto& t = in_.model;
        if (const auto* rk = std::get_if<RankKModel>(&t)) {
            r_.spectrum = rank_k_spectrum(*rk);
            r_.notes.push_back("spectrum of the rank-k model from its duality eigenvalues");
            spr_ = r_.spectrum->spectral_radius;
            return;
        }
        guarded("spectrum", [&] {
            r_.spectrum = eigenvalues(to_dense(t).matrix);
            spr_ = r_.spectrum->spectral_radius;
        });
    }

    void classify() {
        const auto& t = in_.model;
        const ConeTestSet tests =
            ConeTestSet::canonical(dimension(t), space_norm(t), opt_.seed);
        auto record = [&](Notion n, const std::function<PositivityVerdict()>& f) {
            PositivityVerdict v;
            v.notion = n;
            if (!guarded(to_string(n), [&] { v = f(); })) v.note = "solver failure";
            r_.classification.push_back(std::move(v));
        };
        record(Notion::UniformEventual, [&] { return uniform_eventual(t, opt_.horizon, opt_.tol); });
        record(Notion::IndividualEventual,
               [&] { return individual_eventual(t, tests, opt_.horizon, opt_.tol); });
        record(Notion::WeakEventual, [&] { return weak_eventual(t, tests, opt_.horizon, opt_.tol); });
        try {
            std::array<PositivityVerdict, 3> asym;
            const bool ok = guarded("asymptotic", [&] {
                asym = classify_asymptotic(t, opt_.asymptotic_horizon, opt_.tol, tests, opt_.seed);
            });
            if (ok)
                for (auto& v : asym) r_.classification.push_back(std::move(v));
        } catch (const NotClassifiable& e) {
            r_.not_classifiable = true;
            r_.notes.push_back(std::string("asymptotic notions not classifiable: ") + e.what());
        }
    }

    void orbit() {
        const auto& t = in_.model;
        const auto ones = LatticeVector::ones(dimension(t), space_norm(t));
        guarded("orbit", [&] {
            std::vector<double> d;
            const double n1 = norm_value(ones);
            for (const auto& row : orbit_table(t, ones, opt_.asymptotic_horizon))
                d.push_back(row.d_plus / n1);
            r_.decay_sequences["orbit_ones"] = std::move(d);
        });
    }

    void checks() {
        const auto& t = in_.model;
        const std::vector<std::string> names = {
            "cone_norm_attainment", "multiplicity_monotonicity", "peripheral_cyclicity",
            "positive_eigenvector",  "power_bounded_estimate",    "real_modulus_bound",
            "resolvent_estimate",    "spr_in_spectrum",           "uniform_error_decay"};
        std::string skip;
        if (!dense_like(t) && dimension(t) > dense_check_cap)
            skip = "grid dimension " + std::to_string(dimension(t)) + " exceeds the dense cap " +
                   std::to_string(dense_check_cap);
        else if (!r_.spectrum)
            skip = "spectrum unavailable";
        if (!skip.empty()) {
            for (const auto& n : names) r_.checks.push_back(not_applicable(n, skip));
            return;
        }
        const ComplexMatrix a = to_dense(t).matrix;
        const Norm& norm = space_norm(t);
        const auto* ua = r_.verdict(Notion::UniformAsymptotic);
        const auto* wa = r_.verdict(Notion::WeakAsymptotic);

        // spr membership
        CheckResult spr_check;
        guarded("spr_in_spectrum", [&] { spr_check = verify_spr_in_spectrum(a); });
        spr_check.name = "spr_in_spectrum";
        attach_hypothesis(spr_check, "uniform_asymptotic", is_confirmed(ua), verdict_detail(ua));
        r_.checks.push_back(spr_check);

        if (!(spr_ > 0.0)) {
            for (const auto& n : names)
                if (n != "spr_in_spectrum")
                    r_.checks.push_back(not_applicable(n, "spectral radius is zero"));
            return;
        }

        const ComplexMatrix s = rescale_to_unit_spr(a).matrix;
        const auto ones = LatticeVector::ones(a.rows(), norm);

        push("resolvent_estimate", [&] {
            const Complex lambda = std::polar(2.0, std::numbers::pi / 3.0);
            return resolvent_estimate_check(s, lambda, ones, omega_truncation(2.0));
        });
        push("uniform_error_decay", [&] {
            std::vector<unsigned> js;
            for (unsigned j = 1; j <= 10; ++j) js.push_back(j);
            return uniform_error_decay_check(
                s, norm, js, ua ? std::optional<VerdictStatus>(ua->status) : std::nullopt);
        });
        push("real_modulus_bound", [&] {
            return real_modulus_bound_check(LatticeVector(s * ones.entries(), norm));
        });
        push("cone_norm_attainment", [&] {
            const bool supported = std::holds_alternative<Ell1>(norm.kind()) ||
                                   std::holds_alternative<Ell2>(norm.kind()) ||
                                   std::holds_alternative<EllInf>(norm.kind());
            if (!supported) return not_applicable("cone_norm_attainment", "norm " + norm.name() + " unsupported");
            const auto na = cone_norm_attainment(a, norm);
            CheckResult c;
            c.name = "cone_norm_attainment";
            c.tolerance = 1e-12;
            c.margin = na.ratio - 0.125;
            c.payload = {{"ratio", real_json(na.ratio)}, {"zero_operator", na.zero_operator}};
            settle(c);
            return c;
        });

        PowerBoundEstimate pb;
        const bool have_pb = guarded("power_bounded_estimate", [&] { pb = power_bounded_estimate(a); });
        {
            CheckResult c;
            c.name = "power_bounded_estimate";
            if (have_pb) {
                c.status = pb.bounded_trend ? CheckStatus::Pass : CheckStatus::Fail;
                c.payload = {{"sup_norm", real_json(pb.sup_norm)},
                             {"abel_sup", real_json(pb.abel_sup)},
                             {"bounded_trend", pb.bounded_trend}};
                c.note = "horizon estimate, not a certificate";
                if (!pb.bounded_trend && std::isfinite(pb.abel_sup))
                    c.note += "; Abel bound reported as data only";
            } else {
                c.status = CheckStatus::NotApplicable;
                c.note = "solver failure";
            }
            r_.checks.push_back(c);
        }
        const bool bounded = have_pb && pb.bounded_trend;
        const std::string pb_detail =
            have_pb ? "sup_norm " + std::to_string(pb.sup_norm) : "estimate unavailable";

        push("peripheral_cyclicity", [&] {
            auto c = peripheral_cyclicity_check(a, cyclicity_power_range);
            attach_hypothesis(c, "power_bounded", bounded, pb_detail);
            attach_hypothesis(c, "uniform_asymptotic", is_confirmed(ua), verdict_detail(ua));
            return c;
        });
        push("multiplicity_monotonicity", [&] {
            std::vector<int> ns;
            for (int n = -multiplicity_power_range; n <= multiplicity_power_range; ++n) ns.push_back(n);
            auto c = multiplicity_monotonicity_check(a, ns);
            attach_hypothesis(c, "power_bounded", bounded, pb_detail);
            attach_hypothesis(c, "weak_asymptotic", is_confirmed(wa), verdict_detail(wa));
            return c;
        });
        push("positive_eigenvector", [&] {
            CheckResult c;
            c.name = "positive_eigenvector";
            c.tolerance = eigenvector_cone_tolerance;
            if (!spr_check.passed()) {
                c.status = CheckStatus::NotApplicable;
                c.note = "spectral radius is not an eigenvalue";
            } else {
                try {
                    const auto pe = positive_eigenvector(a, norm);
                    c.margin = eigenvector_cone_tolerance -
                               std::max({pe.primal_cone_distance, pe.adjoint_cone_distance,
                                         pe.primal_residual, pe.adjoint_residual});
                    c.status = pe.satisfies_bounds() ? CheckStatus::Pass : CheckStatus::Fail;
                    c.payload = {{"value", real_json(pe.value)},
                                 {"pole_order", pe.pole_order},
                                 {"via", to_string(pe.via)},
                                 {"primal", cvector_to_json(pe.primal.entries())},
                                 {"adjoint", cvector_to_json(pe.adjoint.entries())},
                                 {"primal_residual", real_json(pe.primal_residual)},
                                 {"adjoint_residual", real_json(pe.adjoint_residual)},
                                 {"primal_cone_distance", real_json(pe.primal_cone_distance)},
                                 {"adjoint_cone_distance", real_json(pe.adjoint_cone_distance)}};
                } catch (const NotAnEigenvalue& e) {
                    c.status = CheckStatus::NotApplicable;
                    c.note = e.what();
                }
            }
            attach_hypothesis(c, "spr_in_spectrum", spr_check.passed(), to_string(spr_check.status));
            attach_hypothesis(c, "weak_asymptotic", is_confirmed(wa), verdict_detail(wa));
            return c;
        });
    }

    template <class F>
    void push(const std::string& name, F&& f) {
        CheckResult c;
        if (!guarded(name, [&] { c = f(); })) c = not_applicable(name, "solver failure");
        c.name = name;
        r_.checks.push_back(std::move(c));
    }

    void contradictions() {
        for (auto& v : hierarchy_violations(r_.classification)) r_.contradictions.push_back(v);
        const std::pair<Notion, Notion> eventual_asymptotic[] = {
            {Notion::UniformEventual, Notion::UniformAsymptotic},
            {Notion::IndividualEventual, Notion::IndividualAsymptotic},
            {Notion::WeakEventual, Notion::WeakAsymptotic},
        };
        for (const auto& [e, a] : eventual_asymptotic) {
            const auto* ve = r_.verdict(e);
            const auto* va = r_.verdict(a);
            if (ve && va && ve->confirmed() && va->refuted())
                r_.contradictions.push_back(to_string(e) + " confirmed but " + to_string(a) + " refuted");
        }
        // On matrices, individual eventual positivity forces uniform eventual and
        // hence uniform asymptotic positivity.
        if (dense_like(in_.model)) {
            const auto* ie = r_.verdict(Notion::IndividualEventual);
            const auto* ua = r_.verdict(Notion::UniformAsymptotic);
            if (ie && ua && ie->confirmed() && ua->refuted())
                r_.contradictions.push_back(
                    "individual_eventual confirmed but uniform_asymptotic refuted: solver inconsistency");
        }
        for (const auto& c : r_.checks)
            if (c.contradiction()) r_.contradictions.push_back(c.name + ": " + c.note);
    }

    const ModelInput& in_;
    const RunOptions& opt_;
    AnalysisReport r_;
    double spr_ = 0.0;
};

}  // namespace

// ---------------------------------------------------------------- inputs

ModelInput input_from_descriptor(const json& descriptor, std::string operator_id) {
    return {std::move(operator_id), model_from_json(descriptor), descriptor};
}

ModelInput input_from_example(const std::string& name, std::optional<std::size_t> size) {
    CatalogEntry e = [&] {
        try {
            return catalog_entry(name, size);
        } catch (const DomainError& err) {
            throw SchemaError("example", err.what());
        }
    }();
    json d{{"example", name}};
    if (size) d["size"] = *size;
    return {name, std::move(e.model), std::move(d)};
}

ModelInput input_from_generator(const GeneratorSpec& spec) {
    const std::string text = to_string(spec);
    json d{{"generator", text}};
    switch (spec.kind) {
        case GeneratorSpec::Kind::EventuallyPositive:
            return {text, DenseModel{make_eventually_positive(spec.dim, spec.gap, spec.seed).matrix, Norm::ell1()}, d};
        case GeneratorSpec::Kind::PositiveRandom:
            return {text, DenseModel{make_positive_random(spec.dim, spec.seed), Norm::ell1()}, d};
        case GeneratorSpec::Kind::CyclicBlock:
            return {text, DenseModel{make_cyclic_block(spec.k, spec.inner_dim, spec.seed), Norm::ell1()}, d};
        case GeneratorSpec::Kind::PaperExample: {
            auto in = input_from_example(spec.name, spec.size);
            in.operator_id = text;
            in.descriptor = d;
            return in;
        }
    }
    throw SchemaError("generator", "unknown kind");
}

// ---------------------------------------------------------------- report

const PositivityVerdict* AnalysisReport::verdict(Notion n) const {
    for (const auto& v : classification)
        if (v.notion == n) return &v;
    return nullptr;
}

const CheckResult* AnalysisReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

json to_json(const PositivityVerdict& v) {
    return {{"notion", to_string(v.notion)}, {"status", to_string(v.status)},
            {"n0", v.n0},                    {"horizon", v.horizon},
            {"witness", v.witness},          {"decay", reals_json(v.decay)},
            {"tolerance", real_json(v.tolerance)}, {"note", v.note}};
}

PositivityVerdict verdict_from_json(const json& j, const std::string& where) {
    allow_only(j, where, {"notion", "status", "n0", "horizon", "witness", "decay", "tolerance", "note"});
    PositivityVerdict v;
    v.notion = enum_from(at(j, where, "notion"), where + ".notion", &notion_from_string);
    v.status = enum_from(at(j, where, "status"), where + ".status", &status_from_string);
    v.n0 = at(j, where, "n0").get<unsigned>();
    v.horizon = at(j, where, "horizon").get<unsigned>();
    v.witness = at(j, where, "witness");
    v.decay = reals_from(at(j, where, "decay"), where + ".decay");
    v.tolerance = real_from(at(j, where, "tolerance"), where + ".tolerance");
    v.note = at(j, where, "note").get<std::string>();
    return v;
}

json to_json(const CheckResult& c) {
    json hyps = json::array();
    for (const auto& h : c.hypotheses) hyps.push_back({{"name", h.name}, {"met", h.met}, {"detail", h.detail}});
    return {{"name", c.name},
            {"status", to_string(c.status)},
            {"margin", real_json(c.margin)},
            {"tolerance", real_json(c.tolerance)},
            {"payload", c.payload},
            {"hypotheses", hyps},
            {"contradiction", c.contradiction()},
            {"note", c.note}};
}

CheckResult check_from_json(const json& j, const std::string& where) {
    allow_only(j, where, {"name", "status", "margin", "tolerance", "payload", "hypotheses", "contradiction", "note"});
    CheckResult c;
    c.name = at(j, where, "name").get<std::string>();
    c.status = enum_from(at(j, where, "status"), where + ".status", &check_status_from_string);
    c.margin = real_from(at(j, where, "margin"), where + ".margin");
    c.tolerance = real_from(at(j, where, "tolerance"), where + ".tolerance");
    c.payload = at(j, where, "payload");
    const json& hs = at(j, where, "hypotheses");
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const std::string w = where + ".hypotheses[" + std::to_string(k) + "]";
        allow_only(hs[k], w, {"name", "met", "detail"});
        c.hypotheses.push_back({at(hs[k], w, "name").get<std::string>(), at(hs[k], w, "met").get<bool>(),
                                at(hs[k], w, "detail").get<std::string>()});
    }
    c.note = at(j, where, "note").get<std::string>();
    return c;
}

json to_json(const Spectrum& s) {
    return {{"eigenvalues", cvector_to_json(s.eigenvalues)},
            {"spectral_radius", real_json(s.spectral_radius)},
            {"solver_tolerance", real_json(s.solver_tolerance)}};
}

json to_json(const AnalysisReport& r) {
    json cls = json::array(), checks = json::array(), decay = json::object();
    for (const auto& v : r.classification) cls.push_back(to_json(v));
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    for (const auto& [k, v] : r.decay_sequences) decay[k] = reals_json(v);
    return {{"schema", std::string(report_schema_version)},
            {"operator_id", r.operator_id},
            {"model_descriptor", r.model_descriptor},
            {"classification", cls},
            {"not_classifiable", r.not_classifiable},
            {"spectrum", r.spectrum ? to_json(*r.spectrum) : json(nullptr)},
            {"checks", checks},
            {"decay_sequences", decay},
            {"seed", r.seed},
            {"versions", r.versions},
            {"contradictions", r.contradictions},
            {"solver_failures", r.solver_failures},
            {"notes", r.notes}};
}

AnalysisReport report_from_json(const json& j) {
    const std::string w = "report";
    allow_only(j, w, {"schema", "operator_id", "model_descriptor", "classification", "not_classifiable",
                      "spectrum", "checks", "decay_sequences", "seed", "versions", "contradictions",
                      "solver_failures", "notes"});
    if (at(j, w, "schema") != report_schema_version)
        throw SchemaError(w + ".schema", "unsupported report schema");
    AnalysisReport r;
    try {
        r.operator_id = at(j, w, "operator_id").get<std::string>();
        r.model_descriptor = at(j, w, "model_descriptor");
        const json& cls = at(j, w, "classification");
        for (std::size_t k = 0; k < cls.size(); ++k)
            r.classification.push_back(verdict_from_json(cls[k], w + ".classification[" + std::to_string(k) + "]"));
        r.not_classifiable = at(j, w, "not_classifiable").get<bool>();
        if (const json& s = at(j, w, "spectrum"); !s.is_null()) {
            allow_only(s, w + ".spectrum", {"eigenvalues", "spectral_radius", "solver_tolerance"});
            Spectrum sp;
            sp.eigenvalues = cvector_from_json(at(s, w + ".spectrum", "eigenvalues"), w + ".spectrum.eigenvalues");
            sp.spectral_radius = real_from(at(s, w + ".spectrum", "spectral_radius"), w + ".spectrum.spectral_radius");
            sp.solver_tolerance = real_from(at(s, w + ".spectrum", "solver_tolerance"), w + ".spectrum.solver_tolerance");
            r.spectrum = std::move(sp);
        }
        const json& checks = at(j, w, "checks");
        for (std::size_t k = 0; k < checks.size(); ++k)
            r.checks.push_back(check_from_json(checks[k], w + ".checks[" + std::to_string(k) + "]"));
        for (const auto& [k, v] : at(j, w, "decay_sequences").items())
            r.decay_sequences[k] = reals_from(v, w + ".decay_sequences." + k);
        r.seed = at(j, w, "seed").get<std::uint64_t>();
        r.versions = at(j, w, "versions").get<std::map<std::string, std::string>>();
        r.contradictions = strings_from(at(j, w, "contradictions"), w + ".contradictions");
        r.solver_failures = strings_from(at(j, w, "solver_failures"), w + ".solver_failures");
        r.notes = strings_from(at(j, w, "notes"), w + ".notes");
    } catch (const json::exception& e) {
        throw SchemaError(w, e.what());
    }
    return r;
}

// ------------------------------------------------------------------ run

AnalysisReport run_classify(const ModelInput& input, const RunOptions& options) {
    return Runner(input, options).run();
}

std::vector<std::string> expectation_mismatches(const AnalysisReport& r, const Expectations& e) {
    std::vector<std::string> out;
    for (const auto& [notion, status] : e.verdicts) {
        const auto* v = r.verdict(notion);
        if (!v)
            out.push_back(to_string(notion) + ": missing, expected " + to_string(status));
        else if (v->status != status)
            out.push_back(to_string(notion) + ": " + to_string(v->status) + ", expected " + to_string(status));
    }
    for (const auto& [name, status] : e.checks) {
        const auto* c = r.check(name);
        if (!c)
            out.push_back(name + ": missing, expected " + to_string(status));
        else if (c->status != status)
            out.push_back(name + ": " + to_string(c->status) + ", expected " + to_string(status));
    }
    if (e.not_classifiable != r.not_classifiable)
        out.push_back(std::string("not_classifiable: ") + (r.not_classifiable ? "true" : "false") +
                      ", expected " + (e.not_classifiable ? "true" : "false"));
    return out;
}

int exit_code(const AnalysisReport& r) {
    if (!r.contradictions.empty()) return exit_contradiction;
    if (!r.solver_failures.empty()) return exit_solver_failure;
    return exit_ok;
}

std::vector<OrbitRow> orbit_table(const OperatorModel& t, const LatticeVector& x, unsigned horizon) {
    if (x.size() != dimension(t))
        throw DimensionMismatch("orbit: vector has " + std::to_string(x.size()) + " entries, model dimension is " +
                                std::to_string(dimension(t)));
    const double spr = model_spectral_radius(t);
    const Complex scale = spr > 0.0 ? 1.0 / spr : 1.0;
    std::vector<OrbitRow> rows;
    LatticeVector y = x;
    for (unsigned n = 0; n <= horizon; ++n) {
        rows.push_back({n, cone_distance(y), norm_value(y)});
        if (n < horizon) y = scale * evpos::apply(t, y);
    }
    return rows;
}

}  // namespace evpos
