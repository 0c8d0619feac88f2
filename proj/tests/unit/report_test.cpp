#include "evpos/catalog.hpp"
#include "evpos/errors.hpp"
#include "evpos/model_io.hpp"
#include "evpos/report.hpp"
#include "evpos/suite.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

namespace evpos {
namespace {

using nlohmann::json;

std::string schema_where(const std::function<void()>& f) {
    try {
        f();
    } catch (const SchemaError& e) {
        return e.where();
    }
    return "<no error>";
}

TEST(Rng, DeterministicAndSplittable) {
    CounterRng a(42), b(42);
    for (int k = 0; k < 100; ++k) EXPECT_EQ(a.next_u64(), b.next_u64());
    CounterRng s0 = CounterRng(42).split(0), s1 = CounterRng(42).split(1);
    int same = 0;
    for (int k = 0; k < 100; ++k) same += s0.next_u64() == s1.next_u64();
    EXPECT_EQ(same, 0);
    EXPECT_EQ(CounterRng::algorithm, "splitmix64-counter/v1");
}

TEST(Rng, Ranges) {
    CounterRng r(3);
    double mean = 0, var = 0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        const auto i = r.uniform_int(-2, 5);
        ASSERT_GE(i, -2);
        ASSERT_LE(i, 5);
        const double z = r.normal();
        mean += z;
        var += z * z;
    }
    mean /= n;
    var = var / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.05);
    EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(JsonInput, SyntaxErrorReportsPosition) {
    try {
        (void)parse_json_text("{\"n\": 2,\n \"entries\": [1, }", "m.json");
        FAIL();
    } catch (const SchemaError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
    }
}

TEST(JsonInput, MatrixRoundTrip) {
    CounterRng rng(1);
    const ComplexMatrix a = testing::random_matrix(rng, 3);
    EXPECT_EQ(matrix_from_json(matrix_to_json(a)), a);
    const auto b = matrix_from_json(json::parse(R"({"n": 2, "entries": [1, [0, 1], [2.5, -1], 0]})"));
    EXPECT_EQ(b(0, 1), Complex(0, 1));
    EXPECT_EQ(b(1, 0), Complex(2.5, -1));
}

TEST(JsonInput, SchemaErrorsNameTheField) {
    EXPECT_EQ(schema_where([] { (void)matrix_from_json(json::parse(R"({"n": 2, "entries": [1, 2, 3]})")); }),
              "matrix.entries");
    EXPECT_EQ(schema_where([] {
                  (void)model_from_json(json::parse(R"({"kind": "dense", "n": 1, "entries": [1], "bogus": 0})"));
              }),
              "model.bogus");
    EXPECT_EQ(schema_where([] { (void)model_from_json(json::parse(R"({"kind": "circulant"})")); }), "model.kind");
    EXPECT_EQ(schema_where([] {
                  (void)model_from_json(json::parse(
                      R"({"kind": "rank_k", "space": {"kind": "grid_sup_uniform", "count": 11},
                          "functions": [{"kind": "constant", "value": 1}, {"kind": "signed_power", "exponent": 1, "sign": 2}],
                          "functionals": []})"));
              }),
              "model.functions[1].sign");
    EXPECT_EQ(schema_where([] {
                  (void)vector_from_json(json::parse("[1, 2]"), Norm::ell1(), 3);
              }),
              "vector");
}

TEST(JsonInput, NonDiagonalRankKIsSchemaError) {
    const auto j = json::parse(R"({"kind": "rank_k", "space": {"kind": "grid_sup_uniform", "count": 11},
        "functions": [{"kind": "constant", "value": 1}, {"kind": "monomial", "degree": 2}],
        "functionals": [{"kind": "weighted_integral", "weight": {"kind": "constant", "value": 1}, "scale": 0.5},
                        {"kind": "weighted_integral", "weight": {"kind": "constant", "value": 1}, "scale": 0.5}]})");
    EXPECT_THROW((void)model_from_json(j), SchemaError);
}

TEST(JsonInput, BareMatrixIsDenseOnEllOne) {
    const auto t = model_from_json(json::parse(R"({"n": 2, "entries": [1, 0, 0, [0, 0.5]]})"));
    ASSERT_TRUE(std::holds_alternative<DenseModel>(t));
    EXPECT_EQ(space_norm(t), Norm::ell1());
}

TEST(JsonInput, CatalogModelsRoundTrip) {
    CounterRng rng(2);
    for (const auto& name : catalog_names()) {
        const auto e = catalog_entry(name);
        const json j = model_to_json(e.model);
        EXPECT_EQ(j.at("schema"), model_schema_version);
        const OperatorModel back = model_from_json(j);
        EXPECT_EQ(model_to_json(back), j) << name;
        const LatticeVector x(testing::random_vector(rng, dimension(e.model)), space_norm(e.model));
        EXPECT_LE(norm_value(evpos::apply(e.model, x) - evpos::apply(back, x)), 1e-12 * (1 + norm_value(evpos::apply(e.model, x)))) << name;
    }
}

TEST(Generators, SpecParsing) {
    const auto g = parse_generator_spec("eventually_positive:dim=5,gap=0.25,seed=9");
    EXPECT_EQ(g.kind, GeneratorSpec::Kind::EventuallyPositive);
    EXPECT_EQ(g.dim, 5u);
    EXPECT_DOUBLE_EQ(g.gap, 0.25);
    EXPECT_EQ(g.seed, 9u);
    EXPECT_EQ(parse_generator_spec(to_string(g)).dim, 5u);
    EXPECT_THROW((void)parse_generator_spec("triangular:dim=3"), SchemaError);
    EXPECT_THROW((void)parse_generator_spec("eventually_positive:dim=3,color=red"), SchemaError);
    EXPECT_THROW((void)input_from_generator(parse_generator_spec("eventually_positive:dim=3,gap=1.5")), DomainError);
}

TEST(Generators, EventuallyPositiveStructure) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t dim = 2 + seed % 10;
        const auto inst = make_eventually_positive(dim, 0.4, seed);
        EXPECT_NEAR(eigenvalues(inst.matrix).spectral_radius, 1.0, 1e-8);
        ComplexMatrix a = matrix_power(inst.matrix, inst.n0_bound);
        for (const auto& z : a.data()) {
            EXPECT_GT(z.real(), 0.0);
            EXPECT_LE(std::abs(z.imag()), 1e-12);
        }
        for (const auto& z : inst.right) EXPECT_TRUE(z.real() >= 0.5 && z.real() <= 1.5);
    }
    EXPECT_EQ(make_eventually_positive(4, 0.5, 3).matrix, make_eventually_positive(4, 0.5, 3).matrix);
}

TEST(Generators, CyclicBlockSpectrum) {
    for (unsigned k : {2u, 3u, 4u, 6u}) {
        const auto a = make_cyclic_block(k, 3, k);
        const auto spec = eigenvalues(a);
        const auto per = peripheral_spectrum(spec);
        EXPECT_EQ(per.size(), k);
    }
}

TEST(Report, DeterministicAndRoundTrips) {
    for (const std::string name : {"rem3.2b", "ex5.1", "ex3.5b", "cyclic_block"}) {
        const auto in = input_from_example(name);
        const auto r1 = run_classify(in);
        const auto r2 = run_classify(in);
        const std::string s1 = to_json(r1).dump(), s2 = to_json(r2).dump();
        EXPECT_EQ(s1, s2) << name;
        const AnalysisReport back = report_from_json(json::parse(s1));
        EXPECT_EQ(to_json(back).dump(), s1) << name;
        EXPECT_EQ(back.versions.at("schema"), report_schema_version);
    }
}

TEST(Report, EveryCheckAppearsOnce) {
    const auto r = run_classify(input_from_example("rem3.2b"));
    std::set<std::string> names;
    for (const auto& c : r.checks) EXPECT_TRUE(names.insert(c.name).second) << c.name;
    EXPECT_EQ(names, (std::set<std::string>{"cone_norm_attainment", "multiplicity_monotonicity", "peripheral_cyclicity",
                                            "positive_eigenvector", "power_bounded_estimate", "real_modulus_bound",
                                            "resolvent_estimate", "spr_in_spectrum", "uniform_error_decay"}));
}

TEST(Report, RejectsUnknownFields) {
    json j = to_json(run_classify(input_from_example("rem3.2b")));
    j["extra"] = 1;
    EXPECT_THROW((void)report_from_json(j), SchemaError);
}

TEST(Report, CatalogExpectations) {
    for (const std::string name : {"rem3.2b", "ex5.1", "ex3.5a", "ex3.5b", "cyclic_block", "eventually_positive"}) {
        const auto e = catalog_entry(name);
        const auto r = run_classify(input_from_example(name));
        EXPECT_TRUE(expectation_mismatches(r, e.expected).empty()) << name;
        EXPECT_TRUE(r.contradictions.empty()) << name;
        EXPECT_EQ(exit_code(r), exit_ok) << name;
        EXPECT_EQ(r.not_classifiable, e.expected.not_classifiable) << name;
    }
}

TEST(Report, SprFailureWithoutHypothesesIsNoContradiction) {
    const auto r = run_classify(input_from_example("ex5.1"));
    const CheckResult* c = r.check("spr_in_spectrum");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, CheckStatus::Fail);
    EXPECT_FALSE(c->contradiction());
    EXPECT_NE(c->note.find("hypotheses unmet"), std::string::npos);
}

TEST(Report, CyclicityFailureWithoutHypotheses) {
    ModelInput in{"signs", DenseModel{ComplexMatrix::diagonal(CVector{1.0, -1.0, Complex(0, 1)}), Norm::ell1()}, {}};
    const auto r = run_classify(in);
    const CheckResult* c = r.check("peripheral_cyclicity");
    ASSERT_NE(c, nullptr);
    EXPECT_EQ(c->status, CheckStatus::Fail);
    EXPECT_FALSE(c->contradiction());
    EXPECT_EQ(exit_code(r), exit_ok);
}

TEST(Report, ExitCodes) {
    AnalysisReport r;
    EXPECT_EQ(exit_code(r), exit_ok);
    r.solver_failures.push_back("x");
    EXPECT_EQ(exit_code(r), exit_solver_failure);
    r.solver_failures.clear();
    r.contradictions.push_back("y");
    EXPECT_EQ(exit_code(r), exit_contradiction);
}

TEST(Orbit, RotatingDiagonalTable) {
    const auto rows = orbit_table(rotating_diagonal_model(), LatticeVector::ones(2, Norm::ell1()), 8);
    ASSERT_EQ(rows.size(), 9u);
    for (const auto& row : rows) {
        const Complex z = std::pow(Complex(0, 0.5), static_cast<int>(row.n));
        EXPECT_NEAR(row.d_plus, std::abs(z.imag()) + std::max(-z.real(), 0.0), 1e-15);
        EXPECT_NEAR(row.norm, 1.0 + std::abs(z), 1e-15);
    }
}

TEST(Suite, SmallPropertySweepsPass) {
    SweepSizes s;
    s.vectors = 400;
    s.matrices = 60;
    s.triples = 60;
    s.sequences = 60;
    s.family_size = 6;
    for (const auto& p : property_sweeps(11, s)) {
        EXPECT_EQ(p.failures, 0u) << p.name << ": " << p.first_failure;
        EXPECT_GT(p.trials, 0u) << p.name;
    }
}

TEST(Suite, RandomInstancesAreSeeded) {
    const auto a = random_instance(7, 3), b = random_instance(7, 3), c = random_instance(7, 4);
    EXPECT_EQ(to_string(a.spec), to_string(b.spec));
    EXPECT_NE(to_string(a.spec), to_string(c.spec));
    EXPECT_GE(a.spec.dim, random_min_dimension);
    EXPECT_LE(a.spec.dim, random_max_dimension);
}

TEST(Suite, ShortRandomSuiteHasNoContradictions) {
    const auto s = run_suite(SuiteKind::Random, 7, 5);
    EXPECT_EQ(s.entries.size(), 5u);
    EXPECT_EQ(s.contradictions, 0u);
    EXPECT_EQ(s.solver_failures, 0u);
    EXPECT_EQ(s.mismatches, 0u);
    EXPECT_EQ(exit_code(s), exit_ok);
    EXPECT_EQ(to_json(s).at("entries").size(), 5u);
}

TEST(Suite, CatalogSuiteMeetsEveryExpectation) {
    const auto s = run_suite(SuiteKind::Paper, 3);
    EXPECT_EQ(s.entries.size(), 6u);
    for (const auto& e : s.entries) EXPECT_TRUE(e.mismatches.empty()) << e.label;
    EXPECT_EQ(s.contradictions, 0u);
    EXPECT_EQ(exit_code(s), exit_ok);
}

TEST(Suite, PropertiesSeed42) {
    const auto s = run_suite(SuiteKind::Properties, 42, 10000);
    EXPECT_EQ(s.contradictions, 0u);
    for (const auto& p : s.properties) EXPECT_EQ(p.failures, 0u) << p.name << ": " << p.first_failure;
}

TEST(Suite, RandomSeed7) {
    const auto s = run_suite(SuiteKind::Random, 7, 100);
    EXPECT_EQ(s.entries.size(), 100u);
    EXPECT_EQ(s.contradictions, 0u);
    EXPECT_EQ(s.mismatches, 0u);
}

TEST(Generators, SmallInstanceMeetsItsBound) {
    const auto inst = make_eventually_positive(2, 0.5, 5);
    ModelInput in{"small", DenseModel{inst.matrix, Norm::ell1()}, {}};
    const auto r = run_classify(in);
    const auto* ue = r.verdict(Notion::UniformEventual);
    ASSERT_NE(ue, nullptr);
    ASSERT_TRUE(ue->confirmed());
    EXPECT_LE(ue->n0, inst.n0_bound);
    // primal eigenvector along v
    const auto pe = positive_eigenvector(inst.matrix, Norm::ell1());
    const Complex ratio = pe.primal[0] / inst.right[0];
    for (std::size_t k = 0; k < 2; ++k) EXPECT_LE(std::abs(pe.primal[k] - ratio * inst.right[k]), 1e-8 * std::abs(ratio));
}

TEST(Generators, CatalogEntriesThroughGeneratorSpecs) {
    const auto a = run_classify(input_from_generator(parse_generator_spec("paper_example:name=ex2.2a")));
    EXPECT_TRUE(a.verdict(Notion::IndividualEventual)->confirmed());
    EXPECT_TRUE(a.verdict(Notion::UniformEventual)->refuted());
    const auto b = run_classify(input_from_generator(parse_generator_spec("paper_example:name=rem3.2b")));
    for (Notion n : {Notion::UniformAsymptotic, Notion::IndividualAsymptotic, Notion::WeakAsymptotic})
        EXPECT_TRUE(b.verdict(n)->confirmed()) << to_string(n);
    EXPECT_EQ(b.check("spr_in_spectrum")->status, CheckStatus::Pass);
    const auto c = run_classify(input_from_generator(parse_generator_spec("paper_example:name=ex5.1,size=50")));
    for (Notion n : {Notion::UniformAsymptotic, Notion::IndividualAsymptotic, Notion::WeakAsymptotic})
        EXPECT_TRUE(c.verdict(n)->refuted()) << to_string(n);
    EXPECT_EQ(c.check("spr_in_spectrum")->status, CheckStatus::Fail);
    EXPECT_TRUE(c.contradictions.empty());
}

}  // namespace
}  // namespace evpos
