#include "evpos/catalog.hpp"
#include "evpos/errors.hpp"
#include "evpos/positivity.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace evpos {
namespace {

using N = Notion;
using V = VerdictStatus;

OperatorModel positive_matrix() { return DenseModel{make_positive_random(5, 1), Norm::ell1()}; }

// d+ of a scalar in the ell1 lattice C: |Im z| + (Re z)^-
double scalar_d_plus(Complex z) { return std::abs(z.imag()) + std::max(-z.real(), 0.0); }

TEST(PositiveOperator, Identity) {
    EXPECT_TRUE(is_positive_operator(DenseModel{ComplexMatrix::identity(3), Norm::ell1()}));
}

TEST(PositiveOperator, RotatingDiagonalIsNotReal) {
    EXPECT_FALSE(is_positive_operator(rotating_diagonal_model()));
}

TEST(PositiveOperator, IndividualNotUniformHasNoPositivePower) {
    const OperatorModel t = individual_not_uniform_model();
    EXPECT_FALSE(is_positive_operator(t));
    for (unsigned n = 1; n <= 30; ++n) EXPECT_FALSE(power_is_positive(t, n)) << n;
}

TEST(UniformEventual, PositiveMatrixFromStart) {
    const auto v = uniform_eventual(positive_matrix());
    EXPECT_EQ(v.status, V::Confirmed);
    EXPECT_EQ(v.n0, 0u);
}

TEST(UniformEventual, IndividualNotUniformRefutedByHatFamily) {
    const auto v = uniform_eventual(individual_not_uniform_model());
    ASSERT_EQ(v.status, V::Refuted);
    EXPECT_EQ(v.witness.at("kind"), "hat_family");
    EXPECT_EQ(v.witness.at("per_power").size(), 30u);
    for (const auto& w : v.witness.at("per_power")) {
        EXPECT_TRUE(w.at("monotone_in_epsilon").get<bool>());
        EXPECT_LT(w.at("value").at(0).get<double>(), 0.0);
    }
}

TEST(UniformEventual, GeneratedInstancesWithinBound) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const auto inst = make_eventually_positive(2 + seed % 7, 0.3 + 0.03 * static_cast<double>(seed), seed);
        const auto v = uniform_eventual(DenseModel{inst.matrix, Norm::ell1()});
        ASSERT_EQ(v.status, V::Confirmed) << seed;
        EXPECT_LE(v.n0, inst.n0_bound) << seed;
        // n0 is minimal: the power just below it is not positive
        if (v.n0 > 0) EXPECT_FALSE(power_is_positive(DenseModel{inst.matrix, Norm::ell1()}, v.n0 - 1));
    }
}

TEST(IndividualEventual, IndividualNotUniformOnSeededFunctions) {
    const RankKModel r = individual_not_uniform_model();
    const auto tests = ConeTestSet::seeded_random(r.dimension(), r.space(), 20, 7);
    ASSERT_EQ(tests.vectors.size(), 20u);
    const auto v = individual_eventual(r, tests);
    EXPECT_EQ(v.status, V::Confirmed);
    EXPECT_LE(v.n0, 30u);
}

TEST(IndividualEventual, WeakNotIndividualRefutedAnalytically) {
    const RankKModel r = weak_not_individual_model();
    const auto v = individual_eventual(r, ConeTestSet::canonical(r.dimension(), r.space()));
    ASSERT_EQ(v.status, V::Refuted);
    EXPECT_EQ(v.witness.at("kind"), "analytic_points");
    EXPECT_EQ(v.witness.at("per_power").size(), 30u);
}

TEST(IndividualEventual, PositiveMatrix) {
    const auto v = individual_eventual(positive_matrix(), ConeTestSet::canonical(5, Norm::ell1()));
    EXPECT_EQ(v.status, V::Confirmed);
    EXPECT_EQ(v.n0, 0u);
}

TEST(WeakEventual, WeakNotIndividualOnSeededPairs) {
    const RankKModel r = weak_not_individual_model();
    const auto v = weak_eventual(r, ConeTestSet::seeded_random(r.dimension(), r.space(), 20, 9));
    EXPECT_EQ(v.status, V::Confirmed);
}

TEST(WeakEventual, AlternatingDiagonalPair) {
    const std::size_t n = 50;
    const auto e = LatticeVector::basis(n, n - 1, Norm::ell1());
    const auto v = weak_eventual(alternating_diagonal_model(n), ConeTestSet::user({e}, {e}));
    EXPECT_EQ(v.status, V::Refuted);
}

TEST(WeakEventual, PositiveMatrix) {
    const auto v = weak_eventual(positive_matrix(), ConeTestSet::canonical(5, Norm::ell1()));
    EXPECT_EQ(v.status, V::Confirmed);
    EXPECT_EQ(v.n0, 0u);
}

TEST(DeltaN, RotatingDiagonalMatchesExtremePointOracle) {
    const OperatorModel t = rotating_diagonal_model();
    for (unsigned n = 0; n <= 40; ++n) {
        const auto d = delta_n(t, n, ExtremePoints{});
        EXPECT_TRUE(d.exact);
        const double oracle = std::max(scalar_d_plus(1.0), scalar_d_plus(std::pow(Complex(0, 0.5), static_cast<int>(n))));
        EXPECT_NEAR(d.value, oracle, 1e-12) << n;
        // (i/2)^n is a positive real when 4 divides n
        EXPECT_NEAR(d.value, n % 4 == 0 ? 0.0 : std::ldexp(1.0, -static_cast<int>(n)), 1e-12) << n;
    }
}

TEST(DeltaN, PositiveMatrixIsZero) {
    for (unsigned n = 0; n <= 10; ++n) EXPECT_EQ(delta_n(positive_matrix(), n, ExtremePoints{}).value, 0.0);
}

TEST(DeltaN, AlternatingDiagonalOddPowers) {
    const OperatorModel t = alternating_diagonal_model(50);
    for (unsigned n = 1; n <= 21; n += 2) {
        const auto d = delta_n(t, n, ExtremePoints{});
        EXPECT_NEAR(d.value, 1.0, 1e-12);
        EXPECT_NEAR(std::abs(d.maximizer[49] - 1.0), 0.0, 0.0);
    }
}

TEST(DeltaN, MonteCarloIsLowerBoundAndMaximizerAttains) {
    CounterRng rng(4);
    for (int trial = 0; trial < 6; ++trial) {
        const std::size_t n = 2 + trial;
        const ComplexMatrix a = testing::random_matrix(rng, n);
        for (const Norm& norm : {Norm::ell1(), Norm::ell_inf()}) {
            const OperatorModel t = DenseModel{a, norm};
            const double spr = model_spectral_radius(t);
            for (unsigned k : {1u, 3u}) {
                const auto exact = delta_n(t, k, ExtremePoints{});
                const auto mc = delta_n(t, k, MonteCarlo{64, 5, 3});
                EXPECT_FALSE(mc.exact);
                EXPECT_LE(mc.value, exact.value * (1 + 1e-12) + 1e-15);
                const auto img = power_apply(t, k, exact.maximizer);
                EXPECT_NEAR(cone_distance(img) / std::pow(spr, k), exact.value, 1e-10 * (1 + exact.value));
                EXPECT_LE(norm_value(exact.maximizer), 1.0 + 1e-12);
            }
        }
    }
}

TEST(DeltaN, StrategyUnavailable) {
    const OperatorModel big = DenseModel{ComplexMatrix::identity(21), Norm::ell_inf()};
    EXPECT_THROW((void)delta_n(big, 1, ExtremePoints{}), StrategyUnavailable);
    const OperatorModel l2 = DenseModel{ComplexMatrix::identity(3), Norm::ell2()};
    EXPECT_THROW((void)delta_n(l2, 1, ExtremePoints{}), StrategyUnavailable);
    EXPECT_NO_THROW((void)delta_n(l2, 1, MonteCarlo{}));
}

TEST(ClassifyAsymptotic, RotatingDiagonalAllConfirmed) {
    const OperatorModel t = rotating_diagonal_model();
    const auto v = classify_asymptotic(t, 200, 1e-10, ConeTestSet::canonical(2, Norm::ell1()));
    for (const auto& x : v) EXPECT_EQ(x.status, V::Confirmed) << to_string(x.notion);
    EXPECT_EQ(v[0].decay.size(), 201u);
}

TEST(ClassifyAsymptotic, AlternatingDiagonalAllRefutedAtLastBasisVector) {
    const std::size_t n = 50;
    const OperatorModel t = alternating_diagonal_model(n);
    const auto v = classify_asymptotic(t, 200, 1e-10, ConeTestSet::canonical(n, Norm::ell1()));
    for (const auto& x : v) EXPECT_EQ(x.status, V::Refuted) << to_string(x.notion);
    const auto e = v[0].witness.at("vector");
    for (std::size_t k = 0; k < n; ++k)
        EXPECT_EQ(e.at(k).at(0).get<double>(), k == n - 1 ? 1.0 : 0.0);
    EXPECT_EQ(v[1].witness.at("test_vector"), "e_50");
}

TEST(ClassifyAsymptotic, NilpotentShiftNotClassifiable) {
    EXPECT_THROW((void)classify_asymptotic(negated_shift_model(), 200, 1e-10, ConeTestSet::canonical(16, Norm::ell1())),
                 NotClassifiable);
}

TEST(ClassifyAsymptotic, ScaleInvariant) {
    CounterRng rng(6);
    std::vector<ComplexMatrix> cases{rotating_diagonal_model().matrix, make_cyclic_block(3, 2, 0),
                                     make_eventually_positive(4, 0.4, 2).matrix};
    cases.push_back(testing::random_matrix(rng, 4));
    for (const auto& a : cases) {
        const auto tests = ConeTestSet::canonical(a.rows(), Norm::ell1());
        const auto v1 = classify_asymptotic(DenseModel{a, Norm::ell1()}, 120, 1e-10, tests);
        const auto v2 = classify_asymptotic(DenseModel{a * Complex(3.7), Norm::ell1()}, 120, 1e-10, tests);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(v1[k].status, v2[k].status);
    }
}

TEST(PositiveOperators, AllSixConfirmedFromStart) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const OperatorModel t = DenseModel{make_positive_random(3 + seed, seed), Norm::ell1()};
        const auto tests = ConeTestSet::canonical(dimension(t), Norm::ell1());
        std::vector<PositivityVerdict> all{uniform_eventual(t), individual_eventual(t, tests), weak_eventual(t, tests)};
        for (auto& v : classify_asymptotic(t, 200, 1e-10, tests)) all.push_back(v);
        for (const auto& v : all) {
            EXPECT_EQ(v.status, V::Confirmed) << to_string(v.notion);
            EXPECT_EQ(v.n0, 0u) << to_string(v.notion);
        }
    }
}

TEST(Hierarchy, DetectsConfirmedAboveRefuted) {
    auto make = [](N n, V s) {
        PositivityVerdict v;
        v.notion = n;
        v.status = s;
        return v;
    };
    EXPECT_TRUE(hierarchy_violations({make(N::UniformEventual, V::Confirmed), make(N::IndividualEventual, V::Undetermined),
                                      make(N::WeakEventual, V::Confirmed)})
                    .empty());
    EXPECT_EQ(hierarchy_violations({make(N::UniformEventual, V::Confirmed), make(N::WeakEventual, V::Refuted)}).size(), 1u);
    EXPECT_EQ(hierarchy_violations({make(N::IndividualAsymptotic, V::Confirmed), make(N::WeakAsymptotic, V::Refuted)}).size(),
              1u);
    EXPECT_TRUE(hierarchy_violations({make(N::UniformEventual, V::Refuted), make(N::WeakEventual, V::Confirmed)}).empty());
}

TEST(ConeTestSet, CanonicalComposition) {
    const auto s = ConeTestSet::canonical(4, Norm::ell2(), 3);
    EXPECT_EQ(s.vectors.size(), 4u + 1u + 16u);
    for (const auto& v : s.vectors) {
        EXPECT_TRUE(is_positive(v.entries(), 0.0));
        EXPECT_GT(norm_value(v), 0.0);
        EXPECT_LE(norm_value(v), 1.0 + 1e-12);
    }
    EXPECT_THROW((void)ConeTestSet::user({LatticeVector({-1.0, 1.0}, Norm::ell1())}, {}), DomainError);
}

}  // namespace
}  // namespace evpos
