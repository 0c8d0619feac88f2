#include "evpos/errors.hpp"
#include "evpos/rates.hpp"
#include "evpos/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace evpos {
namespace {

std::vector<double> geometric(std::size_t len) {
    std::vector<double> a(len);
    for (std::size_t n = 0; n < len; ++n) a[n] = std::ldexp(1.0, -static_cast<int>(n));
    return a;
}

std::vector<double> harmonic(std::size_t len) {
    std::vector<double> a(len);
    for (std::size_t n = 0; n < len; ++n) a[n] = 1.0 / static_cast<double>(n + 1);
    return a;
}

TEST(Rearrangement, Example) {
    EXPECT_EQ(decreasing_rearrangement({0, 3, 1, 3}), (std::vector<double>{3, 3, 1, 0}));
}

TEST(Rearrangement, SortedInputUnchanged) {
    const std::vector<double> a{5, 4, 4, 1, 0};
    EXPECT_EQ(decreasing_rearrangement(a), a);
}

TEST(Rearrangement, MultisetPreservedAndIdempotent) {
    CounterRng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + static_cast<std::size_t>(rng.uniform_int(0, 40)));
        for (auto& v : a) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform();
        const auto s = decreasing_rearrangement(a);
        EXPECT_TRUE(std::is_permutation(a.begin(), a.end(), s.begin(), s.end()));
        EXPECT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
        EXPECT_EQ(decreasing_rearrangement(s), s);
    }
}

TEST(Rearrangement, RejectsNegativeEntry) {
    EXPECT_THROW((void)decreasing_rearrangement({1.0, -0.5}), DomainError);
}

TEST(Rearrangement, DominatesWeightedSums) {
    CounterRng rng(2);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> a(1 + static_cast<std::size_t>(rng.uniform_int(0, 63)));
        for (auto& v : a) v = rng.uniform();
        const double r = 1.0 + rng.uniform(0.01, 2.0);
        const auto s = decreasing_rearrangement(a);
        double lhs = 0, rhs = 0, w = 1.0 / r;
        for (std::size_t n = 0; n < a.size(); ++n, w /= r) {
            lhs += a[n] * w;
            rhs += s[n] * w;
        }
        EXPECT_LE(lhs, rhs * (1 + 1e-12));
    }
}

TEST(Governs, HarmonicMajorantOfGeometric) {
    const std::size_t len = 32;
    // oracle: sup_n 2^-n (n + 1)
    double c_oracle = 0.0;
    for (std::size_t n = 0; n < len; ++n) c_oracle = std::max(c_oracle, std::ldexp(1.0, -static_cast<int>(n)) * (n + 1.0));
    EXPECT_DOUBLE_EQ(c_oracle, 1.0);
    auto a = geometric(len);
    std::reverse(a.begin(), a.end());
    const auto g = governs(MajorantSequence(harmonic(len)), DecaySequence(a));
    ASSERT_TRUE(g.governed);
    EXPECT_NEAR(g.c, 1.0, 1e-12);
}

TEST(Governs, ZeroSequence) {
    const auto g = governs(MajorantSequence(harmonic(8)), DecaySequence(std::vector<double>(8, 0.0)));
    ASSERT_TRUE(g.governed);
    EXPECT_EQ(g.c, 0.0);
}

TEST(Governs, IdealMembershipFails) {
    std::vector<double> f(10, 0.0), a(10, 0.0);
    for (int n = 0; n <= 5; ++n) f[n] = 1.0;
    for (int n = 0; n <= 6; ++n) a[n] = 0.5;
    const auto g = governs(MajorantSequence(f), DecaySequence(a));
    EXPECT_FALSE(g.governed);
    EXPECT_EQ(g.index, 6u);
}

TEST(Governs, LengthMismatch) {
    EXPECT_THROW((void)governs(MajorantSequence(harmonic(4)), DecaySequence(harmonic(5))), DimensionMismatch);
}

TEST(Governs, ConstantIsMinimal) {
    CounterRng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t len = 2 + static_cast<std::size_t>(rng.uniform_int(0, 30));
        std::vector<double> f(len), a(len);
        for (auto& v : f) v = rng.uniform(0.1, 1.0);
        std::sort(f.rbegin(), f.rend());
        for (auto& v : a) v = rng.uniform();
        const auto g = governs(MajorantSequence(f), DecaySequence(a));
        ASSERT_TRUE(g.governed);
        const auto s = decreasing_rearrangement(a);
        bool tight = false;
        for (std::size_t n = 0; n < len; ++n) {
            EXPECT_LE(s[n], g.c * f[n] * (1 + 1e-12));
            tight = tight || std::abs(s[n] - g.c * f[n]) <= 1e-12 * std::max(1.0, s[n]);
        }
        EXPECT_TRUE(tight);
    }
}

TEST(Summability, GeometricIsSummable) {
    const auto rep = summability_report(DecaySequence(geometric(200)), {PowerRate{1.0}});
    ASSERT_EQ(rep.entries.size(), 1u);
    EXPECT_EQ(rep.entries[0].trend, Trend::Summable);
    EXPECT_NEAR(rep.entries[0].partial_sums.back(), 2.0, 1e-6);
}

TEST(Summability, HarmonicDiverges) {
    const auto rep = summability_report(DecaySequence(harmonic(200)), {PowerRate{1.0}});
    EXPECT_EQ(rep.entries[0].trend, Trend::Divergent);
    // partial sums follow log(n + 1) + gamma
    const double h = rep.entries[0].partial_sums.back();
    EXPECT_NEAR(h, std::log(200.0) + 0.5772156649, 0.01);
}

TEST(Summability, HarmonicSquaredIsSummable) {
    const std::size_t len = 200;
    const auto rep = summability_report(DecaySequence(harmonic(len)), {PowerRate{2.0}});
    EXPECT_EQ(rep.entries[0].trend, Trend::Summable);
    const double tail = 1.0 / static_cast<double>(len);
    EXPECT_NEAR(rep.entries[0].partial_sums.back(), std::numbers::pi * std::numbers::pi / 6.0, tail);
}

TEST(Summability, ThresholdRateIsDiagnostic) {
    const auto rep = summability_report(DecaySequence(geometric(50)), {ThresholdRate{0.1}});
    EXPECT_TRUE(rep.entries[0].diagnostic_only);
    EXPECT_TRUE(rep.lp_heuristic);
}

TEST(Summability, LpExponentOfPowerLaw) {
    std::vector<double> a(200);
    for (std::size_t n = 0; n < a.size(); ++n) a[n] = std::pow(n + 1.0, -0.5);
    const auto rep = summability_report(DecaySequence(a), {});
    ASSERT_TRUE(rep.lp_exponent.has_value());
    EXPECT_NEAR(*rep.lp_exponent, 2.0, 0.1);
}

TEST(RateFunction, Validation) {
    EXPECT_THROW(validate(PowerRate{0.0}), DomainError);
    EXPECT_THROW(validate(ThresholdRate{-1.0}), DomainError);
    EXPECT_THROW(validate(TableRate{{{0.0, 1.0}, {1.0, 0.5}}}), DomainError);
    EXPECT_NO_THROW(validate(TableRate{{{0.0, 0.0}, {1.0, 2.0}}}));
    EXPECT_TRUE(strictly_positive(PowerRate{0.5}));
    EXPECT_FALSE(strictly_positive(ThresholdRate{0.5}));
    EXPECT_DOUBLE_EQ(evaluate(TableRate{{{0.0, 0.0}, {1.0, 2.0}}}, 0.25), 0.5);
}

TEST(Alpha, GeometricClosedForm) {
    const auto v = alpha(MajorantSequence(geometric(200)), 2.0);
    EXPECT_NEAR(v.value, 2.0 / 3.0, 1e-12);
    EXPECT_LT(v.tail_bound, 1e-12);
}

TEST(Alpha, SingleTerm) {
    std::vector<double> f(20, 0.0);
    f[0] = 1.0;
    for (double r : {1.01, 2.0, 7.5}) EXPECT_NEAR(alpha(MajorantSequence(f), r).value, 1.0 / r, 1e-15);
}

TEST(Alpha, RejectsRAtMostOne) {
    EXPECT_THROW((void)alpha(MajorantSequence(geometric(5)), 1.0), DomainError);
}

TEST(Alpha, ScaledValueVanishesAsRDecreasesToOne) {
    const MajorantSequence f(geometric(200));
    double previous = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 12; ++j) {
        const double r = 1.0 + std::ldexp(1.0, -j);
        const double s = (r - 1.0) * alpha(f, r).value;
        EXPECT_NEAR(s, (r - 1.0) * 2.0 / (2.0 * r - 1.0), 1e-12);
        EXPECT_LT(s, previous);
        previous = s;
    }
    EXPECT_LT(previous, 1e-3);
}

TEST(Alpha, DecreasingInR) {
    const MajorantSequence f(harmonic(100));
    double previous = std::numeric_limits<double>::infinity();
    for (double r = 1.05; r < 4.0; r += 0.25) {
        const double v = alpha(f, r).value;
        EXPECT_LT(v, previous);
        previous = v;
    }
}

TEST(FamilyReduce, SingleSequence) {
    const std::vector<double> f{4.0, 2.0, 1.0};
    const auto g = countable_family_reduce({MajorantSequence(f)});
    for (std::size_t n = 0; n < f.size(); ++n) EXPECT_DOUBLE_EQ(g.values()[n], f[n] / 4.0 * 0.5);
}

TEST(FamilyReduce, TwoCopies) {
    const std::vector<double> f{4.0, 2.0, 1.0};
    const auto g = countable_family_reduce({MajorantSequence(f), MajorantSequence(f)});
    for (std::size_t n = 0; n < f.size(); ++n) EXPECT_DOUBLE_EQ(g.values()[n], 0.75 * f[n] / 4.0);
}

TEST(FamilyReduce, GovernsEveryInput) {
    CounterRng rng(5);
    std::vector<MajorantSequence> fs;
    for (int j = 0; j < 6; ++j) {
        std::vector<double> f(40);
        for (auto& v : f) v = rng.uniform(0.01, 3.0);
        std::sort(f.rbegin(), f.rend());
        fs.emplace_back(f);
    }
    const auto reduced = countable_family_reduce(fs);
    for (std::size_t j = 0; j < fs.size(); ++j) {
        const auto g = governs(reduced, DecaySequence(fs[j].values()));
        ASSERT_TRUE(g.governed);
        EXPECT_LE(g.c, std::ldexp(1.0, static_cast<int>(j) + 1) * fs[j].max() * (1 + 1e-12));
    }
    EXPECT_THROW((void)countable_family_reduce({MajorantSequence(std::vector<double>(4, 0.0))}), DomainError);
}

}  // namespace
}  // namespace evpos
