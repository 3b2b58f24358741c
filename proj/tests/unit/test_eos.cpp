#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "vll/eos.hpp"
#include "vll/error.hpp"

using namespace vll;

namespace {

bool throws_domain(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind() == ErrorKind::domain;
    }
    return false;
}

} // namespace

TEST(Pressure, Examples) {
    EXPECT_DOUBLE_EQ(pressure(1.0, {2.5, 1.4}), 2.5);
    EXPECT_DOUBLE_EQ(pressure(3.0, {1.0, 2.0}), 9.0);
    EXPECT_TRUE(throws_domain([] { pressure(-1.0, {}); }));
}

TEST(EntropyPotential, Examples) {
    EXPECT_EQ(entropy_H(0.0, {}), 0.0);
    EXPECT_DOUBLE_EQ(entropy_H(2.0, {1.0, 2.0}), 4.0);
    EXPECT_TRUE(throws_domain([] { entropy_H(-0.5, {}); }));
    const EosParams eos{1.3, 1.7};
    for (double rho = 0.1; rho <= 10.0; rho += 0.1) {
        const double p = pressure(rho, eos);
        EXPECT_NEAR(rho * entropy_dH(rho, eos) - entropy_H(rho, eos) - p, 0.0, 1e-14 * p);
        EXPECT_NEAR(entropy_d2H(rho, eos), dpressure(rho, eos) / rho, 1e-14 * entropy_d2H(rho, eos));
    }
}

TEST(RelativeEntropy, Examples) {
    const EosParams quad{1.0, 2.0};
    EXPECT_EQ(relative_entropy(1.3, 1.3, {}), 0.0);
    EXPECT_NEAR(relative_entropy(2.0, 1.0, quad), 1.0, 1e-15);
    EXPECT_NEAR(relative_entropy(0.0, 1.0, quad), 1.0, 1e-15);
    EXPECT_TRUE(throws_domain([] { relative_entropy(1.0, 0.0, {}); }));
}

TEST(RelativeEntropy, NonnegativeAndZeroOnlyAtEquality) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 5.0), r(0.1, 5.0), g(1.05, 3.0);
    for (int k = 0; k < 5000; ++k) {
        const EosParams eos{1.0, g(rng)};
        const double a = u(rng), b = r(rng);
        const double h = relative_entropy(a, b, eos);
        EXPECT_GE(h, 0.0);
        if (a != b) EXPECT_GT(h, 0.0) << a << " " << b;
    }
}

TEST(RelativeEntropy, LocallyQuadratic) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r(0.2, 5.0), s(-1.0, 1.0), g(1.05, 3.0);
    for (int k = 0; k < 5000; ++k) {
        const EosParams eos{r(rng), g(rng)};
        const double base = r(rng);
        const double rho = base * (1.0 + 1e-3 * s(rng));
        if (rho == base) continue;
        const double quad = 0.5 * entropy_d2H(base, eos) * (rho - base) * (rho - base);
        const double ratio = relative_entropy(rho, base, eos) / quad;
        EXPECT_GE(ratio, 0.99);
        EXPECT_LE(ratio, 1.01);
    }
}

TEST(RelativeEntropy, CoerciveOnCompactRange) {
    // kappa over r in [0.5, 2] and rho in [0, 20].
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> r(0.5, 2.0), rho(0.0, 20.0);
    for (double gamma : {1.4, 2.0, 5.0 / 3.0}) {
        const EosParams eos{1.0, gamma};
        double kappa = infinity;
        for (int k = 0; k < 20000; ++k) {
            const double a = rho(rng), b = r(rng);
            const double d = std::abs(a - b);
            if (d == 0.0) continue;
            const double lower = d < 1.0 ? d * d : std::pow(d, gamma);
            kappa = std::min(kappa, relative_entropy(a, b, eos) / lower);
        }
        EXPECT_GT(kappa, 0.0) << gamma;
    }
}

TEST(Pressure, StrictlyConvex) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.01, 10.0), g(1.01, 3.0);
    for (int k = 0; k < 5000; ++k) {
        const EosParams eos{1.0, g(rng)};
        const double a = u(rng), b = u(rng);
        if (std::abs(a - b) < 1e-3) continue;
        EXPECT_LT(pressure(0.5 * (a + b), eos), 0.5 * (pressure(a, eos) + pressure(b, eos)));
        if (eos.gamma >= 2.0) EXPECT_GT(d2pressure(a, eos), 0.0);
    }
}

TEST(Equivalence, EqualFieldsGiveZeroSides) {
    const Grid g = make_grid(1.0, 16);
    const Field r(16, 1.0);
    const auto rep = entropy_equivalence_check(g, r, r, {});
    EXPECT_EQ(rep.integral_H, 0.0);
    EXPECT_EQ(rep.lgamma_norm, 0.0);
    EXPECT_TRUE(rep.holds);
}

TEST(Equivalence, HalfStepAtGammaTwo) {
    const Grid g = make_grid(1.0, 16);
    Field r(16, 1.0), rho(16, 1.0);
    for (std::size_t i = 0; i < 8; ++i) rho[i] += 0.5;
    const auto rep = entropy_equivalence_check(g, rho, r, {1.0, 2.0});
    EXPECT_NEAR(rep.integral_H, 0.125, 1e-15);
    EXPECT_NEAR(rep.quadratic_part, 0.125, 1e-15);
    EXPECT_EQ(rep.power_part, 0.0);
}

TEST(Equivalence, LargeJumpUsesPowerBranch) {
    const Grid g = make_grid(1.0, 16);
    Field r(16, 1.0), rho(16, 1.0);
    for (std::size_t i = 0; i < 8; ++i) rho[i] += 3.0;
    const auto rep = entropy_equivalence_check(g, rho, r, {1.0, 1.4});
    EXPECT_GT(rep.power_part, 0.0);
    EXPECT_EQ(rep.quadratic_part, 0.0);
    EXPECT_GT(rep.c_norm_by_entropy, 0.0);
    EXPECT_GT(rep.c_entropy_by_norm, 0.0);
    EXPECT_TRUE(std::isfinite(rep.c_norm_by_entropy));
}

TEST(Equivalence, RejectsNonPositiveReference) {
    const Grid g = make_grid(1.0, 8);
    Field r(8, 1.0);
    r[3] = 0.0;
    EXPECT_TRUE(throws_domain([&] { entropy_equivalence_check(g, Field(8, 1.0), r, {}); }));
}
