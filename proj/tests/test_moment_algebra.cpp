#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <tuple>

#include "kerr/closed_form.hpp"
#include "kerr/fock_engine.hpp"
#include "kerr/moment_algebra.hpp"
#include "oracles.hpp"

namespace kerr {
namespace {

using testing::close;
using Term = std::tuple<std::int64_t, int, int>;

std::set<Term> term_set(const NormalOrderedExpansion& e) {
    std::set<Term> out;
    for (const auto& t : e.terms) {
        out.insert({t.coefficient, t.creation, t.annihilation});
    }
    return out;
}

ClosedFormContext context(double x0, double p0) { return {CoherentParams(x0, p0), KerrModel(5.0)}; }

TEST(Expansion, FirstOrder) {
    const auto& x = expand_quadrature_power(Quadrature::x, 1);
    EXPECT_EQ(term_set(x), (std::set<Term>{{1, 1, 0}, {1, 0, 1}}));
    EXPECT_EQ(x.imag_power, 0);
    EXPECT_DOUBLE_EQ(x.scale(), 1.0 / std::sqrt(2.0));
    // p = -i (a - a^dag) / sqrt 2
    const auto& p = expand_quadrature_power(Quadrature::p, 1);
    EXPECT_EQ(term_set(p), (std::set<Term>{{-1, 1, 0}, {1, 0, 1}}));
    EXPECT_EQ(p.imag_power, 3);
}

TEST(Expansion, SecondOrder) {
    const auto& x = expand_quadrature_power(Quadrature::x, 2);
    EXPECT_EQ(term_set(x), (std::set<Term>{{1, 2, 0}, {1, 0, 2}, {2, 1, 1}, {1, 0, 0}}));
    EXPECT_DOUBLE_EQ(x.scale(), 0.5);
    const auto& p = expand_quadrature_power(Quadrature::p, 2);
    EXPECT_EQ(term_set(p), (std::set<Term>{{1, 2, 0}, {1, 0, 2}, {-2, 1, 1}, {-1, 0, 0}}));
    EXPECT_EQ(p.imag_power, 2);
}

TEST(Expansion, RejectsOrderOutsideTable) {
    EXPECT_THROW(expand_quadrature_power(Quadrature::x, 0), std::invalid_argument);
    EXPECT_THROW(expand_quadrature_power(Quadrature::p, 9), std::invalid_argument);
}

TEST(Expansion, IntegerMatrixWitness) {
    for (int order = 1; order <= kMaxExpansionOrder; ++order) {
        const int dim = order + 4;
        EXPECT_EQ(scaled_matrix(expand_quadrature_power(Quadrature::x, order), dim),
                  testing::direct_scaled_power(+1, order, dim))
            << "x order " << order;
        EXPECT_EQ(scaled_matrix(expand_quadrature_power(Quadrature::p, order), dim),
                  testing::direct_scaled_power(-1, order, dim))
            << "p order " << order;
    }
}

TEST(Expansion, CoefficientSumMatchesVacuumMoment) {
    // <0| x^order |0> is the (0, 0)-coefficient times the prefactor: (order-1)!! / 2^{order/2}.
    for (int order = 2; order <= 8; order += 2) {
        const auto& e = expand_quadrature_power(Quadrature::x, order);
        std::int64_t constant = 0;
        for (const auto& t : e.terms) {
            if (t.creation == 0 && t.annihilation == 0) {
                constant = t.coefficient;
            }
        }
        std::int64_t double_factorial = 1;
        for (int k = order - 1; k > 0; k -= 2) {
            double_factorial *= k;
        }
        EXPECT_EQ(constant, double_factorial);
    }
}

TEST(ClosedViaExpansion, LowOrdersMatchLiteralFormulas) {
    auto rng = testing::seeded_rng(21);
    std::uniform_real_distribution<double> u(-7.0, 7.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const ClosedFormContext ctx = context(u(rng), u(rng));
        const double t = unit(rng) * ctx.model.t_rev();
        EXPECT_TRUE(close(closed_moment_via_expansion(ctx, Quadrature::x, 1, t), mean_x(ctx, t),
                          1e-12, 1e-12));
        EXPECT_TRUE(close(closed_moment_via_expansion(ctx, Quadrature::p, 1, t), mean_p(ctx, t),
                          1e-12, 1e-12));
        EXPECT_TRUE(close(closed_moment_via_expansion(ctx, Quadrature::x, 2, t),
                          second_moment_x(ctx, t), 1e-10, 1e-10));
        EXPECT_TRUE(close(closed_moment_via_expansion(ctx, Quadrature::p, 2, t),
                          second_moment_p(ctx, t), 1e-10, 1e-10));
        EXPECT_TRUE(close(closed_moment_via_expansion(ctx, Quadrature::x, 3, t),
                          third_moment_x(ctx, t), 1e-10, 1e-10));
        EXPECT_TRUE(close(closed_moment_via_expansion(ctx, Quadrature::p, 3, t),
                          third_moment_p(ctx, t), 1e-10, 1e-10));
    }
}

TEST(ClosedViaExpansion, FourthOrderMatchesOracle) {
    const ClosedFormContext ctx = context(std::sqrt(10.0), std::sqrt(10.0));
    const double t = 0.37 * ctx.model.t_rev();
    const FockVector s = evolve(prepare_coherent(ctx.params, 1e-12), ctx.model, t);
    for (const Quadrature q : {Quadrature::x, Quadrature::p}) {
        const double closed = closed_moment_via_expansion(ctx, q, 4, t);
        const double oracle = numeric_quadrature_moment(s, q, 4).value;
        EXPECT_TRUE(close(closed, oracle, 1e-8, 1e-10)) << closed << " vs " << oracle;
    }
}

TEST(ClosedViaExpansion, HigherOrdersMatchOracle) {
    const ClosedFormContext ctx = context(1.0, 1.0);
    const FockVector s0 = prepare_coherent(ctx.params, 1e-14);
    for (const double frac : {0.0, 0.11, 0.5, 0.83}) {
        const double t = frac * ctx.model.t_rev();
        const FockVector s = evolve(s0, ctx.model, t);
        for (int order = 5; order <= 8; ++order) {
            for (const Quadrature q : {Quadrature::x, Quadrature::p}) {
                const double closed = closed_moment_via_expansion(ctx, q, order, t);
                const double oracle = numeric_quadrature_moment(s, q, order).value;
                EXPECT_TRUE(close(closed, oracle, 1e-9, 1e-10)) << order << ": " << closed
                                                                << " vs " << oracle;
            }
        }
    }
}

TEST(Statistics, CoherentStateAtStartAndRevivals) {
    for (const double x0 : {1.0, std::sqrt(10.0), 10.0}) {
        const ClosedFormContext ctx = context(x0, x0);
        const FockVector s0 = prepare_coherent(ctx.params, 1e-12);
        for (int n = 0; n <= 2; ++n) {
            const double t = n * ctx.model.t_rev();
            for (const StatisticsRecord& r : {statistics_at(ctx, t), statistics_at(s0, ctx.model, t)}) {
                EXPECT_NEAR(r.uncertainty_product, 0.5, 1e-9);
                EXPECT_NEAR(r.var_x, 0.5, 1e-9);
                EXPECT_NEAR(r.skewness_sq_x, 0.0, 1e-9);
                EXPECT_NEAR(r.skewness_sq_p, 0.0, 1e-9);
                EXPECT_NEAR(r.excess_kurtosis_x, 0.0, 1e-6);
                EXPECT_NEAR(r.excess_kurtosis_p, 0.0, 1e-6);
                EXPECT_NEAR(r.autocorrelation, 1.0, 1e-10);
                EXPECT_NEAR(r.mean_x, x0, 1e-9 * x0);
            }
        }
    }
}

TEST(Statistics, LargeNuQuarterRevivalPlateau) {
    const ClosedFormContext ctx = context(10.0, 10.0);
    const double t = 0.25 * ctx.model.t_rev();
    const StatisticsRecord closed = statistics_at(ctx, t);
    EXPECT_NEAR(closed.uncertainty_product, 100.5, 0.02 * 100.5);
    const StatisticsRecord oracle =
        statistics_at(prepare_coherent(ctx.params, 1e-12), ctx.model, t);
    EXPECT_TRUE(close(closed.uncertainty_product, oracle.uncertainty_product, 1e-8, 1e-10));
    EXPECT_EQ(closed.path, MomentPath::closed_form);
    EXPECT_EQ(oracle.path, MomentPath::oracle);
    EXPECT_EQ(to_string(MomentPath::oracle), "oracle");
}

TEST(Statistics, UncertaintyFloorHolds) {
    auto rng = testing::seeded_rng(22);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const double x0 : {0.3, 1.0, std::sqrt(10.0), 10.0}) {
        const ClosedFormContext ctx = context(x0, -0.5 * x0);
        for (int i = 0; i < 100; ++i) {
            const StatisticsRecord r = statistics_at(ctx, unit(rng) * ctx.model.t_rev());
            EXPECT_GE(r.uncertainty_product, 0.5 - 1e-9);
            EXPECT_GE(r.autocorrelation, 0.0);
            EXPECT_LE(r.autocorrelation, 1.0 + 1e-12);
        }
    }
}

TEST(Statistics, VacuumIsStationary) {
    const ClosedFormContext ctx = context(0.0, 0.0);
    for (const double t : {0.0, 0.1, 0.2, 0.31, 1.7}) {
        const StatisticsRecord r = statistics_at(ctx, t);
        EXPECT_NEAR(r.uncertainty_product, 0.5, 1e-15);
        EXPECT_NEAR(r.excess_kurtosis_x, 0.0, 1e-14);
    }
}

TEST(Statistics, RejectsNonPositiveVariance) {
    RawMoments raw;
    raw.x = {1.0, 2.0, 4.0, 8.0, 16.0};
    raw.p = {1.0, 0.0, 0.5, 0.0, 0.75};
    EXPECT_THROW(assemble_statistics(raw, 0.0, MomentPath::oracle, 1.0), NumericalError);
}

TEST(Statistics, AssemblesCentralMoments) {
    // Raw moments of a unit-variance Gaussian shifted by 1: 1, 2, 4, 10.
    RawMoments raw;
    raw.x = {1.0, 1.0, 2.0, 4.0, 10.0};
    raw.p = {1.0, 0.0, 1.0, 0.0, 3.0};
    const StatisticsRecord r = assemble_statistics(raw, 0.0, MomentPath::oracle, 1.0);
    EXPECT_DOUBLE_EQ(r.var_x, 1.0);
    EXPECT_DOUBLE_EQ(r.skewness_sq_x, 0.0);
    EXPECT_DOUBLE_EQ(r.excess_kurtosis_x, 0.0);
    EXPECT_DOUBLE_EQ(r.excess_kurtosis_p, 0.0);
    EXPECT_DOUBLE_EQ(r.uncertainty_product, 1.0);
}

}  // namespace
}  // namespace kerr
