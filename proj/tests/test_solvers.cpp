#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sfns/problems.hpp"
#include "sfns/solvers.hpp"

namespace sfns {
namespace {

VectorField zero_force() {
    return [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
}

NewtonConfig tight() {
    NewtonConfig cfg;
    cfg.tol = 1e-10;
    return cfg;
}

TEST(OneLevel, ZeroForceGivesZeroInOneStep) {
    const FeSpace space(build_uniform(4, 4));
    NewtonConfig cfg;
    cfg.initial_guess = InitialGuess::Zero;
    const OneLevelResult r = solve_one_level(space, 10.0, zero_force(), cfg);
    EXPECT_EQ(r.stats.newton_iters, 1);
    for (double v : r.psi) EXPECT_EQ(v, 0.0);
}

TEST(OneLevel, ManufacturedLooseToleranceNewtonCount) {
    const FeSpace space(build_uniform(8, 8));
    const OneLevelResult r = solve_one_level(space, 10.0, manufactured_f(10.0));
    EXPECT_TRUE(r.stats.converged);
    EXPECT_GE(r.stats.newton_iters, 1);
    EXPECT_LE(r.stats.newton_iters, 5);
    EXPECT_EQ(r.stats.bicgstab_iters.size(), static_cast<std::size_t>(r.stats.newton_iters));
    EXPECT_EQ(r.stats.residual_history.size(), r.stats.step_history.size());
}

TEST(OneLevel, TightToleranceResidualAndErrors) {
    const FeSpace space(build_uniform(8, 8));
    const ManufacturedProblem p(10.0);
    const OneLevelResult r = solve_one_level(space, 10.0, p.force_field(), tight());
    EXPECT_LE(r.stats.final_residual, 1e-10);
    const Vector res = nonlinear_residual(space, 10.0, r.psi, assemble_load(space, p.force_field()));
    EXPECT_LE(norm2(res), 1e-10);
    const ErrorReport e = error_norms(DiscreteField(space, r.psi), p);
    // Values of the tight-tolerance convergence study at h = 1/8.
    EXPECT_NEAR(e.l2, 5.10e-7, 0.05e-7);
    EXPECT_NEAR(e.h1, 1.53e-5, 0.05e-5);
    EXPECT_NEAR(e.h2, 7.91e-4, 0.05e-4);
}

TEST(OneLevel, ZeroInitialGuessReachesSameSolution) {
    const FeSpace space(build_uniform(4, 4));
    NewtonConfig a = tight();
    NewtonConfig b = tight();
    b.initial_guess = InitialGuess::Zero;
    const OneLevelResult ra = solve_one_level(space, 10.0, manufactured_f(10.0), a);
    const OneLevelResult rb = solve_one_level(space, 10.0, manufactured_f(10.0), b);
    EXPECT_LE(oracle::rel_diff(rb.psi, ra.psi), 1e-7);
}

TEST(OneLevel, ContinuationReachesTargetReynolds) {
    const FeSpace space(build_uniform(4, 4), LidDriven{1.0});
    NewtonConfig cfg = tight();
    cfg.continuation = {10.0, 50.0};
    const OneLevelResult stepped = solve_one_level(space, 100.0, zero_force(), cfg);
    const OneLevelResult direct = solve_one_level(space, 100.0, zero_force(), tight());
    EXPECT_LE(oracle::rel_diff(stepped.psi, direct.psi), 1e-7);
}

TEST(OneLevel, RejectsBadConfiguration) {
    const FeSpace space(build_uniform(2, 2));
    NewtonConfig cfg;
    cfg.continuation = {50.0, 10.0};
    EXPECT_THROW(solve_one_level(space, 100.0, zero_force(), cfg), InvalidArgument);
    cfg.continuation = {200.0};
    EXPECT_THROW(solve_one_level(space, 100.0, zero_force(), cfg), InvalidArgument);
    EXPECT_THROW(solve_one_level(space, -1.0, zero_force()), InvalidArgument);
    NewtonConfig bad;
    bad.tol = 0.0;
    EXPECT_THROW(solve_one_level(space, 1.0, zero_force(), bad), InvalidArgument);
}

TEST(OneLevel, NewtonFailureCarriesBestIterateAndHistory) {
    const FeSpace space(build_uniform(8, 8));
    NewtonConfig cfg;
    cfg.tol = 1e-30;
    cfg.max_newton = 2;
    try {
        solve_one_level(space, 10.0, manufactured_f(10.0), cfg);
        FAIL() << "expected NewtonFailure";
    } catch (const NewtonFailure& e) {
        EXPECT_EQ(e.stats().newton_iters, 2);
        EXPECT_EQ(e.stats().residual_history.size(), 2u);
        EXPECT_EQ(e.best_iterate().size(), static_cast<std::size_t>(space.n_dofs()));
        EXPECT_FALSE(e.stats().converged);
    }
}

TEST(TwoLevel, FineLevelIsOneLinearSolve) {
    const TwoLevelResult r = solve_two_level(TwoLevelConfig::halving(4), 10.0, manufactured_f(10.0));
    EXPECT_EQ(r.fine_stats.newton_iters, 0);
    EXPECT_EQ(r.fine_stats.linear_solves, 1);
    EXPECT_EQ(r.fine_stats.nonlinear_residual_evals, 0);
    EXPECT_EQ(r.fine_stats.bicgstab_iters.size(), 1u);
    EXPECT_TRUE(r.fine_stats.converged);
    EXPECT_GE(r.coarse_stats.newton_iters, 1);
    EXPECT_EQ(r.fine_space.mesh().nx(), 8);
}

TEST(TwoLevel, FineSolutionSatisfiesFrozenConvectionSystem) {
    const TwoLevelConfig cfg = TwoLevelConfig::halving(4);
    const TwoLevelResult r = solve_two_level(cfg, 10.0, manufactured_f(10.0));
    const DofVector xi = prolongate(DiscreteField(r.coarse_space, r.coarse), r.fine_space);
    const Vector load = assemble_load(r.fine_space, manufactured_f(10.0));
    const Vector lhs = apply_oseen(r.fine_space, 10.0, xi, r.fine);
    Vector res(lhs.size());
    for (std::size_t i = 0; i < res.size(); ++i) res[i] = lhs[i] - load[i];
    EXPECT_LE(norm2(res), 1.01 * cfg.linear.rel_tol * norm2(load));
}

TEST(TwoLevel, SameMeshReproducesOneLevel) {
    TwoLevelConfig cfg;
    cfg.coarse_nx = cfg.coarse_ny = cfg.fine_nx = cfg.fine_ny = 8;
    cfg.newton = tight();
    const TwoLevelResult two = solve_two_level(cfg, 10.0, manufactured_f(10.0));
    const FeSpace space(build_uniform(8, 8));
    const OneLevelResult one = solve_one_level(space, 10.0, manufactured_f(10.0), tight());
    Vector diff(space.n_free());
    const Vector a = space.restrict_free(two.fine), b = space.restrict_free(one.psi);
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = a[i] - b[i];
    EXPECT_LE(norm2(diff), 10.0 * cfg.linear.rel_tol);
}

TEST(TwoLevel, MatchesOneLevelAccuracyOnFineMesh) {
    const ManufacturedProblem p(10.0);
    const TwoLevelResult two = solve_two_level(TwoLevelConfig::halving(4), 10.0, p.force_field());
    const FeSpace fine(build_uniform(8, 8));
    const OneLevelResult one = solve_one_level(fine, 10.0, p.force_field());
    const double e2 = error_norms(DiscreteField(two.fine_space, two.fine), p).h2;
    const double e1 = error_norms(DiscreteField(fine, one.psi), p).h2;
    EXPECT_LE(e2, 1.5 * e1);
}

TEST(TwoLevel, LidDrivenBoundaryDataOnBothLevels) {
    TwoLevelConfig cfg = TwoLevelConfig::halving(4);
    const TwoLevelResult r = solve_two_level(cfg, 1.0, zero_force(), LidDriven{1.0});
    const DiscreteField field(r.fine_space, r.fine);
    EXPECT_NEAR(field.evaluate(0.5, 1.0).dy, 1.0, 1e-12);
    EXPECT_NEAR(field.evaluate(0.5, 0.0).dy, 0.0, 1e-12);
    EXPECT_NEAR(field.evaluate(0.0, 0.3).value, 0.0, 1e-12);
}

TEST(TwoLevel, RejectsNonNestedMeshes) {
    TwoLevelConfig cfg;
    cfg.coarse_nx = cfg.coarse_ny = 3;
    cfg.fine_nx = cfg.fine_ny = 8;
    EXPECT_THROW(solve_two_level(cfg, 10.0, manufactured_f(10.0)), InvalidArgument);
}

TEST(Prolongate, BilinearMonomialIsExact) {
    const RectMesh coarse = build_uniform(2, 2);
    const DofVector c = interpolate(coarse, [](double x, double y) { return std::array<double, 4>{x * y, y, x, 1.0}; });
    const DiscreteField cf(coarse, c);
    const FeSpace fine(build_uniform(4, 4));
    const DiscreteField ff(build_uniform(4, 4), prolongate(cf, fine));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const double x = u(rng), y = u(rng);
        EXPECT_NEAR(ff.evaluate(x, y).value, cf.evaluate(x, y).value, 1e-13);
    }
}

TEST(Prolongate, ZeroFieldStaysZero) {
    const RectMesh coarse = build_uniform(3, 3);
    const DiscreteField cf(coarse, DofVector(4 * coarse.num_nodes(), 0.0));
    for (double v : prolongate(cf, FeSpace(build_uniform(6, 6)))) EXPECT_EQ(v, 0.0);
}

class ProlongatePairs : public ::testing::TestWithParam<std::array<int, 4>> {};

TEST_P(ProlongatePairs, RandomFieldReproducedPointwise) {
    const auto [cx, cy, fx, fy] = GetParam();
    const RectMesh coarse = build_uniform(cx, cy);
    std::mt19937 rng(cx * 31 + fx);
    const DiscreteField cf(coarse, oracle::random_vector(4 * coarse.num_nodes(), rng));
    const RectMesh fine = build_uniform(fx, fy);
    const DofVector fd = prolongate(cf, FeSpace(fine));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        const double x = u(rng), y = u(rng);
        const double ref = oracle::eval(coarse, cf.coefficients(), x, y, 0, 0);
        EXPECT_NEAR(oracle::eval(fine, fd, x, y, 0, 0), ref, 1e-12 * std::max(1.0, std::abs(ref)));
    }
}

INSTANTIATE_TEST_SUITE_P(Pairs, ProlongatePairs,
                         ::testing::Values(std::array<int, 4>{4, 4, 8, 8}, std::array<int, 4>{2, 3, 4, 6},
                                           std::array<int, 4>{3, 2, 9, 8}));

TEST(Prolongate, RejectsNonNestedMesh) {
    const RectMesh coarse = build_uniform(3, 3);
    const DiscreteField cf(coarse, DofVector(4 * coarse.num_nodes(), 0.0));
    EXPECT_THROW(prolongate(cf, FeSpace(build_uniform(4, 4))), InvalidArgument);
}

double scaling_lhs(double h) {
    return h * std::pow(std::abs(std::log(h)), -0.25);
}

TEST(Scaling, ExponentsPerElement) {
    EXPECT_EQ(scaling_exponent(ElementKind::Argyris), 2.5);
    EXPECT_EQ(scaling_exponent(ElementKind::CloughTocher), 1.5);
    EXPECT_EQ(scaling_exponent(ElementKind::BognerFoxSchmit), 1.5);
    EXPECT_EQ(scaling_exponent(ElementKind::BicubicSpline), 1.5);
}

TEST(Scaling, BfsQuarterSatisfiesDefiningEquation) {
    const double h = scaling_h_for_H(ElementKind::BognerFoxSchmit, 0.25);
    EXPECT_NEAR(scaling_lhs(h), 0.125, 1e-12);
    EXPECT_LT(h, 0.25);
}

TEST(Scaling, ArgyrisIsFinerThanCloughTocher) {
    EXPECT_LT(scaling_h_for_H(ElementKind::Argyris, 0.125), scaling_h_for_H(ElementKind::CloughTocher, 0.125));
}

TEST(Scaling, NeverCoarserThanCoarseMesh) {
    for (ElementKind k : kAllElementKinds) {
        for (double H = 0.5; H > 1e-3; H *= 0.7) {
            const double h = scaling_h_for_H(k, H);
            EXPECT_LE(h, H);
            EXPECT_NEAR(scaling_lhs(h), std::pow(H, scaling_exponent(k)), 1e-12);
        }
    }
}

TEST(Scaling, RejectsOutOfRangeWidth) {
    EXPECT_THROW(scaling_h_for_H(ElementKind::BognerFoxSchmit, 1.0), InvalidArgument);
    EXPECT_THROW(scaling_h_for_H(ElementKind::BognerFoxSchmit, 0.0), InvalidArgument);
    EXPECT_THROW(scaling_h_for_H(ElementKind::Argyris, 2.0), InvalidArgument);
}

}  // namespace
}  // namespace sfns
