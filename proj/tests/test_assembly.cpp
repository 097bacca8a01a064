#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sfns/assembly.hpp"
#include "sfns/error.hpp"
#include "sfns/problems.hpp"

namespace sfns {
namespace {

double quad_form(const CsrMatrix& m, const Vector& left, const Vector& right) {
    return dot_serial(left, spmv(m, right));
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double frobenius(const CsrMatrix& m) {
    return norm2(m.values());
}

TEST(AssembleA, SymmetricOnEighthMesh) {
    const FeSpace space(build_uniform(8, 8));
    const CsrMatrix a = assemble_a(space, 10.0);
    const double scale = max_abs(a.values());
    for (int i = 0; i < a.rows(); ++i) {
        for (auto k = a.row_ptr()[i]; k < a.row_ptr()[i + 1]; ++k) {
            const int j = a.col()[k];
            EXPECT_LE(std::abs(a.values()[k] - a.at(j, i)), 1e-12 * scale);
        }
    }
}

TEST(AssembleA, PositiveDefinite) {
    const FeSpace space(build_uniform(8, 8));
    const CsrMatrix a = assemble_a(space, 10.0);
    std::mt19937 rng(1);
    for (int t = 0; t < 10; ++t) {
        const Vector x = oracle::random_vector(space.n_free(), rng);
        EXPECT_GT(quad_form(a, x, x), 0.0);
    }
}

TEST(AssembleA, EnergyOfManufacturedInterpolantMatchesQuadratureOracle) {
    const FeSpace space(build_uniform(8, 8));
    const ManufacturedProblem p(1.0);
    const DofVector psi = interpolate(space.mesh(), p.exact_hermite());
    const Vector free = space.restrict_free(psi);
    ASSERT_EQ(space.expand(free), psi);  // clamped-compatible
    const double energy = quad_form(assemble_a(space, 1.0), free, free);
    const double ref = oracle::integrate(space.mesh(), 10, [&](double x, double y) {
        const double lap = oracle::eval(space.mesh(), psi, x, y, 2, 0) + oracle::eval(space.mesh(), psi, x, y, 0, 2);
        return lap * lap;
    });
    EXPECT_NEAR(energy, ref, 1e-10 * ref);
}

TEST(AssembleA, ScalesExactlyWithInverseReynolds) {
    const FeSpace space(build_uniform(5, 5));
    const CsrMatrix a1 = assemble_a(space, 7.0);
    const CsrMatrix a2 = assemble_a(space, 14.0);
    for (std::int64_t k = 0; k < a1.nnz(); ++k) EXPECT_EQ(a2.values()[k], 0.5 * a1.values()[k]);
}

TEST(AssembleA, RejectsNonPositiveReynolds) {
    const FeSpace space(build_uniform(2, 2));
    EXPECT_THROW(assemble_a(space, 0.0), InvalidArgument);
    EXPECT_THROW(assemble_a(space, -1.0), InvalidArgument);
}

TEST(AssembleB, ZeroConvectingFieldGivesZeroMatrix) {
    const FeSpace space(build_uniform(4, 4));
    const CsrMatrix b = assemble_b_first_slot(space, DofVector(space.n_dofs(), 0.0));
    EXPECT_EQ(max_abs(b.values()), 0.0);
    const CsrMatrix c = assemble_b_middle_slot(space, DofVector(space.n_dofs(), 0.0));
    EXPECT_EQ(max_abs(c.values()), 0.0);
}

TEST(AssembleB, Antisymmetric) {
    const FeSpace space(build_uniform(6, 6));
    std::mt19937 rng(2);
    for (int t = 0; t < 20; ++t) {
        const CsrMatrix b = assemble_b_first_slot(space, oracle::random_field(space, rng));
        const Vector psi = oracle::random_vector(space.n_free(), rng);
        const double n2 = dot_serial(psi, psi);
        EXPECT_LE(std::abs(quad_form(b, psi, psi)), 1e-12 * frobenius(b) * n2);
    }
}

TEST(AssembleB, FirstSlotMatchesQuadratureOracle) {
    const FeSpace space(build_uniform(4, 4));
    const RectMesh& m = space.mesh();
    const DofVector xi = interpolate(m, [](double x, double y) { return std::array<double, 4>{x * x * y, 2 * x * y, x * x, 2 * x}; });
    // Test and trial fields restricted to the free DOFs of the clamped space.
    const Vector psi = space.restrict_free(
        interpolate(m, [](double x, double y) { return std::array<double, 4>{x * y * y, y * y, 2 * x * y, 2 * y}; }));
    const Vector phi = space.restrict_free(interpolate(
        m, [](double x, double y) { return std::array<double, 4>{x * x * y * y, 2 * x * y * y, 2 * x * x * y, 4 * x * y}; }));
    const double ref = oracle::b_form(m, xi, space.expand(psi), space.expand(phi));
    // Five points per axis integrate the bicubic trilinear integrand exactly.
    AssemblyOptions exact;
    exact.quadrature = 5;
    const double value = quad_form(assemble_b_first_slot(space, xi, exact), phi, psi);
    EXPECT_NEAR(value, ref, 1e-10 * std::abs(ref));
    // The default 4-point rule is close but not exact.
    const double approx = quad_form(assemble_b_first_slot(space, xi), phi, psi);
    EXPECT_NEAR(approx, ref, 1e-2 * std::abs(ref));
}

TEST(AssembleB, MiddleSlotConsistentWithFirstSlot) {
    const FeSpace space(build_uniform(4, 4));
    std::mt19937 rng(3);
    for (int t = 0; t < 5; ++t) {
        const Vector delta = oracle::random_vector(space.n_free(), rng);
        const Vector phi = oracle::random_vector(space.n_free(), rng);
        const DofVector psi = oracle::random_field(space, rng);
        const double lhs = quad_form(assemble_b_middle_slot(space, psi), phi, delta);
        const double rhs = quad_form(assemble_b_first_slot(space, space.expand(delta)), phi, space.restrict_free(psi));
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(std::abs(lhs), 1.0));
    }
}

TEST(Jacobian, DirectionalFiniteDifference) {
    const FeSpace space(build_uniform(4, 4));
    const double re = 10.0;
    const Vector load = assemble_load(space, manufactured_f(re));
    std::mt19937 rng(4);
    const double eps = 1e-6;
    for (int t = 0; t < 5; ++t) {
        const DofVector psi = oracle::random_field(space, rng, 0.05);
        Vector dir = oracle::random_vector(space.n_free(), rng);
        const double nd = norm2(dir);
        for (double& d : dir) d /= nd;
        DofVector shifted = psi;
        const auto& free = space.free_dofs();
        for (std::size_t i = 0; i < free.size(); ++i) shifted[free[i]] += eps * dir[i];
        const Vector r0 = nonlinear_residual(space, re, psi, load);
        const Vector r1 = nonlinear_residual(space, re, shifted, load);
        const Vector jd = spmv(assemble_jacobian(space, re, psi), dir);
        Vector diff(jd.size());
        for (std::size_t i = 0; i < jd.size(); ++i) diff[i] = (r1[i] - r0[i]) / eps - jd[i];
        EXPECT_LE(norm2(diff) / norm2(jd), 1e-5);
    }
}

TEST(Jacobian, EqualsSumOfParts) {
    const FeSpace space(build_uniform(3, 3));
    std::mt19937 rng(5);
    const DofVector psi = oracle::random_field(space, rng);
    const CsrMatrix j = assemble_jacobian(space, 3.0, psi);
    const CsrMatrix sum =
        assemble_a(space, 3.0) + assemble_b_first_slot(space, psi) + assemble_b_middle_slot(space, psi);
    for (std::int64_t k = 0; k < j.nnz(); ++k) {
        EXPECT_NEAR(j.values()[k], sum.values()[k], 1e-12 * std::max(1.0, std::abs(sum.values()[k])));
    }
}

TEST(ApplyOseen, MatchesMatrixOnFreeVectors) {
    const FeSpace space(build_uniform(4, 4));
    std::mt19937 rng(6);
    const DofVector xi = oracle::random_field(space, rng);
    const Vector v = oracle::random_vector(space.n_free(), rng);
    const Vector applied = apply_oseen(space, 5.0, xi, space.expand(v));
    const Vector product = spmv(assemble_oseen(space, 5.0, xi), v);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_NEAR(applied[i], product[i], 1e-12 * max_abs(product));
}

TEST(AssembleLoad, ZeroForceGivesZeroVector) {
    const FeSpace space(build_uniform(4, 4));
    const Vector l = assemble_load(space, [](double, double) { return std::array<double, 2>{0.0, 0.0}; });
    EXPECT_EQ(max_abs(l), 0.0);
}

TEST(AssembleLoad, GradientForceIsOrthogonalToCurls) {
    const FeSpace space(build_uniform(8, 8));
    const Vector l =
        assemble_load(space, [](double x, double y) { return std::array<double, 2>{3 * x * x, 3 * y * y}; });
    for (double v : l) EXPECT_LE(std::abs(v), 1e-13);
}

TEST(AssembleLoad, ManufacturedForceMatchesQuadratureOracle) {
    const FeSpace space(build_uniform(4, 4));
    const ManufacturedProblem p(10.0);
    AssemblyOptions opts;
    opts.quadrature = 6;  // integrand degree <= 10 per axis
    const Vector l = assemble_load(space, p.force_field(), opts);
    const Vector l_default = assemble_load(space, p.force_field());
    Vector ref(space.n_free());
    for (int i = 0; i < space.n_free(); ++i) {
        DofVector unit(space.n_dofs(), 0.0);
        unit[space.free_dofs()[i]] = 1.0;
        ref[i] = oracle::integrate(space.mesh(), 10, [&](double x, double y) {
            const auto f = p.body_force(x, y);
            return f[0] * oracle::eval(space.mesh(), unit, x, y, 0, 1) -
                   f[1] * oracle::eval(space.mesh(), unit, x, y, 1, 0);
        });
    }
    EXPECT_LE(oracle::rel_diff(l, ref), 1e-10);
    EXPECT_LE(oracle::rel_diff(l_default, ref), 1e-3);
}

TEST(Assembly, SerialAndColouredParallelAgree) {
    const FeSpace space(build_uniform(7, 5), LidDriven{1.0});
    std::mt19937 rng(7);
    const DofVector psi = oracle::random_field(space, rng);
    AssemblyOptions serial;
    serial.execution = Execution::Serial;
    const CsrMatrix jp = assemble_jacobian(space, 10.0, psi);
    const CsrMatrix js = assemble_jacobian(space, 10.0, psi, serial);
    const double scale = max_abs(js.values());
    for (std::int64_t k = 0; k < jp.nnz(); ++k) EXPECT_LE(std::abs(jp.values()[k] - js.values()[k]), 1e-15 * scale);
    const Vector rp = nonlinear_residual(space, 10.0, psi, Vector(space.n_free(), 0.0));
    const Vector rs = nonlinear_residual(space, 10.0, psi, Vector(space.n_free(), 0.0), serial);
    const double rscale = max_abs(rs);
    for (std::size_t i = 0; i < rp.size(); ++i) EXPECT_LE(std::abs(rp[i] - rs[i]), 1e-15 * rscale);
}

TEST(Assembly, RejectsWrongLengthCoefficientVector) {
    const FeSpace space(build_uniform(3, 3));
    EXPECT_THROW(assemble_b_first_slot(space, DofVector(5, 0.0)), InvalidArgument);
}

}  // namespace
}  // namespace sfns
