#include "tgf/montecarlo.hpp"
#include "tgf/sampling.hpp"

#include <gtest/gtest.h>

using namespace tgf;

namespace {

struct Fixture {
    Basis basis{BasisSpec{4, 4, 1.0, 34}};
    NoiseModel noise;
    SimProblem prob;

    Fixture() {
        prob.params = {1.0, 1.0, 0.5, 0.5};
        prob.T = 0.02;
        prob.dt = 1e-3;
        prob.basis = &basis;
        prob.seed = 11;
    }

    void with_additive(double rho) {
        noise = NoiseModel::additive(basis, 2, rho);
        prob.noise = &noise;
    }
};

SpectralState band_ic(const Basis& b, double v_norm) {
    SpectralState y = SpectralState::zero(b.size());
    for (Eigen::Index j = 0; j < b.size(); ++j)
        if (b[j].mode.k <= 2 && b[j].mode.l <= 2)
            y.coeffs[j] = rng::standard_normal(55, rng::kInitialCondition, static_cast<std::uint64_t>(j), 0) /
                          b[j].lambda;
    y.coeffs *= v_norm / y.coeffs.norm();
    return y;
}

}  // namespace

TEST(Ensemble, AllZeroInputsGiveZeroEstimators) {
    Fixture f;
    const EnsembleRun run = run_ensemble(f.prob, SpectralState::zero(f.basis.size()), 4, 1);
    EXPECT_EQ(run.report.sup_v_sq.mean, 0.0);
    EXPECT_EQ(run.report.int_d_sq.mean, 0.0);
    EXPECT_EQ(run.report.int_a4_4.mean, 0.0);
    EXPECT_EQ(run.report.sup_w_p.mean, 0.0);
    EXPECT_EQ(run.report.blowup_count, 0);
}

TEST(Ensemble, DeterministicProblemHasZeroStdError) {
    Fixture f;
    const SpectralState y0 = band_ic(f.basis, 0.7);
    const EnsembleRun run = run_ensemble(f.prob, y0, 3, 1);
    EXPECT_EQ(run.report.sup_v_sq.std_error, 0.0);
    // estimators equal the single-path functionals
    const PathResult single = simulate_path(f.prob, y0);
    EXPECT_DOUBLE_EQ(run.report.sup_v_sq.mean, single.ledger.sup_v_sq());
    EXPECT_DOUBLE_EQ(run.report.int_d_sq.mean, single.ledger.back().int_d_sq);
}

TEST(Ensemble, IdenticalReportsAcrossParallelism) {
    Fixture f;
    f.with_additive(0.2);
    const SpectralState y0 = band_ic(f.basis, 0.7);
    const EnsembleRun a = run_ensemble(f.prob, y0, 8, 1);
    const EnsembleRun b = run_ensemble(f.prob, y0, 8, 8);
    EXPECT_EQ(a.report.sup_v_sq.mean, b.report.sup_v_sq.mean);
    EXPECT_EQ(a.report.sup_v_sq.std_error, b.report.sup_v_sq.std_error);
    EXPECT_EQ(a.report.int_a4_4.mean, b.report.int_a4_4.mean);
    EXPECT_EQ(a.report.exp_moment.mean, b.report.exp_moment.mean);
    ASSERT_EQ(a.summaries.size(), b.summaries.size());
    for (size_t p = 0; p < a.summaries.size(); ++p) {
        EXPECT_EQ(a.summaries[p].seed, b.summaries[p].seed);
        EXPECT_EQ(a.summaries[p].sup_v_sq, b.summaries[p].sup_v_sq);
    }
}

TEST(Ensemble, StdErrorShrinksWithPathCount) {
    Fixture f;
    f.with_additive(0.4);
    f.prob.T = 0.01;
    const SpectralState y0 = band_ic(f.basis, 0.5);
    double ratio_sum = 0.0;
    const int reps = 5;
    for (int rep = 0; rep < reps; ++rep) {
        SimProblem p = f.prob;
        p.seed = 1000 + static_cast<std::uint64_t>(rep);
        const EnsembleRun small = run_ensemble(p, y0, 16, 1);
        p.seed = 2000 + static_cast<std::uint64_t>(rep);
        const EnsembleRun big = run_ensemble(p, y0, 32, 1);
        ratio_sum += big.report.int_d_sq.std_error / small.report.int_d_sq.std_error;
    }
    EXPECT_NEAR(ratio_sum / reps, 1.0 / std::sqrt(2.0), 0.3 / std::sqrt(2.0));
}

TEST(Ensemble, SupremumEstimatorMonotoneInHorizon) {
    Fixture f;
    f.with_additive(0.5);
    const SpectralState y0 = band_ic(f.basis, 0.3);
    double prev = 0.0;
    for (double horizon : {0.005, 0.01, 0.02}) {
        SimProblem p = f.prob;
        p.T = horizon;
        const EnsembleRun run = run_ensemble(p, y0, 4, 1);
        EXPECT_GE(run.report.sup_v_sq.mean, prev);
        prev = run.report.sup_v_sq.mean;
    }
}

TEST(GalerkinLevels, IdenticalLevelsRejected) {
    Fixture f;
    EXPECT_THROW(galerkin_convergence(f.prob, band_ic(f.basis, 0.5), {4, 4, 9}, 2, 1), std::invalid_argument);
    EXPECT_THROW(galerkin_convergence(f.prob, band_ic(f.basis, 0.5), {4, 100}, 2, 1), std::invalid_argument);
}

TEST(GalerkinLevels, SameLevelCoupledRunsAreIdentical) {
    // the distance between a level and itself is identically zero: coupled
    // runs at the same dimension reproduce the same trajectory bit for bit
    Fixture f;
    f.with_additive(0.3);
    f.prob.record_trajectory = true;
    SpectralState y0 = SpectralState::zero(9);
    y0.coeffs = band_ic(f.basis, 0.5).coeffs.head(9);
    const PathResult a = simulate_path(f.prob, y0);
    const PathResult b = simulate_path(f.prob, y0);
    ASSERT_EQ(a.snapshots.size(), b.snapshots.size());
    for (size_t s = 0; s < a.snapshots.size(); ++s)
        EXPECT_EQ((a.snapshots[s].second - b.snapshots[s].second).cwiseAbs().maxCoeff(), 0.0);
}

TEST(GalerkinLevels, DistancesDecreaseForSmoothData) {
    Fixture f;
    f.with_additive(0.2);
    const SpectralState y0 = band_ic(f.basis, 0.8);
    const auto rows = galerkin_convergence(f.prob, y0, {4, 9, 16}, 3, 1);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_GT(rows[0].e_sup_v_sq, 0.0);
    EXPECT_LT(rows[1].e_sup_v_sq, rows[0].e_sup_v_sq);
    EXPECT_LT(rows[1].e_int_v_sq, rows[0].e_int_v_sq);
}

TEST(GalerkinLevels, LinearModeMatchesTailEnergyExactly) {
    // decoupled decay: sup over time of the embedded distance is attained at
    // t = 0 and equals the tail energy of the initial condition
    Basis basis({4, 4, 1.0, 34});
    SimProblem prob;
    prob.params = {1.0, 1.0, -1.0, 0.0};
    prob.linear_test_mode = true;
    prob.T = 0.02;
    prob.dt = 1e-3;
    prob.basis = &basis;
    SpectralState y0 = SpectralState::zero(basis.size());
    for (Eigen::Index j = 0; j < basis.size(); ++j)
        y0.coeffs[j] = 1.0 / basis[j].lambda;
    const auto rows = galerkin_convergence(prob, y0, {4, 9, 16}, 1, 1);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        double tail = 0.0;
        for (int j = r.n_coarse; j < r.n_fine; ++j)
            tail += y0.coeffs[j] * y0.coeffs[j];
        EXPECT_NEAR(r.e_sup_v_sq, tail, 1e-6 * tail);
    }
}

TEST(TwinPaths, ZeroPerturbationIsBitwiseIdentical) {
    Fixture f;
    f.with_additive(0.3);
    const SpectralState y0 = band_ic(f.basis, 0.6);
    const TwinPathReport rep = twin_path_stability(f.prob, y0, 0.0);
    EXPECT_TRUE(rep.identical);
    for (double d : rep.dist_v_sq)
        EXPECT_EQ(d, 0.0);
    EXPECT_EQ(rep.sup_dist_v, 0.0);
}

TEST(TwinPaths, ResponseIsLinearInDelta) {
    Fixture f;
    f.with_additive(0.2);
    const SpectralState y0 = band_ic(f.basis, 0.6);
    const TwinPathReport r1 = twin_path_stability(f.prob, y0, 1e-5);
    const TwinPathReport r2 = twin_path_stability(f.prob, y0, 2e-5);
    EXPECT_GT(r1.sup_dist_v, 0.0);
    EXPECT_NEAR(r2.sup_dist_v / r1.sup_dist_v, 2.0, 0.2);
    // stability factor ~ sup|Y1 - Y2|_V / delta finite and O(1) at this horizon
    EXPECT_LT(r1.stability_factor, 10.0);
    EXPECT_GT(r1.stability_factor, 0.1);
}

TEST(TwinPaths, WeightedDistanceUsesEstimatedConstants) {
    Fixture f;
    f.with_additive(0.2);
    const SpectralState y0 = band_ic(f.basis, 0.6);
    const TwinPathReport rep = twin_path_stability(f.prob, y0, 1e-5);
    EXPECT_GT(rep.D3, 0.0);
    EXPECT_GT(rep.D4, 0.0);
    ASSERT_EQ(rep.weighted_dist_v_sq.size(), rep.dist_v_sq.size());
    for (size_t s = 0; s < rep.dist_v_sq.size(); ++s)
        EXPECT_LE(rep.weighted_dist_v_sq[s], rep.dist_v_sq[s] * (1.0 + 1e-12));
}
