// Ensemble simulation and the coupled-path experiments: moment estimators,
// Galerkin-level convergence under a shared Wiener path, and twin-path
// stability for the uniqueness analog.
//
// Determinism contract: per-path seeds derive from the master seed by counter
// hashing, per-path results land in index-order slots, and reduction is
// sequential in index order, so reports are bit-identical for any worker count.

#pragma once

#include "tgf/sde.hpp"
#include "tgf/verify.hpp"

#include <atomic>
#include <thread>

namespace tgf {

struct Estimator {
    double mean = 0.0;
    double std_error = 0.0;
};

struct EnsembleReport {
    int paths = 0;
    int blowup_count = 0;
    Estimator sup_v_sq;        // E sup_t |Y|_V^2
    Estimator int_d_sq;        // E int |DY|_2^2
    Estimator int_a4_4;        // E int |A|_4^4
    Estimator sup_w_p;         // E sup_t |Y|_W^p
    Estimator exp_moment;      // E exp(c int |Y|_{W^{1,4}}^4), c = lambda beta/(16 K*^4)
    bool exp_moment_finite = true;
    int p_moment = 6;
    double exp_coefficient = 0.0;
    double korn_w14 = 0.0;  // estimated K* entering the exponent
    std::vector<std::uint64_t> seeds;
};

struct PathSummary {
    int index = 0;
    std::uint64_t seed = 0;
    double sup_v_sq = 0.0;
    double int_d_sq = 0.0;
    double int_a4_4 = 0.0;
    double sup_w = 0.0;
    double exp_arg = 0.0;
    bool blowup = false;
};

namespace detail {

inline Estimator reduce(const std::vector<double>& xs) {
    Estimator e;
    if (xs.empty())
        return e;
    double s = 0.0;
    for (double x : xs)
        s += x;
    e.mean = s / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double v = 0.0;
        for (double x : xs)
            v += (x - e.mean) * (x - e.mean);
        e.std_error = std::sqrt(v / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return e;
}

template <typename Fn>
void parallel_for(int count, int workers, Fn&& fn) {
    workers = std::max(1, std::min(workers, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

}  // namespace detail

struct EnsembleRun {
    EnsembleReport report;
    std::vector<PathSummary> summaries;
};

// Runs n_paths independent paths of `prob` from the fixed initial state.
// Blow-up paths are counted and excluded from the estimators.
inline EnsembleRun run_ensemble(const SimProblem& prob, const SpectralState& y0, int n_paths, int parallelism,
                                int p_moment = 6, double lambda_exp = 1.0) {
    if (n_paths < 1)
        throw std::invalid_argument("run_ensemble: need at least one path");
    validate(prob, y0.size());

    EnsembleRun run;
    run.summaries.resize(static_cast<size_t>(n_paths));
    const double korn =
        estimate_constants(*prob.basis, 64, rng::derive_seed(prob.seed, 0, rng::kConstants), prob.params)
            .korn_w14;
    const double c_exp = prob.params.beta > 0.0 && korn > 0.0
                             ? lambda_exp * prob.params.beta / (16.0 * korn * korn * korn * korn)
                             : 0.0;

    detail::parallel_for(n_paths, parallelism, [&](int p) {
        SimProblem local = prob;
        local.seed = rng::derive_seed(prob.seed, static_cast<std::uint64_t>(p), rng::kPathSeed);
        const PathResult res = simulate_path(local, y0);
        PathSummary& s = run.summaries[static_cast<size_t>(p)];
        s.index = p;
        s.seed = local.seed;
        s.blowup = res.blowup_step.has_value();
        s.sup_v_sq = res.ledger.sup_v_sq();
        s.sup_w = std::sqrt(res.ledger.sup_w_sq());
        s.int_d_sq = res.ledger.back().int_d_sq;
        s.int_a4_4 = res.ledger.back().int_a4_4;
        s.exp_arg = c_exp * res.ledger.back().int_w14_4;
    });

    std::vector<double> sup_v, int_d, int_a4, sup_wp, expm;
    for (const auto& s : run.summaries) {
        if (s.blowup) {
            ++run.report.blowup_count;
            continue;
        }
        sup_v.push_back(s.sup_v_sq);
        int_d.push_back(s.int_d_sq);
        int_a4.push_back(s.int_a4_4);
        sup_wp.push_back(std::pow(s.sup_w, p_moment));
        expm.push_back(std::exp(s.exp_arg));
    }
    run.report.paths = n_paths;
    run.report.p_moment = p_moment;
    run.report.exp_coefficient = c_exp;
    run.report.korn_w14 = korn;
    run.report.sup_v_sq = detail::reduce(sup_v);
    run.report.int_d_sq = detail::reduce(int_d);
    run.report.int_a4_4 = detail::reduce(int_a4);
    run.report.sup_w_p = detail::reduce(sup_wp);
    run.report.exp_moment = detail::reduce(expm);
    for (double e : expm)
        if (!std::isfinite(e))
            run.report.exp_moment_finite = false;
    for (const auto& s : run.summaries)
        run.report.seeds.push_back(s.seed);
    return run;
}

struct LevelDistance {
    int n_coarse = 0;
    int n_fine = 0;
    double e_sup_v_sq = 0.0;  // E sup_t |Y_fine - Y_coarse|_V^2
    double e_int_v_sq = 0.0;  // E int |Y_fine - Y_coarse|_V^2 dt
};

// Coupled-level experiment: each path drives every level with the same Wiener
// channels; coarse states embed into finer spaces by zero padding in the
// shared mode ordering, so consecutive-level distances measure Galerkin
// convergence directly.
inline std::vector<LevelDistance> galerkin_convergence(const SimProblem& prob, const SpectralState& y0_full,
                                                       const std::vector<int>& levels, int n_paths,
                                                       int parallelism) {
    if (levels.size() < 1)
        throw std::invalid_argument("galerkin_convergence: need at least one level");
    for (size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1])
            throw std::invalid_argument("galerkin_convergence: levels must be strictly increasing");
    if (levels.back() > prob.basis->size())
        throw std::invalid_argument("galerkin_convergence: level exceeds basis size");
    if (static_cast<Eigen::Index>(levels.back()) > y0_full.size())
        throw std::invalid_argument("galerkin_convergence: initial state shorter than finest level");

    struct PathTraj {
        std::vector<std::vector<Vector>> by_level;
    };
    std::vector<PathTraj> trajs(static_cast<size_t>(n_paths));

    detail::parallel_for(n_paths, parallelism, [&](int p) {
        PathTraj& tr = trajs[static_cast<size_t>(p)];
        for (int lv : levels) {
            SimProblem local = prob;
            local.seed = rng::derive_seed(prob.seed, static_cast<std::uint64_t>(p), rng::kPathSeed);
            local.record_trajectory = true;
            SpectralState y0 = SpectralState::zero(lv);
            y0.coeffs = y0_full.coeffs.head(lv);
            const PathResult res = simulate_path(local, y0);
            std::vector<Vector> hist;
            hist.reserve(res.snapshots.size());
            for (const auto& [t, c] : res.snapshots)
                hist.push_back(c);
            tr.by_level.push_back(std::move(hist));
        }
    });

    std::vector<LevelDistance> out;
    for (size_t li = 0; li + 1 < levels.size(); ++li) {
        LevelDistance d;
        d.n_coarse = levels[li];
        d.n_fine = levels[li + 1];
        for (int p = 0; p < n_paths; ++p) {
            const auto& coarse = trajs[static_cast<size_t>(p)].by_level[li];
            const auto& fine = trajs[static_cast<size_t>(p)].by_level[li + 1];
            const size_t steps = std::min(coarse.size(), fine.size());
            double sup = 0.0, integral = 0.0;
            for (size_t s = 0; s < steps; ++s) {
                double dist = 0.0;
                for (int j = 0; j < d.n_fine; ++j) {
                    const double cj = j < d.n_coarse ? coarse[s][j] : 0.0;
                    const double diff = fine[s][j] - cj;
                    dist += diff * diff;
                }
                sup = std::max(sup, dist);
                if (s + 1 < steps)
                    integral += dist * prob.dt;
            }
            d.e_sup_v_sq += sup;
            d.e_int_v_sq += integral;
        }
        d.e_sup_v_sq /= n_paths;
        d.e_int_v_sq /= n_paths;
        out.push_back(d);
    }
    return out;
}

struct TwinPathReport {
    double delta = 0.0;
    std::vector<double> times;
    std::vector<double> dist_v_sq;           // |Y1 - Y2|_V^2 (t)
    std::vector<double> weighted_dist_v_sq;  // xi3(t) |Y1 - Y2|_V^2
    double sup_dist_v = 0.0;
    double stability_factor = 0.0;  // sup_t |Y1 - Y2|_V / delta
    double D3 = 0.0;                // 2 (K_sigma + 2 C_N)
    double D4 = 0.0;                // 2 C_B
    bool identical = false;         // delta = 0 twin reproduced bitwise
};

// Two runs on the same Wiener path, the second from a perturbed start. The
// exponential weight xi3(t) = exp(-D3 t / 2 - D4 int_0^t |Y1|_W ds) uses the
// empirically estimated continuity constants.
inline TwinPathReport twin_path_stability(const SimProblem& prob, const SpectralState& y0, double delta,
                                          const Vector* direction = nullptr) {
    validate(prob, y0.size());
    TwinPathReport rep;
    rep.delta = delta;

    const ConstantEstimates est = estimate_constants(
        *prob.basis, 32, rng::derive_seed(prob.seed, 1, rng::kConstants), prob.params, prob.noise);
    rep.D3 = 2.0 * (est.sigma_lipschitz + 2.0 * est.n_continuity);
    rep.D4 = 2.0 * est.b_continuity;

    SimProblem local = prob;
    local.record_trajectory = true;
    const PathResult r1 = simulate_path(local, y0);

    SpectralState y0b = y0;
    if (delta != 0.0) {
        Vector dir;
        if (direction != nullptr) {
            dir = *direction;
        } else if (y0.coeffs.norm() > 0.0) {
            dir = y0.coeffs.normalized();
        } else {
            dir = Vector::Zero(y0.size());
            dir[0] = 1.0;
        }
        y0b.coeffs += delta * dir;
    }
    const PathResult r2 = simulate_path(local, y0b);

    const size_t steps = std::min(r1.snapshots.size(), r2.snapshots.size());
    double xi_exponent = 0.0;
    rep.identical = true;
    for (size_t s = 0; s < steps; ++s) {
        const double t = r1.snapshots[s].first;
        const Vector& c1 = r1.snapshots[s].second;
        const Vector& c2 = r2.snapshots[s].second;
        double dist = 0.0;
        for (Eigen::Index j = 0; j < c1.size(); ++j) {
            const double diff = c2[j] - c1[j];
            dist += diff * diff;
            if (c1[j] != c2[j])
                rep.identical = false;
        }
        if (s > 0) {
            const double w_prev = std::sqrt(norm_W_sq({r1.snapshots[s - 1].second, 0.0}, *prob.basis));
            xi_exponent += -0.5 * rep.D3 * prob.dt - rep.D4 * w_prev * prob.dt;
        }
        rep.times.push_back(t);
        rep.dist_v_sq.push_back(dist);
        rep.weighted_dist_v_sq.push_back(std::exp(xi_exponent) * dist);
        rep.sup_dist_v = std::max(rep.sup_dist_v, std::sqrt(dist));
    }
    rep.stability_factor = delta != 0.0 ? rep.sup_dist_v / delta : 0.0;
    return rep;
}

}  // namespace tgf
