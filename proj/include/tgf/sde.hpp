// Time integration of the Galerkin system
//   dc_i = (f(Y), e_i) dt + (sigma_k(t, Y), e_i) dW^k_t
// (the tested equation is diagonal because the basis is V-orthonormal),
// with per-step energy accounting and W-norm stopping.
//
// Schemes: explicit Euler-Maruyama, and a semi-implicit variant that treats
// the viscous term implicitly per mode (divide by 1 + dt nu mu/(1+alpha1 mu)).
//
// The ledger records, per step, every functional of the energy estimate plus
// the inequality residual
//   r = d|Y|_V^2 + 4 nu |DY|_2^2 dt + (beta/2)|A|_4^4 dt
//       - ((alpha1+alpha2)^2 / 2 beta)|A|_2^2 dt - (|U|_2^2 + |Y|_2^2) dt
//       - 2 (sigma, Y) dW - sum_{i,k} (sigma^k, e_i)^2 dt,
// which the continuous estimate bounds above by zero in expectation (pathwise
// when sigma = 0).

#pragma once

#include "tgf/noise.hpp"
#include "tgf/operators.hpp"
#include "tgf/rng.hpp"

#include <chrono>
#include <optional>

namespace tgf {

enum class Scheme { EulerMaruyama, SemiImplicit };

struct LedgerRow {
    double t = 0.0;
    double v_sq = 0.0;       // |Y|_V^2
    double w_sq = 0.0;       // |Y|_W^2
    double d_sq = 0.0;       // |DY|_2^2
    double a_sq = 0.0;       // |A|_2^2
    double a4_4 = 0.0;       // |A|_4^4
    double w14_4 = 0.0;      // |Y|_{W^{1,4}}^4
    double int_d_sq = 0.0;   // cumulative integral of |DY|_2^2
    double int_a4_4 = 0.0;   // cumulative integral of |A|_4^4
    double int_a_sq = 0.0;   // cumulative integral of |A|_2^2
    double int_w14_4 = 0.0;  // cumulative integral of |Y|_{W^{1,4}}^4
    double residual = 0.0;   // inequality residual r over the step ending here
    bool stopped = false;
};

struct EnergyLedger {
    std::vector<LedgerRow> rows;
    std::optional<double> tau_M;  // first time |Y|_W reached the stopping threshold

    const LedgerRow& back() const { return rows.back(); }
    double sup_v_sq() const {
        double s = 0.0;
        for (const auto& r : rows)
            s = std::max(s, r.v_sq);
        return s;
    }
    double sup_w_sq() const {
        double s = 0.0;
        for (const auto& r : rows)
            s = std::max(s, r.w_sq);
        return s;
    }
};

struct PathResult {
    EnergyLedger ledger;
    std::vector<std::pair<double, Vector>> snapshots;
    std::optional<std::int64_t> blowup_step;
    double wall_time = 0.0;
    SpectralState final_state;
};

struct SimProblem {
    FluidParams params;
    double T = 0.1;
    double dt = 1e-3;
    Scheme scheme = Scheme::EulerMaruyama;
    bool linear_test_mode = false;
    bool allow_unsafe_noise = false;
    std::optional<double> M_stop;  // W-norm stopping threshold
    const Basis* basis = nullptr;
    const NoiseModel* noise = nullptr;   // may be null (deterministic)
    const GridField* forcing = nullptr;  // may be null (U = 0)
    std::uint64_t seed = 0;
    std::vector<double> snapshot_times;
    bool record_trajectory = false;  // keep coefficient history (level coupling experiments)
};

// Thermodynamic admissibility of the material moduli. Throws with a message
// naming the violated constraint.
inline void validate_params(const FluidParams& p, bool linear_test_mode) {
    if (p.nu < 0.0)
        throw std::invalid_argument("invalid parameters: viscosity nu = " + std::to_string(p.nu) +
                                    " must be >= 0");
    if (p.alpha1 < 0.0)
        throw std::invalid_argument("invalid parameters: alpha1 = " + std::to_string(p.alpha1) +
                                    " must be >= 0");
    if (p.beta < 0.0)
        throw std::invalid_argument("invalid parameters: beta = " + std::to_string(p.beta) + " must be >= 0");
    if (p.beta == 0.0) {
        if (!linear_test_mode)
            throw std::invalid_argument("invalid parameters: beta = 0 requires linear test mode");
        if (p.alpha1 + p.alpha2 != 0.0)
            throw std::invalid_argument(
                "invalid parameters: with beta = 0 the thermodynamic constraint forces alpha1 + alpha2 = 0, got " +
                std::to_string(p.alpha1 + p.alpha2));
        return;
    }
    const double bound = std::sqrt(24.0 * p.nu * p.beta);
    if (std::abs(p.alpha1 + p.alpha2) > bound)
        throw std::invalid_argument("invalid parameters: thermodynamic constraint |alpha1+alpha2| <= sqrt(24 nu beta) "
                                    "violated: |" +
                                    std::to_string(p.alpha1 + p.alpha2) + "| > " + std::to_string(bound));
}

// Full problem validation; returns warnings (stiffness etc.), throws on errors.
inline std::vector<std::string> validate(const SimProblem& prob, Eigen::Index n_active) {
    std::vector<std::string> warnings;
    validate_params(prob.params, prob.linear_test_mode);
    if (prob.basis == nullptr)
        throw std::invalid_argument("invalid problem: no basis");
    prob.basis->spec().validate();
    if (prob.params.alpha1 != prob.basis->spec().alpha1)
        throw std::invalid_argument("invalid problem: alpha1 differs between parameters and basis");
    if (prob.dt <= 0.0)
        throw std::invalid_argument("invalid problem: dt must be positive");
    if (prob.T < prob.dt)
        throw std::invalid_argument("invalid problem: horizon T must be at least one step dt");
    if (prob.noise != nullptr && prob.noise->kind == NoiseKind::LinearUnsafe && !prob.allow_unsafe_noise)
        throw std::invalid_argument(
            "invalid problem: linear_unsafe noise violates the growth hypothesis (exponent 2); "
            "pass the unsafe-noise override to run it anyway");
    require_quartic_resolution(*prob.basis, n_active);
    if (prob.scheme == Scheme::EulerMaruyama) {
        const double mu_max = prob.basis->mu_max(n_active);
        const double stiff = prob.dt * prob.params.nu * mu_max / (1.0 + prob.params.alpha1 * mu_max);
        if (stiff > 0.5)
            warnings.push_back("explicit stepping marginally stable: dt * nu mu_max/(1+alpha1 mu_max) = " +
                               std::to_string(stiff) + " > 0.5");
    }
    return warnings;
}

namespace detail {

// spectral (exact, O(n)) functionals; quartic grid functionals filled separately
inline LedgerRow functionals_row(const SpectralState& y, const Basis& basis) {
    LedgerRow r;
    r.t = y.time;
    r.v_sq = norm_V_sq(y);
    r.w_sq = norm_W_sq(y, basis);
    r.d_sq = norm_D_sq(y, basis);
    r.a_sq = 4.0 * r.d_sq;
    return r;
}

inline void fill_quartics(LedgerRow& r, const SpectralState& y, const Basis& basis) {
    const Grid& g = basis.grid();
    const GridField val = basis.synthesize(y, Deriv::Value);
    const GridField jac = basis.synthesize(y, Deriv::Gradient);
    const GridField a = rivlin_ericksen(jac);
    r.a4_4 = g.integrate(pointwise_sq(a).square());
    r.w14_4 = l4_norm4(val, g) + l4_norm4(jac, g);
}

}  // namespace detail

// Integrate one path. `level` selects the dyadic refinement of the Wiener
// increments: the path runs at dt = prob.dt / 2^level and is pathwise coupled
// to every coarser level of the same seed.
inline PathResult simulate_path(const SimProblem& prob, const SpectralState& y0, int level = 0) {
    const auto t_start = std::chrono::steady_clock::now();
    const Basis& basis = *prob.basis;
    validate(prob, y0.size());
    const double dt = prob.dt / static_cast<double>(std::int64_t{1} << level);
    const std::int64_t n_steps = std::llround(prob.T / dt);
    const int m = prob.noise != nullptr ? prob.noise->m : 0;
    const BrownianTree tree(prob.seed, m, prob.dt);
    const double u_l2_sq = prob.forcing != nullptr ? l2_norm_sq(*prob.forcing, basis.grid()) : 0.0;
    const double kappa = prob.params.beta > 0.0
                             ? (prob.params.alpha1 + prob.params.alpha2) * (prob.params.alpha1 + prob.params.alpha2) /
                                   (2.0 * prob.params.beta)
                             : 0.0;

    PathResult res;
    SpectralState y = y0;
    y.time = 0.0;
    DriftWorkspace ws;

    auto snapshot_due = [&](double t) {
        for (double s : prob.snapshot_times)
            if (std::llround(s / dt) == std::llround(t / dt))
                return true;
        return false;
    };
    auto record_state = [&](double t) {
        if (prob.record_trajectory || snapshot_due(t))
            res.snapshots.emplace_back(t, y.coeffs);
    };

    LedgerRow row = detail::functionals_row(y, basis);
    if (prob.M_stop && std::sqrt(row.w_sq) >= *prob.M_stop) {
        detail::fill_quartics(row, y, basis);
        row.stopped = true;
        res.ledger.tau_M = 0.0;
        res.ledger.rows.push_back(row);
        record_state(0.0);
        res.final_state = y;
        res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
        return res;
    }
    res.ledger.rows.push_back(row);
    record_state(0.0);

    bool last_row_has_quartics = false;
    for (std::int64_t s = 0; s < n_steps; ++s) {
        const Vector c_before = y.coeffs;

        WeakFormTerms terms =
            weak_form_terms(y, prob.forcing, prob.params, basis, ws, prob.linear_test_mode);
        if (!ws.ready) {
            // linear mode skips the grid pass; ledger quartics need it
            ws.val = basis.synthesize(y, Deriv::Value);
            ws.jac = basis.synthesize(y, Deriv::Gradient);
            ws.a = rivlin_ericksen(ws.jac);
            ws.ops = tensor_ops(ws.a);
            ws.ready = true;
        }
        // current-row quartic functionals come from the drift workspace
        {
            LedgerRow& c = res.ledger.rows.back();
            c.a4_4 = basis.grid().integrate(ws.ops.abs_sq.square());
            c.w14_4 = l4_norm4(ws.val, basis.grid()) + l4_norm4(ws.jac, basis.grid());
        }
        const LedgerRow cur = res.ledger.rows.back();

        double martingale = 0.0;
        double ito = 0.0;
        Vector noise_inc = Vector::Zero(y.size());
        if (m > 0) {
            const Eigen::MatrixXd proj = sigma_projection(*prob.noise, y.time, y, basis, y.size());
            ito = proj.squaredNorm();
            for (int k = 0; k < m; ++k) {
                const double dw = tree.increment(level, s, k);
                noise_inc += proj.row(k).transpose() * dw;
                // (sigma_k, Y) in L2: expand Y over modes, (e_i, Y)_L2 = c_i/(1+alpha1 mu_i)
                double sig_y = 0.0;
                for (Eigen::Index i = 0; i < y.size(); ++i)
                    sig_y += proj(k, i) * y.coeffs[i] / basis.upsilon_factor(i);
                martingale += 2.0 * sig_y * dw;
            }
        }

        Vector c_next;
        if (prob.scheme == Scheme::EulerMaruyama) {
            c_next = c_before + dt * terms.total() + noise_inc;
        } else {
            Vector rest = terms.convection + terms.alpha_term + terms.beta_term + terms.forcing;
            c_next = c_before + dt * rest + noise_inc;
            for (Eigen::Index i = 0; i < c_next.size(); ++i) {
                const double rate = prob.params.nu * basis[i].mu / basis.upsilon_factor(i);
                c_next[i] /= 1.0 + dt * rate;
            }
        }

        y.coeffs = c_next;
        y.time = (s + 1) * dt;
        ws.ready = false;

        if (!y.all_finite()) {
            res.blowup_step = s;
            last_row_has_quartics = true;  // filled above for the pre-blowup state
            break;
        }

        double l2_sq_left = 0.0;
        for (Eigen::Index i = 0; i < c_before.size(); ++i)
            l2_sq_left += c_before[i] * c_before[i] / basis.upsilon_factor(i);

        LedgerRow next = detail::functionals_row(y, basis);
        next.int_d_sq = cur.int_d_sq + dt * cur.d_sq;
        next.int_a4_4 = cur.int_a4_4 + dt * cur.a4_4;
        next.int_a_sq = cur.int_a_sq + dt * cur.a_sq;
        next.int_w14_4 = cur.int_w14_4 + dt * cur.w14_4;
        next.residual = (next.v_sq - cur.v_sq) + 4.0 * prob.params.nu * cur.d_sq * dt +
                        0.5 * prob.params.beta * cur.a4_4 * dt - kappa * cur.a_sq * dt -
                        (u_l2_sq + l2_sq_left) * dt - martingale - ito * dt;
        res.ledger.rows.push_back(next);
        record_state(y.time);

        if (prob.M_stop && std::sqrt(next.w_sq) >= *prob.M_stop) {
            res.ledger.rows.back().stopped = true;
            res.ledger.tau_M = y.time;
            break;
        }
    }

    if (!last_row_has_quartics && !res.ledger.rows.empty() && y.all_finite())
        detail::fill_quartics(res.ledger.rows.back(), y, basis);
    res.final_state = y;
    res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return res;
}

}  // namespace tgf
