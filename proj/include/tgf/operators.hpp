// Nonlinear operators of the momentum equation and their tested (weak) forms.
//
// The drift assembles, per test mode e_i,
//   F_i = -2 nu (DY, De_i) - b(Y, upsilon, e_i) - b(e_i, Y, upsilon)
//         - (alpha1+alpha2)(A^2, grad e_i) - beta(|A|^2 A, grad e_i) + (U, e_i),
// where b(phi, z, y) = (phi . grad z, y) and the divergence terms enter only
// weakly, tested against grad e_i. The second convection piece is the
// component-wise sum_j upsilon^j grad Y^j, i.e. the vector with m-th entry
// sum_j upsilon_j d_m Y_j, so that testing against Y itself cancels the pair.
// Viscous coefficients use the exact diagonal (DY, De_i) = c_i mu_i / (2(1+alpha1 mu_i)).

#pragma once

#include "tgf/fields.hpp"

namespace tgf {

struct FluidParams {
    double nu = 1.0;
    double alpha1 = 1.0;
    double alpha2 = 0.5;
    double beta = 0.5;
};

inline double trilinear_b(const GridField& phi_val, const GridField& z_grad, const GridField& y_val,
                          const Grid& g) {
    if (phi_val.rank != Rank::Vector || z_grad.rank != Rank::Tensor2 || y_val.rank != Rank::Vector)
        throw std::invalid_argument("trilinear_b: expects (vector, tensor, vector)");
    // (phi . grad z)_i = phi_1 d1 z_i + phi_2 d2 z_i
    Array q = (phi_val.comp[0] * z_grad.comp[0] + phi_val.comp[1] * z_grad.comp[1]) * y_val.comp[0] +
              (phi_val.comp[0] * z_grad.comp[2] + phi_val.comp[1] * z_grad.comp[3]) * y_val.comp[1];
    return g.integrate(q);
}

inline double trilinear_b(const SpectralState& phi, const SpectralState& z, const SpectralState& y,
                          const Basis& basis) {
    return trilinear_b(basis.synthesize(phi, Deriv::Value), basis.synthesize(z, Deriv::Gradient),
                       basis.synthesize(y, Deriv::Value), basis.grid());
}

// weak divergence: <div T, phi> = -(T, grad phi)
inline double weak_pairing(const GridField& t, const GridField& phi_grad, const Grid& g) {
    if (t.rank != Rank::Tensor2 || phi_grad.rank != Rank::Tensor2)
        throw std::invalid_argument("weak_pairing: expects 2-tensor fields");
    return -l2_inner(t, phi_grad, g);
}

inline double weak_pairing(const GridField& t, const SpectralState& phi, const Basis& basis) {
    return weak_pairing(t, basis.synthesize(phi, Deriv::Gradient), basis.grid());
}

// S(y) = beta |A|^2 A. The a_factor hook rescales the tensor entering the
// operator (the verification suite uses it to prove it can catch a broken
// A = 2D convention); production callers leave it at 1.
inline GridField s_operator(const SpectralState& y, const Basis& basis, double beta, double a_factor = 1.0) {
    GridField a = rivlin_ericksen(basis.synthesize(y, Deriv::Gradient));
    if (a_factor != 1.0)
        for (int c = 0; c < 4; ++c)
            a.comp[c] *= a_factor;
    TensorOps t = tensor_ops(a);
    GridField s = GridField::zeros(Rank::Tensor2, a.grid_n);
    for (int c = 0; c < 4; ++c)
        s.comp[c] = beta * t.cubic.comp[c];
    return s;
}

// N(y) = alpha1 (y . grad A + (grad y)^T A + A grad y) - alpha2 A^2
inline GridField n_operator(const SpectralState& y, const Basis& basis, double alpha1, double alpha2) {
    const GridField val = basis.synthesize(y, Deriv::Value);
    const GridField jac = basis.synthesize(y, Deriv::Gradient);
    const GridField a = rivlin_ericksen(jac);
    const TensorOps t = tensor_ops(a);
    const GridField d20 = basis.synthesize_derivative(y, 2, 0);
    const GridField d11 = basis.synthesize_derivative(y, 1, 1);
    const GridField d02 = basis.synthesize_derivative(y, 0, 2);

    // H(i, b, c) = d_b d_c y_i, zero-based indices
    auto H = [&](int i, int b, int c) -> const Array& {
        if (b == 0 && c == 0)
            return d20.comp[i];
        if (b == 1 && c == 1)
            return d02.comp[i];
        return d11.comp[i];
    };
    // dA(i, j, m) = d_m A_ij
    auto dA = [&](int i, int j, int m) { return Array(H(i, j, m) + H(j, i, m)); };
    auto Aij = [&](int i, int j) -> const Array& { return a.comp[2 * i + j]; };
    auto Jij = [&](int i, int j) -> const Array& { return jac.comp[2 * i + j]; };

    GridField out = GridField::zeros(Rank::Tensor2, basis.grid().n());
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Array conv = val.comp[0] * dA(i, j, 0) + val.comp[1] * dA(i, j, 1);
            Array gta = Jij(0, i) * Aij(0, j) + Jij(1, i) * Aij(1, j);  // ((grad y)^T A)_ij
            Array agr = Aij(i, 0) * Jij(0, j) + Aij(i, 1) * Jij(1, j);  // (A grad y)_ij
            out.comp[2 * i + j] = alpha1 * (conv + gta + agr) - alpha2 * t.a_sq.comp[2 * i + j];
        }
    return out;
}

struct WeakFormTerms {
    Vector viscous;     // -2 nu (DY, De_i)
    Vector convection;  // -b(Y, upsilon, e_i) - b(e_i, Y, upsilon)
    Vector alpha_term;  // -(alpha1+alpha2)(A^2, grad e_i)
    Vector beta_term;   // -beta(|A|^2 A, grad e_i)
    Vector forcing;     // (U, e_i)

    Vector total() const { return viscous + convection + alpha_term + beta_term + forcing; }
};

// Scratch grids for drift evaluation; one per in-flight path.
struct DriftWorkspace {
    GridField val, jac, ups_val, ups_jac, a;
    TensorOps ops;
    Array scratch;
    bool ready = false;
};

// Assembles all tested terms for the active modes of Y. When linear_mode is
// set the convection and tensor terms are skipped entirely, leaving the
// closed-form per-mode decay (requires beta = 0, alpha1 + alpha2 = 0).
inline WeakFormTerms weak_form_terms(const SpectralState& y, const GridField* forcing, const FluidParams& p,
                                     const Basis& basis, DriftWorkspace& ws, bool linear_mode = false) {
    basis.check_state(y, "weak_form_terms");
    if (p.alpha1 != basis.spec().alpha1)
        throw std::invalid_argument("weak_form_terms: params.alpha1 differs from basis alpha1");
    const Eigen::Index n = y.size();
    const Grid& g = basis.grid();
    WeakFormTerms t;
    t.viscous.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        t.viscous[i] = -p.nu * basis[i].mu / basis.upsilon_factor(i) * y.coeffs[i];

    t.forcing = Vector::Zero(n);
    if (forcing != nullptr) {
        const Array& w = g.weights();
        for (Eigen::Index i = 0; i < n; ++i) {
            const GridField& e = basis.mode_values(i);
            t.forcing[i] = (w * (forcing->comp[0] * e.comp[0] + forcing->comp[1] * e.comp[1])).sum();
        }
    }

    if (linear_mode) {
        t.convection = Vector::Zero(n);
        t.alpha_term = Vector::Zero(n);
        t.beta_term = Vector::Zero(n);
        return t;
    }

    ws.val = basis.synthesize(y, Deriv::Value);
    ws.jac = basis.synthesize(y, Deriv::Gradient);
    ws.ups_val = basis.synthesize_upsilon(y, Deriv::Value);
    ws.ups_jac = basis.synthesize_upsilon(y, Deriv::Gradient);
    ws.a = rivlin_ericksen(ws.jac);
    ws.ops = tensor_ops(ws.a);
    ws.ready = true;

    // q = (Y . grad) upsilon + sum_j upsilon^j grad Y^j, contracted against e_i
    GridField q = GridField::zeros(Rank::Vector, g.n());
    q.comp[0] = ws.val.comp[0] * ws.ups_jac.comp[0] + ws.val.comp[1] * ws.ups_jac.comp[1] +
                ws.ups_val.comp[0] * ws.jac.comp[0] + ws.ups_val.comp[1] * ws.jac.comp[2];
    q.comp[1] = ws.val.comp[0] * ws.ups_jac.comp[2] + ws.val.comp[1] * ws.ups_jac.comp[3] +
                ws.ups_val.comp[0] * ws.jac.comp[1] + ws.ups_val.comp[1] * ws.jac.comp[3];

    const double asum = p.alpha1 + p.alpha2;
    t.convection.resize(n);
    t.alpha_term.resize(n);
    t.beta_term.resize(n);
    const Array& w = g.weights();
    for (Eigen::Index i = 0; i < n; ++i) {
        const GridField& e = basis.mode_values(i);
        const GridField& de = basis.mode_gradient(i);
        t.convection[i] = -(w * (q.comp[0] * e.comp[0] + q.comp[1] * e.comp[1])).sum();
        double asq_de = 0.0, cub_de = 0.0;
        for (int c = 0; c < 4; ++c) {
            asq_de += (w * (ws.ops.a_sq.comp[c] * de.comp[c])).sum();
            cub_de += (w * (ws.ops.cubic.comp[c] * de.comp[c])).sum();
        }
        t.alpha_term[i] = -asum * asq_de;
        t.beta_term[i] = -p.beta * cub_de;
    }
    return t;
}

inline Vector galerkin_drift(const SpectralState& y, const GridField* forcing, const FluidParams& p,
                             const Basis& basis, DriftWorkspace& ws, bool linear_mode = false) {
    return weak_form_terms(y, forcing, p, basis, ws, linear_mode).total();
}

}  // namespace tgf
