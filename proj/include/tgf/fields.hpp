// Field algebra: Rivlin-Ericksen tensor, pointwise tensor operations, inner
// products and the norm bundle used by the energy ledger.
//
// Inner product conventions:
//   (u,z)_V = (upsilon(u), z) = (u,z) + 2 alpha1 (Du, Dz)
//   (u,z)_W = (u,z)_V + (P upsilon(u), P upsilon(z))
// On the eigenbasis both are diagonal: (e_i,e_j)_V = delta_ij and
// (e_i,e_j)_W = lambda_i delta_ij, so spectral states evaluate them exactly.
// 2-tensors contract with the Frobenius product.

#pragma once

#include "tgf/basis.hpp"

#include <cmath>

namespace tgf {

// A(y) = grad y + (grad y)^T from the Jacobian
inline GridField rivlin_ericksen(const GridField& jac) {
    if (jac.rank != Rank::Tensor2)
        throw std::invalid_argument("rivlin_ericksen: expects a Jacobian tensor field");
    GridField a = GridField::zeros(Rank::Tensor2, jac.grid_n);
    a.comp[0] = 2.0 * jac.comp[0];
    a.comp[1] = jac.comp[1] + jac.comp[2];
    a.comp[2] = a.comp[1];
    a.comp[3] = 2.0 * jac.comp[3];
    return a;
}

struct TensorOps {
    GridField a_sq;   // matrix product A*A
    Array abs_sq;     // |A|^2 pointwise (Frobenius)
    GridField cubic;  // |A|^2 A
};

inline TensorOps tensor_ops(const GridField& a, double asym_tol = 1e-10) {
    if (a.rank != Rank::Tensor2)
        throw std::invalid_argument("tensor_ops: expects a 2-tensor field");
    const double asym = (a.comp[1] - a.comp[2]).abs().maxCoeff();
    const double scale = 1.0 + a.comp[1].abs().maxCoeff();
    if (asym > asym_tol * scale)
        throw std::invalid_argument("tensor_ops: input tensor asymmetric beyond tolerance (upstream bug?)");
    TensorOps t;
    t.abs_sq = pointwise_sq(a);
    t.a_sq = GridField::zeros(Rank::Tensor2, a.grid_n);
    t.a_sq.comp[0] = a.comp[0] * a.comp[0] + a.comp[1] * a.comp[2];
    t.a_sq.comp[1] = a.comp[0] * a.comp[1] + a.comp[1] * a.comp[3];
    t.a_sq.comp[2] = a.comp[2] * a.comp[0] + a.comp[3] * a.comp[2];
    t.a_sq.comp[3] = a.comp[2] * a.comp[1] + a.comp[3] * a.comp[3];
    t.cubic = GridField::zeros(Rank::Tensor2, a.grid_n);
    for (int c = 0; c < 4; ++c)
        t.cubic.comp[c] = t.abs_sq * a.comp[c];
    return t;
}

enum class Product { L2, V, W };

// L2 product of sampled fields
inline double inner(const GridField& u, const GridField& v, const Grid& g) { return l2_inner(u, v, g); }

// Products of spectral states; V and W use the diagonal form, L2 the
// mode-wise scaling (e_i, e_i)_L2 = 1/(1 + alpha1 mu_i).
inline double inner(const SpectralState& u, const SpectralState& v, Product p, const Basis& basis) {
    basis.check_state(u, "inner");
    basis.check_state(v, "inner");
    const Eigen::Index n = std::min(u.size(), v.size());
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
        const double cc = u.coeffs[j] * v.coeffs[j];
        switch (p) {
            case Product::L2:
                s += cc / basis.upsilon_factor(j);
                break;
            case Product::V:
                s += cc;
                break;
            case Product::W:
                s += cc * basis[j].lambda;
                break;
        }
    }
    return s;
}

inline double norm_V_sq(const SpectralState& y) { return y.coeffs.squaredNorm(); }

inline double norm_W_sq(const SpectralState& y, const Basis& basis) { return inner(y, y, Product::W, basis); }

// |D(y)|_2^2 = sum_j c_j^2 mu_j / (2 (1 + alpha1 mu_j)); |A|_2^2 = 4 |D|_2^2
inline double norm_D_sq(const SpectralState& y, const Basis& basis) {
    basis.check_state(y, "norm_D_sq");
    double s = 0.0;
    for (Eigen::Index j = 0; j < y.size(); ++j)
        s += y.coeffs[j] * y.coeffs[j] * basis[j].mu / (2.0 * basis.upsilon_factor(j));
    return s;
}

struct NormReport {
    double l2_sq = 0.0;  // |y|_2^2
    double l4_4 = 0.0;   // |y|_4^4
    double v_sq = 0.0;   // |y|_V^2
    double w_sq = 0.0;   // |y|_W^2
    double w14 = 0.0;    // (|y|_4^4 + |grad y|_4^4)^(1/4)
    double d_sq = 0.0;   // |D(y)|_2^2
};

inline void require_quartic_resolution(const Basis& basis, Eigen::Index n_active) {
    const int km = basis.max_active_wavenumber(n_active);
    if (basis.spec().grid_n < 4 * km + 2)
        throw std::invalid_argument("quartic norms under-resolved: grid_n = " +
                                    std::to_string(basis.spec().grid_n) + " but modes up to wavenumber " +
                                    std::to_string(km) + " need >= " + std::to_string(4 * km + 2));
}

inline NormReport norms(const SpectralState& y, const Basis& basis) {
    require_quartic_resolution(basis, y.size());
    NormReport r;
    r.v_sq = norm_V_sq(y);
    r.w_sq = norm_W_sq(y, basis);
    r.d_sq = norm_D_sq(y, basis);
    r.l2_sq = inner(y, y, Product::L2, basis);
    const GridField val = basis.synthesize(y, Deriv::Value);
    const GridField jac = basis.synthesize(y, Deriv::Gradient);
    r.l4_4 = l4_norm4(val, basis.grid());
    const double grad4 = l4_norm4(jac, basis.grid());
    r.w14 = std::pow(r.l4_4 + grad4, 0.25);
    return r;
}

}  // namespace tgf
