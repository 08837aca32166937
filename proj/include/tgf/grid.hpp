// Uniform quadrature grid on the square [0,pi]^2 and sampled field storage.
//
// The grid includes boundary nodes; weights are composite trapezoidal per
// axis. For integrands that are cosine series in each axis (every inner
// product and nonlinear pairing assembled from the velocity modes is one),
// the rule is exact for frequencies below 2*(n-1).

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tgf {

using Array = Eigen::ArrayXd;
using Vector = Eigen::VectorXd;

enum class Rank { Scalar, Vector, Tensor2 };

constexpr int component_count(Rank r) {
    switch (r) {
        case Rank::Scalar:
            return 1;
        case Rank::Vector:
            return 2;
        case Rank::Tensor2:
            return 4;
    }
    return 0;
}

class Grid {
  public:
    explicit Grid(int n) : n_(n) {
        if (n < 2)
            throw std::invalid_argument("Grid: need at least 2 nodes per axis, got " + std::to_string(n));
        h_ = M_PI / (n - 1);
        x_.resize(n);
        for (int i = 0; i < n; ++i)
            x_[i] = i * h_;
        Array wx(n);
        wx.setConstant(h_);
        wx[0] = wx[n - 1] = 0.5 * h_;
        w_.resize(static_cast<Eigen::Index>(n) * n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                w_[index(i, j)] = wx[i] * wx[j];
    }

    int n() const { return n_; }
    double h() const { return h_; }
    Eigen::Index nodes() const { return static_cast<Eigen::Index>(n_) * n_; }
    double x(int i) const { return x_[i]; }
    const Array& axis() const { return x_; }
    const Array& weights() const { return w_; }

    // flat index of node (i, j); i along x, j along y
    Eigen::Index index(int i, int j) const { return static_cast<Eigen::Index>(i) * n_ + j; }

    double integrate(const Array& f) const { return (w_ * f).sum(); }

  private:
    int n_;
    double h_;
    Array x_;
    Array w_;
};

// Sampled scalar / vector / 2-tensor field over an n x n grid.
// Vector components: [u1, u2]. Tensor components row-major: [T11, T12, T21, T22].
// Jacobian convention: (grad y)[2*i + j] = d y_{i+1} / d x_{j+1}.
struct GridField {
    Rank rank = Rank::Scalar;
    int grid_n = 0;
    std::array<Array, 4> comp;

    static GridField zeros(Rank r, int n) {
        GridField f;
        f.rank = r;
        f.grid_n = n;
        const Eigen::Index sz = static_cast<Eigen::Index>(n) * n;
        for (int c = 0; c < component_count(r); ++c)
            f.comp[c] = Array::Zero(sz);
        return f;
    }

    int ncomp() const { return component_count(rank); }

    bool all_finite() const {
        for (int c = 0; c < ncomp(); ++c)
            if (!comp[c].isFinite().all())
                return false;
        return true;
    }
};

inline void require_same_shape(const GridField& a, const GridField& b, const char* where) {
    if (a.rank != b.rank || a.grid_n != b.grid_n)
        throw std::invalid_argument(std::string(where) + ": rank/grid mismatch");
}

// L2 inner product of two equally shaped fields (all components contracted).
inline double l2_inner(const GridField& a, const GridField& b, const Grid& g) {
    require_same_shape(a, b, "l2_inner");
    if (a.grid_n != g.n())
        throw std::invalid_argument("l2_inner: field/grid mismatch");
    double s = 0.0;
    for (int c = 0; c < a.ncomp(); ++c)
        s += g.integrate(a.comp[c] * b.comp[c]);
    return s;
}

inline double l2_norm_sq(const GridField& a, const Grid& g) { return l2_inner(a, a, g); }

// Pointwise squared magnitude, summed over components.
inline Array pointwise_sq(const GridField& a) {
    Array s = a.comp[0].square();
    for (int c = 1; c < a.ncomp(); ++c)
        s += a.comp[c].square();
    return s;
}

// integral of |a|^4 (Frobenius magnitude for tensors)
inline double l4_norm4(const GridField& a, const Grid& g) {
    return g.integrate(pointwise_sq(a).square());
}

}  // namespace tgf
