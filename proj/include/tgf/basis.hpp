// Divergence-free eigenbasis on the square [0,pi]^2 with slip walls.
//
// Stream functions psi_kl = sin(kx) sin(ly) generate velocities
//   e = N * (d psi/dy, -d psi/dx) = N * (l sin(kx) cos(ly), -k cos(kx) sin(ly)),
// which satisfy u.n = 0 and (n.D(u)).tau = 0 exactly on all four walls and
// Delta e = -mu e with mu = k^2 + l^2. Normalized so (e, e)_V = 1, each mode
// solves the eigenproblem (v, e)_W = lambda (v, e)_V with lambda = 2 + alpha1*mu.
// Modes are ordered by ascending lambda, ties broken lexicographically by (k,l),
// so any prefix of the list is itself a valid Galerkin space.

#pragma once

#include "tgf/grid.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace tgf {

struct ModeIndex {
    int k = 1;  // x-wavenumber, >= 1
    int l = 1;  // y-wavenumber, >= 1
};

struct BasisSpec {
    int kmax = 4;
    int lmax = 4;
    double alpha1 = 1.0;
    int grid_n = 34;

    int max_wavenumber() const { return std::max(kmax, lmax); }

    void validate() const {
        if (kmax < 1 || lmax < 1)
            throw std::invalid_argument("BasisSpec: kmax and lmax must be >= 1");
        if (alpha1 < 0.0)
            throw std::invalid_argument("BasisSpec: alpha1 must be >= 0");
        if (grid_n < 2 * max_wavenumber() + 2)
            throw std::invalid_argument("BasisSpec: grid_n = " + std::to_string(grid_n) +
                                        " under-resolves modes; need >= " +
                                        std::to_string(2 * max_wavenumber() + 2));
    }
};

struct BasisFunction {
    ModeIndex mode;
    double mu = 0.0;            // Laplacian eigenvalue k^2 + l^2
    double lambda = 0.0;        // eigenvalue 2 + alpha1 * mu
    double v_normalizer = 0.0;  // scale making the mode V-orthonormal
};

// Coefficients of Y in the V-orthonormal basis. The vector length is the
// active Galerkin dimension and may be any prefix of the basis.
struct SpectralState {
    Vector coeffs;
    double time = 0.0;

    static SpectralState zero(Eigen::Index n) { return {Vector::Zero(n), 0.0}; }
    Eigen::Index size() const { return coeffs.size(); }
    bool all_finite() const { return coeffs.allFinite(); }
};

enum class Deriv { Value, Gradient, Laplacian };

struct BoundaryResidual {
    double max_normal = 0.0;  // max |u.n| over wall nodes
    double max_slip = 0.0;    // max |(n.D(u)).tau| over wall nodes
};

class Basis {
  public:
    explicit Basis(const BasisSpec& spec) : spec_(spec), grid_(spec.grid_n) {
        spec.validate();
        funcs_.reserve(static_cast<size_t>(spec.kmax) * spec.lmax);
        for (int k = 1; k <= spec.kmax; ++k) {
            for (int l = 1; l <= spec.lmax; ++l) {
                BasisFunction f;
                f.mode = {k, l};
                f.mu = static_cast<double>(k) * k + static_cast<double>(l) * l;
                f.lambda = 2.0 + spec.alpha1 * f.mu;
                // (e,e)_V = (1 + alpha1 mu) |e|_2^2 and the raw curl of
                // sin(kx)sin(ly) has |.|_2^2 = mu pi^2 / 4.
                f.v_normalizer = 1.0 / std::sqrt((1.0 + spec.alpha1 * f.mu) * f.mu * M_PI * M_PI / 4.0);
                funcs_.push_back(f);
            }
        }
        std::sort(funcs_.begin(), funcs_.end(), [](const BasisFunction& a, const BasisFunction& b) {
            if (a.lambda != b.lambda)
                return a.lambda < b.lambda;
            if (a.mode.k != b.mode.k)
                return a.mode.k < b.mode.k;
            return a.mode.l < b.mode.l;
        });
        val_.reserve(funcs_.size());
        grad_.reserve(funcs_.size());
        for (const auto& f : funcs_) {
            val_.push_back(sample_mode(f, 0, 0));
            grad_.push_back(sample_mode_gradient(f));
        }
    }

    const BasisSpec& spec() const { return spec_; }
    const Grid& grid() const { return grid_; }
    Eigen::Index size() const { return static_cast<Eigen::Index>(funcs_.size()); }
    const BasisFunction& operator[](Eigen::Index j) const { return funcs_[static_cast<size_t>(j)]; }
    const std::vector<BasisFunction>& functions() const { return funcs_; }

    const GridField& mode_values(Eigen::Index j) const { return val_[static_cast<size_t>(j)]; }
    const GridField& mode_gradient(Eigen::Index j) const { return grad_[static_cast<size_t>(j)]; }

    double mu_max(Eigen::Index n_active) const {
        double m = 0.0;
        for (Eigen::Index j = 0; j < n_active; ++j)
            m = std::max(m, funcs_[static_cast<size_t>(j)].mu);
        return m;
    }

    // largest wavenumber among the first n_active modes
    int max_active_wavenumber(Eigen::Index n_active) const {
        int m = 1;
        for (Eigen::Index j = 0; j < n_active; ++j) {
            m = std::max(m, funcs_[static_cast<size_t>(j)].mode.k);
            m = std::max(m, funcs_[static_cast<size_t>(j)].mode.l);
        }
        return m;
    }

    // multiplier turning V-coefficients of y into those of upsilon(y) = y - alpha1 Delta y
    double upsilon_factor(Eigen::Index j) const { return 1.0 + spec_.alpha1 * funcs_[static_cast<size_t>(j)].mu; }

    void check_state(const SpectralState& y, const char* where) const {
        if (y.size() > size())
            throw std::invalid_argument(std::string(where) + ": state has more coefficients than basis modes");
    }

    GridField synthesize(const SpectralState& y, Deriv d) const {
        check_state(y, "synthesize");
        GridField out = GridField::zeros(d == Deriv::Gradient ? Rank::Tensor2 : Rank::Vector, grid_.n());
        for (Eigen::Index j = 0; j < y.size(); ++j) {
            const double c = y.coeffs[j];
            if (c == 0.0)
                continue;
            switch (d) {
                case Deriv::Value:
                    for (int m = 0; m < 2; ++m)
                        out.comp[m] += c * val_[static_cast<size_t>(j)].comp[m];
                    break;
                case Deriv::Gradient:
                    for (int m = 0; m < 4; ++m)
                        out.comp[m] += c * grad_[static_cast<size_t>(j)].comp[m];
                    break;
                case Deriv::Laplacian: {
                    const double s = -funcs_[static_cast<size_t>(j)].mu * c;
                    for (int m = 0; m < 2; ++m)
                        out.comp[m] += s * val_[static_cast<size_t>(j)].comp[m];
                    break;
                }
            }
        }
        return out;
    }

    // mixed derivative d^ax_x d^ay_y of the velocity field (analytic per mode)
    GridField synthesize_derivative(const SpectralState& y, int ax, int ay) const {
        check_state(y, "synthesize_derivative");
        GridField out = GridField::zeros(Rank::Vector, grid_.n());
        for (Eigen::Index j = 0; j < y.size(); ++j) {
            const double c = y.coeffs[j];
            if (c == 0.0)
                continue;
            GridField mode = sample_mode(funcs_[static_cast<size_t>(j)], ax, ay);
            out.comp[0] += c * mode.comp[0];
            out.comp[1] += c * mode.comp[1];
        }
        return out;
    }

    GridField synthesize_upsilon(const SpectralState& y, Deriv d = Deriv::Value) const {
        SpectralState scaled = y;
        for (Eigen::Index j = 0; j < y.size(); ++j)
            scaled.coeffs[j] *= upsilon_factor(j);
        return synthesize(scaled, d);
    }

    // c_j = (v, e_j)_V = (1 + alpha1 mu_j) (v, e_j)_L2 by quadrature
    SpectralState project_V(const GridField& v, std::optional<Eigen::Index> n_modes = std::nullopt) const {
        SpectralState s = project_L2(v, n_modes);
        for (Eigen::Index j = 0; j < s.size(); ++j)
            s.coeffs[j] *= upsilon_factor(j);
        return s;
    }

    // Lift of L2 data f into the Galerkin space: the solution ftilde of the
    // modified Stokes problem satisfies (ftilde, e_j)_V = (f, e_j), so its
    // V-coefficients are plain L2 projections. Pressure gradients are
    // annihilated because every e_j is divergence free and tangent.
    SpectralState modified_stokes(const GridField& f, std::optional<Eigen::Index> n_modes = std::nullopt) const {
        return project_L2(f, n_modes);
    }

    BoundaryResidual boundary_residual(const GridField& value, const GridField& gradient) const {
        if (value.rank != Rank::Vector || gradient.rank != Rank::Tensor2)
            throw std::invalid_argument("boundary_residual: expects vector value and tensor gradient");
        if (value.grid_n != grid_.n() || gradient.grid_n != grid_.n())
            throw std::invalid_argument("boundary_residual: field/grid mismatch");
        const int n = grid_.n();
        BoundaryResidual r;
        auto slip_at = [&](Eigen::Index idx) {
            return 0.5 * std::abs(gradient.comp[1][idx] + gradient.comp[2][idx]);
        };
        for (int j = 0; j < n; ++j) {
            for (int i : {0, n - 1}) {
                const Eigen::Index idx = grid_.index(i, j);
                r.max_normal = std::max(r.max_normal, std::abs(value.comp[0][idx]));  // x-walls
                r.max_slip = std::max(r.max_slip, slip_at(idx));
            }
            for (int i : {0, n - 1}) {
                const Eigen::Index idx = grid_.index(j, i);
                r.max_normal = std::max(r.max_normal, std::abs(value.comp[1][idx]));  // y-walls
                r.max_slip = std::max(r.max_slip, slip_at(idx));
            }
        }
        return r;
    }

    BoundaryResidual boundary_residual(const SpectralState& y) const {
        return boundary_residual(synthesize(y, Deriv::Value), synthesize(y, Deriv::Gradient));
    }

  private:
    SpectralState project_L2(const GridField& v, std::optional<Eigen::Index> n_modes) const {
        if (v.rank != Rank::Vector)
            throw std::invalid_argument("projection: expects a vector field");
        if (v.grid_n != grid_.n())
            throw std::invalid_argument("projection: field sampled on a different grid");
        const Eigen::Index n = n_modes.value_or(size());
        if (n > size())
            throw std::invalid_argument("projection: more modes requested than available");
        SpectralState s = SpectralState::zero(n);
        const Array& w = grid_.weights();
        for (Eigen::Index j = 0; j < n; ++j) {
            const GridField& e = val_[static_cast<size_t>(j)];
            s.coeffs[j] = (w * (v.comp[0] * e.comp[0] + v.comp[1] * e.comp[1])).sum();
        }
        return s;
    }

    // d^ax_x sin(kx) = k^ax sin(kx + ax pi/2), same phase-shift rule for cos
    static Array dsin(const Array& x, int k, int order) {
        return std::pow(k, order) * (static_cast<double>(k) * x + order * M_PI_2).sin();
    }
    static Array dcos(const Array& x, int k, int order) {
        return std::pow(k, order) * (static_cast<double>(k) * x + order * M_PI_2).cos();
    }

    GridField sample_mode(const BasisFunction& f, int ax, int ay) const {
        const int n = grid_.n();
        const Array& x = grid_.axis();
        const int k = f.mode.k, l = f.mode.l;
        const Array sx = dsin(x, k, ax), cx = dcos(x, k, ax);
        const Array sy = dsin(x, l, ay), cy = dcos(x, l, ay);
        GridField out = GridField::zeros(Rank::Vector, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const Eigen::Index idx = grid_.index(i, j);
                out.comp[0][idx] = f.v_normalizer * l * sx[i] * cy[j];
                out.comp[1][idx] = -f.v_normalizer * k * cx[i] * sy[j];
            }
        return out;
    }

    GridField sample_mode_gradient(const BasisFunction& f) const {
        const GridField dx = sample_mode(f, 1, 0);
        const GridField dy = sample_mode(f, 0, 1);
        GridField out = GridField::zeros(Rank::Tensor2, grid_.n());
        out.comp[0] = dx.comp[0];
        out.comp[1] = dy.comp[0];
        out.comp[2] = dx.comp[1];
        out.comp[3] = dy.comp[1];
        return out;
    }

    BasisSpec spec_;
    Grid grid_;
    std::vector<BasisFunction> funcs_;
    std::vector<GridField> val_;
    std::vector<GridField> grad_;
};

}  // namespace tgf
