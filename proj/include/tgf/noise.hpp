// Diffusion coefficient families sigma(t, y) = (sigma^1, ..., sigma^m) and the
// empirical growth/Lipschitz hypothesis fit.
//
// Three families span the hypothesis space:
//   additive                 sigma_k = g_k              (gamma = 0, K = 0)
//   truncated_multiplicative sigma_k = rho min(1, R/|y|_V) y s_k   (bounded, Lipschitz)
//   linear_unsafe            sigma_k = rho y s_k        (growth exponent 2; opt-in only)
// Outputs are generic L2 fields; they act on the system only through their
// projections (sigma_k, e_i).

#pragma once

#include "tgf/fields.hpp"
#include "tgf/sampling.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace tgf {

enum class NoiseKind { None, Additive, TruncatedMultiplicative, LinearUnsafe };

inline std::string to_string(NoiseKind k) {
    switch (k) {
        case NoiseKind::None:
            return "none";
        case NoiseKind::Additive:
            return "additive";
        case NoiseKind::TruncatedMultiplicative:
            return "truncated_multiplicative";
        case NoiseKind::LinearUnsafe:
            return "linear_unsafe";
    }
    return "?";
}

struct NoiseModel {
    NoiseKind kind = NoiseKind::None;
    int m = 0;
    double rho = 0.0;
    double R = 1.0;                 // V-norm truncation radius
    std::vector<GridField> shapes;  // additive: fixed vector fields g_k
    std::vector<Array> masks;       // multiplicative: scalar masks s_k

    // additive shapes: g_k = rho * e_{k+1}, optionally mixed with a pure
    // gradient (which the projection annihilates but the L2 norms see)
    static NoiseModel additive(const Basis& basis, int m, double rho, bool gradient_mixed = false) {
        if (m > basis.size())
            throw std::invalid_argument("NoiseModel: additive channels exceed basis size");
        NoiseModel n;
        n.kind = NoiseKind::Additive;
        n.m = m;
        n.rho = rho;
        const Grid& g = basis.grid();
        for (int k = 0; k < m; ++k) {
            GridField f = GridField::zeros(Rank::Vector, g.n());
            f.comp[0] = rho * basis.mode_values(k).comp[0];
            f.comp[1] = rho * basis.mode_values(k).comp[1];
            if (gradient_mixed) {
                // grad(cos((k+1)x) cos((k+1)y))
                const int p = k + 1;
                for (int i = 0; i < g.n(); ++i)
                    for (int j = 0; j < g.n(); ++j) {
                        const Eigen::Index idx = g.index(i, j);
                        f.comp[0][idx] -= 0.5 * rho * p * std::sin(p * g.x(i)) * std::cos(p * g.x(j));
                        f.comp[1][idx] -= 0.5 * rho * p * std::cos(p * g.x(i)) * std::sin(p * g.x(j));
                    }
            }
            n.shapes.push_back(std::move(f));
        }
        return n;
    }

    static NoiseModel multiplicative(const Basis& basis, int m, double rho, double R, bool truncated) {
        if (R <= 0.0)
            throw std::invalid_argument("NoiseModel: truncation radius R must be positive");
        NoiseModel n;
        n.kind = truncated ? NoiseKind::TruncatedMultiplicative : NoiseKind::LinearUnsafe;
        n.m = m;
        n.rho = rho;
        n.R = R;
        const Grid& g = basis.grid();
        for (int k = 0; k < m; ++k) {
            Array s(g.nodes());
            for (int i = 0; i < g.n(); ++i)
                for (int j = 0; j < g.n(); ++j)
                    s[g.index(i, j)] = std::cos(k * g.x(i)) * std::cos(k * g.x(j));
            n.masks.push_back(std::move(s));
        }
        return n;
    }
};

// sigma(t, Y) sampled per channel. Time dependence is admitted by the
// signature but none of the shipped families uses it.
inline std::vector<GridField> sigma_eval(const NoiseModel& model, double /*t*/, const SpectralState& y,
                                         const Basis& basis) {
    std::vector<GridField> out;
    out.reserve(static_cast<size_t>(model.m));
    switch (model.kind) {
        case NoiseKind::None:
            break;
        case NoiseKind::Additive:
            for (int k = 0; k < model.m; ++k)
                out.push_back(model.shapes[static_cast<size_t>(k)]);
            break;
        case NoiseKind::TruncatedMultiplicative:
        case NoiseKind::LinearUnsafe: {
            const double vnorm = std::sqrt(norm_V_sq(y));
            const double trunc = model.kind == NoiseKind::TruncatedMultiplicative
                                     ? (vnorm > model.R ? model.R / vnorm : 1.0)
                                     : 1.0;
            const GridField val = basis.synthesize(y, Deriv::Value);
            for (int k = 0; k < model.m; ++k) {
                GridField f = GridField::zeros(Rank::Vector, basis.grid().n());
                const Array& s = model.masks[static_cast<size_t>(k)];
                f.comp[0] = model.rho * trunc * val.comp[0] * s;
                f.comp[1] = model.rho * trunc * val.comp[1] * s;
                out.push_back(std::move(f));
            }
            break;
        }
    }
    return out;
}

// (sigma_k, e_i) for the first n modes; rows are channels.
inline Eigen::MatrixXd sigma_projection(const NoiseModel& model, double t, const SpectralState& y,
                                        const Basis& basis, Eigen::Index n) {
    Eigen::MatrixXd proj = Eigen::MatrixXd::Zero(model.m, n);
    if (model.m == 0)
        return proj;
    const std::vector<GridField> sig = sigma_eval(model, t, y, basis);
    const Array& w = basis.grid().weights();
    for (int k = 0; k < model.m; ++k)
        for (Eigen::Index i = 0; i < n; ++i) {
            const GridField& e = basis.mode_values(i);
            proj(k, i) = (w * (sig[static_cast<size_t>(k)].comp[0] * e.comp[0] +
                               sig[static_cast<size_t>(k)].comp[1] * e.comp[1]))
                             .sum();
        }
    return proj;
}

inline double sigma_l2_sq(const std::vector<GridField>& sig, const Grid& g) {
    double s = 0.0;
    for (const auto& f : sig)
        s += l2_norm_sq(f, g);
    return s;
}

struct HypothesisFit {
    double L_hat = 0.0;      // growth level
    double gamma_hat = 0.0;  // growth exponent on |y|_{W^{1,4}}
    double K_hat = 0.0;      // squared-Lipschitz constant in V
    bool growth_violation = false;
};

// Fits |sigma(t,y)|_2^2 <= L (1 + |y|^gamma_{W^{1,4}}) over states spanning
// four decades of magnitude (gamma from the upper tail) and estimates the
// Lipschitz quotient over random pairs.
inline HypothesisFit check_hypotheses(const NoiseModel& model, const Basis& basis, int sample_count,
                                      std::uint64_t seed) {
    if (sample_count < 10)
        throw std::invalid_argument("check_hypotheses: need at least 10 samples");
    const Grid& g = basis.grid();
    HypothesisFit fit;
    if (model.kind == NoiseKind::None || model.m == 0)
        return fit;

    std::vector<double> logx, logz, z, x;
    for (int s = 0; s < sample_count; ++s) {
        const double scale = std::pow(10.0, -2.0 + 4.0 * s / (sample_count - 1));
        SpectralState y = random_state(basis, seed, static_cast<std::uint64_t>(s), scale);
        const NormReport nr = norms(y, basis);
        const double zz = sigma_l2_sq(sigma_eval(model, 0.0, y, basis), g);
        x.push_back(nr.w14);
        z.push_back(zz);
        if (nr.w14 > 0.0 && zz > 0.0) {
            logx.push_back(std::log(nr.w14));
            logz.push_back(std::log(zz));
        }
    }

    // slope over the upper half of the magnitude range = asymptotic exponent
    if (logx.size() >= 4) {
        std::vector<double> sx = logx;
        std::nth_element(sx.begin(), sx.begin() + static_cast<std::ptrdiff_t>(sx.size() / 2), sx.end());
        const double med = sx[sx.size() / 2];
        double mx = 0.0, mz = 0.0;
        int cnt = 0;
        for (size_t i = 0; i < logx.size(); ++i)
            if (logx[i] >= med) {
                mx += logx[i];
                mz += logz[i];
                ++cnt;
            }
        mx /= cnt;
        mz /= cnt;
        double num = 0.0, den = 0.0;
        for (size_t i = 0; i < logx.size(); ++i)
            if (logx[i] >= med) {
                num += (logx[i] - mx) * (logz[i] - mz);
                den += (logx[i] - mx) * (logx[i] - mx);
            }
        fit.gamma_hat = den > 0.0 ? num / den : 0.0;
    }
    if (std::abs(fit.gamma_hat) < 1e-12)
        fit.gamma_hat = 0.0;

    for (size_t i = 0; i < z.size(); ++i)
        fit.L_hat = std::max(fit.L_hat, z[i] / (1.0 + std::pow(x[i], fit.gamma_hat)));

    for (int s = 0; s < sample_count; ++s) {
        SpectralState y1 = random_state(basis, seed ^ 0xABCDULL, static_cast<std::uint64_t>(2 * s), 1.0);
        SpectralState y2 = random_state(basis, seed ^ 0xABCDULL, static_cast<std::uint64_t>(2 * s + 1), 1.0);
        const auto s1 = sigma_eval(model, 0.0, y1, basis);
        const auto s2 = sigma_eval(model, 0.0, y2, basis);
        double num = 0.0;
        for (int k = 0; k < model.m; ++k) {
            GridField d = GridField::zeros(Rank::Vector, g.n());
            d.comp[0] = s1[static_cast<size_t>(k)].comp[0] - s2[static_cast<size_t>(k)].comp[0];
            d.comp[1] = s1[static_cast<size_t>(k)].comp[1] - s2[static_cast<size_t>(k)].comp[1];
            num += l2_norm_sq(d, g);
        }
        SpectralState diff = y1;
        diff.coeffs -= y2.coeffs;
        const double den = norm_V_sq(diff);
        if (den > 1e-14)
            fit.K_hat = std::max(fit.K_hat, num / den);
    }

    fit.growth_violation = fit.gamma_hat >= 1.75;
    return fit;
}

}  // namespace tgf
