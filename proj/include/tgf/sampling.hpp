// Reproducible random spectral states for property checks and constant fits.

#pragma once

#include "tgf/basis.hpp"
#include "tgf/rng.hpp"

namespace tgf {

// Coefficients i.i.d. N(0,1)/lambda_j, scaled: smooth, W-bounded samples whose
// quartic products stay resolved on the working grid.
inline SpectralState random_state(const Basis& basis, std::uint64_t seed, std::uint64_t trial, double scale = 1.0,
                                  Eigen::Index n_modes = -1) {
    const Eigen::Index n = n_modes < 0 ? basis.size() : n_modes;
    SpectralState s = SpectralState::zero(n);
    for (Eigen::Index j = 0; j < n; ++j)
        s.coeffs[j] =
            scale * rng::standard_normal(seed, rng::kStateSample, trial, static_cast<std::uint64_t>(j)) / basis[j].lambda;
    return s;
}

}  // namespace tgf
