// Run configuration: JSON schema, builders for basis/noise/forcing/initial
// state, and the run manifest.
//
// Config schema (all keys optional, defaults shown in `default_config`):
// {
//   "nu": 1.0, "alpha1": 1.0, "alpha2": 0.5, "beta": 0.5,
//   "T": 0.1, "dt": 1e-3,
//   "basis":   {"kmax": 4, "lmax": 4, "grid_n": 34},
//   "noise":   {"kind": "none|additive|truncated_multiplicative|linear_unsafe",
//               "m": 2, "rho": 0.1, "R": 1.0, "gradient_mixed": false},
//   "forcing": {"kind": "zero|mode", "k": 1, "l": 1, "amplitude": 0.0},
//   "ic":      {"family": "zero|single_mode|random_band|taylor_green_like",
//               "k": 1, "l": 1, "amplitude": 1.0, "band_kmax": 2, "v_norm": 1.0},
//   "seed": 42, "M_stop": null, "p_moment": 6, "lambda_exp": 1.0,
//   "scheme": "euler_maruyama|semi_implicit",
//   "linear_test_mode": false, "allow_unsafe_noise": false,
//   "snapshot_times": []
// }

#pragma once

#include "tgf/montecarlo.hpp"
#include "tgf/version.hpp"

#include <json.hpp>

#include <fstream>
#include <optional>

namespace tgf {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NoiseConfig {
    std::string kind = "none";
    int m = 2;
    double rho = 0.1;
    double R = 1.0;
    bool gradient_mixed = false;
};

struct ForcingConfig {
    std::string kind = "zero";
    int k = 1, l = 1;
    double amplitude = 0.0;
};

struct IcConfig {
    std::string family = "single_mode";
    int k = 1, l = 1;
    double amplitude = 1.0;
    int band_kmax = 2;
    double v_norm = 1.0;
};

struct RunConfig {
    double nu = 1.0, alpha1 = 1.0, alpha2 = 0.5, beta = 0.5;
    double T = 0.1, dt = 1e-3;
    BasisSpec basis{4, 4, 1.0, 34};
    NoiseConfig noise;
    ForcingConfig forcing;
    IcConfig ic;
    std::uint64_t seed = 42;
    std::optional<double> M_stop;
    int p_moment = 6;
    double lambda_exp = 1.0;
    std::string scheme = "euler_maruyama";
    bool linear_test_mode = false;
    bool allow_unsafe_noise = false;
    std::vector<double> snapshot_times;

    FluidParams params() const { return {nu, alpha1, alpha2, beta}; }
};

namespace detail {

template <typename T>
void read_key(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    }
}

}  // namespace detail

inline RunConfig config_from_json(const json& j) {
    RunConfig c;
    detail::read_key(j, "nu", c.nu);
    detail::read_key(j, "alpha1", c.alpha1);
    detail::read_key(j, "alpha2", c.alpha2);
    detail::read_key(j, "beta", c.beta);
    detail::read_key(j, "T", c.T);
    detail::read_key(j, "dt", c.dt);
    if (j.contains("basis")) {
        const json& b = j.at("basis");
        detail::read_key(b, "kmax", c.basis.kmax);
        detail::read_key(b, "lmax", c.basis.lmax);
        detail::read_key(b, "grid_n", c.basis.grid_n);
    }
    c.basis.alpha1 = c.alpha1;
    if (j.contains("noise")) {
        const json& nj = j.at("noise");
        detail::read_key(nj, "kind", c.noise.kind);
        detail::read_key(nj, "m", c.noise.m);
        detail::read_key(nj, "rho", c.noise.rho);
        detail::read_key(nj, "R", c.noise.R);
        detail::read_key(nj, "gradient_mixed", c.noise.gradient_mixed);
    }
    if (j.contains("forcing")) {
        const json& f = j.at("forcing");
        detail::read_key(f, "kind", c.forcing.kind);
        detail::read_key(f, "k", c.forcing.k);
        detail::read_key(f, "l", c.forcing.l);
        detail::read_key(f, "amplitude", c.forcing.amplitude);
    }
    if (j.contains("ic")) {
        const json& ic = j.at("ic");
        detail::read_key(ic, "family", c.ic.family);
        detail::read_key(ic, "k", c.ic.k);
        detail::read_key(ic, "l", c.ic.l);
        detail::read_key(ic, "amplitude", c.ic.amplitude);
        detail::read_key(ic, "band_kmax", c.ic.band_kmax);
        detail::read_key(ic, "v_norm", c.ic.v_norm);
    }
    detail::read_key(j, "seed", c.seed);
    if (j.contains("M_stop") && !j.at("M_stop").is_null())
        c.M_stop = j.at("M_stop").get<double>();
    detail::read_key(j, "p_moment", c.p_moment);
    detail::read_key(j, "lambda_exp", c.lambda_exp);
    detail::read_key(j, "scheme", c.scheme);
    detail::read_key(j, "linear_test_mode", c.linear_test_mode);
    detail::read_key(j, "allow_unsafe_noise", c.allow_unsafe_noise);
    detail::read_key(j, "snapshot_times", c.snapshot_times);
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is.good())
        throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        is >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

inline json config_to_json(const RunConfig& c) {
    json j;
    j["nu"] = c.nu;
    j["alpha1"] = c.alpha1;
    j["alpha2"] = c.alpha2;
    j["beta"] = c.beta;
    j["T"] = c.T;
    j["dt"] = c.dt;
    j["basis"] = {{"kmax", c.basis.kmax}, {"lmax", c.basis.lmax}, {"grid_n", c.basis.grid_n}};
    j["noise"] = {{"kind", c.noise.kind},
                  {"m", c.noise.m},
                  {"rho", c.noise.rho},
                  {"R", c.noise.R},
                  {"gradient_mixed", c.noise.gradient_mixed}};
    j["forcing"] = {{"kind", c.forcing.kind}, {"k", c.forcing.k}, {"l", c.forcing.l}, {"amplitude", c.forcing.amplitude}};
    j["ic"] = {{"family", c.ic.family}, {"k", c.ic.k},           {"l", c.ic.l},
               {"amplitude", c.ic.amplitude}, {"band_kmax", c.ic.band_kmax}, {"v_norm", c.ic.v_norm}};
    j["seed"] = c.seed;
    if (c.M_stop)
        j["M_stop"] = *c.M_stop;
    else
        j["M_stop"] = nullptr;
    j["p_moment"] = c.p_moment;
    j["lambda_exp"] = c.lambda_exp;
    j["scheme"] = c.scheme;
    j["linear_test_mode"] = c.linear_test_mode;
    j["allow_unsafe_noise"] = c.allow_unsafe_noise;
    j["snapshot_times"] = c.snapshot_times;
    return j;
}

// Built problem pieces; the basis owns the grid everything else samples on.
struct RunSetup {
    RunConfig config;
    std::unique_ptr<Basis> basis;
    NoiseModel noise;
    std::optional<GridField> forcing;
    SpectralState initial_state;
    SimProblem problem;  // non-owning views into the members above
    std::vector<std::string> warnings;
};

inline NoiseModel make_noise(const RunConfig& c, const Basis& basis) {
    if (c.noise.kind == "none")
        return NoiseModel{};
    if (c.noise.kind == "additive")
        return NoiseModel::additive(basis, c.noise.m, c.noise.rho, c.noise.gradient_mixed);
    if (c.noise.kind == "truncated_multiplicative")
        return NoiseModel::multiplicative(basis, c.noise.m, c.noise.rho, c.noise.R, true);
    if (c.noise.kind == "linear_unsafe")
        return NoiseModel::multiplicative(basis, c.noise.m, c.noise.rho, c.noise.R, false);
    throw ConfigError("unknown noise kind: " + c.noise.kind);
}

inline std::optional<GridField> make_forcing(const RunConfig& c, const Basis& basis) {
    if (c.forcing.kind == "zero" || c.forcing.amplitude == 0.0)
        return std::nullopt;
    if (c.forcing.kind == "mode") {
        for (Eigen::Index j = 0; j < basis.size(); ++j)
            if (basis[j].mode.k == c.forcing.k && basis[j].mode.l == c.forcing.l) {
                SpectralState s = SpectralState::zero(basis.size());
                s.coeffs[j] = c.forcing.amplitude;
                return basis.synthesize(s, Deriv::Value);
            }
        throw ConfigError("forcing mode (" + std::to_string(c.forcing.k) + "," + std::to_string(c.forcing.l) +
                          ") not in basis");
    }
    throw ConfigError("unknown forcing kind: " + c.forcing.kind);
}

inline SpectralState make_initial_state(const RunConfig& c, const Basis& basis) {
    SpectralState s = SpectralState::zero(basis.size());
    if (c.ic.family == "zero")
        return s;
    if (c.ic.family == "single_mode" || c.ic.family == "taylor_green_like") {
        const int k = c.ic.family == "taylor_green_like" ? 1 : c.ic.k;
        const int l = c.ic.family == "taylor_green_like" ? 1 : c.ic.l;
        for (Eigen::Index j = 0; j < basis.size(); ++j)
            if (basis[j].mode.k == k && basis[j].mode.l == l) {
                s.coeffs[j] = c.ic.amplitude;
                return s;
            }
        throw ConfigError("initial mode (" + std::to_string(k) + "," + std::to_string(l) + ") not in basis");
    }
    if (c.ic.family == "random_band") {
        for (Eigen::Index j = 0; j < basis.size(); ++j) {
            if (basis[j].mode.k > c.ic.band_kmax || basis[j].mode.l > c.ic.band_kmax)
                continue;
            s.coeffs[j] = rng::standard_normal(c.seed, rng::kInitialCondition, static_cast<std::uint64_t>(j), 0) /
                          basis[j].lambda;
        }
        const double nv = s.coeffs.norm();
        if (nv > 0.0)
            s.coeffs *= c.ic.v_norm / nv;
        return s;
    }
    throw ConfigError("unknown initial-condition family: " + c.ic.family);
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "euler_maruyama")
        return Scheme::EulerMaruyama;
    if (s == "semi_implicit")
        return Scheme::SemiImplicit;
    throw ConfigError("unknown scheme: " + s);
}

// Builds and validates everything a run needs. Constraint violations surface
// as ConfigError with the violated relation in the message.
inline RunSetup build_setup(const RunConfig& c) {
    RunSetup setup;
    setup.config = c;
    if (c.p_moment < 2)
        throw ConfigError("p_moment must be >= 2, got " + std::to_string(c.p_moment));
    if (c.noise.m < 0)
        throw ConfigError("noise channel count m must be >= 0");
    try {
        setup.basis = std::make_unique<Basis>(c.basis);
        setup.noise = make_noise(c, *setup.basis);
        setup.forcing = make_forcing(c, *setup.basis);
        setup.initial_state = make_initial_state(c, *setup.basis);

        SimProblem& p = setup.problem;
        p.params = c.params();
        p.T = c.T;
        p.dt = c.dt;
        p.scheme = parse_scheme(c.scheme);
        p.linear_test_mode = c.linear_test_mode;
        p.allow_unsafe_noise = c.allow_unsafe_noise;
        p.M_stop = c.M_stop;
        p.basis = setup.basis.get();
        p.noise = setup.noise.kind == NoiseKind::None ? nullptr : &setup.noise;
        p.forcing = setup.forcing ? &*setup.forcing : nullptr;
        p.seed = c.seed;
        p.snapshot_times = c.snapshot_times;
        setup.warnings = validate(p, setup.initial_state.size());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return setup;
}

struct RunManifest {
    std::string command;
    RunConfig config;
    std::uint64_t master_seed = 0;
    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    double wall_time_s = 0.0;

    json to_json() const {
        json j;
        j["tool"] = "tgfsim";
        j["version"] = kVersion;
        j["build_tag"] = kBuildTag;
        j["schema_version"] = kOutputSchemaVersion;
        j["command"] = command;
        j["config"] = config_to_json(config);
        j["master_seed"] = master_seed;
        j["outputs"] = outputs;
        j["warnings"] = warnings;
        j["wall_time_s"] = wall_time_s;
        return j;
    }
};

}  // namespace tgf
