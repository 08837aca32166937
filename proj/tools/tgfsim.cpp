// tgfsim: spectral Galerkin simulator and verification workbench for the 2D
// stochastic third-grade fluid equation with Navier-slip walls.
//
// Subcommands: simulate | mc | converge | verify
// Exit codes:  0 success, 1 verification failure, 2 invalid input, 3 blow-up.

#include "tgf/config.hpp"
#include "tgf/csv.hpp"
#include "tgf/verify.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <iostream>

namespace fs = std::filesystem;
using namespace tgf;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    bool linear_test_mode = false;
    bool allow_unsafe_noise = false;
};

RunConfig load_with_overrides(const CommonArgs& args) {
    RunConfig cfg = args.config_path.empty() ? RunConfig{} : load_config(args.config_path);
    if (args.seed_override)
        cfg.seed = *args.seed_override;
    if (args.linear_test_mode)
        cfg.linear_test_mode = true;
    if (args.allow_unsafe_noise)
        cfg.allow_unsafe_noise = true;
    return cfg;
}

void write_manifest(const fs::path& dir, RunManifest manifest) {
    std::ofstream os(dir / "manifest.json");
    os << manifest.to_json().dump(2) << "\n";
}

json estimator_json(const Estimator& e) {
    return json{{"mean", std::isfinite(e.mean) ? json(e.mean) : json("overflow")},
                {"std_error", std::isfinite(e.std_error) ? json(e.std_error) : json("overflow")}};
}

int cmd_simulate(const CommonArgs& args) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = load_with_overrides(args);
    RunSetup setup = build_setup(cfg);
    for (const auto& w : setup.warnings)
        std::cerr << "warning: " << w << "\n";

    const PathResult res = simulate_path(setup.problem, setup.initial_state);

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_ledger_csv((dir / "ledger.csv").string(), res.ledger);
    std::vector<std::string> outputs = {"ledger.csv", "manifest.json"};
    if (!res.snapshots.empty()) {
        write_snapshots_csv((dir / "snapshots.csv").string(), res.snapshots);
        outputs.push_back("snapshots.csv");
    }

    RunManifest manifest;
    manifest.command = "simulate";
    manifest.config = cfg;
    manifest.master_seed = cfg.seed;
    manifest.outputs = outputs;
    manifest.warnings = setup.warnings;
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, manifest);

    if (res.blowup_step) {
        std::cerr << "blow-up at step " << *res.blowup_step << " (t = "
                  << static_cast<double>(*res.blowup_step) * cfg.dt << "); results written to " << args.out_dir
                  << "\n";
        return 3;
    }
    if (res.ledger.tau_M)
        std::cout << "stopped at tau_M = " << *res.ledger.tau_M << " (W-norm threshold)\n";
    std::cout << "simulate: " << res.ledger.rows.size() << " ledger rows -> " << args.out_dir << "\n";
    return 0;
}

int cmd_mc(const CommonArgs& args, int paths, int parallel) {
    const auto t0 = std::chrono::steady_clock::now();
    if (paths < 1)
        throw ConfigError("--paths must be >= 1, got " + std::to_string(paths));
    if (parallel < 1)
        throw ConfigError("--parallel must be >= 1, got " + std::to_string(parallel));
    RunConfig cfg = load_with_overrides(args);
    RunSetup setup = build_setup(cfg);

    const EnsembleRun run =
        run_ensemble(setup.problem, setup.initial_state, paths, parallel, cfg.p_moment, cfg.lambda_exp);

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    write_path_summaries_csv((dir / "paths.csv").string(), run.summaries);

    json rep;
    rep["schema_version"] = kOutputSchemaVersion;
    rep["paths"] = run.report.paths;
    rep["blowup_count"] = run.report.blowup_count;
    rep["p_moment"] = run.report.p_moment;
    rep["exp_coefficient"] = run.report.exp_coefficient;
    rep["korn_w14"] = run.report.korn_w14;
    rep["exp_moment_finite"] = run.report.exp_moment_finite;
    rep["estimators"] = {{"sup_v_sq", estimator_json(run.report.sup_v_sq)},
                         {"int_d_sq", estimator_json(run.report.int_d_sq)},
                         {"int_a4_4", estimator_json(run.report.int_a4_4)},
                         {"sup_w_p", estimator_json(run.report.sup_w_p)},
                         {"exp_moment", estimator_json(run.report.exp_moment)}};
    rep["seeds"] = run.report.seeds;
    {
        std::ofstream os(dir / "ensemble.json");
        os << rep.dump(2) << "\n";
    }

    RunManifest manifest;
    manifest.command = "mc --paths " + std::to_string(paths) + " --parallel " + std::to_string(parallel);
    manifest.config = cfg;
    manifest.master_seed = cfg.seed;
    manifest.outputs = {"ensemble.json", "paths.csv", "manifest.json"};
    manifest.warnings = setup.warnings;
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, manifest);

    std::cout << "mc: " << paths << " paths, " << run.report.blowup_count
              << " blow-ups; E sup |Y|_V^2 = " << run.report.sup_v_sq.mean << " (se "
              << run.report.sup_v_sq.std_error << ") -> " << args.out_dir << "\n";
    return 0;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size())
            throw ConfigError("malformed integer list entry: '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("empty list");
    return out;
}

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size())
            throw ConfigError("malformed number list entry: '" + tok + "'");
        out.push_back(v);
    }
    if (out.empty())
        throw ConfigError("empty list");
    return out;
}

int cmd_converge(const CommonArgs& args, const std::string& levels_str, const std::string& dts_str, int paths,
                 int parallel) {
    const auto t0 = std::chrono::steady_clock::now();
    if (levels_str.empty() == dts_str.empty())
        throw ConfigError("converge needs exactly one of --levels or --dts");
    RunConfig cfg = load_with_overrides(args);
    RunSetup setup = build_setup(cfg);
    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    json report;
    report["schema_version"] = kOutputSchemaVersion;

    if (!levels_str.empty()) {
        const std::vector<int> levels = parse_int_list(levels_str);
        const auto rows = galerkin_convergence(setup.problem, setup.initial_state, levels, paths, parallel);
        write_level_distances_csv((dir / "convergence.csv").string(), rows);
        json jrows = json::array();
        for (size_t i = 0; i < rows.size(); ++i) {
            json r = {{"n_coarse", rows[i].n_coarse},
                      {"n_fine", rows[i].n_fine},
                      {"e_sup_v_sq", rows[i].e_sup_v_sq},
                      {"e_int_v_sq", rows[i].e_int_v_sq}};
            if (i > 0 && rows[i].e_sup_v_sq > 0.0)
                r["sup_ratio_to_previous"] = rows[i].e_sup_v_sq / rows[i - 1].e_sup_v_sq;
            jrows.push_back(r);
        }
        report["mode"] = "galerkin_levels";
        report["rows"] = jrows;
        std::cout << "converge (levels):\n";
        for (const auto& r : rows)
            std::cout << "  " << r.n_coarse << " -> " << r.n_fine << ": E sup |diff|_V^2 = " << r.e_sup_v_sq
                      << ", E int = " << r.e_int_v_sq << "\n";
    } else {
        const std::vector<double> dts = parse_double_list(dts_str);
        for (size_t i = 1; i < dts.size(); ++i)
            if (std::abs(dts[i] - 0.5 * dts[i - 1]) > 1e-9 * dts[i - 1])
                throw ConfigError("--dts entries must halve successively (increment coupling is dyadic)");
        cfg.dt = dts[0];
        RunSetup s2 = build_setup(cfg);
        const int n_levels = static_cast<int>(dts.size());

        // per path and refinement level, final-time and sup distances between
        // consecutive dyadic levels of the same Wiener path
        std::vector<std::vector<double>> final_dist(static_cast<size_t>(n_levels - 1));
        std::vector<std::vector<double>> sup_dist(static_cast<size_t>(n_levels - 1));
        for (auto& v : final_dist)
            v.resize(static_cast<size_t>(paths));
        for (auto& v : sup_dist)
            v.resize(static_cast<size_t>(paths));

        detail::parallel_for(paths, parallel, [&](int p) {
            SimProblem local = s2.problem;
            local.seed = rng::derive_seed(cfg.seed, static_cast<std::uint64_t>(p), rng::kPathSeed);
            local.record_trajectory = true;
            std::vector<std::vector<Vector>> hist(static_cast<size_t>(n_levels));
            for (int lv = 0; lv < n_levels; ++lv) {
                const PathResult res = simulate_path(local, s2.initial_state, lv);
                auto& h = hist[static_cast<size_t>(lv)];
                for (const auto& [t, c] : res.snapshots)
                    h.push_back(c);
            }
            for (int lv = 0; lv + 1 < n_levels; ++lv) {
                const auto& coarse = hist[static_cast<size_t>(lv)];
                const auto& fine = hist[static_cast<size_t>(lv + 1)];
                double sup = 0.0;
                for (size_t s = 0; s < coarse.size() && 2 * s < fine.size(); ++s)
                    sup = std::max(sup, (fine[2 * s] - coarse[s]).squaredNorm());
                sup_dist[static_cast<size_t>(lv)][static_cast<size_t>(p)] = std::sqrt(sup);
                final_dist[static_cast<size_t>(lv)][static_cast<size_t>(p)] =
                    (fine.back() - coarse.back()).norm();
            }
        });

        CsvWriter w((dir / "convergence.csv").string(),
                    {"dt_coarse", "dt_fine", "e_final_v", "e_sup_v", "observed_order"});
        json jrows = json::array();
        double prev_final = 0.0;
        std::cout << "converge (dt refinement):\n";
        for (int lv = 0; lv + 1 < n_levels; ++lv) {
            double ef = 0.0, es = 0.0;
            for (int p = 0; p < paths; ++p) {
                ef += final_dist[static_cast<size_t>(lv)][static_cast<size_t>(p)];
                es += sup_dist[static_cast<size_t>(lv)][static_cast<size_t>(p)];
            }
            ef /= paths;
            es /= paths;
            double order = 0.0;
            if (lv > 0 && ef > 0.0)
                order = std::log2(prev_final / ef);
            prev_final = ef;
            w.row({format_double(dts[static_cast<size_t>(lv)]), format_double(dts[static_cast<size_t>(lv) + 1]),
                   format_double(ef), format_double(es), format_double(order)});
            jrows.push_back({{"dt_coarse", dts[static_cast<size_t>(lv)]},
                             {"dt_fine", dts[static_cast<size_t>(lv) + 1]},
                             {"e_final_v", ef},
                             {"e_sup_v", es},
                             {"observed_order", order}});
            std::cout << "  dt " << dts[static_cast<size_t>(lv)] << " vs " << dts[static_cast<size_t>(lv) + 1]
                      << ": E|diff(T)|_V = " << ef;
            if (lv > 0)
                std::cout << ", observed order = " << order;
            std::cout << "\n";
        }
        report["mode"] = "dt_refinement";
        report["rows"] = jrows;
    }

    {
        std::ofstream os(dir / "convergence.json");
        os << report.dump(2) << "\n";
    }
    RunManifest manifest;
    manifest.command = "converge " + (levels_str.empty() ? "--dts " + dts_str : "--levels " + levels_str) +
                       " --paths " + std::to_string(paths);
    manifest.config = cfg;
    manifest.master_seed = cfg.seed;
    manifest.outputs = {"convergence.csv", "convergence.json", "manifest.json"};
    manifest.warnings = setup.warnings;
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, manifest);
    return 0;
}

int cmd_verify(const CommonArgs& args, int trials, std::uint64_t seed, bool break_convention) {
    const auto t0 = std::chrono::steady_clock::now();
    if (trials < 1)
        throw ConfigError("--trials must be >= 1, got " + std::to_string(trials));
    RunConfig cfg = load_with_overrides(args);

    VerifyOptions opt;
    opt.trials = trials;
    opt.seed = seed;
    opt.params = cfg.params();
    opt.debug_break_a_convention = break_convention;
    const std::vector<CheckResult> results = run_suite(cfg.basis, opt);

    Basis basis(cfg.basis);
    NoiseModel noise = make_noise(cfg, basis);
    const ConstantEstimates est =
        estimate_constants(basis, std::max(trials, 10), seed, cfg.params(),
                           noise.kind == NoiseKind::None ? nullptr : &noise);

    std::cout << std::left << std::setw(28) << "check" << std::setw(10) << "trials" << std::setw(14)
              << "max_residual" << std::setw(12) << "tolerance"
              << "result\n";
    for (const auto& r : results)
        std::cout << std::left << std::setw(28) << r.name << std::setw(10) << r.trials << std::setw(14)
                  << std::scientific << std::setprecision(2) << r.max_residual << std::setw(12) << r.tolerance
                  << (r.pass ? "pass" : "FAIL") << "\n";
    std::cout << std::defaultfloat;
    std::cout << "constants: K*(W14) = " << est.korn_w14 << ", K2(grad) = " << est.korn_grad
              << ", P(poincare) = " << est.poincare << ", C_S = " << est.s_continuity
              << ", C_N = " << est.n_continuity << ", C_B = " << est.b_continuity << "\n";

    fs::create_directories(args.out_dir);
    const fs::path dir(args.out_dir);
    json rep;
    rep["schema_version"] = kOutputSchemaVersion;
    rep["trials"] = trials;
    rep["seed"] = seed;
    json checks = json::array();
    for (const auto& r : results)
        checks.push_back({{"name", r.name},
                          {"statement", r.statement},
                          {"trials", r.trials},
                          {"max_residual", r.max_residual},
                          {"tolerance", r.tolerance},
                          {"pass", r.pass}});
    rep["checks"] = checks;
    rep["constants"] = {{"korn_w14", est.korn_w14},     {"korn_grad", est.korn_grad},
                        {"poincare", est.poincare},     {"s_continuity", est.s_continuity},
                        {"n_continuity", est.n_continuity}, {"b_continuity", est.b_continuity},
                        {"sigma_lipschitz", est.sigma_lipschitz}};
    {
        std::ofstream os(dir / "verify_report.json");
        os << rep.dump(2) << "\n";
    }

    RunManifest manifest;
    manifest.command = "verify --trials " + std::to_string(trials) + " --seed " + std::to_string(seed) +
                       (break_convention ? " --debug-break-convention" : "");
    manifest.config = cfg;
    manifest.master_seed = seed;
    manifest.outputs = {"verify_report.json", "manifest.json"};
    manifest.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(dir, manifest);

    return all_pass(results) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral Galerkin simulator for the 2D stochastic third-grade fluid equation"};
    app.set_version_flag("--version", std::string(kBuildTag));
    app.require_subcommand(1);

    CommonArgs common;
    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* opt = sub->add_option("--config", common.config_path, "run configuration (JSON)");
        if (config_required)
            opt->required();
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--seed", common.seed_override, "override the master seed");
        sub->add_flag("--linear-test-mode", common.linear_test_mode,
                      "viscous-only closed-form mode (beta = 0, alpha1 + alpha2 = 0)");
        sub->add_flag("--allow-unsafe-noise", common.allow_unsafe_noise,
                      "permit the linear_unsafe noise family");
    };

    auto* sim = app.add_subcommand("simulate", "integrate one path and write the energy ledger");
    add_common(sim, true);

    int paths = 100, parallel = 1;
    auto* mc = app.add_subcommand("mc", "Monte Carlo ensemble with moment estimators");
    add_common(mc, true);
    mc->add_option("--paths", paths, "number of independent paths");
    mc->add_option("--parallel", parallel, "worker threads");

    std::string levels_str, dts_str;
    int cpaths = 8;
    auto* conv = app.add_subcommand("converge", "coupled-path convergence experiments");
    add_common(conv, true);
    conv->add_option("--levels", levels_str, "Galerkin mode counts, e.g. 4,9,16");
    conv->add_option("--dts", dts_str, "halving step sizes, e.g. 1e-3,5e-4,2.5e-4");
    conv->add_option("--paths", cpaths, "paths per experiment");
    conv->add_option("--parallel", parallel, "worker threads");

    int trials = 100;
    bool break_convention = false;
    auto* ver = app.add_subcommand("verify", "run the identity/inequality suite and constant estimation");
    add_common(ver, false);
    ver->add_option("--trials", trials, "random states per check");
    ver->add_flag("--debug-break-convention", break_convention)->group("");  // suite self-test hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed())
            return cmd_simulate(common);
        if (mc->parsed())
            return cmd_mc(common, paths, parallel);
        if (conv->parsed())
            return cmd_converge(common, levels_str, dts_str, cpaths, parallel);
        if (ver->parsed())
            return cmd_verify(common, trials, common.seed_override.value_or(1), break_convention);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
