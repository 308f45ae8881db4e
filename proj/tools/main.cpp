// Command-line driver: solve / verify / sweep / export over JSON configs.
// Exit codes: 0 ok, 1 check failure, 2 config error, 3 solver error, 4 I/O error.
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "pxfb/config.hpp"

namespace fs = std::filesystem;
using namespace pxfb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverError = 3;
constexpr int kExitIoError = 4;

struct CliArgs {
    std::string config_path;
    std::string output_dir;
    std::string load_field;
    std::string axis;
    std::vector<double> values;
    int jobs = 1;
    bool verbose = false;
};

std::string value_label(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

fs::path resolve_output(const CliArgs& args, const Config& cfg) {
    return args.output_dir.empty() ? fs::path(cfg.output_dir) : fs::path(args.output_dir);
}

struct SolveFiles {
    RunArtifacts run;
    EnergyBreakdown final_energy;
};

SolveFiles write_solve_outputs(const Instance& inst, const fs::path& outdir,
                               const std::optional<ScalarField>& loaded) {
    SolveFiles sf;
    sf.run = run_instance(inst, loaded);
    sf.final_energy = energy_exact(sf.run.result.u, inst.p, inst.lam, 0.0);

    atomic_write(outdir / "u.csv", field_csv(sf.run.result.u));
    atomic_write(outdir / "fb.csv", freeboundary_csv(sf.run.fb, inst.grid.dim));
    atomic_write(outdir / "energy_trace.csv", energy_trace_csv(sf.run.result));

    ordered_json j;
    j["energy"] = {{"dirichlet", sf.final_energy.dirichlet},
                   {"volume", sf.final_energy.volume},
                   {"total", sf.final_energy.total}};
    ordered_json fbj;
    fbj["none"] = sf.run.fb.none;
    fbj["tau"] = sf.run.fb.tau;
    fbj["points"] = sf.run.fb.points.size();
    if (!sf.run.fb.none) {
        double bestd = -1.0;
        Vec2 loc{0.0, 0.0};
        for (const auto& pt : sf.run.fb.points) {
            const double d = inst.grid.boundary_distance(pt.x);
            if (d > bestd) {
                bestd = d;
                loc = pt.x;
            }
        }
        fbj["location_x"] = loc[0];
        if (inst.grid.dim == 2) fbj["location_y"] = loc[1];
    }
    j["free_boundary"] = fbj;
    j["grad_norm_final"] = sf.run.result.grad_norm_final;
    j["stages"] = sf.run.result.stages;
    atomic_write(outdir / "result.json", j.dump(2) + "\n");
    return sf;
}

int cmd_solve(const CliArgs& args) {
    Config cfg = Config::load(args.config_path);
    Instance inst = cfg.instance(fs::path(args.config_path).parent_path());
    inst.verbose = args.verbose;
    const fs::path outdir = resolve_output(args, cfg);
    std::optional<ScalarField> loaded;
    if (!args.load_field.empty())
        loaded = load_field_csv(inst.grid, Location::Node, args.load_field);
    SolveFiles sf;
    try {
        sf = write_solve_outputs(inst, outdir, loaded);
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    }
    std::cout << "total energy " << format_g17(sf.final_energy.total) << ", "
              << sf.run.fb.points.size() << " free boundary point(s), outputs in "
              << outdir.string() << "\n";
    return kExitOk;
}

int cmd_verify(const CliArgs& args) {
    Config cfg = Config::load(args.config_path);
    Instance inst = cfg.instance(fs::path(args.config_path).parent_path());
    inst.verbose = args.verbose;
    const fs::path outdir = resolve_output(args, cfg);
    std::optional<ScalarField> loaded;
    if (!args.load_field.empty())
        loaded = load_field_csv(inst.grid, Location::Node, args.load_field);
    const VerificationReport rep = run_suite(inst, loaded);
    ordered_json j = report_json(rep);
    j["meta"]["timestamp"] = timestamp_utc();
    try {
        atomic_write(outdir / "report.json", j.dump(2) + "\n");
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    }
    std::cout << report_summary_text(rep);
    return rep.all_pass() ? kExitOk : kExitCheckFailure;
}

int cmd_export(const CliArgs& args) {
    Config cfg = Config::load(args.config_path);
    Instance inst = cfg.instance(fs::path(args.config_path).parent_path());
    const fs::path outdir = resolve_output(args, cfg);
    try {
        atomic_write(outdir / "config_normalized.json", cfg.normalized().dump(2) + "\n");
        atomic_write(outdir / "p.csv", field_csv(inst.p.p));
        atomic_write(outdir / "lambda.csv", field_csv(inst.lam.lambda));
        atomic_write(outdir / "lambda_star.csv", field_csv(lambda_star(inst.p, inst.lam)));
        atomic_write(outdir / "phi0.csv", field_csv(inst.phi0.phi0));
        if (!args.load_field.empty()) {
            const ScalarField u = load_field_csv(inst.grid, Location::Node, args.load_field);
            atomic_write(outdir / "u.csv", field_csv(u));
        }
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    }
    std::cout << "exported field data to " << outdir.string() << "\n";
    return kExitOk;
}

Config apply_axis(Config cfg, const std::string& axis, double v) {
    if (axis == "n") {
        const int nv = int(v);
        if (nv < 2 || double(nv) != v) throw ConfigError("sweep: n values must be integers >= 2");
        cfg.n = {nv, nv};
    } else if (axis == "lambda_const") {
        cfg.lambda_spec = FieldSpec{"constant", v, {0, 0}, 0.0, "", ""};
    } else if (axis == "p_const") {
        cfg.p_spec = FieldSpec{"constant", v, {0, 0}, 0.0, "", ""};
    } else if (axis == "p_slope") {
        cfg.p_spec = FieldSpec{"affine", 0.0, {v, 0.0}, 2.0, "", ""};
    } else if (axis == "phi0_scale") {
        FieldSpec& s = cfg.phi0_spec;
        if (s.type == "constant" || s.type == "edge") {
            s.value *= v;
        } else if (s.type == "affine") {
            s.a[0] *= v;
            s.a[1] *= v;
            s.b *= v;
        } else {
            throw ConfigError("sweep: cannot scale a tabulated phi0");
        }
    } else {
        throw ConfigError("sweep: unknown axis \"" + axis + "\"");
    }
    return cfg;
}

struct SweepRow {
    double value = 0.0;
    std::string status = "error";
    bool all_pass = false;
    size_t fb_points = 0;
    double fb_location = 0.0;
    double lambda_star_err = 0.0;
    double total_energy = 0.0;
    std::string message;
};

int cmd_sweep(const CliArgs& args) {
    Config base = Config::load(args.config_path);
    if (args.values.empty()) {
        std::cerr << "sweep: empty values list\n";
        return kExitConfigError;
    }
    // Validate the axis up front so a bad name is a config error, not N failures.
    (void)apply_axis(base, args.axis, args.values.front());
    std::vector<double> values = args.values;
    std::sort(values.begin(), values.end());
    const fs::path outdir = resolve_output(args, base);
    const fs::path cfg_dir = fs::path(args.config_path).parent_path();

    std::vector<SweepRow> rows(values.size());
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            SweepRow& row = rows[i];
            row.value = values[i];
            const fs::path rundir = outdir / (args.axis + "=" + value_label(values[i]));
            try {
                Config cfg = apply_axis(base, args.axis, values[i]);
                Instance inst = cfg.instance(cfg_dir);
                const SolveFiles sf = write_solve_outputs(inst, rundir, std::nullopt);
                const VerificationReport rep = run_suite(inst);
                ordered_json j = report_json(rep);
                j["meta"]["timestamp"] = timestamp_utc();
                atomic_write(rundir / "report.json", j.dump(2) + "\n");
                row.status = "ok";
                row.all_pass = rep.all_pass();
                row.fb_points = sf.run.fb.points.size();
                row.total_energy = sf.final_energy.total;
                if (!sf.run.fb.none) {
                    double bestd = -1.0;
                    for (const auto& pt : sf.run.fb.points) {
                        const double d = inst.grid.boundary_distance(pt.x);
                        if (d > bestd) {
                            bestd = d;
                            row.fb_location = pt.x[0];
                        }
                    }
                }
                if (const CheckResult* c = rep.find("lambda_star_condition"))
                    if (c->values.count("max_relative_error"))
                        row.lambda_star_err = c->values.at("max_relative_error");
            } catch (const std::exception& e) {
                row.status = "error";
                row.message = e.what();
            }
        }
    };
    const int jobs = std::max(1, args.jobs);
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs - 1; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    std::ostringstream csv;
    csv << "value,status,all_pass,fb_points,fb_location,lambda_star_max_relerr,total_energy,"
           "message\n";
    bool any_failure = false;
    for (const auto& row : rows) {
        csv << format_g17(row.value) << ',' << row.status << ',' << (row.all_pass ? 1 : 0) << ','
            << row.fb_points << ',' << format_g17(row.fb_location) << ','
            << format_g17(row.lambda_star_err) << ',' << format_g17(row.total_energy) << ",\""
            << row.message << "\"\n";
        if (row.status != "ok" || !row.all_pass) any_failure = true;
    }
    try {
        atomic_write(outdir / "summary.csv", csv.str());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    }
    std::cout << "sweep finished, " << values.size() << " run(s), summary in "
              << (outdir / "summary.csv").string() << "\n";
    return any_failure ? kExitCheckFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational solver and property checks for the one-phase "
                 "Bernoulli free boundary problem of the p(x)-Laplacian"};
    app.require_subcommand(1);
    CliArgs args;

    auto add_common = [&](CLI::App* sub, bool with_load) {
        sub->add_option("--config", args.config_path, "JSON config file")->required();
        sub->add_option("--output", args.output_dir, "output directory (overrides config)");
        sub->add_flag("--verbose", args.verbose, "progress lines to stderr");
        if (with_load)
            sub->add_option("--load-field", args.load_field,
                            "node field CSV to use instead of solving");
    };

    CLI::App* solve = app.add_subcommand("solve", "minimize the energy and write field outputs");
    add_common(solve, true);
    CLI::App* verify = app.add_subcommand("verify", "run the property-check suite");
    add_common(verify, true);
    CLI::App* sweep = app.add_subcommand("sweep", "run one instance per parameter value");
    add_common(sweep, false);
    sweep->add_option("--axis", args.axis, "n | lambda_const | p_const | p_slope | phi0_scale")
        ->required();
    sweep->add_option("--values", args.values, "parameter values")->required()->delimiter(',');
    sweep->add_option("--jobs", args.jobs, "concurrent runs");
    CLI::App* exp = app.add_subcommand("export", "write normalized config and sampled field CSVs");
    add_common(exp, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }

    try {
        if (solve->parsed()) return cmd_solve(args);
        if (verify->parsed()) return cmd_verify(args);
        if (sweep->parsed()) return cmd_sweep(args);
        if (exp->parsed()) return cmd_export(args);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kExitSolverError;
    }
    return kExitConfigError;
}
