// Command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "surfstokes/surfstokes.h"

namespace {

struct ConfigDeleter {
    void operator()(ss_config* c) const { ss_config_destroy(c); }
};
struct TableDeleter {
    void operator()(ss_table* t) const { ss_table_destroy(t); }
};
using ConfigPtr = std::unique_ptr<ss_config, ConfigDeleter>;
using TablePtr = std::unique_ptr<ss_table, TableDeleter>;

// Status carried out of the command to main().
struct Failure {
    int status;
};

void check(int status) {
    if (status != SS_OK) throw Failure{status};
}

int report(int status) {
    std::fprintf(stderr, "%s: %s\n", ss_status_name(status), ss_last_error());
    return status;
}

void log_line(const char* line, void*) { std::fprintf(stderr, "%s\n", line); }

struct Options {
    std::string config_file;
    std::map<std::string, std::string> settings;  // setting key -> value
    bool allow_unstable = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Options& o) {
    const auto setting = [&](const std::string& flag, const std::string& key, const std::string& help) {
        cmd->add_option_function<std::string>(
            flag, [&o, key](const std::string& v) { o.settings[key] = v; }, help);
    };
    cmd->add_option("--config", o.config_file, "key=value file, overridden by flags");
    setting("--surface", "surface", "sphere | biconcave | varying");
    setting("--method", "method", "lagrange | penalty");
    setting("--ku", "ku", "velocity degree");
    setting("--kpr", "kpr", "pressure degree");
    setting("--klambda", "klambda", "multiplier degree (lagrange)");
    setting("--kg", "kg", "geometry degree");
    setting("--kp", "kp", "improved normal degree (penalty)");
    setting("--levels", "levels", "level range a..b");
    setting("--mu", "mu", "viscosity");
    setting("--eta-exp", "eta_exp", "penalty eta = h^-e");
    setting("--quad", "quad", "quadrature exactness");
    setting("--lambda-exact", "lambda_exact", "zero | linear");
    setting("--threads", "threads", "worker threads");
    setting("--out", "out", "output path");
    cmd->add_flag("--allow-unstable", o.allow_unstable, "skip the Taylor-Hood degree checks");
    cmd->add_flag("-q,--quiet", o.quiet, "no progress lines");
}

ConfigPtr build_config(const Options& o) {
    ss_config* raw = nullptr;
    check(ss_config_create(&raw));
    ConfigPtr c(raw);
    if (!o.config_file.empty()) check(ss_config_load_file(c.get(), o.config_file.c_str()));
    for (const auto& [key, value] : o.settings) check(ss_config_set(c.get(), key.c_str(), value.c_str()));
    if (o.allow_unstable) check(ss_config_set(c.get(), "allow_unstable", "true"));
    if (!o.quiet) check(ss_config_set_log(c.get(), log_line, nullptr));
    return c;
}

std::string out_path(const Options& o, const std::string& fallback) {
    const auto it = o.settings.find("out");
    return it != o.settings.end() ? it->second : fallback;
}

// Prints the summary block; the CSV goes to --out or, without it, stdout.
void emit(const Options& o, const ss_table* t) {
    const std::string out = out_path(o, "");
    if (out.empty()) {
        std::fputs(ss_table_csv(t), stdout);
        return;
    }
    check(ss_table_write_csv(t, out.c_str()));
    for (int i = 0; const char* key = ss_table_summary_key(t, i); ++i) {
        double v = 0.0;
        check(ss_table_summary(t, key, &v));
        std::printf("%-22s %.4f\n", key, v);
    }
    std::printf("wrote %s\n", out.c_str());
}

using TableRun = int (*)(const ss_config*, ss_table**);

void run_table(const Options& o, TableRun fn) {
    const ConfigPtr c = build_config(o);
    ss_table* raw = nullptr;
    check(fn(c.get(), &raw));
    const TablePtr t(raw);
    emit(o, t.get());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Surface Stokes finite element experiments"};
    app.require_subcommand(1);
    Options o;

    CLI::App* run = app.add_subcommand("run", "convergence sweep, CSV of errors and EOCs");
    CLI::App* probe = app.add_subcommand("probe-geometry", "geometric error probes per level");
    CLI::App* infsup = app.add_subcommand("infsup", "dense inf-sup estimates on coarse levels");
    CLI::App* vtk = app.add_subcommand("export-vtk", "solution on the finest level as legacy VTK");
    CLI::App* mtx = app.add_subcommand("export-matrix", "saddle matrix and rhs as MatrixMarket");
    for (CLI::App* cmd : {run, probe, infsup, vtk, mtx}) add_common(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "E_CONFIG: %s\n", e.what());
        return SS_E_CONFIG;
    }

    try {
        if (run->parsed()) {
            run_table(o, ss_run);
        } else if (probe->parsed()) {
            run_table(o, ss_probe_geometry);
        } else if (infsup->parsed()) {
            run_table(o, ss_infsup);
        } else if (vtk->parsed()) {
            const ConfigPtr c = build_config(o);
            const std::string path = out_path(o, "solution.vtk");
            check(ss_export_vtk(c.get(), path.c_str()));
            std::printf("wrote %s\n", path.c_str());
        } else if (mtx->parsed()) {
            const ConfigPtr c = build_config(o);
            const std::string path = out_path(o, "system.mtx");
            check(ss_export_matrix(c.get(), path.c_str()));
            std::printf("wrote %s\n", path.c_str());
        }
    } catch (const Failure& f) {
        return report(f.status);
    }
    return 0;
}
