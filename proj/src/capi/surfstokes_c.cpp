#include "surfstokes/surfstokes.h"

#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <string>

#include "surfstokes/errors.hpp"
#include "surfstokes/experiment/experiment.hpp"

struct ss_config {
    surfstokes::experiment::ExperimentConfig config;
};

struct ss_table {
    surfstokes::experiment::Table table;
};

namespace {

thread_local std::string g_last_error;

int fail(int status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

// Maps every exception to a status code; nothing escapes the C boundary.
template <class Body>
int guarded(Body&& body) noexcept {
    try {
        g_last_error.clear();
        body();
        return SS_OK;
    } catch (const surfstokes::Error& e) {
        return fail(static_cast<int>(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(SS_E_TOO_LARGE, "out of memory");
    } catch (const std::exception& e) {
        return fail(SS_E_INTERNAL, e.what());
    } catch (...) {
        return fail(SS_E_INTERNAL, "unknown failure");
    }
}

template <class Run>
int make_table(const ss_config* config, ss_table** out, Run&& run) noexcept {
    if (!config || !out) return fail(SS_E_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto t = std::make_unique<ss_table>();
        t->table = run(config->config);
        *out = t.release();
    });
}

}  // namespace

extern "C" {

const char* ss_version(void) { return "0.1.0"; }

const char* ss_status_name(int status) {
    if (status == SS_OK) return "OK";
    if (status == SS_E_ARGUMENT) return "E_ARGUMENT";
    if (status >= SS_E_CONFIG && status <= SS_E_INTERNAL)
        return surfstokes::error_code_name(static_cast<surfstokes::ErrorCode>(status));
    return "E_UNKNOWN";
}

const char* ss_last_error(void) { return g_last_error.c_str(); }

int ss_config_create(ss_config** out) {
    if (!out) return fail(SS_E_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] { *out = new ss_config(); });
}

void ss_config_destroy(ss_config* config) { delete config; }

int ss_config_set(ss_config* config, const char* key, const char* value) {
    if (!config || !key || !value) return fail(SS_E_ARGUMENT, "null argument");
    return guarded([&] { surfstokes::experiment::apply_setting(config->config, key, value); });
}

int ss_config_load_file(ss_config* config, const char* path) {
    if (!config || !path) return fail(SS_E_ARGUMENT, "null argument");
    return guarded([&] { surfstokes::experiment::load_config_file(config->config, path); });
}

int ss_config_set_log(ss_config* config, ss_log_fn fn, void* user) {
    if (!config) return fail(SS_E_ARGUMENT, "null argument");
    return guarded([&] {
        if (fn)
            config->config.log = [fn, user](const std::string& line) { fn(line.c_str(), user); };
        else
            config->config.log = nullptr;
    });
}

int ss_run(const ss_config* config, ss_table** out) {
    using namespace surfstokes::experiment;
    return make_table(config, out, [](const ExperimentConfig& c) { return convergence_table(run_convergence(c)); });
}

int ss_probe_geometry(const ss_config* config, ss_table** out) {
    using namespace surfstokes::experiment;
    return make_table(config, out, [](const ExperimentConfig& c) { return probe_table(run_probe(c)); });
}

int ss_infsup(const ss_config* config, ss_table** out) {
    using namespace surfstokes::experiment;
    return make_table(config, out, [](const ExperimentConfig& c) { return infsup_table(run_infsup(c)); });
}

int ss_export_vtk(const ss_config* config, const char* path) {
    if (!config || !path) return fail(SS_E_ARGUMENT, "null argument");
    return guarded([&] { surfstokes::experiment::export_vtk(config->config, path); });
}

int ss_export_matrix(const ss_config* config, const char* path) {
    if (!config || !path) return fail(SS_E_ARGUMENT, "null argument");
    return guarded([&] { surfstokes::experiment::export_matrix(config->config, path); });
}

void ss_table_destroy(ss_table* table) { delete table; }

int ss_table_rows(const ss_table* table) { return table ? static_cast<int>(table->table.rows.size()) : 0; }

int ss_table_cols(const ss_table* table) { return table ? static_cast<int>(table->table.columns.size()) : 0; }

const char* ss_table_column(const ss_table* table, int col) {
    if (!table || col < 0 || col >= ss_table_cols(table)) return nullptr;
    return table->table.columns[col].c_str();
}

double ss_table_value(const ss_table* table, int row, int col) {
    if (!table || row < 0 || row >= ss_table_rows(table) || col < 0 || col >= ss_table_cols(table))
        return std::numeric_limits<double>::quiet_NaN();
    return table->table.rows[row][col];
}

const char* ss_table_csv(const ss_table* table) { return table ? table->table.csv.c_str() : ""; }

int ss_table_write_csv(const ss_table* table, const char* path) {
    if (!table || !path) return fail(SS_E_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream os(path);
        SURFSTOKES_THROW_IF(!os, surfstokes::ErrorCode::Io, std::string("cannot open '") + path + "' for writing");
        os << table->table.csv;
        os.flush();
        SURFSTOKES_THROW_IF(!os, surfstokes::ErrorCode::Io, std::string("writing '") + path + "' failed");
    });
}

int ss_table_summary(const ss_table* table, const char* key, double* value) {
    if (!table || !key || !value) return fail(SS_E_ARGUMENT, "null argument");
    const auto it = table->table.summary.find(key);
    if (it == table->table.summary.end()) return fail(SS_E_CONFIG, std::string("no summary value '") + key + "'");
    g_last_error.clear();
    *value = it->second;
    return SS_OK;
}

const char* ss_table_summary_key(const ss_table* table, int index) {
    if (!table || index < 0 || index >= static_cast<int>(table->table.summary.size())) return nullptr;
    auto it = table->table.summary.begin();
    std::advance(it, index);
    return it->first.c_str();
}

}  // extern "C"
