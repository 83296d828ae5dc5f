#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "surfstokes/errors.hpp"
#include "surfstokes/experiment/experiment.hpp"
#include "surfstokes/mesh/base_mesh.hpp"

namespace surfstokes::experiment {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int parse_int(std::string_view key, std::string_view text) {
    int v = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    SURFSTOKES_THROW_IF(ec != std::errc() || end != text.data() + text.size() || text.empty(),
                        ErrorCode::Config,
                        "'" + std::string(key) + "' expects an integer, got '" + std::string(text) + "'");
    return v;
}

double parse_real(std::string_view key, std::string_view text) {
    double v = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    SURFSTOKES_THROW_IF(ec != std::errc() || end != text.data() + text.size() || text.empty() ||
                            !std::isfinite(v),
                        ErrorCode::Config,
                        "'" + std::string(key) + "' expects a real number, got '" + std::string(text) + "'");
    return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
    if (text == "1" || text == "true" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "no") return false;
    throw Error(ErrorCode::Config, "'" + std::string(key) + "' expects true or false, got '" +
                                       std::string(text) + "'");
}

}  // namespace

LevelRange parse_level_range(std::string_view text) {
    text = trim(text);
    LevelRange r;
    const auto dots = text.find("..");
    if (dots == std::string_view::npos) {
        r.first = r.last = parse_int("levels", text);
    } else {
        r.first = parse_int("levels", trim(text.substr(0, dots)));
        r.last = parse_int("levels", trim(text.substr(dots + 2)));
    }
    SURFSTOKES_THROW_IF(r.first > r.last, ErrorCode::Config,
                        "level range '" + std::string(text) + "' is empty");
    SURFSTOKES_THROW_IF(r.first < 0 || r.last > mesh::kMaxLevel, ErrorCode::Config,
                        "levels must lie in 0.." + std::to_string(mesh::kMaxLevel));
    return r;
}

assembly::SystemConfig ExperimentConfig::system() const {
    assembly::SystemConfig c;
    c.surface = surface;
    c.method = method;
    c.ku = ku.value_or(2);
    c.kpr = kpr.value_or(std::max(1, c.ku - 1));
    c.klambda = klambda.value_or(std::max(1, c.ku - 1));
    c.kg = kg.value_or(c.ku);
    c.kp = kp.value_or(c.kg + 1);
    c.mu = mu;
    c.eta_exponent = eta_exponent;
    c.quad = quad;
    c.multiplier = lambda_exact.value_or(method == assembly::Method::Lagrange
                                             ? geometry::MultiplierChoice::Linear
                                             : geometry::MultiplierChoice::Zero);
    c.threads = threads;
    c.allow_unstable = allow_unstable;
    assembly::validate(c);
    return c;
}

void apply_setting(ExperimentConfig& c, std::string_view key, std::string_view raw) {
    const std::string_view value = trim(raw);
    if (key == "surface") {
        c.surface = geometry::parse_surface_kind(value);
    } else if (key == "method") {
        c.method = assembly::parse_method(value);
    } else if (key == "ku") {
        c.ku = parse_int(key, value);
    } else if (key == "kpr") {
        c.kpr = parse_int(key, value);
    } else if (key == "klambda") {
        c.klambda = parse_int(key, value);
    } else if (key == "kg") {
        c.kg = parse_int(key, value);
    } else if (key == "kp") {
        c.kp = parse_int(key, value);
    } else if (key == "mu") {
        c.mu = parse_real(key, value);
    } else if (key == "eta_exp" || key == "eta-exp") {
        c.eta_exponent = parse_real(key, value);
    } else if (key == "levels") {
        c.levels = parse_level_range(value);
    } else if (key == "quad") {
        c.quad = parse_int(key, value);
    } else if (key == "lambda_exact" || key == "lambda-exact") {
        c.lambda_exact = geometry::parse_multiplier_choice(value);
    } else if (key == "threads") {
        c.threads = parse_int(key, value);
        SURFSTOKES_THROW_IF(c.threads < 1, ErrorCode::Config, "threads must be at least 1");
    } else if (key == "out") {
        c.out = std::string(value);
    } else if (key == "allow_unstable" || key == "allow-unstable") {
        c.allow_unstable = parse_bool(key, value);
    } else {
        throw Error(ErrorCode::Config, "unknown setting '" + std::string(key) + "'");
    }
}

void load_config(ExperimentConfig& config, std::istream& in) {
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        SURFSTOKES_THROW_IF(eq == std::string_view::npos, ErrorCode::Config,
                            "config line " + std::to_string(number) + ": expected key=value");
        try {
            apply_setting(config, trim(view.substr(0, eq)), view.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(e.code(), "config line " + std::to_string(number) + ": " + e.what());
        }
    }
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    SURFSTOKES_THROW_IF(!in, ErrorCode::Io, "cannot open config file '" + path + "'");
    load_config(config, in);
}

}  // namespace surfstokes::experiment
