#include "wkam/config.hpp"

#include <fstream>
#include <sstream>

#include "wkam/errors.hpp"

namespace wkam {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse number for key '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse integer for key '" + key + "': " + value);
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::istringstream in(value);
    std::string token;
    while (in >> token) out.push_back(parse_double(key, token));
    return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ConfigError("config: cannot parse boolean for key '" + key + "': " + value);
}

} // namespace

void ExperimentConfig::validate() const {
    try {
        scheme.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (lambdas.empty()) throw ConfigError("config: lambdas list is empty");
    for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
        if (lambdas[i + 1] >= lambdas[i])
            throw ConfigError("config: lambdas must be strictly decreasing");
    for (double l : lambdas)
        if (!(l > 0.0)) throw ConfigError("config: lambdas must be positive");
    if (!(solver_tol > 0.0)) throw ConfigError("config: solver tolerance must be positive");
    if (!(model.r0 > 0.0)) throw ConfigError("config: r0 must be positive");
    if (model.family == Family::SeparatedNonlinear && model.g.coeffs.empty())
        throw ConfigError("config: separated_nonlinear family needs g_coeffs");
}

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig config;
    config.scheme.tau = 0.0; // default 1/n applied after parsing

    std::string potential_kind = "cosine_well";
    FourierSeries custom_potential;
    bool weight_given = false;
    FourierSeries weight;

    std::istringstream in(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config: malformed section header at line " +
                                  std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (section != "model" && section != "scheme" && section != "lambdas" &&
                section != "tolerances" && section != "output" && section != "oracles" &&
                section != "experiment")
                throw ConfigError("config: unknown section [" + section + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(line_no));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config: key '" + key + "' outside any section");

        if (section == "experiment") {
            if (key == "name") config.name = value;
            else throw ConfigError("config: unknown key '" + key + "' in [experiment]");
        } else if (section == "model") {
            if (key == "family") {
                if (value == "separated_linear") config.model.family = Family::SeparatedLinear;
                else if (value == "separated_nonlinear")
                    config.model.family = Family::SeparatedNonlinear;
                else if (value == "state_weighted") config.model.family = Family::StateWeighted;
                else throw ConfigError("config: unknown family '" + value + "'");
            } else if (key == "potential") {
                if (value != "cosine_well" && value != "two_well" && value != "zero" &&
                    value != "fourier")
                    throw ConfigError("config: unknown potential '" + value + "'");
                potential_kind = value;
            } else if (key == "potential_const") {
                custom_potential.c0 = parse_double(key, value);
            } else if (key == "potential_cos") {
                custom_potential.cos_coeffs = parse_list(key, value);
            } else if (key == "potential_sin") {
                custom_potential.sin_coeffs = parse_list(key, value);
            } else if (key == "weight_const") {
                weight.c0 = parse_double(key, value);
                weight_given = true;
            } else if (key == "weight_cos") {
                weight.cos_coeffs = parse_list(key, value);
                weight_given = true;
            } else if (key == "weight_sin") {
                weight.sin_coeffs = parse_list(key, value);
                weight_given = true;
            } else if (key == "g_coeffs") {
                config.model.g.coeffs = parse_list(key, value);
            } else if (key == "r0") {
                config.model.r0 = parse_double(key, value);
            } else {
                throw ConfigError("config: unknown key '" + key + "' in [model]");
            }
        } else if (section == "scheme") {
            if (key == "n") config.scheme.n = parse_int(key, value);
            else if (key == "tau") config.scheme.tau = parse_double(key, value);
            else if (key == "window") config.scheme.window = parse_int(key, value);
            else throw ConfigError("config: unknown key '" + key + "' in [scheme]");
        } else if (section == "lambdas") {
            if (key == "values") config.lambdas = parse_list(key, value);
            else throw ConfigError("config: unknown key '" + key + "' in [lambdas]");
        } else if (section == "tolerances") {
            if (key == "solver") config.solver_tol = parse_double(key, value);
            else if (key == "route_agreement") config.route_agreement_tol = parse_double(key, value);
            else if (key == "conv_eps") config.conv_eps = parse_double(key, value);
            else if (key == "eps_tail") config.eps_tail = parse_double(key, value);
            else if (key == "cycle_cap") config.cycle_cap = static_cast<std::size_t>(parse_int(key, value));
            else throw ConfigError("config: unknown key '" + key + "' in [tolerances]");
        } else if (section == "output") {
            if (key == "dir") config.output_dir = value;
            else throw ConfigError("config: unknown key '" + key + "' in [output]");
        } else if (section == "oracles") {
            if (key == "enabled") config.oracles = parse_bool(key, value);
            else throw ConfigError("config: unknown key '" + key + "' in [oracles]");
        }
    }

    if (potential_kind == "cosine_well") config.model.potential = FourierSeries::cosine_well();
    else if (potential_kind == "two_well") config.model.potential = FourierSeries::two_well();
    else if (potential_kind == "zero") config.model.potential = FourierSeries::zero();
    else config.model.potential = custom_potential;

    if (config.model.family == Family::StateWeighted && !weight_given)
        throw ConfigError("config: state_weighted family needs a weight section");
    config.model.weight = weight;

    if (config.scheme.tau == 0.0) config.scheme.tau = 1.0 / config.scheme.n;

    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config_text(text.str());
}

} // namespace wkam
