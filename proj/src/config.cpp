#include "hbmut/config.hpp"

#include "hbmut/errors.hpp"
#include "number_format.hpp"
#include "tsv.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace hbmut {

void ModelConfig::validate() const {
    if (!(concentration > 0.0)) throw UsageError("concentration must be > 0");
    if (gamma_prior && !(gamma_prior->first > 0.0 && gamma_prior->second > 0.0))
        throw UsageError("gamma_prior shape and rate must be > 0");
    if (lambda0 && !(*lambda0 > 0.0)) throw UsageError("lambda0 must be > 0");
    if (!(pi_prior.first > 0.0 && pi_prior.second > 0.0)) throw UsageError("pi_prior parameters must be > 0");
    if (iterations <= 0) throw UsageError("iterations must be positive");
    if (burn_in < 0 || burn_in >= iterations) throw UsageError("burn_in must satisfy 0 <= burn_in < iterations");
    if (thin < 1) throw UsageError("thin must be >= 1");
    if (effect_prior_sd && !(*effect_prior_sd > 0.0)) throw UsageError("effect_prior_sd must be > 0");
    if (!(proposal_scales >= 0.0)) throw UsageError("proposal_scales must be >= 0");
    if (aux_components < 1) throw UsageError("aux_components must be >= 1");
    if (fixed_gamma && !(*fixed_gamma > 0.0)) throw UsageError("fixed_gamma must be > 0");
    if (fixed_pi && !(*fixed_pi >= 0.0 && *fixed_pi <= 1.0)) throw UsageError("fixed_pi must lie in [0, 1]");
}

std::pair<double, double> ModelConfig::resolved_gamma_prior(double crude_rate) const {
    if (gamma_prior) return *gamma_prior;
    return {1.0, crude_rate};
}

std::size_t ModelConfig::num_records() const {
    return static_cast<std::size_t>((iterations - burn_in) / thin);
}

namespace {

double to_double(std::string_view key, std::string_view v) {
    double x;
    if (!tsv::parse_double(v, x)) throw UsageError("config key '" + std::string(key) + "': not a number");
    return x;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
    Int x;
    if (!tsv::parse_int(v, x)) throw UsageError("config key '" + std::string(key) + "': not an integer");
    return x;
}

std::pair<double, double> to_pair(std::string_view key, std::string_view v) {
    auto parts = tsv::split(v, ',');
    if (parts.size() != 2) throw UsageError("config key '" + std::string(key) + "': expected two comma-separated values");
    return {to_double(key, parts[0]), to_double(key, parts[1])};
}

bool to_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw UsageError("config key '" + std::string(key) + "': expected true/false");
}

} // namespace

ModelConfig parse_config(std::istream& in, const std::string& source) {
    ModelConfig c;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = tsv::trim(line);
        if (text.empty() || text.front() == '#') continue;
        auto eq = text.find('=');
        if (eq == std::string_view::npos)
            throw UsageError(source + ":" + std::to_string(line_no) + ": expected key=value");
        auto key = tsv::trim(text.substr(0, eq));
        auto value = tsv::trim(text.substr(eq + 1));
        if (key == "concentration")
            c.concentration = to_double(key, value);
        else if (key == "gamma_prior")
            c.gamma_prior = value == "auto" ? std::nullopt : std::optional(to_pair(key, value));
        else if (key == "lambda0")
            c.lambda0 = value == "none" ? std::nullopt : std::optional(to_double(key, value));
        else if (key == "pi_prior")
            c.pi_prior = to_pair(key, value);
        else if (key == "iterations")
            c.iterations = to_int<int>(key, value);
        else if (key == "burn_in")
            c.burn_in = to_int<int>(key, value);
        else if (key == "thin")
            c.thin = to_int<int>(key, value);
        else if (key == "seed")
            c.seed = to_int<std::uint64_t>(key, value);
        else if (key == "effect_prior_sd")
            c.effect_prior_sd = value == "none" ? std::nullopt : std::optional(to_double(key, value));
        else if (key == "proposal_scales")
            c.proposal_scales = to_double(key, value);
        else if (key == "adapt")
            c.adapt = to_bool(key, value);
        else if (key == "aux_components")
            c.aux_components = to_int<int>(key, value);
        else if (key == "fixed_gamma")
            c.fixed_gamma = value == "none" ? std::nullopt : std::optional(to_double(key, value));
        else if (key == "fixed_pi")
            c.fixed_pi = value == "none" ? std::nullopt : std::optional(to_double(key, value));
        else if (key == "fix_effects")
            c.fix_effects = to_bool(key, value);
        else
            throw UsageError(source + ":" + std::to_string(line_no) + ": unknown config key '" + std::string(key) + "'");
    }
    c.validate();
    return c;
}

ModelConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file " + path.string());
    return parse_config(in, path.string());
}

std::string to_text(const ModelConfig& c) {
    std::ostringstream out;
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string("none"); };
    out << "concentration=" << format_double(c.concentration) << '\n';
    out << "gamma_prior="
        << (c.gamma_prior ? format_double(c.gamma_prior->first) + "," + format_double(c.gamma_prior->second)
                          : std::string("auto"))
        << '\n';
    out << "lambda0=" << opt(c.lambda0) << '\n';
    out << "pi_prior=" << format_double(c.pi_prior.first) << ',' << format_double(c.pi_prior.second) << '\n';
    out << "iterations=" << c.iterations << '\n';
    out << "burn_in=" << c.burn_in << '\n';
    out << "thin=" << c.thin << '\n';
    out << "seed=" << c.seed << '\n';
    out << "effect_prior_sd=" << opt(c.effect_prior_sd) << '\n';
    out << "proposal_scales=" << format_double(c.proposal_scales) << '\n';
    out << "adapt=" << (c.adapt ? "true" : "false") << '\n';
    out << "aux_components=" << c.aux_components << '\n';
    out << "fixed_gamma=" << opt(c.fixed_gamma) << '\n';
    out << "fixed_pi=" << opt(c.fixed_pi) << '\n';
    out << "fix_effects=" << (c.fix_effects ? "true" : "false") << '\n';
    return out.str();
}

} // namespace hbmut
