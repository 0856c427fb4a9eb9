#include "fracdyn/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fracdyn/types.hpp"

namespace fracdyn::config {

namespace {

using nlohmann::json;

double parse_double(const std::string& s, const std::string& key)
{
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ValidationError("'" + s + "' is not a number", key);
    }
    if (pos != s.size() || !std::isfinite(v)) throw ValidationError("'" + s + "' is not a finite number", key);
    return v;
}

std::uint64_t parse_unsigned(const std::string& s, const std::string& key)
{
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw ValidationError("'" + s + "' is not a non-negative integer", key);
    }
    try {
        return std::stoull(s);
    } catch (const std::exception&) {
        throw ValidationError("'" + s + "' is out of range", key);
    }
}

std::int64_t parse_signed(const std::string& s, const std::string& key)
{
    std::size_t pos = 0;
    try {
        const long long v = std::stoll(s, &pos);
        if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError("'" + s + "' is not an integer", key);
}

bool parse_bool(const std::string& s, const std::string& key)
{
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ValidationError("'" + s + "' is not a boolean", key);
}

std::vector<double> parse_list(const std::string& s, const std::string& key)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ValidationError("empty list item", key);
        out.push_back(parse_double(item.substr(b, e - b + 1), key));
    }
    return out;
}

struct Field {
    std::string section;
    std::string key;
    std::function<void(ExperimentConfig&, const std::string&)> from_text;
    std::function<json(const ExperimentConfig&)> to;
    std::function<void(ExperimentConfig&, const json&)> from;
};

template <class M>
Field make_field(const char* section, const char* key, M ExperimentConfig::*p)
{
    Field f;
    f.section = section;
    f.key = key;
    const std::string k = key;
    f.from_text = [p, k](ExperimentConfig& c, const std::string& s) {
        if constexpr (std::is_same_v<M, double>) {
            c.*p = parse_double(s, k);
        } else if constexpr (std::is_same_v<M, std::uint64_t>) {
            c.*p = parse_unsigned(s, k);
        } else if constexpr (std::is_same_v<M, std::int64_t>) {
            c.*p = parse_signed(s, k);
        } else if constexpr (std::is_same_v<M, bool>) {
            c.*p = parse_bool(s, k);
        } else if constexpr (std::is_same_v<M, std::string>) {
            c.*p = s;
        } else {
            c.*p = parse_list(s, k);
        }
    };
    f.to = [p](const ExperimentConfig& c) { return json(c.*p); };
    f.from = [p, k](ExperimentConfig& c, const json& j) {
        try {
            c.*p = j.get<M>();
        } catch (const json::exception&) {
            throw ValidationError("wrong type for '" + k + "'", k);
        }
    };
    return f;
}

const std::vector<Field>& fields()
{
    using C = ExperimentConfig;
    static const std::vector<Field> f{
        make_field("experiment", "kind", &C::kind),
        make_field("experiment", "seed", &C::seed),
        make_field("experiment", "threads", &C::threads),
        make_field("grid", "n_points", &C::n_points),
        make_field("grid", "length", &C::length),
        make_field("time", "dt", &C::dt),
        make_field("time", "n_steps", &C::n_steps),
        make_field("time", "snapshot_every", &C::snapshot_every),
        make_field("order", "alpha", &C::alpha),
        make_field("order", "beta", &C::beta),
        make_field("model", "form", &C::form),
        make_field("model", "g0", &C::g0),
        make_field("model", "g0_prime", &C::g0_prime),
        make_field("model", "g", &C::g),
        make_field("model", "g2", &C::g2),
        make_field("model", "a", &C::a),
        make_field("model", "b", &C::b),
        make_field("model", "potential", &C::potential),
        make_field("model", "interaction", &C::interaction),
        make_field("model", "interaction_g", &C::interaction_g),
        make_field("initial", "profile", &C::profile),
        make_field("initial", "amplitude", &C::amplitude),
        make_field("initial", "mode", &C::mode),
        make_field("initial", "velocity", &C::velocity),
        make_field("initial", "width", &C::width),
        make_field("chain", "n_particles", &C::n_particles),
        make_field("chain", "dx", &C::chain_dx),
        make_field("chain", "cutoff", &C::cutoff),
        make_field("chain", "nearest_neighbour", &C::nearest_neighbour),
        make_field("chain", "k_list", &C::k_list),
        make_field("tolerance", "max_error", &C::max_error),
    };
    return f;
}

const Field* find(const std::string& section, const std::string& key)
{
    for (const auto& f : fields()) {
        if (f.section == section && f.key == key) return &f;
    }
    return nullptr;
}

void require_one_of(const std::string& v, std::initializer_list<const char*> allowed, const char* key)
{
    for (const char* a : allowed) {
        if (v == a) return;
    }
    throw ValidationError("unsupported value '" + v + "'", key);
}

} // namespace

ExperimentConfig parse_ini(std::istream& in, const std::string& default_kind)
{
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ValidationError(std::string("malformed config: ") + e.what(), "config");
    }
    ExperimentConfig cfg;
    cfg.kind = default_kind;
    for (const auto& [section, body] : tree) {
        if (!body.data().empty()) throw ValidationError("key '" + section + "' outside a section", section);
        for (const auto& [key, value] : body) {
            const Field* f = find(section, key);
            if (!f) throw ValidationError("unknown key '" + section + "." + key + "'", key);
            f->from_text(cfg, value.get_value<std::string>());
        }
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_ini(const std::string& path, const std::string& default_kind)
{
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path, "config");
    return parse_ini(in, default_kind);
}

void validate(const ExperimentConfig& c)
{
    const auto& kinds = experiment_kinds();
    if (std::find(kinds.begin(), kinds.end(), c.kind) == kinds.end()) {
        throw ValidationError("unknown experiment kind '" + c.kind + "'", "kind");
    }
    if (c.threads == 0) throw ValidationError("threads must be at least 1", "threads");
    if (c.n_points < 4) throw ValidationError("grid needs at least 4 points", "n_points");
    if (!(c.length > 0.0)) throw ValidationError("length must be positive", "length");
    if (!(c.dt > 0.0)) throw ValidationError("dt must be positive", "dt");
    if (c.n_steps == 0) throw ValidationError("n_steps must be positive", "n_steps");
    require_spatial_order(c.alpha, "alpha");
    require_caputo_order(c.beta, "beta");
    require_one_of(c.form, {"balance", "flow"}, "form");
    require_one_of(c.potential, {"none", "ginzburg_landau", "sine_gordon"}, "potential");
    require_one_of(c.interaction, {"identity", "square", "quadratic_mix"}, "interaction");
    require_one_of(c.profile, {"mode", "uniform", "kink", "gaussian", "random"}, "profile");
    if (!(c.width > 0.0)) throw ValidationError("width must be positive", "width");
    if (std::abs(c.velocity) >= 1.0) throw ValidationError("kink velocity must satisfy |v| < 1", "velocity");
    if (c.n_particles < 8) throw ValidationError("chain needs at least 8 particles", "n_particles");
    if (!(c.chain_dx > 0.0)) throw ValidationError("chain dx must be positive", "dx");
    if (c.cutoff > c.n_particles / 2) throw ValidationError("cutoff exceeds half the ring", "cutoff");
    if (!(c.max_error > 0.0)) throw ValidationError("max_error must be positive", "max_error");

    if (c.kind == "evolve_field" || c.kind == "chain") {
        if (c.g0 == 0.0) throw ValidationError("g0 must be nonzero for time stepping", "g0");
        if (c.g0_prime != 0.0) throw ValidationError("g0_prime cannot be stepped", "g0_prime");
    }
    if (c.kind == "sine_gordon" && !(c.beta > 1.0)) {
        throw ValidationError("sine-Gordon time order must lie in (1,2]", "beta");
    }
    if ((c.kind == "nls" || c.kind == "dispersion") && c.beta != 1.0) {
        throw ValidationError("split-step NLS runs at beta = 1", "beta");
    }
    if (c.kind == "stationary_fgle") {
        if (!(c.alpha > 1.0)) throw ValidationError("stationary solve needs alpha in (1,2]", "alpha");
        if (c.a == 0.0 && c.b == 0.0) throw ValidationError("stationary solve needs a or b nonzero", "a");
    }
    if (c.kind == "continuum_compare") {
        if (c.k_list.empty()) throw ValidationError("continuum comparison needs k_list", "k_list");
        if (!c.nearest_neighbour && !(c.alpha > 1.0 && c.alpha < 2.0)) {
            throw ValidationError("continuum constant needs alpha in (1,2)", "alpha");
        }
    }
    if (c.kind == "dispersion" && c.k_list.size() < 2) {
        throw ValidationError("dispersion sweep needs at least two mode numbers in k_list", "k_list");
    }
}

nlohmann::json to_json(const ExperimentConfig& cfg)
{
    json j = json::object();
    for (const auto& f : fields()) j[f.section][f.key] = f.to(cfg);
    return j;
}

ExperimentConfig from_json(const nlohmann::json& j)
{
    if (!j.is_object()) throw ValidationError("config JSON must be an object", "config");
    ExperimentConfig cfg;
    for (const auto& [section, body] : j.items()) {
        if (!body.is_object()) throw ValidationError("section '" + section + "' must be an object", section);
        for (const auto& [key, value] : body.items()) {
            const Field* f = find(section, key);
            if (!f) throw ValidationError("unknown key '" + section + "." + key + "'", key);
            f->from(cfg, value);
        }
    }
    validate(cfg);
    return cfg;
}

} // namespace fracdyn::config
