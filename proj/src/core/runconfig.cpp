#include "runconfig.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace su2stat {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing text");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad numeric value for '" + key + "': " + v);
    }
}

long parse_int(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing text");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer value for '" + key + "': " + v);
    }
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(parse_double("list", tok));
    }
    return out;
}

std::string seed_policy_name(SeedPolicy p) {
    switch (p) {
        case SeedPolicy::Zero: return "zero";
        case SeedPolicy::HessianDirection: return "hessian-direction";
        case SeedPolicy::TrialField: return "trial-field";
        case SeedPolicy::File: return "file";
        case SeedPolicy::Random: return "random";
    }
    return "hessian-direction";
}

SeedPolicy seed_policy_from_name(const std::string& s) {
    if (s == "zero") return SeedPolicy::Zero;
    if (s == "hessian-direction") return SeedPolicy::HessianDirection;
    if (s == "trial-field") return SeedPolicy::TrialField;
    if (s == "file") return SeedPolicy::File;
    if (s == "random") return SeedPolicy::Random;
    throw ConfigError("unknown seed policy: " + s);
}

void RunConfig::apply_kv(const std::string& key, const std::string& value) {
    if (key == "r_max") grid.r_max = parse_double(key, value);
    else if (key == "n_r_in") grid.n_r_in = static_cast<int>(parse_int(key, value));
    else if (key == "n_r_out") grid.n_r_out = static_cast<int>(parse_int(key, value));
    else if (key == "n_theta") grid.n_theta = static_cast<int>(parse_int(key, value));
    else if (key == "g") { g = parse_double(key, value); has_g = true; }
    else if (key == "g_list") g_list = parse_double_list(value);
    else if (key == "seed_policy") seed_policy = seed_policy_from_name(value);
    else if (key == "seed_file") seed_file = value;
    else if (key == "rng_seed") rng_seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "lin_tol") lin_tol = parse_double(key, value);
    else if (key == "lin_solver") {
        if (value != "direct" && value != "pcg")
            throw ConfigError("config: lin_solver must be 'direct' or 'pcg'");
        lin_solver = value;
    }
    else if (key == "grad_tol") grad_tol = parse_double(key, value);
    else if (key == "energy_tol") energy_tol = parse_double(key, value);
    else if (key == "max_iters") max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "newton_refine") newton_refine = parse_bool(key, value);
    else if (key == "fit_lo") fit_lo = parse_double(key, value);
    else if (key == "fit_hi") fit_hi = parse_double(key, value);
    else if (key == "out") out = value;
    else if (key == "workers") workers = static_cast<int>(parse_int(key, value));
    else if (key == "rho_profile") rho_profile = value;
    else if (key == "scan_lo") scan_lo = parse_double(key, value);
    else if (key == "scan_hi") scan_hi = parse_double(key, value);
    else if (key == "scan_steps") scan_steps = static_cast<int>(parse_int(key, value));
    else throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: missing '=' at " + path + ":" + std::to_string(lineno));
        cfg.apply_kv(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

void RunConfig::validate_for_solve() const {
    grid.validate();
    if (!has_g || !g_list.empty())
        throw ConfigError("solve needs exactly one coupling: set g (and not g_list)");
    if (!(g > 0)) throw ConfigError("g must be positive");
    if (lin_tol <= 0 || grad_tol <= 0 || energy_tol <= 0)
        throw ConfigError("tolerances must be positive");
    if (seed_policy == SeedPolicy::File && seed_file.empty())
        throw ConfigError("seed_policy=file requires seed_file");
}

void RunConfig::validate_for_sweep() const {
    grid.validate();
    if (g_list.empty() || has_g)
        throw ConfigError("sweep needs g_list (and not a single g)");
    for (std::size_t i = 0; i < g_list.size(); ++i) {
        if (!(g_list[i] > 0)) throw ConfigError("g_list entries must be positive");
        if (i > 0 && !(g_list[i] > g_list[i - 1]))
            throw ConfigError("g_list must be strictly ascending");
    }
    if (workers < 1) throw ConfigError("workers must be >= 1");
}

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> m;
    m["r_max"] = fmt(grid.r_max);
    m["n_r_in"] = std::to_string(grid.n_r_in);
    m["n_r_out"] = std::to_string(grid.n_r_out);
    m["n_theta"] = std::to_string(grid.n_theta);
    if (has_g) m["g"] = fmt(g);
    if (!g_list.empty()) {
        std::string s;
        for (std::size_t i = 0; i < g_list.size(); ++i) {
            if (i) s += ",";
            s += fmt(g_list[i]);
        }
        m["g_list"] = s;
    }
    m["seed_policy"] = seed_policy_name(seed_policy);
    if (!seed_file.empty()) m["seed_file"] = seed_file;
    m["rng_seed"] = std::to_string(rng_seed);
    m["lin_tol"] = fmt(lin_tol);
    m["lin_solver"] = lin_solver;
    m["grad_tol"] = fmt(grad_tol);
    m["energy_tol"] = fmt(energy_tol);
    m["max_iters"] = std::to_string(max_iters);
    m["newton_refine"] = newton_refine ? "true" : "false";
    if (fit_lo > 0) m["fit_lo"] = fmt(fit_lo);
    if (fit_hi > 0) m["fit_hi"] = fmt(fit_hi);
    m["rho_profile"] = rho_profile;
    m["workers"] = std::to_string(workers);
    return m;
}

}  // namespace su2stat
