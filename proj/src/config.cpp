#include "semiclassic/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "semiclassic/errors.hpp"

namespace semiclassic {

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
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, "config key '" + key + "': not a number: '" + v + "'");
    }
}

} // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "config line " + std::to_string(lineno) +
                                      ": expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty())
            throw ConfigError("", "config line " + std::to_string(lineno) + ": empty key");
        cfg.entries_[key] = value;
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

bool RunConfig::has(const std::string& key) const { return entries_.count(key) > 0; }

std::string RunConfig::get_string(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end())
        throw ConfigError(key, "missing required config key '" + key + "'");
    return it->second;
}

std::string RunConfig::get_string(const std::string& key,
                                  const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key) const {
    return parse_double(key, get_string(key));
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_double(key, it->second);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return fallback;
    const double d = parse_double(key, it->second);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw ConfigError(key, "config key '" + key + "': expected an integer");
    return i;
}

std::vector<double> RunConfig::get_doubles(const std::string& key) const {
    const std::string raw = get_string(key);
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= raw.size()) {
        std::size_t comma = raw.find(',', start);
        if (comma == std::string::npos) comma = raw.size();
        const std::string item = trim(raw.substr(start, comma - start));
        if (!item.empty()) out.push_back(parse_double(key, item));
        start = comma + 1;
    }
    if (out.empty()) throw ConfigError(key, "config key '" + key + "': empty list");
    return out;
}

HamiltonianSpec RunConfig::spec() const {
    const int n = get_int("n", 1);
    if (n < 1) throw ConfigError("n", "config key 'n': must be a positive integer");

    std::vector<double> mass_list = has("mass") ? get_doubles("mass")
                                                : std::vector<double>{1.0};
    if (mass_list.size() == 1 && n > 1) mass_list.assign(n, mass_list[0]);
    if (static_cast<int>(mass_list.size()) != n)
        throw ConfigError("mass", "config key 'mass': expected 1 or n entries");
    Eigen::VectorXd mass(n);
    for (int i = 0; i < n; ++i) {
        if (!(mass_list[static_cast<std::size_t>(i)] > 0.0))
            throw ConfigError("mass", "config key 'mass': must be positive");
        mass[i] = mass_list[static_cast<std::size_t>(i)];
    }

    const std::string kind = get_string("potential.kind", "free");
    Potential pot = Potential::free_particle();
    if (kind == "free") {
        // nothing
    } else if (kind == "harmonic") {
        const double omega = get_double("potential.omega");
        if (!(omega > 0.0))
            throw ConfigError("potential.omega",
                              "config key 'potential.omega': must be > 0");
        pot = Potential::harmonic(omega);
    } else if (kind == "cubic") {
        pot = Potential::cubic(get_double("potential.lambda"));
    } else if (kind == "quartic") {
        pot = Potential::quartic(get_double("potential.lambda"));
    } else if (kind == "polynomial") {
        pot = Potential::polynomial(get_doubles("potential.coeffs"));
    } else {
        throw ConfigError("potential.kind",
                          "config key 'potential.kind': unknown kind '" + kind + "'");
    }

    std::optional<Drive> drive;
    const std::string dkind = get_string("drive.kind", "none");
    if (dkind == "none") {
        // nothing
    } else if (dkind == "constant") {
        drive = Drive::constant(get_double("drive.value"));
    } else if (dkind == "sin") {
        drive = Drive::sinusoid(get_double("drive.amplitude"), get_double("drive.omega"),
                                get_double("drive.phase", 0.0));
    } else if (dkind == "polynomial") {
        drive = Drive::polynomial(get_doubles("drive.coeffs"));
    } else {
        throw ConfigError("drive.kind",
                          "config key 'drive.kind': unknown kind '" + dkind + "'");
    }

    try {
        return HamiltonianSpec(mass, pot, drive);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("potential.kind", std::string("invalid spec: ") + e.what());
    }
}

BvpProblem RunConfig::bvp() const {
    const int n = get_int("n", 1);
    auto vec = [&](const std::string& key) {
        std::vector<double> v = get_doubles(key);
        if (v.size() == 1 && n > 1) v.assign(n, v[0]);
        if (static_cast<int>(v.size()) != n)
            throw ConfigError(key, "config key '" + key + "': expected n entries");
        return Eigen::Map<Eigen::VectorXd>(v.data(), n).eval();
    };
    const double t0 = get_double("problem.t0", 0.0);
    const double t1 = get_double("problem.t1");
    if (!(t1 > t0))
        throw ConfigError("problem.t1", "config key 'problem.t1': requires t1 > t0");
    return BvpProblem(vec("problem.x0"), vec("problem.x1"), t0, t1);
}

PhaseState RunConfig::initial_state() const {
    const int n = get_int("n", 1);
    auto vec = [&](const std::string& key, double fallback, bool required) {
        std::vector<double> v;
        if (has(key))
            v = get_doubles(key);
        else if (required)
            throw ConfigError(key, "missing required config key '" + key + "'");
        else
            v.assign(static_cast<std::size_t>(n), fallback);
        if (v.size() == 1 && n > 1) v.assign(n, v[0]);
        if (static_cast<int>(v.size()) != n)
            throw ConfigError(key, "config key '" + key + "': expected n entries");
        return Eigen::Map<Eigen::VectorXd>(v.data(), n).eval();
    };
    return PhaseState(vec("problem.x0", 0.0, true), vec("problem.y0", 0.0, false),
                      get_double("problem.t0", 0.0));
}

ShootingConfig RunConfig::shooting() const {
    ShootingConfig cfg;
    cfg.max_iter = get_int("numerics.max_iter", 50);
    cfg.residual_tol = get_double("numerics.residual_tol", 1e-10);
    cfg.ivp_tol.abs_tol = get_double("numerics.abs_tol", 1e-12);
    cfg.ivp_tol.rel_tol = get_double("numerics.rel_tol", 1e-10);
    if (!(cfg.residual_tol > 0.0) || !(cfg.ivp_tol.abs_tol > 0.0) ||
        !(cfg.ivp_tol.rel_tol > 0.0))
        throw ConfigError("numerics.residual_tol", "numerics tolerances must be positive");
    if (has("problem.y0")) {
        std::vector<double> v = get_doubles("problem.y0");
        cfg.y0_guess = Eigen::Map<Eigen::VectorXd>(v.data(), v.size()).eval();
    }
    return cfg;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace semiclassic
