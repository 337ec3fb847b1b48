#ifndef SEMICLASSIC_CONFIG_HPP
#define SEMICLASSIC_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "semiclassic/shooting.hpp"

namespace semiclassic {

/// Flat dotted-key configuration: one `key = value` per line, '#'
/// comments, UTF-8.  Values are kept as trimmed strings; typed access
/// raises ConfigError naming the offending key.
class RunConfig {
public:
    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    bool has(const std::string& key) const;
    const std::map<std::string, std::string>& entries() const { return entries_; }

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::vector<double> get_doubles(const std::string& key) const; // comma separated

    /// Hamiltonian from the n/mass/potential.*/drive.* keys.
    HamiltonianSpec spec() const;
    /// Boundary-value problem from problem.{x0,x1,t0,t1}.
    BvpProblem bvp() const;
    /// Initial state from problem.{x0,y0,t0}.
    PhaseState initial_state() const;
    /// Tolerances and shooting controls from numerics.*.
    ShootingConfig shooting() const;
    double hbar() const { return get_double("numerics.hbar", 1.0); }

private:
    std::map<std::string, std::string> entries_;
};

/// 17-significant-digit formatting: round-trip exact for doubles.
std::string format_double(double v);

} // namespace semiclassic

#endif
