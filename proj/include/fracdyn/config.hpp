// Experiment configuration: INI text in, JSON echo out.
//
//   [experiment]  kind, seed, threads
//   [grid]        n_points, length
//   [time]        dt, n_steps, snapshot_every
//   [order]       alpha, beta
//   [model]       form, g0, g0_prime, g, g2, a, b, potential, interaction, interaction_g
//   [initial]     profile, amplitude, mode, velocity, width
//   [chain]       n_particles, dx, cutoff, nearest_neighbour, k_list
//   [tolerance]   max_error
//
// Every key is optional; unknown sections or keys are rejected. Lists are
// comma separated; comment lines start with ';'.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace fracdyn::config {

inline const std::vector<std::string>& experiment_kinds()
{
    static const std::vector<std::string> k{"evolve_field", "sine_gordon",       "nls",        "stationary_fgle",
                                            "chain",        "continuum_compare", "dispersion", "operator_selftest"};
    return k;
}

struct ExperimentConfig {
    std::string kind = "operator_selftest";
    std::uint64_t seed = 0;
    std::uint64_t threads = 1;

    std::uint64_t n_points = 128;
    double length = 6.283185307179586;

    double dt = 1e-3;
    std::uint64_t n_steps = 100;
    std::uint64_t snapshot_every = 0; // 0: final state only

    double alpha = 2.0;
    double beta = 1.0;

    std::string form = "balance"; // balance: g0 D u + g R u + F = 0;  flow: D u = g R u + a u + b u^3
    double g0 = 1.0;
    double g0_prime = 0.0;
    double g = 1.0;  // coefficient of the order-alpha term
    double g2 = 0.0; // coefficient of an extra order-2 term
    double a = 0.0;
    double b = 0.0;
    std::string potential = "none";       // none | ginzburg_landau | sine_gordon
    std::string interaction = "identity"; // identity | square | quadratic_mix
    double interaction_g = 0.0;

    std::string profile = "mode"; // mode | uniform | kink | gaussian | random
    double amplitude = 1e-3;
    std::int64_t mode = 1;
    double velocity = 0.0;
    double width = 1.0;

    std::uint64_t n_particles = 256;
    double chain_dx = 1.0;
    std::uint64_t cutoff = 0;
    bool nearest_neighbour = false;
    std::vector<double> k_list;

    double max_error = 1e-3;

    bool operator==(const ExperimentConfig&) const = default;
};

// Throws ValidationError naming the offending key. `default_kind` applies
// when the file has no experiment.kind.
ExperimentConfig parse_ini(std::istream& in, const std::string& default_kind = "operator_selftest");
ExperimentConfig load_ini(const std::string& path, const std::string& default_kind = "operator_selftest");
void validate(const ExperimentConfig& cfg);

nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig from_json(const nlohmann::json& j);

} // namespace fracdyn::config
