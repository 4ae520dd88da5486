#pragma once

#include "grid.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace su2stat {

enum class SeedPolicy { Zero, HessianDirection, TrialField, File, Random };

/// Run configuration: parsed from a flat key = value text file, overridable
/// from CLI flags. Exactly one of g / g_list must be present for solve/sweep.
struct RunConfig {
    GridSpec grid;
    bool has_g = false;
    double g = 0;
    std::vector<double> g_list;
    SeedPolicy seed_policy = SeedPolicy::HessianDirection;
    std::string seed_file;
    std::uint64_t rng_seed = 1;
    double lin_tol = 1e-12;
    std::string lin_solver = "direct";  // direct (banded Cholesky) | pcg
    double grad_tol = 1e-8;
    double energy_tol = 1e-10;
    int max_iters = 50000;
    bool newton_refine = true;
    double fit_lo = 0, fit_hi = 0;  // 0 = defaults [r_max/8, r_max/4]
    std::string out = "";
    int workers = 1;
    std::string rho_profile = "uniform";  // or "parabolic"
    // stability scan range
    double scan_lo = 3.5, scan_hi = 5.5;
    int scan_steps = 9;

    static RunConfig from_file(const std::string& path);
    void apply_kv(const std::string& key, const std::string& value);
    void validate_for_solve() const;   // single g required
    void validate_for_sweep() const;   // g_list required
    std::map<std::string, std::string> echo() const;  // canonical k/v dump
};

std::string seed_policy_name(SeedPolicy p);
SeedPolicy seed_policy_from_name(const std::string& s);

std::vector<double> parse_double_list(const std::string& s);

}  // namespace su2stat
