#pragma once

#include "asymptotics.hpp"
#include "minimize.hpp"
#include "runconfig.hpp"
#include "stability.hpp"

#include <map>
#include <string>

namespace su2stat {

struct ScreeningSummary {
    double sigma0 = 0;
    double cutoff = 0;
    double ratio_plain = 0;  // sigma0 / (sqrt2 g^-2 e0)
    double ratio_4pi = 0;    // sigma0 / (4 pi sqrt2 g^-2 e0)
    std::string matched_normalization;  // "4pi-sqrt2" | "sqrt2" | "none"
    bool monotone_in_R = true;
};

/// Everything cmd_solve produces for one coupling; serialized as the
/// versioned JSON SolutionFile.
struct SolutionFile {
    int format_version = 1;
    std::map<std::string, std::string> config_echo;
    GridSpec grid_spec;
    Solution solution;
    AsymptoticsReport asymptotics;
    ScreeningSummary screening;
    std::string checksum;  // FNV-1a over the numeric payload
};

std::string payload_checksum(const Grid& g, const Solution& sol);

void save_solution_file(const SolutionFile& sf, const std::string& path);
SolutionFile load_solution_file(const std::string& path);  // throws on parse error

struct VerifyIdentity {
    std::string name;
    double residual = 0;
    double tolerance = 0;
    bool pass = false;
};

struct VerifyReport {
    bool checksum_ok = false;
    std::vector<VerifyIdentity> identities;
    bool all_pass = false;
};

/// Re-runs the stored-solution identity suite: energy identity, virial
/// balance, the pointwise sandwich, the electric-energy bracket, monotone
/// sphere averages and the screened-charge bound.
VerifyReport verify_solution_file(const SolutionFile& sf);

/// Writes whitespace-separated plot data. which: psi-tail | alpha-tail |
/// energy-density | theta-profile.
void write_plotdata(const SolutionFile& sf, const std::string& which, const std::string& path,
                    double at_r = 10.0);

// ---- drivers shared by the CLI and the C API ----------------------------

Field build_seed(const RunConfig& cfg, const Grid& grid);

/// Full solve pipeline: minimize + asymptotics + screening cross-check.
SolutionFile run_solve(const RunConfig& cfg);

struct SweepRow {
    double g = 0;
    bool ok = false;
    std::string error;
    EnergyBreakdown energy;
    double excess = 0;  // (E - g^2/(40 pi)) / g with E at form level (doubled total)
    double e0 = 0, p0_fit = 0, p0_formula = 0;
    double shell_fraction = 0;
    double sigma0 = 0;
    int iterations = 0;
};

std::vector<SweepRow> run_sweep(const RunConfig& cfg);
std::string sweep_csv(const std::vector<SweepRow>& rows);

std::string stability_csv(const StabilityReport& rep);

std::string human_summary(const SolutionFile& sf);

}  // namespace su2stat
