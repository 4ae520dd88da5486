#include "su2stat.h"

#include "core/solution_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

su2stat_status translate(const std::exception& e) {
    set_error(e.what());
    if (dynamic_cast<const su2stat::ConfigError*>(&e)) return SU2STAT_ERR_CONFIG;
    if (dynamic_cast<const su2stat::SolverError*>(&e)) return SU2STAT_ERR_SOLVER;
    return SU2STAT_ERR_IO;
}

void copy_str(char* buf, size_t cap, const std::string& s) {
    if (!buf || cap == 0) return;
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
}

}  // namespace

struct su2stat_config {
    su2stat::RunConfig cfg;
};

struct su2stat_solution {
    su2stat::SolutionFile sf;
};

extern "C" {

const char* su2stat_version(void) { return "1.0.0"; }

const char* su2stat_last_error(void) { return g_last_error.c_str(); }

su2stat_config* su2stat_config_create(void) { return new su2stat_config(); }

su2stat_status su2stat_config_load(const char* path, su2stat_config** out) {
    if (!path || !out) {
        set_error("null argument");
        return SU2STAT_ERR_ARG;
    }
    try {
        auto* c = new su2stat_config();
        c->cfg = su2stat::RunConfig::from_file(path);
        *out = c;
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_config_set(su2stat_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value) {
        set_error("null argument");
        return SU2STAT_ERR_ARG;
    }
    try {
        cfg->cfg.apply_kv(key, value);
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

void su2stat_config_destroy(su2stat_config* cfg) { delete cfg; }

su2stat_status su2stat_solve(const su2stat_config* cfg, su2stat_solution** out) {
    if (!cfg || !out) {
        set_error("null argument");
        return SU2STAT_ERR_ARG;
    }
    try {
        auto* s = new su2stat_solution();
        s->sf = su2stat::run_solve(cfg->cfg);
        *out = s;
        if (!s->sf.solution.report.converged) {
            set_error("solver did not converge: " + s->sf.solution.report.message);
            return SU2STAT_ERR_SOLVER;
        }
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_solution_save(const su2stat_solution* sol, const char* path) {
    if (!sol || !path) {
        set_error("null argument");
        return SU2STAT_ERR_ARG;
    }
    try {
        su2stat::save_solution_file(sol->sf, path);
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_solution_load(const char* path, su2stat_solution** out) {
    if (!path || !out) {
        set_error("null argument");
        return SU2STAT_ERR_ARG;
    }
    try {
        auto* s = new su2stat_solution();
        s->sf = su2stat::load_solution_file(path);
        *out = s;
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

void su2stat_solution_destroy(su2stat_solution* sol) { delete sol; }

su2stat_status su2stat_solution_dims(const su2stat_solution* sol, int* nr, int* ntheta) {
    if (!sol || !nr || !ntheta) {
        set_error("null argument");
        return SU2STAT_ERR_ARG;
    }
    *nr = sol->sf.grid_spec.n_r_in + sol->sf.grid_spec.n_r_out + 1;
    *ntheta = sol->sf.grid_spec.n_theta;
    return SU2STAT_OK;
}

su2stat_status su2stat_solution_g(const su2stat_solution* sol, double* g) {
    if (!sol || !g) {
        set_error("null argument");
        return SU2STAT_ERR_ARG;
    }
    *g = sol->sf.solution.g;
    return SU2STAT_OK;
}

static su2stat_status copy_vec(const std::vector<double>& v, double* buf, size_t n) {
    if (!buf || n < v.size()) {
        set_error("buffer too small: need " + std::to_string(v.size()));
        return SU2STAT_ERR_ARG;
    }
    std::memcpy(buf, v.data(), v.size() * sizeof(double));
    return SU2STAT_OK;
}

su2stat_status su2stat_solution_alpha(const su2stat_solution* sol, double* buf, size_t n) {
    if (!sol) return SU2STAT_ERR_ARG;
    return copy_vec(sol->sf.solution.alpha.v, buf, n);
}

su2stat_status su2stat_solution_psi(const su2stat_solution* sol, double* buf, size_t n) {
    if (!sol) return SU2STAT_ERR_ARG;
    return copy_vec(sol->sf.solution.psi.psi.v, buf, n);
}

su2stat_status su2stat_solution_r_nodes(const su2stat_solution* sol, double* buf, size_t n) {
    if (!sol) return SU2STAT_ERR_ARG;
    try {
        su2stat::Grid g(sol->sf.grid_spec);
        return copy_vec(g.r_nodes(), buf, n);
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_solution_theta_nodes(const su2stat_solution* sol, double* buf, size_t n) {
    if (!sol) return SU2STAT_ERR_ARG;
    try {
        su2stat::Grid g(sol->sf.grid_spec);
        return copy_vec(g.theta_nodes(), buf, n);
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_solution_energy(const su2stat_solution* sol, double out[5]) {
    if (!sol || !out) return SU2STAT_ERR_ARG;
    const auto& e = sol->sf.solution.energy;
    out[0] = e.magnetic;
    out[1] = e.electric_inside;
    out[2] = e.electric_outside;
    out[3] = e.interaction;
    out[4] = e.total;
    return SU2STAT_OK;
}

su2stat_status su2stat_solution_report(const su2stat_solution* sol, int* iterations,
                                       double* final_gradient_norm, int* converged) {
    if (!sol) return SU2STAT_ERR_ARG;
    const auto& r = sol->sf.solution.report;
    if (iterations) *iterations = r.iterations;
    if (final_gradient_norm) *final_gradient_norm = r.final_gradient_norm;
    if (converged) *converged = r.converged ? 1 : 0;
    return SU2STAT_OK;
}

su2stat_status su2stat_solution_asymptotics(const su2stat_solution* sol, double out[6]) {
    if (!sol || !out) return SU2STAT_ERR_ARG;
    const auto& a = sol->sf.asymptotics;
    out[0] = a.e0;
    out[1] = a.p0_fit;
    out[2] = a.p0_formula;
    out[3] = a.c0;
    out[4] = a.m_psi_bound;
    out[5] = a.m_alpha_bound;
    return SU2STAT_OK;
}

su2stat_status su2stat_solution_screening(const su2stat_solution* sol, double out[3]) {
    if (!sol || !out) return SU2STAT_ERR_ARG;
    out[0] = sol->sf.screening.sigma0;
    out[1] = sol->sf.screening.ratio_plain;
    out[2] = sol->sf.screening.ratio_4pi;
    return SU2STAT_OK;
}

su2stat_status su2stat_solution_verify(const su2stat_solution* sol, char* report, size_t cap) {
    if (!sol) return SU2STAT_ERR_ARG;
    try {
        su2stat::VerifyReport rep = su2stat::verify_solution_file(sol->sf);
        std::string text;
        text += std::string("checksum: ") + (rep.checksum_ok ? "pass" : "FAIL") + "\n";
        for (const auto& id : rep.identities) {
            char line[160];
            std::snprintf(line, sizeof(line), "%-26s residual %.3e  tol %.3e  %s\n",
                          id.name.c_str(), id.residual, id.tolerance,
                          id.pass ? "pass" : "FAIL");
            text += line;
        }
        copy_str(report, cap, text);
        if (!rep.all_pass) {
            set_error("verification failed");
            return SU2STAT_ERR_VERIFY;
        }
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_solution_plotdata(const su2stat_solution* sol, const char* which,
                                         const char* path, double at_r) {
    if (!sol || !which || !path) return SU2STAT_ERR_ARG;
    try {
        su2stat::write_plotdata(sol->sf, which, path, at_r);
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_solution_summary(const su2stat_solution* sol, char* buf, size_t cap) {
    if (!sol) return SU2STAT_ERR_ARG;
    copy_str(buf, cap, su2stat::human_summary(sol->sf));
    return SU2STAT_OK;
}

su2stat_status su2stat_sweep(const su2stat_config* cfg, const char* csv_path) {
    if (!cfg || !csv_path) return SU2STAT_ERR_ARG;
    try {
        auto rows = su2stat::run_sweep(cfg->cfg);
        std::FILE* f = std::fopen(csv_path, "wb");
        if (!f) {
            set_error(std::string("cannot write ") + csv_path);
            return SU2STAT_ERR_IO;
        }
        const std::string csv = su2stat::sweep_csv(rows);
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
        for (const auto& r : rows)
            if (!r.ok) {
                set_error("sweep row g=" + std::to_string(r.g) + " failed: " + r.error);
                return SU2STAT_ERR_SOLVER;
            }
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_stability_scan(const su2stat_config* cfg, const char* csv_path,
                                      double* g0) {
    if (!cfg || !csv_path) return SU2STAT_ERR_ARG;
    try {
        const auto& c = cfg->cfg;
        if (!(c.scan_lo < c.scan_hi)) {
            set_error("stability scan: need scan_lo < scan_hi");
            return SU2STAT_ERR_CONFIG;
        }
        su2stat::Grid grid(c.grid);
        su2stat::StabilityReport rep =
            su2stat::threshold_scan(c.scan_lo, c.scan_hi, c.scan_steps, grid);
        std::FILE* f = std::fopen(csv_path, "wb");
        if (!f) {
            set_error(std::string("cannot write ") + csv_path);
            return SU2STAT_ERR_IO;
        }
        const std::string csv = su2stat::stability_csv(rep);
        std::fwrite(csv.data(), 1, csv.size(), f);
        std::fclose(f);
        if (g0) *g0 = rep.crossing_found ? rep.g0_estimate : std::nan("");
        return SU2STAT_OK;
    } catch (const std::exception& e) {
        return translate(e);
    }
}

su2stat_status su2stat_coulomb_info(char* buf, size_t cap) {
    char text[512];
    std::snprintf(text, sizeof(text),
                  "Coulomb baseline (uniform unit-charge ball, radius 1)\n"
                  "  psi(0)        = 3/(8 pi)  = %.10f\n"
                  "  psi(1)        = 1/(4 pi)  = %.10f\n"
                  "  psi(2)        = 1/(8 pi)  = %.10f\n"
                  "  energy / g^2  = 3/(40 pi) = %.10f\n"
                  "  electric in-ball / g^2 = 1/(20 pi) = %.10f\n"
                  "  instability threshold g0 = sqrt(6 pi) = %.10f\n",
                  3.0 / (8.0 * M_PI), 1.0 / (4.0 * M_PI), 1.0 / (8.0 * M_PI),
                  3.0 / (40.0 * M_PI), 1.0 / (20.0 * M_PI), std::sqrt(6.0 * M_PI));
    copy_str(buf, cap, text);
    return SU2STAT_OK;
}

}  // extern "C"
