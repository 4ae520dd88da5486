/* su2stat — reduced SU(2) electro/magneto-static energy minimizer.
 *
 * C API for the shared library. All functions return su2stat_status; handles
 * are opaque and must be released with the matching destroy call. On error,
 * su2stat_last_error() returns a human-readable message for the calling
 * thread.
 */
#ifndef SU2STAT_H
#define SU2STAT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum su2stat_status {
    SU2STAT_OK = 0,
    SU2STAT_ERR_ARG = 1,
    SU2STAT_ERR_CONFIG = 2, /* config parse/validation problems */
    SU2STAT_ERR_SOLVER = 3, /* non-convergence or numeric failure */
    SU2STAT_ERR_VERIFY = 4, /* checksum or identity verification failed */
    SU2STAT_ERR_IO = 5
} su2stat_status;

typedef struct su2stat_config su2stat_config;
typedef struct su2stat_solution su2stat_solution;

const char* su2stat_version(void);
const char* su2stat_last_error(void);

/* ---- configuration ---------------------------------------------------- */

su2stat_config* su2stat_config_create(void); /* built-in defaults */
su2stat_status su2stat_config_load(const char* path, su2stat_config** out);
su2stat_status su2stat_config_set(su2stat_config* cfg, const char* key, const char* value);
void su2stat_config_destroy(su2stat_config* cfg);

/* ---- solving ----------------------------------------------------------- */

/* Minimizes the reduced energy at the configured coupling; also runs the
 * asymptotic fits and the screening cross-check. Returns SU2STAT_ERR_SOLVER
 * when the iteration cap is hit; *out still carries the best iterate then. */
su2stat_status su2stat_solve(const su2stat_config* cfg, su2stat_solution** out);

su2stat_status su2stat_solution_save(const su2stat_solution* sol, const char* path);
su2stat_status su2stat_solution_load(const char* path, su2stat_solution** out);
void su2stat_solution_destroy(su2stat_solution* sol);

/* Grid sizes of a solution: nr*ntheta nodes, row-major in r. */
su2stat_status su2stat_solution_dims(const su2stat_solution* sol, int* nr, int* ntheta);
su2stat_status su2stat_solution_g(const su2stat_solution* sol, double* g);
/* buffers must hold nr*ntheta (fields) or nr / ntheta (axes) doubles */
su2stat_status su2stat_solution_alpha(const su2stat_solution* sol, double* buf, size_t n);
su2stat_status su2stat_solution_psi(const su2stat_solution* sol, double* buf, size_t n);
su2stat_status su2stat_solution_r_nodes(const su2stat_solution* sol, double* buf, size_t n);
su2stat_status su2stat_solution_theta_nodes(const su2stat_solution* sol, double* buf, size_t n);

/* order: magnetic, electric_inside, electric_outside, interaction, total */
su2stat_status su2stat_solution_energy(const su2stat_solution* sol, double out[5]);
su2stat_status su2stat_solution_report(const su2stat_solution* sol, int* iterations,
                                       double* final_gradient_norm, int* converged);
/* order: e0, p0_fit, p0_formula, c0, m_psi_bound, m_alpha_bound */
su2stat_status su2stat_solution_asymptotics(const su2stat_solution* sol, double out[6]);
/* order: sigma0, ratio_plain, ratio_4pi (sigma0 normalization cross-check) */
su2stat_status su2stat_solution_screening(const su2stat_solution* sol, double out[3]);

/* Re-runs the stored-solution identity suite; writes a pass/fail report to
 * `report` (truncated to cap bytes). Returns SU2STAT_ERR_VERIFY on failure. */
su2stat_status su2stat_solution_verify(const su2stat_solution* sol, char* report, size_t cap);

/* Plot data emission; which: psi-tail | alpha-tail | energy-density |
 * theta-profile (at_r selects the profile radius). */
su2stat_status su2stat_solution_plotdata(const su2stat_solution* sol, const char* which,
                                         const char* path, double at_r);

/* Human-readable solve summary (energy split etc.). */
su2stat_status su2stat_solution_summary(const su2stat_solution* sol, char* buf, size_t cap);

/* ---- batch drivers ------------------------------------------------------ */

/* Continuation sweep over cfg's g_list; writes the CSV to path. */
su2stat_status su2stat_sweep(const su2stat_config* cfg, const char* csv_path);

/* Hessian threshold scan on [scan_lo, scan_hi]; writes (g, lambda_min) CSV.
 * *g0 is the interpolated crossing, or NaN when none exists in range. */
su2stat_status su2stat_stability_scan(const su2stat_config* cfg, const char* csv_path,
                                      double* g0);

/* Closed-form Coulomb baseline numbers, printed to buf. */
su2stat_status su2stat_coulomb_info(char* buf, size_t cap);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SU2STAT_H */
