#include "solution_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <future>
#include <sstream>
#include <thread>

namespace su2stat {

namespace {

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_array(std::ostream& os, const std::vector<double>& v) {
    os << "[";
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) os << ",";
        os << fmt17(v[k]);
    }
    os << "]";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a_doubles(std::uint64_t h, const std::vector<double>& v) {
    for (double x : v) {
        std::uint64_t bits;
        std::memcpy(&bits, &x, sizeof(bits));
        unsigned char b[8];
        for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
        h = fnv1a(h, b, 8);
    }
    return h;
}

LinSolverKind solver_kind(const RunConfig& cfg) {
    return cfg.lin_solver == "pcg" ? LinSolverKind::Pcg : LinSolverKind::Direct;
}

ChargeModel make_charge(const RunConfig& cfg, const Grid& grid) {
    if (cfg.rho_profile == "uniform") return ChargeModel::uniform_ball(grid);
    if (cfg.rho_profile == "parabolic") {
        std::vector<double> rho(grid.nr(), 0.0);
        for (int i = 0; i < grid.nr(); ++i) {
            const double r = grid.r_nodes()[i];
            rho[i] = (r <= 1.0) ? (1.0 - 0.5 * r * r) : 0.0;
        }
        return ChargeModel::radial_profile(grid, rho);
    }
    throw ConfigError("unknown rho_profile: " + cfg.rho_profile);
}

}  // namespace

std::string payload_checksum(const Grid& g, const Solution& sol) {
    std::uint64_t h = 1469598103934665603ull;
    h = fnv1a_doubles(h, g.r_nodes());
    h = fnv1a_doubles(h, g.theta_nodes());
    h = fnv1a_doubles(h, sol.alpha.v);
    h = fnv1a_doubles(h, sol.psi.psi.v);
    h = fnv1a_doubles(h, {sol.g, sol.energy.total});
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

void save_solution_file(const SolutionFile& sf, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path);
    const Solution& s = sf.solution;

    os << "{\n";
    os << "\"format_version\":" << sf.format_version << ",\n";
    os << "\"config\":{";
    bool first = true;
    for (const auto& [k, v] : sf.config_echo) {
        if (!first) os << ",";
        first = false;
        os << "\"" << json_escape(k) << "\":\"" << json_escape(v) << "\"";
    }
    os << "},\n";
    os << "\"g\":" << fmt17(s.g) << ",\n";
    os << "\"grid\":{\"r_max\":" << fmt17(sf.grid_spec.r_max)
       << ",\"n_r_in\":" << sf.grid_spec.n_r_in << ",\"n_r_out\":" << sf.grid_spec.n_r_out
       << ",\"n_theta\":" << sf.grid_spec.n_theta << "},\n";
    os << "\"alpha\":";
    write_array(os, s.alpha.v);
    os << ",\n\"psi\":";
    write_array(os, s.psi.psi.v);
    os << ",\n\"psi_residual\":" << fmt17(s.psi.residual_norm) << ",\n";
    os << "\"energy\":{\"magnetic\":" << fmt17(s.energy.magnetic)
       << ",\"electric_inside\":" << fmt17(s.energy.electric_inside)
       << ",\"electric_outside\":" << fmt17(s.energy.electric_outside)
       << ",\"interaction\":" << fmt17(s.energy.interaction)
       << ",\"total\":" << fmt17(s.energy.total) << "},\n";
    os << "\"solve_report\":{\"iterations\":" << s.report.iterations
       << ",\"final_gradient_norm\":" << fmt17(s.report.final_gradient_norm)
       << ",\"converged\":" << (s.report.converged ? "true" : "false")
       << ",\"energy_history\":";
    write_array(os, s.report.energy_history);
    os << "},\n";
    const AsymptoticsReport& a = sf.asymptotics;
    os << "\"asymptotics\":{\"e0\":" << fmt17(a.e0) << ",\"psi0\":" << fmt17(a.psi0)
       << ",\"p0_fit\":" << fmt17(a.p0_fit) << ",\"p0_formula\":" << fmt17(a.p0_formula)
       << ",\"c0\":" << fmt17(a.c0) << ",\"m_psi_bound\":" << fmt17(a.m_psi_bound)
       << ",\"m_alpha_bound\":" << fmt17(a.m_alpha_bound) << ",\"fit_lo\":" << fmt17(a.fit_lo)
       << ",\"fit_hi\":" << fmt17(a.fit_hi) << ",\"rms_psi\":" << fmt17(a.rms_psi)
       << ",\"rms_alpha\":" << fmt17(a.rms_alpha)
       << ",\"angular_mismatch\":" << fmt17(a.angular_mismatch)
       << ",\"valid\":" << (a.valid ? "true" : "false") << "},\n";
    const ScreeningSummary& sc = sf.screening;
    os << "\"screening\":{\"sigma0\":" << fmt17(sc.sigma0) << ",\"cutoff\":" << fmt17(sc.cutoff)
       << ",\"ratio_plain\":" << fmt17(sc.ratio_plain)
       << ",\"ratio_4pi\":" << fmt17(sc.ratio_4pi) << ",\"matched_normalization\":\""
       << json_escape(sc.matched_normalization) << "\",\"monotone_in_R\":"
       << (sc.monotone_in_R ? "true" : "false") << "},\n";
    os << "\"checksum\":\"" << sf.checksum << "\"\n";
    os << "}\n";
}

SolutionFile load_solution_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + path);
    nlohmann::json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw ConfigError("bad solution file " + path + ": " + e.what());
    }

    SolutionFile sf;
    try {
        sf.format_version = j.at("format_version").get<int>();
        if (sf.format_version != 1)
            throw ConfigError("unsupported format_version " + std::to_string(sf.format_version));
        for (auto it = j.at("config").begin(); it != j.at("config").end(); ++it)
            sf.config_echo[it.key()] = it.value().get<std::string>();
        sf.grid_spec.r_max = j.at("grid").at("r_max").get<double>();
        sf.grid_spec.n_r_in = j.at("grid").at("n_r_in").get<int>();
        sf.grid_spec.n_r_out = j.at("grid").at("n_r_out").get<int>();
        sf.grid_spec.n_theta = j.at("grid").at("n_theta").get<int>();

        Grid grid(sf.grid_spec);
        Solution& s = sf.solution;
        s.g = j.at("g").get<double>();
        s.alpha = Field(grid, Support::OutsideBall);
        s.alpha.v = j.at("alpha").get<std::vector<double>>();
        s.psi.psi = Field(grid, Support::WholeDomain);
        s.psi.psi.v = j.at("psi").get<std::vector<double>>();
        s.psi.residual_norm = j.at("psi_residual").get<double>();
        if (s.alpha.v.size() != grid.size() || s.psi.psi.v.size() != grid.size())
            throw ConfigError("field arrays do not match the grid");
        const auto& e = j.at("energy");
        s.energy.magnetic = e.at("magnetic").get<double>();
        s.energy.electric_inside = e.at("electric_inside").get<double>();
        s.energy.electric_outside = e.at("electric_outside").get<double>();
        s.energy.interaction = e.at("interaction").get<double>();
        s.energy.total = e.at("total").get<double>();
        const auto& r = j.at("solve_report");
        s.report.iterations = r.at("iterations").get<int>();
        s.report.final_gradient_norm = r.at("final_gradient_norm").get<double>();
        s.report.converged = r.at("converged").get<bool>();
        s.report.energy_history = r.at("energy_history").get<std::vector<double>>();
        const auto& a = j.at("asymptotics");
        sf.asymptotics.e0 = a.at("e0").get<double>();
        sf.asymptotics.psi0 = a.at("psi0").get<double>();
        sf.asymptotics.p0_fit = a.at("p0_fit").get<double>();
        sf.asymptotics.p0_formula = a.at("p0_formula").get<double>();
        sf.asymptotics.c0 = a.at("c0").get<double>();
        sf.asymptotics.m_psi_bound = a.at("m_psi_bound").get<double>();
        sf.asymptotics.m_alpha_bound = a.at("m_alpha_bound").get<double>();
        sf.asymptotics.fit_lo = a.at("fit_lo").get<double>();
        sf.asymptotics.fit_hi = a.at("fit_hi").get<double>();
        sf.asymptotics.rms_psi = a.at("rms_psi").get<double>();
        sf.asymptotics.rms_alpha = a.at("rms_alpha").get<double>();
        sf.asymptotics.angular_mismatch = a.at("angular_mismatch").get<double>();
        sf.asymptotics.valid = a.at("valid").get<bool>();
        const auto& sc = j.at("screening");
        sf.screening.sigma0 = sc.at("sigma0").get<double>();
        sf.screening.cutoff = sc.at("cutoff").get<double>();
        sf.screening.ratio_plain = sc.at("ratio_plain").get<double>();
        sf.screening.ratio_4pi = sc.at("ratio_4pi").get<double>();
        sf.screening.matched_normalization = sc.at("matched_normalization").get<std::string>();
        sf.screening.monotone_in_R = sc.at("monotone_in_R").get<bool>();
        sf.checksum = j.at("checksum").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("bad solution file " + path + ": " + e.what());
    }
    return sf;
}

VerifyReport verify_solution_file(const SolutionFile& sf) {
    VerifyReport rep;
    Grid grid(sf.grid_spec);
    const Solution& s = sf.solution;

    rep.checksum_ok = (payload_checksum(grid, s) == sf.checksum);

    const double g2 = s.g * s.g;
    EnergyModel model(grid, Coupling(s.g), 1e-12);
    const auto& psi = s.psi.psi;

    auto add = [&](const std::string& name, double residual, double tol) {
        rep.identities.push_back({name, residual, tol, residual <= tol});
    };

    // Energy identity: int(|grad psi|^2 + |a|^2 psi^2) = int psi rho.
    {
        double din = 0, dout = 0;
        model.electro().stencil().energy_split(psi.v.data(), &din, &dout);
        const auto V = model.electro().potential_diag(s.alpha);
        double inter = 0, rho_psi = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            inter += grid.w_vol()[k] * V[k] * psi.v[k] * psi.v[k];
            rho_psi += model.electro().charge().cell_charge[k] * psi.v[k];
        }
        const double lhs = din + dout + inter;
        add("identity_13_energy", std::abs(lhs - rho_psi) / std::max(std::abs(rho_psi), 1e-300),
            1e-3);

        // Electric-energy bracket (g-free): (40pi)^-1 < lhs/2 <= 3/(20pi).
        const double half = 0.5 * lhs;
        const bool ok = half > 1.0 / (40.0 * M_PI) && half <= 3.0 / (20.0 * M_PI) * (1.0 + 1e-12);
        rep.identities.push_back({"bracket_19_electric", half, 3.0 / (20.0 * M_PI), ok});
    }

    // Virial balance: g^-2 int |grad a|^2 = g^2 int |a|^2 psi^2 at critical points.
    {
        const auto a = model.pack_outer(s.alpha);
        const double mag = model.gauge().energy(a.data()) / g2;
        const auto V = model.electro().potential_diag(s.alpha);
        double inter = 0;
        for (std::size_t k = 0; k < grid.size(); ++k)
            inter += grid.w_vol()[k] * V[k] * psi.v[k] * psi.v[k];
        inter *= g2;
        // 0 = 0 at the Coulomb point: floor the scale at the energy scale so
        // vanishing fields read as an exact balance.
        const double scale = std::max({mag, inter, 1e-8 * g2});
        add("identity_14_virial", std::abs(mag - inter) / scale, 1e-3);
    }

    // Pointwise sandwich psi_D < psi <= psi_Coul with O(h^2) slack.
    {
        const double h = grid.h_nominal();
        const double slack = 5.0 * h * h * coulomb_psi_value(0.0);
        double worst = 0.0;
        bool positive = true;
        for (int i = 0; i < grid.nr(); ++i) {
            const double lo = psi_dirichlet_value(grid.r_nodes()[i]);
            const double hi = coulomb_psi_value(grid.r_nodes()[i]);
            for (int j = 0; j < grid.ntheta(); ++j) {
                const double p = psi.v[grid.at(i, j)];
                if (p <= 0.0) positive = false;
                worst = std::max(worst, std::max(lo - p, p - hi));
            }
        }
        add("sandwich_18_pointwise", worst, slack);
        rep.identities.push_back({"psi_positive", positive ? 0.0 : 1.0, 0.5, positive});
    }

    // Monotone sphere average for r >= 1 and the screened-charge bound.
    {
        const auto diag = model.electro().diagnostics(s.alpha, s.psi);
        rep.identities.push_back({"monotone_53_sphere_avg",
                                  diag.sphere_avg_decreasing ? 0.0 : 1.0, 0.5,
                                  diag.sphere_avg_decreasing});
        add("bound_55_screened_charge", std::max(0.0, diag.screened_charge - 1.0), 1e-6);
    }

    rep.all_pass = rep.checksum_ok;
    for (const auto& id : rep.identities) rep.all_pass = rep.all_pass && id.pass;
    return rep;
}

void write_plotdata(const SolutionFile& sf, const std::string& which, const std::string& path,
                    double at_r) {
    Grid grid(sf.grid_spec);
    const Solution& s = sf.solution;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ConfigError("cannot write " + path);

    if (which == "psi-tail") {
        os << "# r  r*psi_avg\n";
        for (int i = grid.ball_index(); i < grid.nr(); ++i) {
            double avg = 0;
            for (int j = 0; j < grid.ntheta(); ++j)
                avg += s.psi.psi.v[grid.at(i, j)] * grid.w_sphere()[j];
            avg *= 0.5;
            os << fmt17(grid.r_nodes()[i]) << " " << fmt17(grid.r_nodes()[i] * avg) << "\n";
        }
    } else if (which == "alpha-tail") {
        os << "# r  f(r)=int alpha sin^2 dtheta\n";
        const double dth = grid.dtheta();
        for (int i = grid.ball_index(); i < grid.nr(); ++i) {
            double f = 0;
            for (int j = 0; j < grid.ntheta(); ++j) {
                const double sn = std::sin(grid.theta_nodes()[j]);
                f += s.alpha.v[grid.at(i, j)] * sn * sn * dth;
            }
            os << fmt17(grid.r_nodes()[i]) << " " << fmt17(f) << "\n";
        }
    } else if (which == "energy-density") {
        os << "# r  magnetic_shell_density  electric_shell_density\n";
        EnergyModel model(grid, Coupling(s.g), 1e-10);
        const auto a = model.pack_outer(s.alpha);
        const double g2 = s.g * s.g;
        for (int i = 1; i + 1 < grid.nr(); ++i) {
            const double r_lo = grid.r_faces()[i], r_hi = grid.r_faces()[i + 1];
            double mag = 0.0;
            if (grid.r_nodes()[i] >= 1.0)
                mag = model.gauge().energy_in_shell(a.data(), std::max(r_lo, 1.0), r_hi) /
                      (2.0 * g2 * (r_hi - r_lo));
            double el = 0;
            for (int j = 0; j < grid.ntheta(); ++j) {
                const std::size_t k = grid.at(i, j);
                el += grid.w_vol()[k] * s.psi.psi.v[k] * s.psi.psi.v[k];
            }
            el *= 0.5 * g2 / (r_hi - r_lo);
            os << fmt17(grid.r_nodes()[i]) << " " << fmt17(mag) << " " << fmt17(el) << "\n";
        }
    } else if (which == "theta-profile") {
        int ir = grid.ball_index();
        double best = 1e300;
        for (int i = 0; i < grid.nr(); ++i)
            if (std::abs(grid.r_nodes()[i] - at_r) < best) {
                best = std::abs(grid.r_nodes()[i] - at_r);
                ir = i;
            }
        // scale factor of the sin fit at this radius
        double num = 0, den = 0;
        for (int j = 0; j < grid.ntheta(); ++j) {
            const double sn = std::sin(grid.theta_nodes()[j]);
            num += s.alpha.v[grid.at(ir, j)] * sn * grid.w_sphere()[j];
            den += sn * sn * grid.w_sphere()[j];
        }
        const double c = (den > 0) ? num / den : 0.0;
        os << "# theta  alpha(r=" << fmt17(grid.r_nodes()[ir]) << ")  c*sin(theta)\n";
        for (int j = 0; j < grid.ntheta(); ++j)
            os << fmt17(grid.theta_nodes()[j]) << " " << fmt17(s.alpha.v[grid.at(ir, j)]) << " "
               << fmt17(c * std::sin(grid.theta_nodes()[j])) << "\n";
    } else {
        throw ConfigError("plotdata: unknown selection '" + which +
                          "' (use psi-tail|alpha-tail|energy-density|theta-profile)");
    }
}

Field build_seed(const RunConfig& cfg, const Grid& grid) {
    switch (cfg.seed_policy) {
        case SeedPolicy::Zero: return Field(grid, Support::OutsideBall);
        case SeedPolicy::HessianDirection: return hessian_seed(grid);
        case SeedPolicy::TrialField: return trial_alpha_default(Coupling(cfg.g), grid);
        case SeedPolicy::Random: return random_seed(grid, cfg.rng_seed);
        case SeedPolicy::File: {
            SolutionFile sf = load_solution_file(cfg.seed_file);
            if (sf.grid_spec.n_r_in != grid.spec().n_r_in ||
                sf.grid_spec.n_r_out != grid.spec().n_r_out ||
                sf.grid_spec.n_theta != grid.spec().n_theta ||
                sf.grid_spec.r_max != grid.spec().r_max)
                throw ConfigError("seed file grid does not match the run grid");
            return sf.solution.alpha;
        }
    }
    return Field(grid, Support::OutsideBall);
}

namespace {

SolutionFile solve_one(const RunConfig& cfg, double gv) {
    RunConfig local = cfg;
    local.g = gv;
    local.has_g = true;
    local.g_list.clear();

    Grid grid(local.grid);
    EnergyModel model(grid, Coupling(gv), local.lin_tol, make_charge(local, grid),
                      solver_kind(local));
    MinimizeOptions opts;
    opts.grad_tol = local.grad_tol;
    opts.energy_tol = local.energy_tol;
    opts.max_iters = local.max_iters;
    opts.newton_refine = local.newton_refine;

    Solution sol = minimize(model, build_seed(local, grid), opts);

    SolutionFile sf;
    sf.config_echo = local.echo();
    sf.grid_spec = local.grid;

    FitWindow w{local.fit_lo, local.fit_hi};
    sf.asymptotics = analyze_asymptotics(sol, grid, w);

    // Screening cross-check (resolves the sigma(0) normalization empirically).
    try {
        const double rm = grid.spec().r_max;
        ScreeningFunction sg = model.electro().solve_screening(
            sol.alpha, {rm / 8.0, rm / 4.0, rm / 2.0}, std::max(local.lin_tol, 1e-10));
        sf.screening.sigma0 = sg.sigma_origin;
        sf.screening.cutoff = sg.cutoff_radius;
        sf.screening.monotone_in_R = sg.monotone_in_R;
        const double base = std::sqrt(2.0) * sf.asymptotics.e0 / (gv * gv);
        if (base != 0.0) {
            sf.screening.ratio_plain = sg.sigma_origin / base;
            sf.screening.ratio_4pi = sg.sigma_origin / (4.0 * M_PI * base);
            const double d_plain = std::abs(sf.screening.ratio_plain - 1.0);
            const double d_4pi = std::abs(sf.screening.ratio_4pi - 1.0);
            if (std::min(d_plain, d_4pi) <= 0.10)
                sf.screening.matched_normalization = (d_4pi <= d_plain) ? "4pi-sqrt2" : "sqrt2";
            else
                sf.screening.matched_normalization = "none";
        }
    } catch (const SolverError&) {
        sf.screening.matched_normalization = "none";
    }

    sf.solution = std::move(sol);
    Grid g2(sf.grid_spec);
    sf.checksum = payload_checksum(g2, sf.solution);
    return sf;
}

}  // namespace

SolutionFile run_solve(const RunConfig& cfg) {
    cfg.validate_for_solve();
    return solve_one(cfg, cfg.g);
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg) {
    cfg.validate_for_sweep();
    const std::vector<double>& gs = cfg.g_list;
    std::vector<SweepRow> rows(gs.size());

    // Warm continuation when sequential; independent cold starts when workers > 1
    // (results are deterministic either way, the seed policy is per-row fixed).
    auto run_row = [&](std::size_t idx, const Field* warm) {
        SweepRow row;
        row.g = gs[idx];
        try {
            RunConfig local = cfg;
            local.g_list.clear();
            local.has_g = true;
            local.g = gs[idx];
            Grid grid(local.grid);
            EnergyModel model(grid, Coupling(row.g), local.lin_tol, make_charge(local, grid),
                              solver_kind(local));
            MinimizeOptions opts;
            opts.grad_tol = local.grad_tol;
            opts.energy_tol = local.energy_tol;
            opts.max_iters = local.max_iters;
            opts.newton_refine = local.newton_refine;

            Field seed;
            if (warm) {
                double sup = 0;
                for (double v : warm->v) sup = std::max(sup, std::abs(v));
                seed = (sup > 1e-7) ? *warm : hessian_seed(grid);
            } else {
                seed = hessian_seed(grid);
            }
            Solution sol = minimize(model, seed, opts);
            row.ok = sol.report.converged;
            if (!row.ok) row.error = sol.report.message;
            row.energy = sol.energy;
            row.excess = (kEnergyNormDoubled * sol.energy.total -
                          row.g * row.g / (40.0 * M_PI)) /
                         row.g;
            row.iterations = sol.report.iterations;
            FitWindow w{cfg.fit_lo, cfg.fit_hi};
            AsymptoticsReport ar = analyze_asymptotics(sol, grid, w);
            row.e0 = ar.e0;
            row.p0_fit = ar.p0_fit;
            row.p0_formula = ar.p0_formula;
            row.shell_fraction = shell_concentration(sol, 5.0, grid).fraction_of_total;
            try {
                ScreeningFunction sg = model.electro().solve_screening(
                    sol.alpha, {grid.spec().r_max / 2.0}, std::max(cfg.lin_tol, 1e-10));
                row.sigma0 = sg.sigma_origin;
            } catch (const SolverError&) {
                row.sigma0 = std::numeric_limits<double>::quiet_NaN();
            }
            return std::make_pair(row, sol.alpha);
        } catch (const std::exception& e) {
            row.ok = false;
            row.error = e.what();
            return std::make_pair(row, Field());
        }
    };

    if (cfg.workers <= 1) {
        Field warm;
        bool have_warm = false;
        for (std::size_t i = 0; i < gs.size(); ++i) {
            auto [row, alpha] = run_row(i, have_warm ? &warm : nullptr);
            rows[i] = row;
            if (row.ok) {
                warm = alpha;
                have_warm = true;
            }
        }
    } else {
        std::vector<std::future<std::pair<SweepRow, Field>>> futs;
        std::size_t next = 0;
        while (next < gs.size()) {
            const std::size_t batch =
                std::min<std::size_t>(cfg.workers, gs.size() - next);
            futs.clear();
            for (std::size_t b = 0; b < batch; ++b)
                futs.push_back(std::async(std::launch::async, run_row, next + b, nullptr));
            for (std::size_t b = 0; b < batch; ++b) rows[next + b] = futs[b].get().first;
            next += batch;
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "g,E_total,E_magnetic,E_el_in,E_el_out,E_interaction,excess,e0,p0_fit,p0_formula,"
          "shell_fraction,sigma0,iterations,status\n";
    for (const auto& r : rows) {
        os << fmt17(r.g) << ",";
        if (r.ok || r.energy.total != 0.0) {
            os << fmt17(r.energy.total) << "," << fmt17(r.energy.magnetic) << ","
               << fmt17(r.energy.electric_inside) << "," << fmt17(r.energy.electric_outside)
               << "," << fmt17(r.energy.interaction) << "," << fmt17(r.excess) << ","
               << fmt17(r.e0) << "," << fmt17(r.p0_fit) << "," << fmt17(r.p0_formula) << ","
               << fmt17(r.shell_fraction) << "," << fmt17(r.sigma0) << "," << r.iterations
               << "," << (r.ok ? "ok" : "failed");
        } else {
            os << ",,,,,,,,,,," << 0 << ",failed";
        }
        os << "\n";
    }
    return os.str();
}

std::string stability_csv(const StabilityReport& rep) {
    std::ostringstream os;
    os << "g,lambda_min\n";
    for (std::size_t k = 0; k < rep.g_values.size(); ++k)
        os << fmt17(rep.g_values[k]) << "," << fmt17(rep.lambda_min[k]) << "\n";
    if (rep.crossing_found)
        os << "# g0_estimate," << fmt17(rep.g0_estimate) << "\n";
    else
        os << "# g0_estimate,no crossing\n";
    return os.str();
}

std::string human_summary(const SolutionFile& sf) {
    const Solution& s = sf.solution;
    std::ostringstream os;
    char buf[256];
    std::snprintf(buf, sizeof(buf), "g = %.6g   (Coulomb energy 3g^2/40pi = %.8g)\n", s.g,
                  3.0 * s.g * s.g / (40.0 * M_PI));
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "energy total     = %.10g\n"
                  "  magnetic       = %.10g\n"
                  "  electric (in)  = %.10g\n"
                  "  electric (out) = %.10g\n"
                  "  interaction    = %.10g\n",
                  s.energy.total, s.energy.magnetic, s.energy.electric_inside,
                  s.energy.electric_outside, s.energy.interaction);
    os << buf;
    std::snprintf(buf, sizeof(buf),
                  "iterations = %d, gradient norm = %.3g, converged = %s, wall = %.2fs\n",
                  s.report.iterations, s.report.final_gradient_norm,
                  s.report.converged ? "yes" : "no", s.report.wall_time);
    os << buf;
    if (sf.asymptotics.valid) {
        std::snprintf(buf, sizeof(buf),
                      "tail: e0 = %.6g, p0_fit = %.4f, p0_formula = %.4f, c0 = %.6g\n",
                      sf.asymptotics.e0, sf.asymptotics.p0_fit, sf.asymptotics.p0_formula,
                      sf.asymptotics.c0);
        os << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "screening: sigma(0) = %.6g, ratio(sqrt2 e0/g^2) = %.4g, "
                  "ratio(4pi sqrt2 e0/g^2) = %.4g, matched = %s\n",
                  sf.screening.sigma0, sf.screening.ratio_plain, sf.screening.ratio_4pi,
                  sf.screening.matched_normalization.c_str());
    os << buf;
    return os.str();
}

}  // namespace su2stat
