// semiclassic: WKB propagators for finite-dimensional Hamiltonian systems
// from the classical boundary-value problem and the variational equation.
//
// Subcommands: path, detj, kernel, evolve, reduce.  Exit codes are a
// stable contract: 0 success, 2 numerical failure, 3 config error,
// 4 hypothesis violation (focal or turning point).

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "semiclassic/closed_form.hpp"
#include "semiclassic/config.hpp"
#include "semiclassic/errors.hpp"
#include "semiclassic/gelfand_yaglom.hpp"
#include "semiclassic/kernel_grid.hpp"
#include "semiclassic/propagator.hpp"

using nlohmann::json;
using namespace semiclassic;

namespace {

namespace fs = std::filesystem;

constexpr int kExitNumerical = 2;
constexpr int kExitConfig = 3;
constexpr int kExitHypothesis = 4;

json config_echo(const RunConfig& cfg) {
    json echo = json::object();
    for (const auto& [k, v] : cfg.entries()) echo[k] = v;
    return echo;
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("--out", "cannot write output file: " + path.string());
    out << j.dump(2) << "\n";
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("--out", "cannot write output file: " + path.string());
    out.precision(17);
    return out;
}

std::string fmt(double v) { return format_double(v); }

void write_trajectory_csv(const fs::path& path, const ClassicalTrajectory& traj) {
    std::ofstream out = open_csv(path);
    const int n = traj.dof();
    out << "tau";
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    for (int i = 1; i <= n; ++i) out << ",y" << i;
    out << ",S_partial\n";
    for (double tau : traj.sample_times()) {
        const PhaseState s = traj.state(tau);
        out << fmt(tau);
        for (int i = 0; i < n; ++i) out << "," << fmt(s.x[i]);
        for (int i = 0; i < n; ++i) out << "," << fmt(s.y[i]);
        out << "," << fmt(traj.action(tau)) << "\n";
    }
}

ClassicalTrajectory trajectory_from_config(const RunConfig& cfg) {
    if (cfg.has("problem.x1")) return solve_bvp_shooting(cfg.spec(), cfg.bvp(), cfg.shooting());
    if (!cfg.has("problem.y0"))
        throw ConfigError("problem.y0",
                          "need either problem.x1 (boundary value) or problem.y0 "
                          "(initial value)");
    const ShootingConfig num = cfg.shooting();
    return integrate_ivp(cfg.spec(), cfg.initial_state(), cfg.get_double("problem.t1"),
                         num.ivp_tol);
}

int cmd_path(const RunConfig& cfg, const fs::path& out_dir) {
    ShootingSolution sol = solve_bvp_detailed(cfg.spec(), cfg.bvp(), cfg.shooting());
    write_trajectory_csv(out_dir / "path.csv", sol.trajectory);
    json summary;
    summary["y0"] = json::array();
    for (Eigen::Index i = 0; i < sol.y0.size(); ++i) summary["y0"].push_back(sol.y0[i]);
    summary["S"] = sol.trajectory.action();
    summary["converged"] = true;
    summary["iterations"] = sol.iterations;
    summary["energy_drift"] = sol.trajectory.energy_drift();
    summary["config"] = config_echo(cfg);
    write_json(out_dir / "path_summary.json", summary);
    return 0;
}

json fundamental_matrix_json(const FundamentalMatrix& phi) {
    json j;
    j["t0"] = phi.t0();
    j["tau"] = phi.tau();
    j["n"] = phi.dof();
    j["phi"] = json::array(); // row-major 2n x 2n
    for (Eigen::Index r = 0; r < phi.matrix().rows(); ++r)
        for (Eigen::Index c = 0; c < phi.matrix().cols(); ++c)
            j["phi"].push_back(phi.matrix()(r, c));
    auto block = [](const Eigen::MatrixXd& b) {
        json arr = json::array();
        for (Eigen::Index r = 0; r < b.rows(); ++r)
            for (Eigen::Index c = 0; c < b.cols(); ++c) arr.push_back(b(r, c));
        return arr;
    };
    j["blocks"] = {{"H", block(phi.block_H())},
                   {"J", block(phi.block_J())},
                   {"L", block(phi.block_L())},
                   {"P", block(phi.block_P())}};
    return j;
}

int cmd_detj(const RunConfig& cfg, const fs::path& out_dir) {
    ClassicalTrajectory traj = trajectory_from_config(cfg);
    const int n_grid = cfg.get_int("numerics.scan_points", 400);
    FocalScanReport rep = focal_scan(traj, n_grid);

    std::ofstream csv = open_csv(out_dir / "detj_scan.csv");
    csv << "tau,det_J\n";
    for (std::size_t k = 0; k < rep.grid.size(); ++k)
        csv << fmt(rep.grid[k]) << "," << fmt(rep.detJ_values[k]) << "\n";

    write_json(out_dir / "phi_t1.json",
               fundamental_matrix_json(integrate_variational(traj, traj.t1())));

    json summary;
    summary["focal_times"] = rep.focal_times;
    summary["turning_times"] = rep.turning_times;
    summary["grid_too_coarse"] = rep.grid_too_coarse;
    summary["t0"] = rep.t0;
    summary["t1"] = rep.t1;
    summary["config"] = config_echo(cfg);
    write_json(out_dir / "detj_summary.json", summary);
    return 0;
}

// the exact kernel when the potential family has one
std::optional<Complex> oracle_kernel(const RunConfig& cfg, const BvpProblem& bvp) {
    const HamiltonianSpec spec = cfg.spec();
    if (spec.potential().kind() == Potential::Kind::Free)
        return exact_kernel_free(spec.mass(), cfg.hbar(), bvp);
    if (spec.potential().kind() == Potential::Kind::Harmonic) {
        if (spec.drive()) {
            if (spec.dof() != 1) return std::nullopt;
            return exact_kernel_forced(spec.mass_scalar(), spec.potential().omega(),
                                       *spec.drive(), cfg.hbar(), bvp, cfg.shooting());
        }
        return exact_kernel_ho(spec.mass(), spec.potential().omega(), cfg.hbar(), bvp);
    }
    return std::nullopt;
}

int cmd_kernel(const RunConfig& cfg, const fs::path& out_dir, bool oracle) {
    const BvpProblem bvp = cfg.bvp();
    PropagatorResult r = k_wkb(cfg.spec(), bvp, cfg.hbar(), cfg.shooting());

    json summary;
    summary["re"] = r.amplitude.real();
    summary["im"] = r.amplitude.imag();
    summary["modulus"] = std::abs(r.amplitude);
    summary["phase"] = std::arg(r.amplitude);
    summary["action"] = r.action;
    summary["det_j"] = r.det_j;
    summary["hbar"] = r.hbar;
    summary["n"] = r.dof;
    summary["branch"] = {{"phase_offset", r.branch.phase_offset},
                         {"abs_det_j", r.branch.abs_det_j}};
    if (oracle) {
        if (std::optional<Complex> k = oracle_kernel(cfg, bvp)) {
            summary["oracle"] = {{"re", k->real()},
                                 {"im", k->imag()},
                                 {"deviation_rel",
                                  std::abs(*k - r.amplitude) / std::abs(*k)}};
        } else {
            summary["oracle"] = nullptr;
        }
    }
    summary["config"] = config_echo(cfg);
    write_json(out_dir / "kernel.json", summary);

    if (cfg.has("kernel.grid.n")) {
        const int ng = cfg.get_int("kernel.grid.n", 0);
        const double gx0 = cfg.get_double("kernel.grid.x_min");
        const double gx1 = cfg.get_double("kernel.grid.x_max");
        if (ng < 2 || !(gx1 > gx0))
            throw ConfigError("kernel.grid.n", "kernel grid needs n >= 2 and x_max > x_min");
        KernelFn kfn = make_wkb_kernel(cfg.spec(), bvp.t0, bvp.t1, cfg.hbar(),
                                       cfg.shooting());
        std::ofstream csv = open_csv(out_dir / "kernel_grid.csv");
        csv << "x,re,im,modulus\n";
        for (int i = 0; i < ng; ++i) {
            const double x = gx0 + (gx1 - gx0) * i / (ng - 1);
            const Complex k = kfn(x, bvp.x0[0]);
            csv << fmt(x) << "," << fmt(k.real()) << "," << fmt(k.imag()) << ","
                << fmt(std::abs(k)) << "\n";
        }
    }
    return 0;
}

int cmd_evolve(const RunConfig& cfg, const fs::path& out_dir, bool strict) {
    const HamiltonianSpec spec = cfg.spec();
    if (spec.dof() != 1)
        throw ConfigError("n", "evolve supports 1 degree of freedom");
    const double t0 = cfg.get_double("problem.t0", 0.0);
    const double hbar = cfg.hbar();
    const double x_min = cfg.get_double("evolve.x_min");
    const double x_max = cfg.get_double("evolve.x_max");
    const int n_points = cfg.get_int("evolve.n_points", 1024);
    const double center = cfg.get_double("evolve.center", 0.0);
    const double sigma = cfg.get_double("evolve.sigma");
    const double momentum = cfg.get_double("evolve.momentum", 0.0);
    const std::vector<double> times = cfg.get_doubles("evolve.times");

    WavepacketGrid psi0 =
        WavepacketGrid::gaussian(x_min, x_max, n_points, center, sigma, momentum, hbar);
    psi0.t = t0;

    // closed-form references: free Gaussians always, harmonic packets when
    // the width is the coherent one and the packet starts at rest
    const bool free_oracle = spec.potential().kind() == Potential::Kind::Free;
    const double coherent_sigma =
        spec.potential().kind() == Potential::Kind::Harmonic && !spec.drive()
            ? std::sqrt(hbar / (spec.mass_scalar() * spec.potential().omega()))
            : -1.0;
    const bool ho_oracle = coherent_sigma > 0.0 &&
                           std::abs(sigma - coherent_sigma) < 1e-9 * coherent_sigma &&
                           momentum == 0.0;

    json summary;
    summary["times"] = json::array();
    bool any_leak = false;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t1 = times[k];
        if (!(t1 > t0)) throw ConfigError("evolve.times", "evolve.times must exceed problem.t0");
        KernelFn kernel = make_wkb_kernel(spec, t0, t1, hbar, cfg.shooting());
        PropagationReport report;
        WavepacketGrid psi = propagate_wavepacket(kernel, psi0, t1, &report);
        any_leak = any_leak || report.boundary_leak;

        char name[64];
        std::snprintf(name, sizeof(name), "evolve_%03zu.csv", k);
        std::ofstream csv = open_csv(out_dir / name);
        csv << "x,re,im,abs2\n";
        for (int i = 0; i < n_points; ++i) {
            const Complex v = psi.values[static_cast<std::size_t>(i)];
            csv << fmt(psi.x(i)) << "," << fmt(v.real()) << "," << fmt(v.imag()) << ","
                << fmt(std::norm(v)) << "\n";
        }

        json entry;
        entry["t"] = t1;
        entry["file"] = name;
        entry["norm"] = psi.l2_norm();
        entry["width_rms"] = psi.width_rms();
        entry["boundary_leak"] = report.boundary_leak;
        if (free_oracle) {
            double err2 = 0.0;
            for (int i = 0; i < n_points; ++i) {
                const Complex exact =
                    free_gaussian_evolution(psi.x(i), t1 - t0, center, sigma, momentum,
                                            spec.mass_scalar(), hbar);
                err2 += std::norm(psi.values[static_cast<std::size_t>(i)] - exact);
            }
            entry["oracle_l2_error"] = std::sqrt(err2 * psi.dx());
            entry["oracle_width"] =
                free_gaussian_width(t1 - t0, sigma, spec.mass_scalar(), hbar);
        } else if (ho_oracle) {
            double err2 = 0.0;
            for (int i = 0; i < n_points; ++i) {
                const Complex exact =
                    coherent_state(psi.x(i), t1 - t0, center, spec.mass_scalar(),
                                   spec.potential().omega(), hbar);
                err2 += std::norm(psi.values[static_cast<std::size_t>(i)] - exact);
            }
            entry["oracle_l2_error"] = std::sqrt(err2 * psi.dx());
        }
        summary["times"].push_back(entry);
    }
    summary["config"] = config_echo(cfg);
    write_json(out_dir / "evolve_summary.json", summary);
    if (strict && any_leak) {
        json err;
        err["error"] = {{"type", "BoundaryLeak"},
                        {"message", "boundary decay precondition failed under --strict"}};
        std::cerr << err.dump() << "\n";
        return kExitNumerical;
    }
    return 0;
}

int cmd_reduce(const RunConfig& cfg, const fs::path& out_dir) {
    ClassicalTrajectory traj = trajectory_from_config(cfg);
    const int samples = cfg.get_int("reduce.samples", 50);
    GaugeReduction red = gauge_reduction(traj, samples);

    std::ofstream csv = open_csv(out_dir / "reduce.csv");
    csv << "tau,p00,p01,p10,p11,pa00,pa01,pa10,pa11,quad\n";
    for (std::size_t k = 0; k < red.grid.size(); ++k) {
        csv << fmt(red.grid[k]);
        const Eigen::Matrix2d& p = red.P[k];
        const Eigen::Matrix2d& pa = red.PA[k];
        csv << "," << fmt(p(0, 0)) << "," << fmt(p(0, 1)) << "," << fmt(p(1, 0)) << ","
            << fmt(p(1, 1));
        csv << "," << fmt(pa(0, 0)) << "," << fmt(pa(0, 1)) << "," << fmt(pa(1, 0)) << ","
            << fmt(pa(1, 1));
        csv << "," << fmt(red.quad[k]) << "\n";
    }

    const double j_quad = quadrature_J(traj, traj.t1());
    const double j_det = det_J(traj, traj.t1());
    PicardVessiotReport pv = picard_vessiot_report(traj, traj.t1());

    json summary;
    summary["quadrature_J"] = j_quad;
    summary["det_J"] = j_det;
    summary["rel_deviation"] = std::abs(j_quad - j_det) / std::max(1e-300, std::abs(j_det));
    json pvj;
    switch (pv.potential) {
    case Potential::Kind::Free: pvj["potential"] = "free"; break;
    case Potential::Kind::Harmonic: pvj["potential"] = "harmonic"; break;
    case Potential::Kind::Cubic: pvj["potential"] = "cubic"; break;
    case Potential::Kind::Quartic: pvj["potential"] = "quartic"; break;
    case Potential::Kind::Polynomial: pvj["potential"] = "polynomial"; break;
    }
    pvj["base_elements"] = pv.base_elements;
    pvj["adjoined_integral"] = pv.adjoined_integral;
    pvj["tower_depth"] = pv.tower_depth;
    pvj["elementary_known"] = pv.elementary_known;
    if (pv.elementary_value) {
        pvj["elementary_value"] = *pv.elementary_value;
        pvj["elementary_form"] = pv.elementary_form;
    }
    summary["picard_vessiot"] = pvj;
    summary["config"] = config_echo(cfg);
    write_json(out_dir / "reduce_summary.json", summary);
    write_json(out_dir / "pv_report.json", pvj);
    return 0;
}

void emit_error(const std::string& type, const std::string& message, json extra = {}) {
    json err;
    err["error"] = {{"type", type}, {"message", message}};
    for (auto& [k, v] : extra.items()) err["error"][k] = v;
    std::cerr << err.dump() << "\n";
}

int dispatch(const std::string& command, const std::string& config_path,
             const std::string& out, bool oracle, bool strict) {
    try {
        const RunConfig cfg = RunConfig::load(config_path);
        const fs::path out_dir(out);
        fs::create_directories(out_dir);
        if (command == "path") return cmd_path(cfg, out_dir);
        if (command == "detj") return cmd_detj(cfg, out_dir);
        if (command == "kernel") return cmd_kernel(cfg, out_dir, oracle);
        if (command == "evolve") return cmd_evolve(cfg, out_dir, strict);
        if (command == "reduce") return cmd_reduce(cfg, out_dir);
        emit_error("UsageError", "unknown command: " + command);
        return kExitConfig;
    } catch (const ConfigError& e) {
        emit_error("ConfigError", e.what(), {{"key", e.key()}});
        return kExitConfig;
    } catch (const FocalPoint& e) {
        emit_error("FocalPoint", e.what(), {{"tau", e.tau()}});
        return kExitHypothesis;
    } catch (const FocalPointInInterior& e) {
        emit_error("FocalPointInInterior", e.what(), {{"tau", e.tau()}});
        return kExitHypothesis;
    } catch (const TurningPoint& e) {
        emit_error("TurningPoint", e.what(), {{"tau", e.tau()}});
        return kExitHypothesis;
    } catch (const TurningPointInInterval& e) {
        emit_error("TurningPointInInterval", e.what(), {{"tau", e.tau()}});
        return kExitHypothesis;
    } catch (const SingularShootingJacobian& e) {
        emit_error("SingularShootingJacobian", e.what(), {{"det_j", e.det_j()}});
        return kExitHypothesis;
    } catch (const NoConvergence& e) {
        emit_error("NoConvergence", e.what(),
                   {{"residual", e.residual()}, {"iterations", e.iterations()}});
        return kExitNumerical;
    } catch (const StepSizeUnderflow& e) {
        emit_error("StepSizeUnderflow", e.what(), {{"tau", e.tau()}});
        return kExitNumerical;
    } catch (const NotOneDof& e) {
        emit_error("NotOneDof", e.what());
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        emit_error("ConfigError", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        emit_error("NumericalError", e.what());
        return kExitNumerical;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical (WKB) propagators from classical boundary-value data"};
    app.require_subcommand(1);

    std::string config_path, out = ".";
    bool oracle = false, strict = false;

    for (const char* name : {"path", "detj", "kernel", "evolve", "reduce"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "run configuration file")->required();
        sub->add_option("--out", out, "output directory (default: current)");
        if (std::string(name) == "kernel")
            sub->add_flag("--oracle", oracle, "also emit the exact kernel and deviation");
        if (std::string(name) == "evolve")
            sub->add_flag("--strict", strict, "escalate BoundaryLeak to a failure");
    }

    CLI11_PARSE(app, argc, argv);
    return dispatch(app.get_subcommands().front()->get_name(), config_path, out, oracle,
                    strict);
}
