#include <CLI11.hpp>

#include <Eigen/Core>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "rdd/config.hpp"
#include "rdd/csv.hpp"
#include "rdd/verify.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

// FNV-1a over the canonical re-emitted config, so the hash is independent of
// comments and key order in the input file.
std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

int worker_count(std::size_t n_jobs) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("RICHARDS_DD_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(v);
  }
  return static_cast<int>(std::min<std::size_t>(n, n_jobs));
}

/// Runs jobs[i]() on a bounded pool; results land in deterministic order
/// because each job owns its output slot.
void parallel_jobs(const std::vector<std::function<void()>>& jobs) {
  const int n_workers = worker_count(jobs.size());
  if (n_workers <= 1) {
    for (const auto& job : jobs) job();
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < n_workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        try {
          jobs[i]();
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct Session {
  std::filesystem::path out = ".";
  std::string config_path;
  rdd::ScenarioSpec spec;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::vector<std::string> artifacts;

  std::filesystem::path path(const std::string& name) {
    artifacts.push_back(name);
    return out / name;
  }

  void write_manifest(const std::string& subcommand, const std::string& flags) const {
    const std::string canonical = rdd::emit_config(spec);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream f(out / "manifest.txt", std::ios::binary | std::ios::trunc);
    f << "tool = rdd " << kVersion << "\n"
      << "eigen = " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "."
      << EIGEN_MINOR_VERSION << "\n"
      << "subcommand = " << subcommand << (flags.empty() ? "" : " ") << flags << "\n"
      << "config = " << config_path << "\n"
      << "config_fnv1a = " << std::hex << fnv1a(canonical) << std::dec << "\n"
      << "elapsed_seconds = " << rdd::format_value(elapsed) << "\n"
      << "artifacts =";
    for (const auto& a : artifacts) f << " " << a;
    f << "\n\n# canonical configuration\n" << canonical;
  }
};

void write_trajectory(Session& ses, const rdd::Trajectory& traj, const rdd::Scenario& sc,
                      bool fields) {
  rdd::CsvTable summary;
  summary.header = {"step", "t", "min_u", "max_u", "theta_mass",
                    "balance_residual", "lscheme_iters"};
  for (std::size_t n = 0; n < traj.diagnostics.size(); ++n) {
    const auto& d = traj.diagnostics[n];
    summary.add_row({static_cast<double>(n + 1), traj.times(static_cast<Eigen::Index>(n + 1)),
                     d.min_u, d.max_u, d.theta_mass, d.balance_residual,
                     static_cast<double>(d.lscheme_iters)});
  }
  rdd::emit_csv(summary, ses.path("trajectory_summary.csv").string());

  rdd::CsvTable iters;
  iters.header = {"step", "iter", "increment_norm", "weighted_seminorm", "cg_iters"};
  for (std::size_t n = 0; n < traj.histories.size(); ++n)
    for (std::size_t i = 0; i < traj.histories[n].iters.size(); ++i) {
      const auto& rec = traj.histories[n].iters[i];
      iters.add_row({static_cast<double>(n + 1), static_cast<double>(i + 1),
                     rec.increment_norm, rec.weighted_seminorm,
                     static_cast<double>(rec.cg_iters)});
    }
  rdd::emit_csv(iters, ses.path("iterations.csv").string());

  rdd::CsvTable bounds;
  bounds.header = {"step", "t", "min_u", "max_u"};
  for (std::size_t n = 0; n < traj.states.size(); ++n)
    bounds.add_row({static_cast<double>(n), traj.times(static_cast<Eigen::Index>(n)),
                    traj.states[n].minCoeff(), traj.states[n].maxCoeff()});
  rdd::emit_csv(bounds, ses.path("bounds_report.csv").string());

  if (fields) {
    for (std::size_t n = 0; n < traj.states.size(); ++n) {
      rdd::CsvTable field;
      field.header = {"node", "x", "z", "u", "theta"};
      for (Eigen::Index i = 0; i < sc.mesh.n_nodes(); ++i) {
        const double u = traj.states[n](i);
        field.add_row({static_cast<double>(i), sc.mesh.x_coord(i), sc.mesh.z_coord(i), u,
                       sc.model.theta(u)});
      }
      rdd::emit_csv(field, ses.path("fields_" + std::to_string(n) + ".csv").string());
    }
  }
}

void write_study(Session& ses, const rdd::ConvergenceTable& table, const std::string& file,
                 const std::string& parameter_name) {
  rdd::CsvTable csv;
  csv.header = {parameter_name, "distance", "order"};
  for (std::size_t i = 0; i < table.parameters.size(); ++i) {
    const double order =
        i == 0 ? std::numeric_limits<double>::quiet_NaN() : table.orders[i - 1];
    csv.add_row({table.parameters[i], table.distances[i], order});
  }
  rdd::emit_csv(csv, ses.path(file).string());
}

int cmd_run(Session& ses) {
  auto built = rdd::build_scenario(ses.spec);
  const rdd::Trajectory traj = rdd::run(built.scenario);
  write_trajectory(ses, traj, built.scenario, ses.spec.fields);
  ses.write_manifest("run", "");
  if (!traj.all_converged) {
    std::cerr << "rdd: L-scheme failed to converge on at least one step\n";
    return 1;
  }
  return 0;
}

int cmd_sweep_lscheme(Session& ses) {
  auto built = rdd::build_scenario(ses.spec);
  const rdd::Scenario& base = built.scenario;
  const double L_theta = base.model.L_theta;
  const std::vector<double> factors = {0.55, 0.75, 1.0, 2.0};

  // All L values solve the same frozen first step, so rates are comparable;
  // the reference solution is the tightly converged fixed point.
  Eigen::VectorXd u0(base.mesh.n_nodes());
  for (Eigen::Index i = 0; i < base.mesh.n_nodes(); ++i)
    u0(i) = base.initial ? base.initial(base.mesh.x_coord(i), base.mesh.z_coord(i)) : 0.0;
  const rdd::FrozenStep frozen = rdd::freeze_step(u0, 0.0, base.tau(), base);
  const Eigen::VectorXd mass = rdd::lumped_mass(base.mesh);

  rdd::LschemeConfig ref_cfg = base.solver;
  ref_cfg.L = L_theta;
  ref_cfg.atol = 1e-13;
  ref_cfg.rtol = 0.0;
  ref_cfg.max_iters = 2000;
  ref_cfg.lin_tol = 1e-14;
  ref_cfg.store_iterates = false;
  const Eigen::VectorXd reference = rdd::lscheme_solve(u0, frozen, ref_cfg).u;

  struct Row {
    double L = 0;
    int iters = 0;
    bool converged = false;
    double geomean = 0, max_ratio = 0;
  };
  std::vector<Row> rows(factors.size());
  std::vector<std::function<void()>> jobs;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    jobs.emplace_back([&, k] {
      rdd::LschemeConfig cfg = base.solver;
      cfg.L = factors[k] * L_theta;
      cfg.store_iterates = true;
      const auto result = rdd::lscheme_solve(u0, frozen, cfg);
      const auto rate =
          rdd::lscheme_rate(result.history, u0, reference, mass, cfg.lin_tol);
      rows[k] = {cfg.L, static_cast<int>(result.history.iters.size()),
                 result.history.converged, rate.geomean_ratio, rate.max_ratio};
    });
  }
  parallel_jobs(jobs);

  rdd::CsvTable csv;
  csv.header = {"L_over_Ltheta", "L", "iters", "converged", "geomean_ratio", "max_ratio"};
  for (std::size_t k = 0; k < factors.size(); ++k)
    csv.add_row({factors[k], rows[k].L, static_cast<double>(rows[k].iters),
                 rows[k].converged ? 1.0 : 0.0, rows[k].geomean, rows[k].max_ratio});
  rdd::emit_csv(csv, ses.path("lscheme_rates.csv").string());
  ses.write_manifest("sweep-lscheme", "");
  return 0;
}

int cmd_sweep_tau(Session& ses, int n_taus) {
  auto built = rdd::build_scenario(ses.spec);
  std::vector<double> taus;
  for (int k = 0; k < n_taus; ++k)
    taus.push_back(built.scenario.T / (ses.spec.steps * (1 << k)));
  const auto table = rdd::tau_convergence_study(built.scenario, taus);
  write_study(ses, table, "tau_study.csv", "tau");
  ses.write_manifest("sweep-tau", "--taus " + std::to_string(n_taus));
  return 0;
}

int cmd_sweep_eps(Session& ses) {
  auto built = rdd::build_scenario(ses.spec);
  const std::vector<double> eps = {1e-1, 1e-2, 1e-3, 1e-4};
  const auto table = rdd::eps_convergence_study(built.scenario, eps);
  write_study(ses, table, "eps_study.csv", "eps");
  ses.write_manifest("sweep-eps", "");
  return 0;
}

int cmd_mms(Session& ses, int n_taus) {
  std::vector<double> taus;
  for (int k = 0; k < n_taus; ++k)
    taus.push_back(ses.spec.T / (ses.spec.steps * (1 << k)));
  const auto table = rdd::mms_linear_sanity(ses.spec.cells, taus, ses.spec.T);
  write_study(ses, table, "mms_study.csv", "tau");
  ses.write_manifest("mms", "--taus " + std::to_string(n_taus));
  return 0;
}

int cmd_certify(Session& ses) {
  if (ses.spec.soil_model != "vangenuchten")
    throw std::invalid_argument("config: certify needs soil model = vangenuchten");
  const rdd::ConstitutiveTable table = rdd::build_table(ses.spec.soil, ses.spec.table_samples);
  const rdd::CertificationReport rep = rdd::certify_hypotheses(table);

  rdd::CsvTable csv;
  csv.header = {"u_star", "max_theta_prime_fd_error", "min_growth_slack",
                "max_holder_violation", "junction_residual_origin",
                "junction_residual_ustar", "passed"};
  csv.add_row({table.u_star, rep.max_theta_prime_fd_error, rep.min_growth_slack,
               rep.max_holder_violation, rep.junction_residual_origin,
               rep.junction_residual_ustar, rep.passed ? 1.0 : 0.0});
  rdd::emit_csv(csv, ses.path("certification_report.csv").string());
  ses.write_manifest("certify", "");
  if (!rep.passed) {
    std::cerr << "rdd: constitutive certification failed\n";
    return 1;
  }
  return 0;
}

int cmd_plot_constitutive(Session& ses, int samples) {
  if (ses.spec.soil_model != "vangenuchten")
    throw std::invalid_argument("config: plot-constitutive needs soil model = vangenuchten");
  const rdd::ConstitutiveTable table = rdd::build_table(ses.spec.soil, ses.spec.table_samples);
  const double lo = -0.5, hi = 2.0 * table.u_star + 0.5;

  rdd::CsvTable csv;
  csv.header = {"eta", "theta", "theta_prime", "K", "Kbar_z", "Kbar1_z"};
  for (int i = 0; i < samples; ++i) {
    const double eta = lo + (hi - lo) * i / (samples - 1);
    csv.add_row({eta, rdd::theta_extended(eta, table), rdd::theta_prime(eta, table),
                 rdd::conductivity_K(eta, table), rdd::kbar_z(eta, table),
                 rdd::kbar1_z(eta, table)});
  }
  rdd::emit_csv(csv, ses.path("constitutive.csv").string());
  ses.write_manifest("plot-constitutive", "--samples " + std::to_string(samples));
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate Richards solver (u-formulation, L-scheme)"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string config_path;
  std::string out_dir = ".";
  int n_taus = 5;
  int plot_samples = 801;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration file")->required();
    sub->add_option("--out", out_dir, "output directory (created if missing)");
    return sub;
  };
  auto* sub_run = add_common(app.add_subcommand("run", "integrate one scenario"));
  auto* sub_lsch = add_common(
      app.add_subcommand("sweep-lscheme", "contraction rates across L values"));
  auto* sub_tau = add_common(app.add_subcommand("sweep-tau", "tau self-convergence study"));
  sub_tau->add_option("--taus", n_taus, "number of halvings")->check(CLI::Range(2, 12));
  auto* sub_eps =
      add_common(app.add_subcommand("sweep-eps", "epsilon regularization study"));
  auto* sub_mms =
      add_common(app.add_subcommand("mms", "manufactured-solution order check"));
  sub_mms->add_option("--taus", n_taus, "number of halvings")->check(CLI::Range(2, 12));
  auto* sub_cert =
      add_common(app.add_subcommand("certify", "constitutive hypothesis certification"));
  auto* sub_plot = add_common(
      app.add_subcommand("plot-constitutive", "sample the constitutive functions"));
  sub_plot->add_option("--samples", plot_samples, "sample count")->check(CLI::Range(2, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Session ses;
    ses.out = out_dir;
    ses.config_path = config_path;
    std::filesystem::create_directories(ses.out);
    ses.spec = rdd::load_config(config_path);

    if (sub_run->parsed()) return cmd_run(ses);
    if (sub_lsch->parsed()) return cmd_sweep_lscheme(ses);
    if (sub_tau->parsed()) return cmd_sweep_tau(ses, n_taus);
    if (sub_eps->parsed()) return cmd_sweep_eps(ses);
    if (sub_mms->parsed()) return cmd_mms(ses, n_taus);
    if (sub_cert->parsed()) return cmd_certify(ses);
    if (sub_plot->parsed()) return cmd_plot_constitutive(ses, plot_samples);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rdd: " << e.what() << "\n";
    return 2; // configuration error
  } catch (const std::exception& e) {
    std::cerr << "rdd: " << e.what() << "\n";
    return 1; // solver failure
  }
}
