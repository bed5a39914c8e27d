// Command-line front end: fit, simulate, mse-study, pmf-table.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ndoppe/cli.hpp"

namespace {

struct ModelFlags {
  std::optional<int> r;
  std::optional<std::string> coeffs;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--r", r, "Family order r (default 2)");
    cmd->add_option("--coeffs", coeffs, "Coefficients a0,a1,...,a_{r-1} (default 1,1)");
  }

  [[nodiscard]] ndoppe::ModelSpec model() const { return ndoppe::cli::make_model(r, coeffs); }
};

// Runs body with the requested output stream: --out PATH or stdout.
template <class Body>
void with_output(const std::string& path, Body&& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output '" + path + "'");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Natural discrete one-parameter polynomial exponential distributions"};
  app.require_subcommand(1);

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a dataset by MLE and UMVUE and report both NLLs");
  ModelFlags fit_model;
  fit_model.add_to(fit);
  std::string fit_data;
  std::int64_t fit_x_max = -1;
  std::string fit_format = "json";
  std::string fit_out;
  fit->add_option("dataset", fit_data, "Whitespace-separated counts")->required();
  fit->add_option("--x-max", fit_x_max, "Last x of the per-x table (default: largest count)");
  fit->add_option("--format", fit_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  fit->add_option("--out", fit_out, "Output path (default stdout)");

  // simulate
  auto* sim = app.add_subcommand("simulate", "Draw a random sample, one count per line");
  ModelFlags sim_model;
  sim_model.add_to(sim);
  std::int64_t sim_n = 0;
  double sim_theta = 0.5;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  sim->add_option("--n", sim_n, "Sample size")->required();
  sim->add_option("--theta", sim_theta, "theta in (0, 1)")->required();
  sim->add_option("--seed", sim_seed, "Seed");
  sim->add_option("--out", sim_out, "Output path (default stdout)");

  // mse-study
  auto* mse = app.add_subcommand("mse-study", "Monte Carlo MSE of the MLE and UMVUE of f(x), F(x)");
  ModelFlags mse_model;
  mse_model.add_to(mse);
  double mse_theta = 0.01;
  std::int64_t mse_x = 2;
  std::int64_t mse_reps = 1000;
  std::string mse_sizes = "25,50,100,200,400";
  std::uint64_t mse_seed = 20190101;
  unsigned mse_threads = 0;
  bool mse_exact = false;
  std::string mse_out;
  mse->add_option("--theta", mse_theta, "Generating theta");
  mse->add_option("--x", mse_x, "Evaluation point");
  mse->add_option("--reps", mse_reps, "Replications N");
  mse->add_option("--sizes", mse_sizes, "Sample sizes n1,n2,... (strictly increasing)");
  mse->add_option("--seed", mse_seed, "Master seed");
  mse->add_option("--threads", mse_threads, "Worker threads (0 = all cores)");
  mse->add_flag("--include-exact", mse_exact, "Add the exact UMVUE MSE column");
  mse->add_option("--out", mse_out, "Output path (default stdout)");

  // pmf-table
  auto* tab = app.add_subcommand("pmf-table", "Tabulate the model PMF and CDF");
  ModelFlags tab_model;
  tab_model.add_to(tab);
  double tab_theta = 0.5;
  std::int64_t tab_x_max = 20;
  std::string tab_out;
  tab->add_option("--theta", tab_theta, "theta in (0, 1)")->required();
  tab->add_option("--x-max", tab_x_max, "Last x");
  tab->add_option("--out", tab_out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*fit) {
      const auto model = fit_model.model();
      const auto format = ndoppe::cli::parse_format(fit_format);
      with_output(fit_out, [&](std::ostream& out) {
        ndoppe::cli::cmd_fit(fit_data, model, fit_x_max, format, out);
      });
    } else if (*sim) {
      const auto model = sim_model.model();
      const ndoppe::Theta theta(sim_theta);
      if (sim_n < 1) throw ndoppe::cli::UsageError("--n must be at least 1");
      with_output(sim_out, [&](std::ostream& out) {
        ndoppe::cli::cmd_simulate(sim_n, theta, model, sim_seed, out);
      });
    } else if (*mse) {
      ndoppe::MseStudyConfig cfg;
      cfg.model = mse_model.model();
      cfg.theta = ndoppe::Theta(mse_theta);
      cfg.x = mse_x;
      cfg.sample_sizes = ndoppe::cli::parse_int_list(mse_sizes);
      cfg.replications = mse_reps;
      cfg.master_seed = mse_seed;
      cfg.threads = mse_threads;
      cfg.validate();
      with_output(mse_out, [&](std::ostream& out) {
        ndoppe::cli::cmd_mse_study(cfg, mse_exact, out, std::cerr);
      });
    } else if (*tab) {
      const auto model = tab_model.model();
      const ndoppe::Theta theta(tab_theta);
      with_output(tab_out, [&](std::ostream& out) {
        ndoppe::cli::cmd_pmf_table(theta, model, tab_x_max, out);
      });
    }
  } catch (const ndoppe::cli::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ndoppe::DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
