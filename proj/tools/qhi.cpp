// qhi: parameter sweeps over the 4-site quasi-Hermitian chain, written as CSV.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "qhi/cli.hpp"

namespace {

struct FlagSet {
  std::map<std::string, std::string> values;
  bool gnuplot = false;
  std::string config;
};

void add_shared(CLI::App* cmd, FlagSet& f) {
  cmd->add_option("--family", f.values["family"], "hermitian|nonhermitian|unified");
  cmd->add_option("--lambda", f.values["lambda"], "interaction shape");
  cmd->add_option("--grid", f.values["grid"], "START:STOP:COUNT");
  cmd->add_option("--tol", f.values["tol"], "reality / locator tolerance");
  cmd->add_option("--out", f.values["out"], "output CSV path (default stdout)");
  cmd->add_option("--config", f.config, "key = value configuration file");
  cmd->add_option("--threads", f.values["threads"], "worker count (0 = auto)");
  cmd->add_flag("--gnuplot", f.gnuplot, "also write OUT.gp");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-Hermitian lattice toolkit"};
  app.require_subcommand(1);

  FlagSet flags;
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues along the grid");
  auto* metric = app.add_subcommand("metric", "metric eigenvalues and positivity along the grid");
  auto* ep = app.add_subcommand("ep", "exceptional points inside the grid range");
  auto* hermitize = app.add_subcommand("hermitize", "Dyson-map Hermitization along the grid");
  auto* evolve = app.add_subcommand("evolve", "norms of exp(-iHt) psi0");
  for (auto* cmd : {spectrum, metric, ep, hermitize, evolve}) add_shared(cmd, flags);

  metric->add_option("--params", flags.values["params"], "c,d,f,g");
  ep->add_option("--probe", flags.values["probe"], "side distance for kind classification");
  hermitize->add_option("--continuation", flags.values["continuation"], "own|constant (unified, tau <= 0)");
  evolve->add_option("--eta", flags.values["eta"], "pencil parameter");
  evolve->add_option("--state", flags.values["state"], "c1,c2,c3,c4");
  evolve->add_option("--tmax", flags.values["tmax"], "final time");
  evolve->add_option("--steps", flags.values["steps"], "time steps (steps+1 samples)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : qhi::cli::kUsageError;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  qhi::cli::Entries given;
  for (const auto& [k, v] : flags.values)
    if (!v.empty()) given[k] = v;
  if (flags.gnuplot) given["gnuplot"] = "true";

  qhi::cli::SweepConfig cfg;
  try {
    const auto from_file = flags.config.empty() ? qhi::cli::Entries{} : qhi::cli::load_config_file(flags.config);
    cfg = qhi::cli::resolve_config(from_file, given);
    if (cfg.gnuplot && cfg.out.empty()) throw qhi::InvalidArgument("--gnuplot requires --out");
  } catch (const qhi::Error& e) {
    std::cerr << "qhi: " << e.what() << "\n";
    return qhi::cli::kUsageError;
  }

  qhi::cli::CommandResult res;
  try {
    res = qhi::cli::run_command(command, cfg);
  } catch (const qhi::InvalidArgument& e) {
    std::cerr << "qhi: " << e.what() << "\n";
    return qhi::cli::kUsageError;
  } catch (const qhi::Error& e) {
    std::cerr << "qhi: " << e.what() << "\n";
    return qhi::cli::kNumericFailure;
  }
  for (const auto& d : res.diagnostics) std::cerr << "qhi: " << d << "\n";

  if (cfg.out.empty()) {
    qhi::csv::write(std::cout, res.table);
  } else {
    std::ofstream out(cfg.out, std::ios::binary);
    if (!out) {
      std::cerr << "qhi: cannot write '" << cfg.out << "'\n";
      return qhi::cli::kUsageError;
    }
    qhi::csv::write(out, res.table);
    if (cfg.gnuplot) {
      std::ofstream gp(cfg.out + ".gp", std::ios::binary);
      gp << qhi::cli::gnuplot_script(command, cfg.out, res.table);
    }
  }
  return res.exit_code;
}
