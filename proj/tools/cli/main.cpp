// nhkubo: spectral maps, conductivity sweeps, sum rules, occupations and the
// self-validation suite for the non-Hermitian Dirac model.
//
// Exit status: 0 success, 1 validation or numerical failure, 2 usage/config error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "nhkubo/errors.hpp"
#include "run_config.hpp"

namespace {

using nhkubo::cli::RunConfig;

// Flags shared by the computing subcommands; unset flags leave config values alone.
struct Flags {
  std::string config;
  std::optional<std::string> framework, out, format, sweep;
  std::optional<double> delta0, start, stop, m, gamma, Delta, mu, v_F, temperature, omega, k, k_start, k_stop;
  std::optional<int> points, k_points;
  std::optional<unsigned> workers;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "flat JSON run configuration")->check(CLI::ExistingFile);
    app->add_option("--framework", framework, "standard | phqm-j | phqm-tilde | postselected");
    app->add_option("--out", out, "output file (default: stdout)");
    app->add_option("--format", format, "csv | json");
    app->add_option("--delta0", delta0, "clean-limit broadening (default 1e-6 |Delta|)");
    app->add_option("--sweep", sweep, "swept variable: omega, k, m or gamma");
    app->add_option("--start", start, "sweep start");
    app->add_option("--stop", stop, "sweep stop");
    app->add_option("--points", points, "sweep points");
    app->add_option("--m", m, "imaginary mass m");
    app->add_option("--gamma", gamma, "uniform decay rate");
    app->add_option("--Delta", Delta, "real mass Delta");
    app->add_option("--mu", mu, "chemical potential");
    app->add_option("--vF", v_F, "Fermi velocity");
    app->add_option("--temperature", temperature, "temperature");
    app->add_option("--omega", omega, "frequency when not swept");
    app->add_option("--k", k, "momentum when not swept");
    app->add_option("--k-start", k_start, "spectral map momentum start");
    app->add_option("--k-stop", k_stop, "spectral map momentum stop");
    app->add_option("--k-points", k_points, "spectral map momentum points");
    app->add_option("--workers", workers, "worker threads (default: hardware threads)");
  }

  RunConfig resolve() const {
    RunConfig c = config.empty() ? RunConfig{} : nhkubo::cli::load_config(config);
    const auto set = [](auto& dst, const auto& src) {
      if (src) dst = *src;
    };
    set(c.framework, framework);
    set(c.out, out);
    set(c.format, format);
    set(c.sweep.variable, sweep);
    set(c.sweep.start, start);
    set(c.sweep.stop, stop);
    set(c.sweep.points, points);
    set(c.model.m, m);
    set(c.model.gamma, gamma);
    set(c.model.Delta, Delta);
    set(c.model.mu, mu);
    set(c.model.v_F, v_F);
    set(c.temperature, temperature);
    set(c.omega, omega);
    set(c.k, k);
    set(c.k_start, k_start);
    set(c.k_stop, k_stop);
    set(c.k_points, k_points);
    set(c.workers, workers);
    if (delta0) c.delta0 = *delta0;
    // A sweep flag without --sweep still needs a variable to act on.
    if (c.sweep.variable.empty() && (start || stop || points)) {
      throw nhkubo::cli::ConfigError("--start/--stop/--points need --sweep <variable>");
    }
    return c;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kubo response of non-Hermitian Dirac fermions"};
  app.require_subcommand(1);

  Flags spectral_flags, sigma_flags, dc_flags, osr_flags, occ_flags;
  auto* spectral = app.add_subcommand("spectral", "spectral function A(omega, k) with band overlay");
  auto* sigma = app.add_subcommand("sigma", "optical conductivity sigma(Omega)");
  auto* dc = app.add_subcommand("sigma-dc", "DC conductivity, numeric and closed form");
  auto* osr = app.add_subcommand("osr", "optical sum rule -pi Re chi(0)");
  auto* occ = app.add_subcommand("occupation", "single-particle occupation matrix at momentum k");
  auto* validate = app.add_subcommand("validate", "run the acceptance oracle suite");
  spectral_flags.attach(spectral);
  sigma_flags.attach(sigma);
  dc_flags.attach(dc);
  osr_flags.attach(osr);
  occ_flags.attach(occ);

  nhkubo::cli::ValidateOptions vopts;
  std::string vconfig;
  std::optional<std::string> vframework;
  validate->add_option("--only", vopts.only, "check numbers to run (default: all)");
  validate->add_option("--config", vconfig, "add a DC closed-form check at this configuration")->check(CLI::ExistingFile);
  validate->add_option("--framework", vframework, "framework for the configured check");
  validate->add_option("--format", vopts.format, "text | json")->check(CLI::IsMember({"text", "json"}));
  validate->add_option("--workers", vopts.workers, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e);
    return status == 0 ? 0 : 2;
  }

  try {
    if (*spectral) return nhkubo::cli::cmd_spectral(spectral_flags.resolve());
    if (*sigma) return nhkubo::cli::cmd_sigma(sigma_flags.resolve());
    if (*dc) return nhkubo::cli::cmd_sigma_dc(dc_flags.resolve());
    if (*osr) return nhkubo::cli::cmd_osr(osr_flags.resolve());
    if (*occ) return nhkubo::cli::cmd_occupation(occ_flags.resolve());
    if (*validate) {
      if (!vconfig.empty() || vframework) {
        RunConfig c = vconfig.empty() ? RunConfig{} : nhkubo::cli::load_config(vconfig);
        if (vframework) c.framework = *vframework;
        c.validate({});
        vopts.config = c;
      }
      return nhkubo::cli::cmd_validate(vopts);
    }
  } catch (const nhkubo::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nhkubo::Error& e) {
    std::cerr << "computation failed: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
