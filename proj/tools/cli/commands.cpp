#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "json.hpp"
#include "nhkubo/errors.hpp"
#include "nhkubo/observables.hpp"
#include "nhkubo/response.hpp"
#include "parallel.hpp"
#include "table.hpp"
#include "validation.hpp"

namespace nhkubo::cli {
namespace {

using tachyon::Approach;
using tachyon::TachyonParams;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One configuration per sweep point (a single one without a sweep).
std::vector<RunConfig> expand(const RunConfig& cfg) {
  if (!cfg.sweep.enabled()) return {cfg};
  std::vector<RunConfig> out;
  for (int i = 0; i < cfg.sweep.points; ++i) {
    RunConfig c = cfg;
    const double x = cfg.sweep.at(i);
    if (cfg.sweep.variable == "omega") c.omega = x;
    if (cfg.sweep.variable == "k") c.k = x;
    if (cfg.sweep.variable == "m") c.model.m = x;
    if (cfg.sweep.variable == "gamma") c.model.gamma = x;
    out.push_back(c);
  }
  return out;
}

double swept_value(const RunConfig& c) {
  const std::string& v = c.sweep.variable;
  if (v == "omega") return c.omega;
  if (v == "k") return c.k;
  if (v == "m") return c.model.m;
  return c.model.gamma;
}

// Parameter problems found before any integral runs are configuration errors.
template <class F>
auto prevalidate(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

void check_output_path(const RunConfig& cfg) {
  if (cfg.out.empty()) return;
  std::ofstream probe(cfg.out, std::ios::app);
  if (!probe) throw ConfigError("cannot write " + cfg.out);
}

KuboProblem problem_for(const RunConfig& c) {
  TachyonParams p = c.model;
  p.gamma = c.effective_gamma();
  KuboProblem prob = tachyon::kubo_problem(p, c.approach(), c.temperature);
  prob.omega_quad.rel_tol = c.omega_rel_tol;
  prob.omega_quad.abs_tol = c.omega_abs_tol;
  prob.k_quad.rel_tol = c.k_rel_tol;
  prob.k_quad.abs_tol = c.k_abs_tol;
  return prob;
}

void require_green_framework(const RunConfig& cfg, const char* command) {
  if (cfg.approach() == Approach::Postselected) {
    throw ConfigError(std::string(command) + ": the postselected framework has no Green's functions");
  }
}

std::vector<std::string> leading_column(const RunConfig& cfg, const std::string& fixed) {
  std::vector<std::string> cols;
  if (cfg.sweep.enabled() && cfg.sweep.variable != fixed) cols.push_back(cfg.sweep.variable);
  return cols;
}

}  // namespace

int cmd_spectral(const RunConfig& cfg) {
  cfg.validate({"omega"});
  require_green_framework(cfg, "spectral");
  if (!cfg.sweep.enabled()) throw ConfigError("spectral needs an omega sweep (--sweep omega --start --stop --points)");
  if (cfg.k_points < 2 || !(cfg.k_start < cfg.k_stop)) throw ConfigError("spectral needs k_points >= 2 and k_start < k_stop");
  check_output_path(cfg);
  const Framework fw = cfg.greens_framework();
  std::vector<double> ks;
  for (int i = 0; i < cfg.k_points; ++i) ks.push_back(cfg.k_start + (cfg.k_stop - cfg.k_start) * i / (cfg.k_points - 1));
  prevalidate([&] {
    for (double k : ks) validate_framework(tachyon::hamiltonian(k, cfg.model), fw);
    return 0;
  });

  const auto blocks = tools::parallel_map<std::vector<std::vector<double>>>(
      ks.size(),
      [&](std::size_t i) {
        const ComplexMatrix h = tachyon::hamiltonian(ks[i], cfg.model);
        const ComplexVector bands = sorted_eigenvalues(h);
        std::vector<std::vector<double>> rows;
        for (int j = 0; j < cfg.sweep.points; ++j) {
          const double w = cfg.sweep.at(j);
          rows.push_back({w, ks[i], spectral_function(h, fw, w), bands(0).real(), bands(0).imag(), bands(1).real(),
                          bands(1).imag()});
        }
        return rows;
      },
      cfg.workers);
  Table t;
  add_run_metadata(t, "spectral", cfg);
  t.metadata.emplace_back("k_grid", format_number(cfg.k_start) + " " + format_number(cfg.k_stop) + " " +
                                        std::to_string(cfg.k_points));
  t.metadata.emplace_back("units", "energies in units of Delta's unit; A = i tr[G_R - G_A]");
  t.columns = {"omega", "k", "A", "re_xi_minus", "im_xi_minus", "re_xi_plus", "im_xi_plus"};
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  write_table(t, cfg);
  return 0;
}

int cmd_sigma(const RunConfig& cfg) {
  cfg.validate({"omega", "m", "gamma"});
  require_green_framework(cfg, "sigma");
  check_output_path(cfg);
  const std::vector<RunConfig> points = expand(cfg);
  const auto problems = prevalidate([&] {
    std::vector<KuboProblem> out;
    for (const RunConfig& c : points) out.push_back(problem_for(c));
    return out;
  });
  const double unit = std::abs(cfg.model.Delta);
  const auto results = tools::parallel_map<ResponseResult>(
      points.size(),
      [&](std::size_t i) {
        return points[i].omega == 0.0 ? sigma_dc(problems[i]) : sigma_optical(problems[i], points[i].omega);
      },
      cfg.workers);
  Table t;
  add_run_metadata(t, "sigma", cfg);
  t.metadata.emplace_back("current", cfg.approach() == Approach::PhqmTilde ? "isospectral" : "J");
  t.metadata.emplace_back("units", "sigma in e^2 v_F / (2 pi Delta)");
  t.columns = leading_column(cfg, "omega");
  for (const char* c : {"omega", "sigma_re", "sigma_im", "est_error"}) t.columns.push_back(c);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> row;
    if (t.columns.size() == 5) row.push_back(swept_value(points[i]));
    row.insert(row.end(), {points[i].omega, unit * results[i].value.real(), unit * results[i].value.imag(),
                           unit * results[i].est_error});
    t.rows.push_back(row);
  }
  write_table(t, cfg);
  return 0;
}

int cmd_sigma_dc(const RunConfig& cfg) {
  cfg.validate({"m", "gamma"});
  check_output_path(cfg);
  const std::vector<RunConfig> points = expand(cfg);
  const bool numeric = cfg.approach() != Approach::Postselected;
  std::vector<KuboProblem> problems;
  if (numeric) {
    problems = prevalidate([&] {
      std::vector<KuboProblem> out;
      for (const RunConfig& c : points) out.push_back(problem_for(c));
      return out;
    });
  }
  const auto closed_form = [&](const RunConfig& c) {
    if (c.temperature != 0.0 || c.model.mu != 0.0) return kNaN;
    TachyonParams p = c.model;
    p.gamma = c.effective_gamma();
    switch (c.approach()) {
      case Approach::Standard: return tachyon::sigma_dc_standard(p);
      case Approach::PhqmJ: return tachyon::sigma_dc_phqm_j(p);
      case Approach::PhqmTilde: return tachyon::sigma_dc_phqm_tilde(p);
      case Approach::Postselected: return tachyon::sigma_dc_postselected(p);
    }
    return kNaN;
  };
  std::vector<double> closed = prevalidate([&] {
    std::vector<double> out;
    for (const RunConfig& c : points) out.push_back(closed_form(c));
    return out;
  });
  std::vector<ResponseResult> results(points.size(), ResponseResult{{kNaN, 0.0}, kNaN, 0});
  if (numeric) {
    results = tools::parallel_map<ResponseResult>(
        points.size(), [&](std::size_t i) { return sigma_dc(problems[i]); }, cfg.workers);
  }
  const double unit = std::abs(cfg.model.Delta);
  Table t;
  add_run_metadata(t, "sigma-dc", cfg);
  if (!numeric) t.metadata.emplace_back("numeric", "none; the postselected value exists in closed form only");
  t.metadata.emplace_back("units", "sigma in e^2 v_F / (2 pi Delta)");
  t.columns = leading_column(cfg, "");
  for (const char* c : {"sigma_dc", "est_error", "closed_form", "rel_error"}) t.columns.push_back(c);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::vector<double> row;
    if (cfg.sweep.enabled()) row.push_back(swept_value(points[i]));
    const double v = results[i].value.real();
    const double rel = closed[i] != 0.0 ? std::abs(v - closed[i]) / std::abs(closed[i]) : kNaN;
    row.insert(row.end(), {unit * v, unit * results[i].est_error, unit * closed[i], rel});
    t.rows.push_back(row);
  }
  write_table(t, cfg);
  return 0;
}

int cmd_osr(const RunConfig& cfg) {
  cfg.validate({"m", "gamma"});
  require_green_framework(cfg, "osr");
  if (cfg.temperature != 0.0) throw ConfigError("osr: the sum rule is evaluated at temperature 0");
  check_output_path(cfg);
  const std::vector<RunConfig> points = expand(cfg);
  const auto problems = prevalidate([&] {
    std::vector<KuboProblem> out;
    for (const RunConfig& c : points) out.push_back(problem_for(c));
    return out;
  });
  const auto results = tools::parallel_map<ResponseResult>(
      points.size(), [&](std::size_t i) { return optical_sum(problems[i]); }, cfg.workers);
  Table t;
  add_run_metadata(t, "osr", cfg);
  t.metadata.emplace_back("units", "-pi Re chi(0) in e^2 v_F");
  t.columns = leading_column(cfg, "");
  for (const char* c : {"osr", "est_error", "closed_form", "rel_error"}) t.columns.push_back(c);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const RunConfig& c = points[i];
    double closed = 1.0;
    if (c.approach() == Approach::PhqmTilde) {
      TachyonParams p = c.model;
      p.gamma = c.effective_gamma();
      closed = c.model.mu == 0.0 ? tachyon::osr_closed(p, tachyon::OsrForm::Exact) : kNaN;
    }
    std::vector<double> row;
    if (cfg.sweep.enabled()) row.push_back(swept_value(c));
    const double v = results[i].value.real();
    row.insert(row.end(), {v, results[i].est_error, closed, std::abs(v - closed) / std::abs(closed)});
    t.rows.push_back(row);
  }
  write_table(t, cfg);
  return 0;
}

int cmd_occupation(const RunConfig& cfg) {
  cfg.validate({"k"});
  check_output_path(cfg);
  const std::vector<RunConfig> points = expand(cfg);
  const Framework fw = cfg.greens_framework();
  const auto entries_at = [&](const RunConfig& c) -> ComplexMatrix {
    const ComplexMatrix h = tachyon::hamiltonian(c.k, c.model);
    if (fw.kind != FrameworkKind::Postselected) return occupation(h, fw).entries;
    const BiorthoSystem sys = eig_biortho(h);
    const ComplexVector r0 = sys.right.col(select_ground_state(sys));
    return (r0 * r0.adjoint()).transpose() / r0.squaredNorm();
  };
  const auto entries = prevalidate([&] {
    std::vector<ComplexMatrix> out;
    for (const RunConfig& c : points) out.push_back(entries_at(c));
    return out;
  });
  Table t;
  add_run_metadata(t, "occupation", cfg);
  t.metadata.emplace_back("convention", "n_ij = <c_i^dagger c_j>; postselected rows hold the right ground state");
  t.columns = {"k"};
  for (const char* c : {"n00", "n01", "n10", "n11"}) {
    t.columns.push_back(std::string(c) + "_re");
    t.columns.push_back(std::string(c) + "_im");
  }
  t.columns.push_back("density");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ComplexMatrix& n = entries[i];
    std::vector<double> row{points[i].k};
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        row.push_back(n(a, b).real());
        row.push_back(n(a, b).imag());
      }
    }
    row.push_back(n.trace().real());
    t.rows.push_back(row);
  }
  write_table(t, cfg);
  return 0;
}

int cmd_validate(const ValidateOptions& opts) {
  using namespace validation;
  std::vector<int> selected = opts.only.empty() ? all_checks() : opts.only;
  for (int n : selected) {
    try {
      (void)check_title(n);
    } catch (const Error&) {
      throw ConfigError("unknown check " + std::to_string(n));
    }
  }
  std::vector<CheckReport> reports;
  SuiteOptions suite;
  suite.workers = opts.workers;
  for (int n : selected) {
    reports.push_back(run_check(n, suite));
    if (opts.format != "json") {
      const CheckReport& r = reports.back();
      std::printf("%-4s %2d  %s (%.1f s)\n", r.passed() ? "PASS" : "FAIL", r.number, r.title.c_str(), r.seconds);
      for (const Measurement& m : r.measurements) {
        std::printf("       %-4s %-72s ref=% .10g computed=% .10g err=%.3g tol=%.3g\n", m.passed ? "ok" : "BAD",
                    m.label.c_str(), m.reference, m.computed, m.error, m.tolerance);
      }
      if (!r.note.empty()) std::printf("       note: %s\n", r.note.c_str());
      std::fflush(stdout);
    }
  }
  if (opts.config) {
    const RunConfig& c = *opts.config;
    TachyonParams p = c.model;
    p.gamma = c.effective_gamma();
    CheckReport r = dc_closed_form_check(p, c.approach());
    r.number = 0;
    reports.push_back(r);
    if (opts.format != "json") {
      std::printf("%-4s  -  %s (%.1f s)\n", r.passed() ? "PASS" : "FAIL", r.title.c_str(), r.seconds);
      for (const Measurement& m : r.measurements) {
        std::printf("       %-4s %-72s ref=% .10g computed=% .10g err=%.3g tol=%.3g\n", m.passed ? "ok" : "BAD",
                    m.label.c_str(), m.reference, m.computed, m.error, m.tolerance);
      }
    }
  }
  int failures = 0;
  for (const CheckReport& r : reports) failures += r.passed() ? 0 : 1;
  if (opts.format == "json") {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const CheckReport& r : reports) {
      nlohmann::ordered_json jr;
      jr["check"] = r.number;
      jr["title"] = r.title;
      jr["passed"] = r.passed();
      jr["seconds"] = r.seconds;
      jr["note"] = r.note;
      for (const Measurement& m : r.measurements) {
        jr["measurements"].push_back({{"label", m.label},
                                      {"reference", m.reference},
                                      {"computed", m.computed},
                                      {"error", m.error},
                                      {"tolerance", m.tolerance},
                                      {"passed", m.passed}});
      }
      j.push_back(jr);
    }
    std::cout << j.dump(2) << '\n';
  } else {
    std::printf("%d of %zu checks failed\n", failures, reports.size());
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace nhkubo::cli
