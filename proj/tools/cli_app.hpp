#pragma once

// fsynth command line. Exit status: 0 success, 1 validation or usage error,
// 2 hypothesis-gate failure, 3 I/O error.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fsynth/fsynth.hpp"

namespace fsynth::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kHypothesis = 2, kIo = 3 };

struct BoundsArgs {
  std::size_t d = 1;
  double N = 1.0, sigma = 1.0, r = 1.0, delta = 1e-6, R = 2.0, rho = 8.0;
  double tau = 0.5, gamma = 1.0;
  int m = 1;
  std::size_t n = 0;
  std::string format = "text";
};

struct CoeffsArgs {
  std::string in, out;
  std::size_t n = 0;
};

struct ExtendArgs {
  std::string in, out;
  double R = 0.0;
  std::size_t n = 0, points = 0;
};

struct ReconstructArgs {
  std::string in, out;
  double N = 0.0, sigma = 0.0, delta = 0.0, gamma = 0.0;
  std::string tau = "0.5";
  int m = 0;
  std::size_t nodes = 0, freq_points = 0, x_points = 0;
  double x_half_width = 0.0;
  bool naive = false;
};

struct SampleArgs {
  std::size_t d = 1;
  std::string suite = "bump";
  std::string out;
  double r = 1.0, delta = 0.0;
  std::size_t nodes = 0;
  std::string noise = "worst";
  std::uint64_t seed = 0;
  bool spatial = false;
  std::size_t x_points = 0;
};

struct InstabilityArgs {
  std::size_t d = 2;
  int m = 1;
  double r = 1.0;
  std::vector<int> n{10, 20, 30, 40};
  std::size_t radial = 512, angular = 1024, x_points = 0;
  std::string out;
};

struct ExperimentArgs {
  std::string config, out_dir;
};

namespace detail {

inline std::string fmt(double v) { return fsynth::detail::format_double(v); }

inline void write_or_print(const std::string& path, const std::string& text,
                           std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

inline int do_bounds(const BoundsArgs& a, std::ostream& out) {
  PriorData p;
  p.d = a.d;
  p.N = a.N;
  p.sigma = a.sigma;
  p.r = a.r;
  p.m = a.m;
  p.gamma = a.gamma;
  p.validate();
  const BoundReport rep = bound_report(p, a.tau, a.delta, a.R, a.rho, a.n);
  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["n_star"] = rep.thm_holder.n_star;
    j["tau_rho"] = rep.thm_holder.tau_rho;
    j["lemma21_n"] = rep.lemma21_n;
    j["lemma21"] = rep.lemma21;
    j["thm_holder"] = rep.thm_holder.value;
    j["corollary"] = rep.corollary;
    if (p.m >= 1) {
      j["thm_rec"] = {{"holder_term", rep.thm_rec.holder_term},
                      {"tail_term", rep.thm_rec.tail_term},
                      {"total", rep.thm_rec.total}};
    }
    out << j.dump(2) << "\n";
    return kOk;
  }
  auto line = [&](const std::string& k, const std::string& v) {
    out << std::left << std::setw(22) << k << v << "\n";
  };
  line("n*", std::to_string(rep.thm_holder.n_star));
  line("tau(rho)", fmt(rep.thm_holder.tau_rho));
  line("lemma21 (n=" + std::to_string(rep.lemma21_n) + ")", fmt(rep.lemma21));
  line("thm_holder", fmt(rep.thm_holder.value));
  line("corollary", fmt(rep.corollary));
  if (p.m >= 1) {
    line("thm_rec.holder_term", fmt(rep.thm_rec.holder_term));
    line("thm_rec.tail_term", fmt(rep.thm_rec.tail_term));
    line("thm_rec.total", fmt(rep.thm_rec.total));
  } else {
    line("thm_rec", "n/a (m = 0)");
  }
  return kOk;
}

inline int do_coeffs(const CoeffsArgs& a, std::ostream& out) {
  const NodeSamples w = load_field(a.in).node_samples();
  const std::size_t n = a.n ? a.n : w.grid.M;
  const ChebCoeffs c = coeffs_from_node_samples(w, n);
  std::string text;
  for (std::size_t j = 0; j < c.dim(); ++j) text += "k" + std::to_string(j + 1) + ",";
  text += "re,im\n";
  for (std::size_t e = 0; e < c.size(); ++e) {
    for (int k : c.multi_index(e)) text += std::to_string(k) + ",";
    text += fmt(c.value(e).real()) + "," + fmt(c.value(e).imag()) + "\n";
  }
  write_or_print(a.out, text, out);
  return kOk;
}

inline int do_extend(const ExtendArgs& a) {
  const NodeSamples w = load_field(a.in).node_samples();
  const std::size_t points = a.points ? a.points : (w.grid.d == 1 ? 257 : 129);
  const GridSpec grid = GridSpec::cube(w.grid.d, a.R, points);
  save_field(a.out, to_file(extend(w, a.R, a.n, grid)));
  return kOk;
}

inline int do_reconstruct(const ReconstructArgs& a, std::ostream& out) {
  const FieldFile f = load_field(a.in);
  NodeSamples w;
  if (f.layout == Layout::chebyshev) {
    w = f.node_samples();
  } else {
    const Field data = f.field();
    const std::size_t M =
        a.nodes ? a.nodes : (data.grid.dim() == 1 ? 128 : 64);
    w = resample_to_nodes(data, M);
  }
  const std::size_t d = w.grid.d;
  PriorData p;
  p.d = d;
  p.N = a.N;
  p.sigma = a.sigma;
  p.r = w.grid.r;
  p.m = a.m;
  p.gamma = a.gamma;
  p.validate();
  const double xh = a.x_half_width > 0.0 ? a.x_half_width : 2.0 * a.sigma;
  const std::size_t xp = a.x_points ? a.x_points : (d == 1 ? 1024 : 256);
  const GridSpec xgrid = GridSpec::cube(d, xh, xp);
  const ReconstructOptions opts{a.freq_points};
  SpatialField u;
  if (a.naive) {
    u = reconstruct_zero_padded(w, xgrid, opts);
    u.sigma = a.sigma;
  } else {
    double tau = 0.0;
    if (a.tau == "auto") {
      tau = suggest_tau(p, a.delta);
      out << "tau = " << fmt(tau) << " (suggested)\n";
    } else {
      try {
        std::size_t used = 0;
        tau = std::stod(a.tau, &used);
        if (used != a.tau.size()) throw std::invalid_argument(a.tau);
      } catch (const std::exception&) {
        throw ValidationError("--tau must be a number or 'auto'");
      }
    }
    u = reconstruct(w, p, tau, a.delta, xgrid, opts);
  }
  save_field(a.out, to_file(u));
  return kOk;
}

inline int do_sample(const SampleArgs& a) {
  const SuiteMember member = suite_member(a.d, a.suite);
  if (a.spatial) {
    const std::size_t p = a.x_points ? a.x_points : (a.d == 1 ? 1024 : 256);
    save_field(a.out, to_file(member.fn.sample(
                          GridSpec::cube(a.d, member.sigma + 0.25, p))));
    return kOk;
  }
  const std::size_t M = a.nodes ? a.nodes : (a.d == 1 ? 128 : 64);
  NodeSamples w = member.fn.node_data(cheb_nodes(a.d, M, a.r));
  if (a.delta > 0.0) w = inject_noise(w, a.delta, parse_noise_mode(a.noise), a.seed);
  save_field(a.out, to_file(w));
  return kOk;
}

inline int do_instability(const InstabilityArgs& a, std::ostream& out) {
  ExperimentConfig c;
  c.experiment = "E4";
  c.d = a.d;
  c.r_values = {a.r};
  c.m_values = {a.m};
  c.n_values = a.n;
  c.polar_radial = a.radial;
  c.polar_angular = a.angular;
  c.x_points = a.x_points;
  const ExperimentResult res = run_compliance(c);
  std::string text = "kind,n,l2_norm,decay_norm\n";
  for (const auto& row : res.rows) {
    text += "row," + std::to_string(row.n) + "," + fmt(row.bound) + "," +
            fmt(row.measured) + "\n";
  }
  if (res.metrics.count("l2_rate")) {
    text += "fit,," + fmt(res.metrics.at("l2_rate")) + "," +
            fmt(res.metrics.at("decay_rate")) + "\n";
  }
  write_or_print(a.out, text, out);
  return kOk;
}

inline int do_experiment(const ExperimentArgs& a, std::ostream& out) {
  ExperimentConfig c = load_config(a.config);
  if (!a.out_dir.empty()) c.output_dir = a.out_dir;
  const ExperimentResult res = run_compliance(c);
  const std::filesystem::path dir(c.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
  const std::string stem = std::filesystem::path(a.config).stem().string();
  write_file(dir / (stem + ".csv"), rows_to_csv(res.rows));
  const std::string summary = summarize(res);
  write_file(dir / (stem + "_summary.txt"), summary);
  out << summary;
  return kOk;
}

}  // namespace detail

/// Runs the CLI; output goes to `out`, diagnostics to `err`.
inline int run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Fourier synthesis by Chebyshev continuation", "fsynth"};
  app.require_subcommand(1);

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Evaluate every stability estimate");
  bounds->add_option("--d", ba.d, "dimension")->capture_default_str();
  bounds->add_option("--N", ba.N, "amplitude bound N")->capture_default_str();
  bounds->add_option("--sigma", ba.sigma, "support radius")->capture_default_str();
  bounds->add_option("--r", ba.r, "data half-width")->capture_default_str();
  bounds->add_option("--delta", ba.delta, "noise level")->capture_default_str();
  bounds->add_option("--R", ba.R, "continuation half-width")->capture_default_str();
  bounds->add_option("--rho", ba.rho, "strip parameter")->capture_default_str();
  bounds->add_option("--tau", ba.tau, "Hoelder exponent")->capture_default_str();
  bounds->add_option("--m", ba.m, "smoothness order")->capture_default_str();
  bounds->add_option("--gamma", ba.gamma, "H^m seminorm bound")->capture_default_str();
  bounds->add_option("--n", ba.n, "order for the continuation estimate (0: n*)");
  bounds->add_option("--format", ba.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  CoeffsArgs ca;
  auto* coeffs = app.add_subcommand("coeffs", "Chebyshev coefficients of node data");
  coeffs->add_option("--in", ca.in, "node data file")->required();
  coeffs->add_option("--n", ca.n, "total-degree bound (0: M)");
  coeffs->add_option("--out", ca.out, "CSV output (default stdout)");

  ExtendArgs ea;
  auto* ext = app.add_subcommand("extend", "Continue node data to [-R, R]^d");
  ext->add_option("--in", ea.in, "node data file")->required();
  ext->add_option("--R", ea.R, "continuation half-width")->required();
  ext->add_option("--n", ea.n, "total-degree bound")->required();
  ext->add_option("--points", ea.points, "output points per axis");
  ext->add_option("--out", ea.out, "field file")->required();

  ReconstructArgs ra;
  auto* rec = app.add_subcommand("reconstruct", "Reconstruct v from noisy data");
  rec->add_option("--in", ra.in, "node data or uniform xi field")->required();
  rec->add_option("--out", ra.out, "x-space field file")->required();
  rec->add_option("--N", ra.N, "amplitude bound N")->required();
  rec->add_option("--sigma", ra.sigma, "support radius")->required();
  rec->add_option("--delta", ra.delta, "noise level")->required();
  rec->add_option("--tau", ra.tau, "Hoelder exponent in [0, 1] or 'auto'")
      ->capture_default_str();
  rec->add_option("--m", ra.m, "smoothness order (needed by --tau auto)");
  rec->add_option("--gamma", ra.gamma, "H^m seminorm bound");
  rec->add_option("--nodes", ra.nodes, "nodes per axis when resampling uniform data");
  rec->add_option("--freq-points", ra.freq_points, "frequency points per axis");
  rec->add_option("--x-points", ra.x_points, "output points per axis");
  rec->add_option("--x-half-width", ra.x_half_width, "output half-width (default 2 sigma)");
  rec->add_flag("--naive", ra.naive, "zero padding instead of continuation");

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "Write data for a standard suite member");
  sample->add_option("--d", sa.d, "dimension")->capture_default_str();
  sample->add_option("--suite", sa.suite, "member name")->capture_default_str();
  sample->add_option("--r", sa.r, "data half-width")->capture_default_str();
  sample->add_option("--nodes", sa.nodes, "nodes per axis");
  sample->add_option("--delta", sa.delta, "noise level (0: exact)");
  sample->add_option("--noise", sa.noise, "worst or uniform")
      ->check(CLI::IsMember({"worst", "uniform"}))
      ->capture_default_str();
  sample->add_option("--seed", sa.seed, "noise seed");
  sample->add_flag("--spatial", sa.spatial, "write v itself on an x grid");
  sample->add_option("--x-points", sa.x_points, "x points per axis with --spatial");
  sample->add_option("--out", sa.out, "field file")->required();

  InstabilityArgs ia;
  auto* inst = app.add_subcommand("instability", "Decay and L2 norms of the exhibits");
  inst->add_option("--d", ia.d, "1 (h_{n,m}) or 2 (v_{n,m})")->capture_default_str();
  inst->add_option("--m", ia.m, "smoothness order")->capture_default_str();
  inst->add_option("--r", ia.r, "data half-width")->capture_default_str();
  inst->add_option("--n", ia.n, "oscillation indices")->delimiter(',');
  inst->add_option("--radial", ia.radial, "radial Gauss-Legendre nodes")->capture_default_str();
  inst->add_option("--angular", ia.angular, "angular trapezoid points")->capture_default_str();
  inst->add_option("--x-points", ia.x_points, "x points per axis for the L2 norm");
  inst->add_option("--out", ia.out, "CSV output (default stdout)");

  ExperimentArgs xa;
  auto* exp = app.add_subcommand("experiment", "Run a compliance experiment");
  exp->add_option("--config", xa.config, "config JSON")->required();
  exp->add_option("--out-dir", xa.out_dir, "overrides output_dir");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app
                                                    : app.get_subcommands().front();
    err << sub->help();
    return kValidation;
  }

  try {
    if (*bounds) return detail::do_bounds(ba, out);
    if (*coeffs) return detail::do_coeffs(ca, out);
    if (*ext) return detail::do_extend(ea);
    if (*rec) return detail::do_reconstruct(ra, out);
    if (*sample) return detail::do_sample(sa);
    if (*inst) return detail::do_instability(ia, out);
    if (*exp) return detail::do_experiment(xa, out);
  } catch (const HypothesisError& e) {
    err << "error: " << e.what() << "\n";
    return kHypothesis;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kValidation;
}

}  // namespace fsynth::cli
