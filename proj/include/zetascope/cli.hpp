#pragma once

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "io.hpp"
#include "mollifier.hpp"
#include "omega_solver.hpp"
#include "scan.hpp"
#include "universality.hpp"
#include "window.hpp"
#include "zeta.hpp"

namespace zetascope::cli {

enum exit_code : int { ok = 0, invalid = 2, no_result = 3, numerical = 4 };

inline int exit_for(errc e) {
  switch (e) {
    case errc::invalid_argument:
    case errc::reject_zero_b0:
      return invalid;
    case errc::no_hits:
    case errc::unreachable:
    case errc::empty_block:
    case errc::infeasible_partition:
    case errc::residual_exceeded:
    case errc::desk_scale_exceeded:
    case errc::insufficient_zeros:
      return no_result;
    default:
      return numerical;
  }
}

enum class Format { json, csv };

struct RunConfig {
  Format format = Format::json;
  int threads = 0;
  unsigned long seed = 0;  // nothing is randomized yet; echoed for reproducibility records
  BoundConstants constants;
};

/// Builds a named analytic target for the universality command.
inline Evaluator parse_target(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon), arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "exp") return [](cplx s) { return std::exp(s); };
  if (kind == "const") {
    cplx c = io::parse_complex(arg);
    return [c](cplx) { return c; };
  }
  if (kind == "poly") {
    auto c = io::parse_complex_list(arg);
    return [c](cplx s) {
      cplx v = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * s + *it;
      return v;
    };
  }
  if (kind == "zeta-shift") {
    double tau = std::stod(arg);
    return [tau](cplx s) { return zeta_value(s + cplx(0, tau), 1e-12); };
  }
  throw error(errc::invalid_argument, "unknown target '" + spec + "' (const:c, exp, poly:c0,c1,..., zeta-shift:tau)");
}

namespace detail {

struct OmegaArgs {
  int n = 1;
  double sigma0 = 0.75;
  std::string targets;
  double eps = 0.1;
  std::optional<double> u0;
  bool no_calibrate = false;
  double q_cap = 1 << 24;
};

inline void add_omega_options(CLI::App* c, OmegaArgs& a, RunConfig& cfg) {
  c->add_option("--n", a.n, "number of derivative targets N")->required();
  c->add_option("--sigma0", a.sigma0, "abscissa in (1/2,1)")->required();
  c->add_option("--targets", a.targets, "comma-separated complex targets a_0,...,a_{N-1}")->required();
  c->add_option("--eps", a.eps, "tolerance in (0,1)")->required();
  c->add_option("--u0", a.u0, "explicit U0 (skips thresholds and calibration)");
  c->add_flag("--no-calibrate", a.no_calibrate, "fail instead of calibrating beyond the desk cap");
  c->add_option("--q-cap", a.q_cap, "largest truncation point Q");
  c->add_option("--c1", cfg.constants.c1);
  c->add_option("--c2", cfg.constants.c2);
  c->add_option("--c3", cfg.constants.c3);
  c->add_option("--C1", cfg.constants.C1);
  c->add_option("--C2", cfg.constants.C2);
}

inline TargetSpec make_spec(const OmegaArgs& a) {
  TargetSpec s{a.n, a.sigma0, io::parse_complex_list(a.targets), a.eps};
  s.validate();
  return s;
}

inline OmegaOptions make_omega_options(const OmegaArgs& a, const RunConfig& cfg) {
  OmegaOptions o;
  o.u0 = a.u0;
  o.auto_calibrate = !a.no_calibrate;
  o.q_cap = a.q_cap;
  o.threads = resolve_threads(cfg.threads);
  return o;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"zetascope: explicit Omega-result and universality numerics for zeta"};
  app.name("zetascope");
  RunConfig cfg;
  app.set_help_flag("--help", "print this help and exit");
  std::string format = "json";
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", cfg.threads, "worker threads (default: ZETASCOPE_THREADS, else hardware)");
  app.add_option("--seed", cfg.seed, "seed recorded with every report");
  app.require_subcommand(1);

  // solve-omega / calibrate
  detail::OmegaArgs oa;
  auto* solve = app.add_subcommand("solve-omega", "construct theta0 matching log zeta derivative targets");
  detail::add_omega_options(solve, oa, cfg);
  detail::OmegaArgs ca;
  auto* calib = app.add_subcommand("calibrate", "search the smallest working U0 and list failed attempts");
  detail::add_omega_options(calib, ca, cfg);

  // scan
  std::string mode = "log", scan_targets;
  double scan_t = 0, scan_sigma0 = 0.75, scan_eps = 0.1, scan_step = 0, nu = default_nu;
  std::optional<double> scan_h, self_ref;
  int scan_n = 1;
  auto* scan = app.add_subcommand("scan", "search tau in [T, T+H] matching derivative targets");
  scan->add_option("--mode", mode, "log: log zeta derivatives, zeta: zeta derivatives")
      ->check(CLI::IsMember({"log", "zeta"}));
  scan->add_option("--t", scan_t, "window start T")->required();
  scan->add_option("--h", scan_h, "window length H (default: minimum T^nu)");
  scan->add_option("--nu", nu, "short-interval exponent");
  scan->add_option("--sigma0", scan_sigma0, "abscissa in (1/2,1)");
  scan->add_option("--targets", scan_targets, "comma-separated complex targets");
  scan->add_option("--self-ref", self_ref, "read the targets off at this ordinate instead");
  scan->add_option("--n", scan_n, "target count for --self-ref");
  scan->add_option("--eps", scan_eps, "tolerance");
  scan->add_option("--step", scan_step, "grid step (default 2 pi / (20 log T))");

  // universality
  std::string target = "zeta-shift:300", s0_text = "0.75";
  double uni_r = 0.125, delta0 = 0.5, uni_eps = 0.05, uni_t = 290, uni_h = 20;
  int rings = 32, angles = 128;
  auto* uni = app.add_subcommand("universality", "approximate a target on a disk by a zeta shift");
  uni->add_option("--target", target, "const:c, exp, poly:c0,c1,..., zeta-shift:tau");
  uni->add_option("--s0", s0_text, "disk center a+bi");
  uni->add_option("--r", uni_r, "disk radius");
  uni->add_option("--delta0", delta0, "Taylor contraction in (0,1)");
  uni->add_option("--eps", uni_eps, "target accuracy");
  uni->add_option("--t", uni_t, "window start T");
  uni->add_option("--h", uni_h, "window length H");
  uni->add_option("--nu", nu, "short-interval exponent");
  uni->add_option("--rings", rings, "disk check rings");
  uni->add_option("--angles", angles, "disk check angles");

  // zeros
  double z_from = 0, z_to = 50, alpha = 0.75;
  bool z_count = false;
  auto* zeros = app.add_subcommand("zeros", "zero ordinates on the critical line, or rectangle counts");
  zeros->add_option("--from", z_from, "lower ordinate (or T with --count)");
  zeros->add_option("--to", z_to, "upper ordinate (or T+H with --count)");
  zeros->add_flag("--count", z_count, "count zeros with real part > alpha by the argument principle");
  zeros->add_option("--alpha", alpha, "abscissa for --count");

  // mollifier
  double mq = 3, mdelta = 0, mt = 1e5, mh = 1e3, mtheta = 0;
  int mm = 100;
  bool fourier = false;
  auto* moll = app.add_subcommand("mollifier", "Fourier data of the bump, or its mean along the torus curve");
  moll->add_option("--q", mq, "primes up to Q");
  moll->add_option("--delta", mdelta, "bump width in (0,1/2) (default 1/Q)");
  moll->add_option("--m", mm, "Fourier truncation M");
  moll->add_flag("--fourier", fourier, "print the coefficients alpha_n instead of the curve mean");
  moll->add_option("--t", mt, "window start T");
  moll->add_option("--h", mh, "window length H");
  moll->add_option("--nu", nu, "short-interval exponent");
  moll->add_option("--theta", mtheta, "common target phase for every prime");

  // zeta-eval
  std::string s_text;
  double tol = 1e-12;
  bool want_log = false;
  int derivs = 0;
  auto* ze = app.add_subcommand("zeta-eval", "evaluate zeta, log zeta, or their derivatives");
  ze->add_option("--s", s_text, "argument a+bi")->required();
  ze->add_option("--tol", tol, "requested accuracy");
  ze->add_flag("--log", want_log, "continuous branch of log zeta");
  ze->add_option("--derivs", derivs, "number of Taylor derivatives to print");

  if (args.empty()) {
    out << app.help();
    return ok;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return invalid;
  }
  cfg.format = format == "csv" ? Format::csv : Format::json;
  const bool csv = cfg.format == Format::csv;
  const unsigned threads = resolve_threads(cfg.threads);

  try {
    if (solve->parsed()) {
      auto spec = detail::make_spec(oa);
      auto res = construct_theta0(spec, cfg.constants, detail::make_omega_options(oa, cfg));
      const auto& rep = res.report;
      if (csv) {
        out << "k,residual\n";
        for (std::size_t k = 0; k < rep.residuals.size(); ++k) out << k << ',' << io::format_double(rep.residuals[k]) << '\n';
      } else {
        auto j = io::to_json(rep);
        j["seed"] = cfg.seed;
        out << j.dump() << '\n';
      }
      return rep.max_residual() < spec.eps ? ok : no_result;
    }

    if (calib->parsed()) {
      auto spec = detail::make_spec(ca);
      auto cr = calibrate_u0(spec, cfg.constants, detail::make_omega_options(ca, cfg));
      if (csv) {
        out << "U0,outcome\n";
        for (auto& f : cr.failures) out << io::format_double(f.U0) << ',' << to_string(f.code) << '\n';
        if (cr.result) out << io::format_double(cr.result->report.U0) << ",OK\n";
      } else {
        io::json fails = io::json::array();
        for (auto& f : cr.failures) fails.push_back({{"U0", f.U0}, {"code", to_string(f.code)}, {"message", f.message}});
        io::json j{{"failures", fails}, {"seed", cfg.seed}};
        if (cr.result) j["result"] = io::to_json(cr.result->report);
        out << j.dump() << '\n';
      }
      return cr.result ? ok : no_result;
    }

    if (scan->parsed()) {
      require(scan_sigma0 > 0.5 && scan_sigma0 < 1.0, "sigma0 must lie in (1/2,1)");
      double H = scan_h ? *scan_h : std::ceil(std::pow(scan_t, nu) * 10) / 10;
      ScanWindow w(scan_t, H, nu, scan_step, scan_eps);
      std::vector<cplx> targets;
      if (self_ref) {
        require(scan_n >= 1 && scan_n <= max_scan_order, "scan supports 1 <= N <= 8");
        targets = mode == "log" ? log_zeta_derivs(scan_sigma0, *self_ref, scan_n).values
                                : zeta_derivs(cplx(scan_sigma0, *self_ref), scan_n).values;
      } else {
        require(!scan_targets.empty(), "--targets or --self-ref is required");
        targets = io::parse_complex_list(scan_targets);
      }
      ScanOptions so;
      so.threads = threads;
      ScanReport rep;
      if (mode == "log") {
        TargetSpec spec{int(targets.size()), scan_sigma0, targets, scan_eps};
        spec.validate();
        rep = scan_theorem1(spec, w, so);
      } else {
        rep = scan_theorem3(targets, scan_sigma0, w, so);
      }
      if (csv) {
        io::write_hits_csv(out, rep.hits);
      } else {
        for (auto& h : rep.hits) out << io::to_json(h, scan_sigma0, int(targets.size()), scan_eps).dump() << '\n';
        out << io::json{{"summary", {{"hits", rep.hits.size()},
                                     {"grid_size", rep.grid_size},
                                     {"grid_below", rep.grid_below},
                                     {"rejected", rep.rejected},
                                     {"gaps", rep.gaps.size()},
                                     {"step", rep.step},
                                     {"density", density_estimate(rep, w)},
                                     {"seed", cfg.seed}}}}
                   .dump()
            << '\n';
      }
      if (rep.hits.empty()) {
        err << "no hits in [" << scan_t << ", " << scan_t + H << "]\n";
        return no_result;
      }
      return ok;
    }

    if (uni->parsed()) {
      UniversalityTarget tg(parse_target(target), io::parse_complex(s0_text), uni_r, delta0, uni_eps);
      ScanWindow w(uni_t, uni_h, nu);
      PipelineOptions po;
      po.threads = threads;
      po.rings = rings;
      po.angles = angles;
      auto rep = universality_pipeline(tg, w, po);
      bool any = false;
      for (auto& h : rep.hits) any = any || h.check.verdict;
      if (csv) {
        out << "tau,delta,sup_diff,verdict,e91,e92,e93\n";
        for (auto& h : rep.hits)
          out << io::format_double(h.tau) << ',' << io::format_double(h.delta) << ',' << io::format_double(h.check.sup_diff)
              << ',' << (h.check.verdict ? 1 : 0) << ',' << io::format_double(h.budgets.e91) << ','
              << io::format_double(h.budgets.e92) << ',' << io::format_double(h.budgets.e93) << '\n';
      } else {
        auto j = io::to_json(rep);
        j["seed"] = cfg.seed;
        out << j.dump() << '\n';
      }
      return any ? ok : no_result;
    }

    if (zeros->parsed()) {
      if (z_count) {
        auto zc = count_zeros(alpha, z_from, z_to - z_from);
        auto env = balasubramanian_envelope(alpha, z_to - z_from);
        if (csv) {
          out << "alpha,T,H,count,winding_residual,envelope_exponent,envelope_log\n"
              << io::format_double(alpha) << ',' << io::format_double(z_from) << ',' << io::format_double(z_to - z_from)
              << ',' << zc.count << ',' << io::format_double(zc.winding_residual) << ','
              << io::format_double(env.exponent) << ',' << io::format_double(env.log_value) << '\n';
        } else {
          out << io::json{{"alpha", alpha},
                          {"T", z_from},
                          {"H", z_to - z_from},
                          {"count", zc.count},
                          {"winding_residual", zc.winding_residual},
                          {"envelope_exponent", env.exponent},
                          {"envelope_log", env.log_value}}
                     .dump()
              << '\n';
        }
        return ok;
      }
      ZeroSearchOptions zo;
      zo.threads = threads;
      auto zl = find_zeros(z_from, z_to, zo);
      if (csv)
        io::write_zeros_csv(out, zl.ordinates);
      else
        out << io::json{{"lo", zl.lo}, {"hi", zl.hi}, {"verified", zl.verified}, {"ordinates", zl.ordinates}}.dump()
            << '\n';
      return ok;
    }

    if (moll->parsed()) {
      auto spec = MollifierSpec::make(mq, mm, mdelta);
      if (fourier) {
        auto fd = fourier_coeffs(spec);
        if (csv) {
          io::write_fourier_csv(out, fd);
        } else {
          out << io::json{{"delta", spec.delta},
                          {"alpha", fd.alpha},
                          {"max_quad_error", fd.max_quad_error},
                          {"decay_constant", fd.decay_constant},
                          {"sum_abs", fd.sum_abs},
                          {"log_beta_norm", fd.log_beta_norm}}
                     .dump()
              << '\n';
        }
        return ok;
      }
      ScanWindow w(mt, mh, nu);
      auto table = primes_up_to(std::uint64_t(mq));
      std::vector<std::pair<prime_t, double>> e;
      for (prime_t p : table.primes) e.emplace_back(p, mtheta);
      auto m = mean_over_curve(spec, w, PhaseAssignment(std::move(e)));
      if (csv) {
        out << "T,H,Q,delta,mean,deviation,quad_error\n"
            << io::format_double(mt) << ',' << io::format_double(mh) << ',' << io::format_double(mq) << ','
            << io::format_double(spec.delta) << ',' << io::format_double(m.mean) << ','
            << io::format_double(m.deviation) << ',' << io::format_double(m.quad_error) << '\n';
      } else {
        out << io::json{{"T", mt},         {"H", mh},
                        {"Q", mq},         {"delta", spec.delta},
                        {"mean", m.mean},  {"deviation", m.deviation},
                        {"quad_error", m.quad_error}, {"intervals", m.intervals}}
                   .dump()
            << '\n';
      }
      return ok;
    }

    if (ze->parsed()) {
      cplx s = io::parse_complex(s_text);
      io::json j{{"s", io::to_json(s)}};
      if (want_log) {
        j["log_zeta"] = io::to_json(log_zeta_tracked(s.real(), s.imag()));
        if (derivs > 0) {
          auto d = log_zeta_derivs(s.real(), s.imag(), derivs);
          io::json arr = io::json::array();
          for (auto v : d.values) arr.push_back(io::to_json(v));
          j["derivs"] = arr;
          j["est_error"] = d.est_error;
        }
      } else {
        auto z = zeta(s, ZetaConfig{tol});
        j["value"] = io::to_json(z.value);
        j["est_error"] = z.est_error;
        j["terms_used"] = z.terms_used;
        if (derivs > 0) {
          auto d = zeta_derivs(s, derivs);
          io::json arr = io::json::array();
          for (auto v : d.values) arr.push_back(io::to_json(v));
          j["derivs"] = arr;
        }
      }
      if (csv) {
        out << "quantity,re,im\n";
        auto row = [&](const std::string& name, const io::json& c) {
          out << name << ',' << io::format_double(c[0].get<double>()) << ',' << io::format_double(c[1].get<double>())
              << '\n';
        };
        row(want_log ? "log_zeta" : "zeta", want_log ? j["log_zeta"] : j["value"]);
        if (j.contains("derivs"))
          for (std::size_t k = 0; k < j["derivs"].size(); ++k) row("d" + std::to_string(k), j["derivs"][k]);
      } else {
        out << j.dump() << '\n';
      }
      return ok;
    }
  } catch (const error& e) {
    err << e.what() << '\n';
    return exit_for(e.code());
  } catch (const std::invalid_argument& e) {
    err << "InvalidArgument: " << e.what() << '\n';
    return invalid;
  } catch (const std::out_of_range& e) {
    err << "InvalidArgument: " << e.what() << '\n';
    return invalid;
  }
  return invalid;
}

}  // namespace zetascope::cli
