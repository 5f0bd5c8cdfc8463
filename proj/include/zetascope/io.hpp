#pragma once

#include <cstdio>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "core.hpp"
#include "mollifier.hpp"
#include "omega_solver.hpp"
#include "scan.hpp"
#include "universality.hpp"
#include "zeta.hpp"

namespace zetascope::io {

using json = nlohmann::json;

/// Parses a+bi, a-bi, a, bi, i, -i (no spaces).
inline cplx parse_complex(const std::string& text) {
  std::string s = text;
  require(!s.empty(), "empty complex number");
  require(s.find(' ') == std::string::npos, "complex numbers take the form a+bi without spaces");
  auto number = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    require(used == part.size() && !part.empty(), "cannot parse complex number '" + text + "'");
    return v;
  };
  if (s.back() != 'i') return {number(s), 0.0};
  s.pop_back();
  // split at the last sign that is not a leading sign or an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  double imv = (im.empty() || im == "+") ? 1.0 : (im == "-" ? -1.0 : number(im));
  return {re.empty() ? 0.0 : number(re), imv};
}

inline std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_complex(item));
  require(!out.empty(), "empty complex list");
  return out;
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_complex(cplx c) {
  std::string im = format_double(c.imag());
  if (im[0] != '-') im = "+" + im;
  return format_double(c.real()) + im + "i";
}

inline json to_json(cplx c) { return json::array({c.real(), c.imag()}); }

inline cplx complex_from_json(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

inline json to_json(const Hit& h, double sigma0, int N, double eps) {
  return json{{"tau", h.tau},          {"sigma0", sigma0},     {"N", N},
              {"eps", eps},            {"residuals", h.residuals}, {"refined", h.refined},
              {"wall_time", h.wall_time}};
}

inline Hit hit_from_json(const json& j) {
  Hit h;
  h.tau = j.at("tau").get<double>();
  h.residuals = j.at("residuals").get<std::vector<double>>();
  h.max_residual = max_of(h.residuals);
  h.refined = j.at("refined").get<bool>();
  h.wall_time = j.at("wall_time").get<double>();
  return h;
}

inline void write_hits_csv(std::ostream& os, const std::vector<Hit>& hits) {
  os << "tau,max_residual\n";
  for (auto& h : hits) os << format_double(h.tau) << ',' << format_double(h.max_residual) << '\n';
}

struct HitSummary {
  double tau = 0, max_residual = 0;
};

inline std::vector<HitSummary> read_hits_csv(std::istream& is) {
  std::string line;
  require(bool(std::getline(is, line)) && line == "tau,max_residual", "missing hit CSV header");
  std::vector<HitSummary> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    require(comma != std::string::npos, "malformed hit CSV row");
    out.push_back({std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1))});
  }
  return out;
}

inline void write_zeros_csv(std::ostream& os, const std::vector<double>& ordinates) {
  os << "index,ordinate\n";
  for (std::size_t i = 0; i < ordinates.size(); ++i) os << i + 1 << ',' << format_double(ordinates[i]) << '\n';
}

inline std::vector<double> read_zeros_csv(std::istream& is) {
  std::string line;
  require(bool(std::getline(is, line)) && line == "index,ordinate", "missing zero CSV header");
  std::vector<double> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    require(comma != std::string::npos, "malformed zero CSV row");
    out.push_back(std::stod(line.substr(comma + 1)));
  }
  require(std::is_sorted(out.begin(), out.end()), "zero ordinates must be ascending");
  return out;
}

inline void write_fourier_csv(std::ostream& os, const FourierData& fd) {
  os << "n,re,im\n";
  long M = long(fd.alpha.size()) - 1;
  for (long n = -M; n <= M; ++n) os << n << ',' << format_double(fd.alpha[std::size_t(std::labs(n))]) << ",0\n";
}

inline json to_json(const OmegaReport& r) {
  json blocks = json::array();
  for (auto& b : r.blocks)
    blocks.push_back({{"size", b.size},
                      {"radius", b.radius},
                      {"z_abs", b.z_abs},
                      {"residual", b.residual},
                      {"proxy_gap", b.proxy_gap},
                      {"thin", b.thin}});
  json gamma = json::array(), z = json::array();
  for (auto g : r.gamma) gamma.push_back(to_json(g));
  for (auto v : r.z) z.push_back(to_json(v));
  return json{{"Q", r.Q},
              {"U0", r.U0},
              {"V", r.V},
              {"q_theory_log", r.q_theory_log},
              {"u0_theory_log", r.u0_theory_log},
              {"calibrated", r.calibrated},
              {"attempts", r.attempts},
              {"blocks", blocks},
              {"gamma", gamma},
              {"z", z},
              {"residuals", r.residuals},
              {"max_residual", r.max_residual()},
              {"block_tail_part", r.block_tail_part},
              {"beyond_q_estimate", r.beyond_q_estimate},
              {"thin_blocks", r.thin_blocks}};
}

inline json to_json(const UniversalityReport& r) {
  json hits = json::array();
  for (auto& h : r.hits)
    hits.push_back({{"tau", h.tau},
                    {"M_zeta", h.M_zeta},
                    {"delta", h.delta},
                    {"sup_diff", h.check.sup_diff},
                    {"sup_with_margin", h.check.sup_with_margin},
                    {"verdict", h.check.verdict},
                    {"budgets", {{"e91", h.budgets.e91}, {"e92", h.budgets.e92}, {"e93", h.budgets.e93}}},
                    {"budgets_certified", h.budgets_certified}});
  json coeffs = json::array();
  for (auto c : r.coeffs) coeffs.push_back(to_json(c));
  return json{{"N", r.N},           {"M_g", r.M_g},   {"delta1", r.delta1}, {"G_norm", r.G_norm},
              {"log_B", r.B.log_value}, {"coeffs", coeffs}, {"hits", hits}};
}

}  // namespace zetascope::io
