#pragma once

// The acceptance criteria, each with its tolerance fixed here. Shared by the
// `accept` subcommand and the acceptance test binary.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dephase/closed_forms.hpp"
#include "dephase/fluctuation.hpp"
#include "dephase/info_thermo.hpp"
#include "dephase/mode_dynamics.hpp"
#include "dephase/scenario/runner.hpp"
#include "dephase/transport.hpp"

namespace dephase::scenario {

struct CriterionResult {
  std::string id;
  std::string description;
  bool pass = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
  double seconds = 0.0;
};

namespace accept {

inline CriterionResult result(std::string id, std::string description, bool pass, double measured, double limit,
                              std::string detail = {}) {
  return {std::move(id), std::move(description), pass, measured, limit, std::move(detail), 0.0};
}

inline std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// 1. Band-gap scale of the Boltzmann validity bound.
inline std::vector<CriterionResult> e_gap(unsigned) {
  const double kelvin = 300.0;
  const double m = 10.0;
  // With alpha = 1 eV, a temperature of k_B * 300 K in internal units gives E_gap in eV.
  const ReservoirParams room{UnitSystem::k_boltzmann_ev_per_kelvin * kelvin, -10.0};
  const double internal = boltzmann_validity(m, room).e_gap;
  const double physical = e_gap_ev(m, kelvin);
  const double dev = std::max(std::abs(internal - 0.29), std::abs(physical - 0.29));
  return {result("1", "E_gap(m=10, T=300 K) = 0.29 +- 0.01 eV", dev <= 0.01, physical, 0.01,
                 fmt("E_gap = %.6f eV (validity route %.6f eV)", physical, internal))};
}

// 2. Per-mode particle conservation.
inline std::vector<CriterionResult> conservation(unsigned) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double n_a = unit(rng), n_b = unit(rng);
    const ModeSpec mode{0.0, 0.0, 2.0 * unit(rng), unit(rng), 2.0};
    const double t = 100.0 * unit(rng);
    worst = std::max(worst, std::abs(occ_a(mode, n_a, n_b, t) + occ_b(mode, n_a, n_b, t) - (n_a + n_b)));
  }
  return {result("2", "occ_a + occ_b = nA + nB over 1e4 random samples", worst < 1e-14, worst, 1e-14)};
}

// 3. Closed-form density matrix against the integrated master equation.
inline std::vector<CriterionResult> lindblad(unsigned threads) {
  const std::vector<double> lambdas = linspace(0.0, 1.0, 10);
  const std::vector<double> couplings = linspace(0.0, 2.0, 10);
  const std::vector<double> times = linspace(0.0, 10.0, 10);
  const double n_a = occupation_fd(-0.4, {0.5, 0.3});
  const double n_b = occupation_fd(-0.4, {0.5, -0.3});
  const auto dev = parallel_map<double>(lambdas.size() * couplings.size(), threads, [&](std::size_t i) {
    const ModeSpec mode{0.0, -0.4, couplings[i % couplings.size()], lambdas[i / couplings.size()], 2.0};
    const auto oracle = lindblad_trajectory(mode, n_a, n_b, times, 1e-3);
    double worst = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      worst = std::max(worst, density_matrix_from_occupations(mode, n_a, n_b, times[j]).max_abs_deviation(oracle[j]));
    }
    return worst;
  });
  const double worst = *std::max_element(dev.begin(), dev.end());
  return {result("3", "closed-form density matrix vs Lindblad integration, 10x10x10 grid", worst < 1e-8, worst, 1e-8)};
}

// 4. Fluctuation theorem under dephasing.
inline std::vector<CriterionResult> fluctuation(unsigned) {
  const double temps[] = {0.1, 0.3, 0.5, 1.0, 2.0};
  const double mus[] = {-1.5, -0.5, 0.0, 0.7, 1.8};
  const double energies[] = {-1.9, -1.0, 0.0, 0.5, 1.9};
  const double lambdas[] = {0.0, 0.1, 0.5};
  const double times[] = {0.3, 3.0, 30.0};
  double worst = 0.0;
  double spread = 0.0;
  for (double ta : temps)
    for (double tb : temps)
      for (double ma : mus)
        for (double mb : mus)
          for (double eps : energies) {
            const ReservoirParams a{ta, ma}, b{tb, mb};
            const double k = std::acos(-eps / 2.0);
            double first = NAN;
            for (double lambda : lambdas) {
              for (double t : times) {
                const FtCheck c = ft_log_ratio(make_mode(k, 1.0, lambda), a, b, t);
                worst = std::max(worst, std::abs(c.residual));
                if (std::isnan(first)) first = c.lhs;
                spread = std::max(spread, std::abs(c.lhs - first));
              }
            }
          }
  const double measured = std::max(worst, spread);
  return {result("4", "FT residual over 5^5 grid x lambda x t, and lhs identical across (lambda, t)", measured < 1e-12,
                 measured, 1e-12, fmt("max residual %.3g, max lhs spread %.3g", worst, spread))};
}

// 5. Entropy production.
inline std::vector<CriterionResult> entropy(unsigned) {
  std::vector<CriterionResult> out;
  {
    double worst = 0.0;
    const double h = 1e-5;
    for (double n_eq : {0.1, 0.3, 0.5}) {
      for (double lambda : {0.05, 0.2, 1.0}) {
        for (double t : {0.2, 0.4, 1.0, 3.0, 7.5}) {
          const EquilibriumModePrep p{n_eq, 0.1, 1.0, lambda};
          const double fd = (total_entropy_mode(p, t + h) - total_entropy_mode(p, t - h)) / (2.0 * h);
          worst = std::max(worst, std::abs(fd - entropy_production_mode(p, t)));
        }
      }
    }
    out.push_back(result("5a", "Pi matches d/dt of expanded S_AB (central difference)", worst < 1e-7, worst, 1e-7));
  }
  {
    double worst = 0.0;
    for (double n_eq : {0.1, 0.5, 0.8}) {
      for (double lambda : {0.05, 0.2, 1.0}) {
        const EquilibriumModePrep p{n_eq, 0.1, 1.0, lambda};
        QuadratureSpec spec;
        spec.abs_tol = 1e-15;
        spec.rel_tol = 1e-14;
        // e^{-2 lambda t} is below 1e-40 past this horizon.
        const double horizon = 46.0 / lambda;
        const auto r = integrate<long double>(
            [&](long double t) { return static_cast<long double>(entropy_production_mode(p, static_cast<double>(t))); },
            0.0L, static_cast<long double>(horizon), spec);
        const double expected = 0.01 / (4.0 * n_eq * (1.0 - n_eq));
        worst = std::max(worst, std::abs(static_cast<double>(r.value) - expected));
      }
    }
    out.push_back(result("5b", "integral of Pi over t equals dn^2/(4n(1-n))", worst < 1e-10, worst, 1e-10));
  }
  {
    const std::vector<double> ts = linspace(0.0, 20.0, 2001);
    double worst_drop = 0.0;
    double worst_drift = 0.0;
    for (const auto& [n_eq, dn] : {std::pair{0.5, 0.1}, std::pair{0.1, 0.01}, std::pair{0.3, 0.2}}) {
      for (double lambda : {0.0, 0.05, 0.2, 1.0}) {
        const EquilibriumModePrep p{n_eq, dn, 1.0, lambda};
        const double s0 = exact_entropies(p, 0.0).s_ab;
        double prev = s0;
        for (double t : ts) {
          const double s = exact_entropies(p, t).s_ab;
          if (lambda == 0.0) {
            worst_drift = std::max(worst_drift, std::abs(s - s0));
          } else {
            worst_drop = std::max(worst_drop, prev - s);
          }
          prev = s;
        }
      }
    }
    const bool pass = worst_drop <= 1e-10 && worst_drift <= 1e-10;
    out.push_back(result("5c", "exact S_AB non-decreasing (lambda > 0), constant (lambda = 0) on [0, 20]", pass,
                         std::max(worst_drop, worst_drift), 1e-10,
                         fmt("largest decrease %.3g, largest drift at lambda=0 %.3g", worst_drop, worst_drift)));
  }
  return out;
}

// Independent evaluation of the defining integral of omega.
inline double omega_integral(int nu, double x, double y) {
  QuadratureSpec spec;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-15;
  const auto r = integrate<long double>(
      [&](long double z) {
        return std::pow(std::cos(z), static_cast<long double>(nu)) * std::exp(static_cast<long double>(y) * std::cos(z)) *
               std::cos(static_cast<long double>(x) * std::sin(z) * std::sin(z));
      },
      0.0L, std::numbers::pi_v<long double>, spec, 32);
  return static_cast<double>(r.value / std::numbers::pi_v<long double>);
}

// 6. omega identities.
inline std::vector<CriterionResult> omega_identities(unsigned) {
  double worst = 0.0;
  for (int nu : {0, 1}) {
    for (double y : linspace(0.0, 10.0, 41)) {
      const double series = omega(nu, 0.0, y, 1e-14).value;
      const double quad = omega_integral(nu, 0.0, y);
      const double bessel = bessel_i(nu, y);
      worst = std::max({worst, std::abs(series - quad), std::abs(bessel - quad)});
    }
  }
  for (double x : linspace(0.0, 20.0, 81)) {
    const double series = omega(0, x, 0.0, 1e-14).value;
    const double quad = omega_integral(0, x, 0.0);
    const double closed = std::cos(x / 2.0) * bessel_j(0, x / 2.0);
    worst = std::max({worst, std::abs(series - quad), std::abs(closed - quad)});
  }
  return {result("6", "omega(0,y) = I_nu(y), omega_0(x,0) = cos(x/2) J_0(x/2) vs defining integral", worst < 1e-10,
                 worst, 1e-10)};
}

// 7. Boltzmann closed forms against Boltzmann quadrature.
inline std::vector<CriterionResult> boltzmann(unsigned) {
  const ReservoirParams res{0.1, -3.0};
  QuadratureSpec quad;
  double worst = 0.0;
  for (double t : {0.5, 2.0, 8.0}) {
    const double n_q = nbar(t, res, 0.35, 1.0, quad, Statistics::boltzmann).value;
    const double e_q = ebar(t, res, 0.35, 1.0, quad, Statistics::boltzmann).value;
    worst = std::max(worst, std::abs(nbar_boltzmann_closed(t, res, 0.35, 1.0) - n_q) / std::abs(n_q));
    worst = std::max(worst, std::abs(ebar_boltzmann_closed(t, res, 0.35, 1.0) - e_q) / std::abs(e_q));
  }
  return {result("7", "Boltzmann closed forms vs quadrature (relative)", worst < 1e-8, worst, 1e-8)};
}

inline ScenarioOutput sommerfeld_scan(double temp, std::vector<double> mus, unsigned threads) {
  nlohmann::json doc = figure_preset(ScenarioId::onsteste2);
  doc["physics"]["T"] = temp;
  doc["physics"]["mu"] = mus;
  doc["grids"]["t"] = {{"start", 0.0}, {"stop", 10.0}, {"count", 41}};
  doc["tolerance"] = 0.05;
  return run_scenario(parse_config(doc), threads);
}

// 8. Sommerfeld expansion validity.
inline std::vector<CriterionResult> sommerfeld(unsigned threads) {
  std::vector<CriterionResult> out;
  const ComparisonReport low = sommerfeld_scan(0.1, linspace(-1.5, 1.5, 13), threads).reports.front().second;
  out.push_back(result("8a", "Sommerfeld vs quadrature at T = 0.1, |mu| <= 1.5, t in [0, 10]", low.max_rel_dev < 0.05,
                       low.max_rel_dev, 0.05, "worst at " + describe(low.worst_point)));
  double margin = INFINITY;
  std::string detail;
  for (double mu : {-1.5, 1.5}) {
    const double cold = sommerfeld_scan(0.1, {mu}, threads).reports.front().second.max_rel_dev;
    const double warm = sommerfeld_scan(0.25, {mu}, threads).reports.front().second.max_rel_dev;
    margin = std::min(margin, warm - cold);
    detail += fmt("mu=%+.1f: dev(T=0.25)=%.4g dev(T=0.1)=%.4g; ", mu, warm, cold);
  }
  out.push_back(result("8b", "deviation at T = 0.25 exceeds deviation at T = 0.1 at mu = +-1.5", margin > 0.0, margin,
                       0.0, detail));
  return out;
}

// 9. Equilibrium transport properties.
inline std::vector<CriterionResult> transport_properties(unsigned threads) {
  std::vector<CriterionResult> out;
  nlohmann::json doc = figure_preset(ScenarioId::ons1);
  doc["physics"]["T"] = 0.1;
  const ScenarioConfig cfg = parse_config(doc);
  const CsvTable table = run_scenario(cfg, threads).tables.front();
  const std::vector<double> mu = table.values("mu[alpha]");
  const std::size_t n = mu.size();
  const char* names[] = {"J_NMU[1]", "J_NT[alpha]", "J_QMU[alpha]", "J_QT[alpha^2]"};
  const double parity[] = {1.0, -1.0, -1.0, 1.0};

  double parity_dev = 0.0;
  for (int c = 0; c < 4; ++c) {
    const auto v = table.values(names[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(mu[i] + mu[n - 1 - i]) > 1e-12) throw Error("ons1 mu grid is not symmetric");
      parity_dev = std::max(parity_dev, std::abs(v[i] - parity[c] * v[n - 1 - i]));
    }
  }
  out.push_back(result("9a", "parity in mu of the t -> infinity coefficients (T = 0.1)", parity_dev < 1e-8, parity_dev,
                       1e-8));

  const auto j = table.values(names[0]);
  double peak_offset = 0.0;
  std::string peaks;
  for (int side : {-1, 1}) {
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mu[i] * side > 0.0 && std::abs(j[i]) > best_val) {
        best_val = std::abs(j[i]);
        best = i;
      }
    }
    peak_offset = std::max(peak_offset, std::abs(mu[best] - 2.0 * side));
    peaks += fmt("peak at mu = %+.3f; ", mu[best]);
  }
  out.push_back(result("9b", "|J_NMU| peaks within 0.1 of mu = +-2 at T = 0.1", peak_offset <= 0.1, peak_offset, 0.1,
                       peaks));

  double ratio = 0.0;
  for (int c = 0; c < 4; ++c) {
    const auto v = table.values(names[c]);
    double peak = 0.0;
    for (double x : v) peak = std::max(peak, std::abs(x));
    ratio = std::max({ratio, std::abs(v.front()) / peak, std::abs(v.back()) / peak});
  }
  out.push_back(result("9c", "|coefficient(|mu| = 4)| / peak at T = 0.1", ratio < 1e-6, ratio, 1e-6));

  const QuadratureSpec quad;
  const auto dev = parallel_map<double>(n, threads, [&](std::size_t i) {
    const ReservoirParams res{0.1, mu[i]};
    const auto slow = detail::coefficients(onsager(1e4, res, 0.05, 1.0, quad, Statistics::fermi_dirac));
    const auto fast = detail::coefficients(onsager(1e3, res, 0.5, 1.0, quad, Statistics::fermi_dirac));
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) worst = std::max(worst, std::abs(slow[c] - fast[c]));
    return worst;
  });
  const double lam_dev = *std::max_element(dev.begin(), dev.end());
  out.push_back(result("9d", "coefficients at (lambda=0.05, t=1e4) vs (lambda=0.5, t=1e3)", lam_dev < 1e-6, lam_dev,
                       1e-6));
  return out;
}

// 10. Order of the entropy expansion.
inline std::vector<CriterionResult> expansion_order(unsigned) {
  const double dns[] = {0.1, 0.05, 0.025};
  std::vector<double> xs, ys;
  for (double dn : dns) {
    const EquilibriumModePrep p{0.1, dn, 1.0, 0.2};
    const ExactModeEntropies ex = exact_entropies(p, 1.3);
    const ModeEntropyBreakdown b = entropy_coeffs(p, 1.3);
    const double residual = std::max(std::abs(ex.s_a - b.s_a()), std::abs(ex.s_b - b.s_b()));
    xs.push_back(std::log(dn));
    ys.push_back(std::log(residual));
  }
  const double mx = (xs[0] + xs[1] + xs[2]) / 3.0;
  const double my = (ys[0] + ys[1] + ys[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {result("10", "log-log slope of exact minus second-order entropy vs dn", std::abs(slope - 3.0) <= 0.3, slope,
                 0.3, fmt("slope %.4f (target 3 +- 0.3)", slope))};
}

struct Criterion {
  std::string id;
  std::function<std::vector<CriterionResult>(unsigned)> run;
};

inline std::vector<Criterion> criteria() {
  return {{"1", e_gap},        {"2", conservation},     {"3", lindblad},
          {"4", fluctuation},  {"5", entropy},          {"6", omega_identities},
          {"7", boltzmann},    {"8", sommerfeld},       {"9", transport_properties},
          {"10", expansion_order}};
}

}  // namespace accept

/// Runs every criterion, or only those whose id (or sub-id such as "9b")
/// matches `only`. Unknown filters throw ConfigError.
inline std::vector<CriterionResult> acceptance_suite(const std::string& only = {}, unsigned threads = 1) {
  std::vector<CriterionResult> out;
  bool matched = false;
  for (const auto& c : accept::criteria()) {
    const bool whole = only.empty() || only == c.id;
    const bool sub = !whole && only.size() > c.id.size() && only.compare(0, c.id.size(), c.id) == 0 &&
                     std::isalpha(static_cast<unsigned char>(only.back())) && only.size() == c.id.size() + 1;
    if (!whole && !sub) continue;
    matched = true;
    const auto start = std::chrono::steady_clock::now();
    std::vector<CriterionResult> rs;
    try {
      rs = c.run(threads);
    } catch (const std::exception& e) {
      rs = {accept::result(c.id, "criterion " + c.id, false, NAN, NAN, std::string("error: ") + e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : rs) {
      if (sub && r.id != only && r.id != c.id) continue;
      r.seconds = secs;
      out.push_back(std::move(r));
    }
  }
  if (!matched || out.empty()) throw ConfigError("accept --only: no criterion named '" + only + "'");
  return out;
}

inline std::string render_text(const std::vector<CriterionResult>& results) {
  std::string out;
  for (const auto& r : results) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "[%s] %-3s %s | measured=%.6g limit=%.6g (%.2fs)", r.pass ? "PASS" : "FAIL",
                  r.id.c_str(), r.description.c_str(), r.measured, r.limit, r.seconds);
    out += buf;
    if (!r.detail.empty()) out += " | " + r.detail;
    out += '\n';
  }
  return out;
}

inline std::string render_csv(const std::vector<CriterionResult>& results) {
  std::string out = "id,description,pass,measured,limit,seconds,detail\n";
  for (const auto& r : results) {
    out += quote_field(r.id) + "," + quote_field(r.description) + "," + (r.pass ? "1" : "0") + "," +
           format_number(r.measured, 12) + "," + format_number(r.limit, 12) + "," + format_number(r.seconds, 4) + "," +
           quote_field(r.detail) + "\n";
  }
  return out;
}

}  // namespace dephase::scenario
