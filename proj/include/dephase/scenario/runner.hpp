#pragma once

// Runs a scenario: one CSV table per panel plus, for the analytic-vs-numeric
// scenarios, a comparison report.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "dephase/closed_forms.hpp"
#include "dephase/info_thermo.hpp"
#include "dephase/scenario/config.hpp"
#include "dephase/scenario/csv.hpp"
#include "dephase/scenario/parallel.hpp"
#include "dephase/scenario/report.hpp"
#include "dephase/transport.hpp"

namespace dephase::scenario {

struct ScenarioOutput {
  std::vector<CsvTable> tables;
  std::vector<std::pair<std::string, ComparisonReport>> reports;
  std::vector<std::string> warnings;
};

namespace detail {

inline const char* kCoefficientHeaders[] = {"J_NMU[1]", "J_NT[alpha]", "J_QMU[alpha]", "J_QT[alpha^2]"};

inline std::string tag(const char* name, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%g", name, x);
  return buf;
}

inline double single(const std::vector<double>& xs, const char* field, ScenarioId id) {
  if (xs.size() != 1) {
    throw ConfigError(std::string(field) + ": scenario " + to_string(id) + " takes a single value");
  }
  return xs.front();
}

inline std::vector<double> coefficients(const OnsagerBlock& b) { return {b.j_n_mu, b.j_n_t, b.j_q_mu, b.j_q_t}; }

inline void require_fermi_dirac(const ScenarioConfig& cfg) {
  if (cfg.physics.statistics != Statistics::fermi_dirac) {
    throw ConfigError("physics.statistics: scenario " + to_string(cfg.id) +
                      " compares against the Fermi-Dirac expansion");
  }
}

inline std::vector<CsvTable> equilibrium_sweep(const ScenarioConfig& cfg, unsigned threads) {
  const auto& p = cfg.physics;
  const double lambda = single(p.dephasing, "physics.lambda", cfg.id);
  std::vector<CsvTable> out;
  for (double temp : p.temperatures) {
    CsvTable table{to_string(cfg.id) + "_" + tag("T", temp), {"mu[alpha]"}, {}};
    for (const char* h : kCoefficientHeaders) table.header.push_back(h);
    const auto blocks = parallel_map<OnsagerBlock>(cfg.grids.mu.size(), threads, [&](std::size_t i) {
      return onsager(kEquilibrium, {temp, cfg.grids.mu[i]}, lambda, p.coupling, cfg.grids.quadrature,
                     p.statistics);
    });
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      auto row = coefficients(blocks[i]);
      row.insert(row.begin(), cfg.grids.mu[i]);
      table.add_row(std::move(row));
    }
    out.push_back(std::move(table));
  }
  return out;
}

inline std::vector<CsvTable> coefficient_evolution(const ScenarioConfig& cfg, unsigned threads) {
  const auto& p = cfg.physics;
  const double temp = single(p.temperatures, "physics.T", cfg.id);
  const double lambda = single(p.dephasing, "physics.lambda", cfg.id);
  std::vector<CsvTable> out;
  for (double mu : p.chemical_potentials) {
    CsvTable table{to_string(cfg.id) + "_" + tag("mu", mu), {"t[1/alpha]"}, {}};
    for (const char* h : kCoefficientHeaders) table.header.push_back(h);
    const auto blocks = parallel_map<OnsagerBlock>(cfg.grids.t.size(), threads, [&](std::size_t i) {
      return onsager(cfg.grids.t[i], {temp, mu}, lambda, p.coupling, cfg.grids.quadrature, p.statistics);
    });
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      auto row = coefficients(blocks[i]);
      row.insert(row.begin(), cfg.grids.t[i]);
      table.add_row(std::move(row));
    }
    out.push_back(std::move(table));
  }
  return out;
}

inline std::vector<CsvTable> particle_coefficient_by_dephasing(const ScenarioConfig& cfg, unsigned threads) {
  const auto& p = cfg.physics;
  const double temp = single(p.temperatures, "physics.T", cfg.id);
  const auto& mus = p.chemical_potentials;
  const auto& ts = cfg.grids.t;
  std::vector<CsvTable> out;
  for (double lambda : p.dephasing) {
    CsvTable table{to_string(cfg.id) + "_" + tag("lambda", lambda), {"t[1/alpha]"}, {}};
    for (double mu : mus) table.header.push_back("J_NMU[1] " + tag("mu=", mu));
    const auto values = parallel_map<double>(ts.size() * mus.size(), threads, [&](std::size_t i) {
      const double t = ts[i / mus.size()];
      const double mu = mus[i % mus.size()];
      return onsager(t, {temp, mu}, lambda, p.coupling, cfg.grids.quadrature, p.statistics).j_n_mu;
    });
    for (std::size_t r = 0; r < ts.size(); ++r) {
      std::vector<double> row{ts[r]};
      for (std::size_t c = 0; c < mus.size(); ++c) row.push_back(values[r * mus.size() + c]);
      table.add_row(std::move(row));
    }
    out.push_back(std::move(table));
  }
  return out;
}

inline EquilibriumModePrep mode_prep(const ScenarioConfig& cfg, double lambda) {
  return {cfg.physics.n_eq, cfg.physics.delta_n, cfg.physics.coupling, lambda};
}

template <class RowFn>
std::vector<CsvTable> entropy_tables(const ScenarioConfig& cfg, std::vector<std::string> header, RowFn&& row_fn,
                                     unsigned threads) {
  std::vector<CsvTable> out;
  for (double lambda : cfg.physics.dephasing) {
    const EquilibriumModePrep prep = mode_prep(cfg, lambda);
    validate(prep);
    CsvTable table{to_string(cfg.id) + "_" + tag("lambda", lambda), header, {}};
    const auto rows = parallel_map<std::vector<double>>(cfg.grids.t.size(), threads, [&](std::size_t i) {
      return row_fn(prep, cfg.grids.t[i]);
    });
    for (const auto& row : rows) table.add_row(row);
    out.push_back(std::move(table));
  }
  return out;
}

inline std::vector<CsvTable> entropy_evolution(const ScenarioConfig& cfg, unsigned threads) {
  return entropy_tables(
      cfg, {"t[1/alpha]", "S_A[nat]", "S_B[nat]", "I[nat]", "S_A+S_B-I[nat]", "S_A_2nd[nat]", "S_B_2nd[nat]"},
      [](const EquilibriumModePrep& prep, double t) {
        const ExactModeEntropies ex = exact_entropies(prep, t);
        const ModeEntropyBreakdown b = entropy_coeffs(prep, t);
        const double info = ex.mutual_information();
        return std::vector<double>{t, ex.s_a, ex.s_b, info, ex.s_a + ex.s_b - info, b.s_a(), b.s_b()};
      },
      threads);
}

inline std::vector<CsvTable> entropy_production(const ScenarioConfig& cfg, unsigned threads) {
  return entropy_tables(
      cfg, {"t[1/alpha]", "S_AB[nat]", "S_AB_2nd[nat]", "Pi[alpha]"},
      [](const EquilibriumModePrep& prep, double t) {
        return std::vector<double>{t, exact_entropies(prep, t).s_ab, total_entropy_mode(prep, t),
                                   entropy_production_mode(prep, t)};
      },
      threads);
}

inline std::vector<CsvTable> mutual_information(const ScenarioConfig& cfg, unsigned threads) {
  return entropy_tables(
      cfg, {"t[1/alpha]", "I[nat]", "I_2nd[nat]"},
      [](const EquilibriumModePrep& prep, double t) {
        return std::vector<double>{t, exact_entropies(prep, t).mutual_information(),
                                   mutual_information_mode(prep, t)};
      },
      threads);
}

inline void sommerfeld_coefficients(const ScenarioConfig& cfg, unsigned threads, ScenarioOutput& out) {
  require_fermi_dirac(cfg);
  const auto& p = cfg.physics;
  const double lambda = single(p.dephasing, "physics.lambda", cfg.id);
  for (double mu : cfg.grids.mu) {
    if (!(std::abs(mu) < 2.0)) throw ConfigError("grids.mu: the low-temperature expansion needs |mu| < 2");
  }
  Comparison cmp(cfg.tolerance);
  const std::vector<std::string> names = {"J_NMU", "J_NT", "J_QMU", "J_QT"};
  for (double temp : p.temperatures) {
    CsvTable table{to_string(cfg.id) + "_" + tag("T", temp), {"mu[alpha]"}, {}};
    for (const char* h : kCoefficientHeaders) table.header.push_back(std::string(h) + " numeric");
    for (const char* h : kCoefficientHeaders) table.header.push_back(std::string(h) + " analytic");
    using Pair = std::pair<OnsagerBlock, OnsagerBlock>;
    const auto blocks = parallel_map<Pair>(cfg.grids.mu.size(), threads, [&](std::size_t i) {
      const ReservoirParams res{temp, cfg.grids.mu[i]};
      return Pair{onsager(kEquilibrium, res, lambda, p.coupling, cfg.grids.quadrature, Statistics::fermi_dirac),
                  onsager_sommerfeld(kEquilibrium, res, lambda, p.coupling)};
    });
    std::vector<ParameterTuple> points;
    std::vector<std::vector<double>> ref(4), cand(4);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      std::vector<double> row{cfg.grids.mu[i]};
      const auto num = coefficients(blocks[i].first);
      const auto ana = coefficients(blocks[i].second);
      row.insert(row.end(), num.begin(), num.end());
      row.insert(row.end(), ana.begin(), ana.end());
      table.add_row(std::move(row));
      points.push_back({{"T", temp}, {"mu", cfg.grids.mu[i]}});
      for (int c = 0; c < 4; ++c) {
        ref[c].push_back(num[c]);
        cand[c].push_back(ana[c]);
      }
    }
    for (int c = 0; c < 4; ++c) cmp.add_series(names[c], points, ref[c], cand[c]);
    out.tables.push_back(std::move(table));
  }
  out.reports.emplace_back(to_string(cfg.id), cmp.finish());
}

inline void sommerfeld_evolution(const ScenarioConfig& cfg, unsigned threads, ScenarioOutput& out) {
  require_fermi_dirac(cfg);
  const auto& p = cfg.physics;
  const double temp = single(p.temperatures, "physics.T", cfg.id);
  const double lambda = single(p.dephasing, "physics.lambda", cfg.id);
  Comparison cmp(cfg.tolerance);
  for (double mu : p.chemical_potentials) {
    if (!(std::abs(mu) < 2.0)) throw ConfigError("physics.mu: the low-temperature expansion needs |mu| < 2");
    const ReservoirParams res{temp, mu};
    CsvTable table{to_string(cfg.id) + "_" + tag("mu", mu),
                   {"t[1/alpha]", "Nbar[1] numeric", "Nbar[1] analytic", "Ebar[alpha] numeric",
                    "Ebar[alpha] analytic"},
                   {}};
    const auto rows = parallel_map<std::vector<double>>(cfg.grids.t.size(), threads, [&](std::size_t i) {
      const double t = cfg.grids.t[i];
      const QuadratureSpec& q = cfg.grids.quadrature;
      return std::vector<double>{t, nbar(t, res, lambda, p.coupling, q, Statistics::fermi_dirac).value,
                                 nbar_fd_sommerfeld(t, res, lambda, p.coupling).value,
                                 ebar(t, res, lambda, p.coupling, q, Statistics::fermi_dirac).value,
                                 ebar_fd_sommerfeld(t, res, lambda, p.coupling).value};
    });
    std::vector<ParameterTuple> points;
    std::vector<double> n_ref, n_cand, e_ref, e_cand;
    for (const auto& row : rows) {
      table.add_row(row);
      points.push_back({{"T", temp}, {"mu", mu}, {"t", row[0]}});
      n_ref.push_back(row[1]);
      n_cand.push_back(row[2]);
      e_ref.push_back(row[3]);
      e_cand.push_back(row[4]);
    }
    cmp.add_series("Nbar", points, n_ref, n_cand);
    cmp.add_series("Ebar", points, e_ref, e_cand);
    out.tables.push_back(std::move(table));
  }
  out.reports.emplace_back(to_string(cfg.id), cmp.finish());
}

inline std::vector<CsvTable> custom_tables(const ScenarioConfig& cfg, unsigned threads) {
  const auto& p = cfg.physics;
  std::vector<CsvTable> out;
  for (double temp : p.temperatures) {
    for (double mu : p.chemical_potentials) {
      for (double lambda : p.dephasing) {
        CsvTable table{to_string(cfg.id) + "_" + tag("T", temp) + "_" + tag("mu", mu) + "_" + tag("lambda", lambda),
                       {"t[1/alpha]", "Nbar[1]", "Ebar[alpha]", "Qbar[alpha]"},
                       {}};
        for (const char* h : kCoefficientHeaders) table.header.push_back(h);
        table.header.push_back("J_N[1]");
        table.header.push_back("J_Q[alpha]");
        const ReservoirParams res{temp, mu};
        const auto rows = parallel_map<std::vector<double>>(cfg.grids.t.size(), threads, [&](std::size_t i) {
          const double t = cfg.grids.t[i];
          const QuadratureSpec& q = cfg.grids.quadrature;
          const double n = nbar(t, res, lambda, p.coupling, q, p.statistics).value;
          const double e = ebar(t, res, lambda, p.coupling, q, p.statistics).value;
          const OnsagerBlock b = onsager(t, res, lambda, p.coupling, q, p.statistics);
          const FluxPair f = fluxes(b, p.delta_mu, p.delta_t);
          return std::vector<double>{t, n, e, e - mu * n, b.j_n_mu, b.j_n_t, b.j_q_mu, b.j_q_t,
                                     f.j_particle, f.j_heat};
        });
        for (const auto& row : rows) table.add_row(row);
        out.push_back(std::move(table));
      }
    }
  }
  return out;
}

}  // namespace detail

/// Evaluates a scenario. Points are computed concurrently on `threads`
/// workers; tables are assembled in grid order.
inline ScenarioOutput run_scenario(const ScenarioConfig& cfg, unsigned threads = 1) {
  ScenarioOutput out;
  out.warnings = cfg.warnings;
  switch (cfg.id) {
    case ScenarioId::ons1: out.tables = detail::equilibrium_sweep(cfg, threads); break;
    case ScenarioId::onsevo1: out.tables = detail::coefficient_evolution(cfg, threads); break;
    case ScenarioId::onsevo2: out.tables = detail::particle_coefficient_by_dephasing(cfg, threads); break;
    case ScenarioId::entroevo: out.tables = detail::entropy_evolution(cfg, threads); break;
    case ScenarioId::entroprod: out.tables = detail::entropy_production(cfg, threads); break;
    case ScenarioId::mutint: out.tables = detail::mutual_information(cfg, threads); break;
    case ScenarioId::onsteste1: detail::sommerfeld_coefficients(cfg, threads, out); break;
    case ScenarioId::onsteste2: detail::sommerfeld_evolution(cfg, threads, out); break;
    case ScenarioId::custom: out.tables = detail::custom_tables(cfg, threads); break;
  }
  return out;
}

inline std::string render_report(const std::string& name, const ComparisonReport& r) {
  CsvTable t{name + "_report", {"max_abs_dev", "max_rel_dev", "tolerance", "pass", "points"}, {}};
  t.add_row({r.max_abs_dev, r.max_rel_dev, r.tolerance, r.pass ? 1.0 : 0.0, static_cast<double>(r.points)});
  std::string text = t.render(12);
  text += "worst_point," + quote_field(describe(r.worst_point)) + "\n";
  return text;
}

/// Writes every table (and report) under `dir`; returns the paths written.
inline std::vector<std::filesystem::path> write_outputs(const ScenarioOutput& out, const std::filesystem::path& dir,
                                                        int precision) {
  std::vector<std::filesystem::path> written;
  for (const auto& table : out.tables) written.push_back(write_text(dir, table.name + ".csv", table.render(precision)));
  for (const auto& [name, report] : out.reports) {
    written.push_back(write_text(dir, name + "_report.csv", render_report(name, report)));
  }
  return written;
}

}  // namespace dephase::scenario
