#pragma once

// Command implementations behind the `rscd` executable. Each command turns a
// RunConfig into a report (JSON or CSV text) plus an exit code, so the logic
// is testable without spawning a process.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <future>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "rscd/classical.hpp"
#include "rscd/coeffs.hpp"
#include "rscd/eigenbasis.hpp"
#include "rscd/errors.hpp"
#include "rscd/macdonald.hpp"
#include "rscd/model.hpp"
#include "rscd/operators.hpp"

namespace rscd::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalid = 2;

using json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  int n = 0;
  int p = 1;
  int M = 0;
  double g = 0.0;
  double tol_eigen = 1e-8;
  double tol_gram = 1e-8;
  double tol_identity = 1e-10;
  std::uint64_t seed = 42;
  std::string format = "json";
  std::string output;
};

struct CommandResult {
  int exit_code = kExitOk;
  std::string text;
};

namespace detail {

inline json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline json params_json(const RunConfig& cfg) {
  return json{{"n", cfg.n}, {"p", cfg.p}, {"M", cfg.M}, {"g", cfg.g}};
}

inline json header(const RunConfig& cfg) {
  return json{{"schema_version", kSchemaVersion}, {"command", cfg.command}, {"params", params_json(cfg)}};
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

// Shortest representation that round-trips.
inline std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.columns);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

inline CommandResult emit(const RunConfig& cfg, const json& doc, const Table& table, int code = kExitOk) {
  if (cfg.format == "csv") return {code, csv(table)};
  return {code, doc.dump(2) + "\n"};
}

inline int thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RSCD_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return std::min<int>(v, static_cast<int>(hw));
  }
  return static_cast<int>(hw);
}

// Runs tasks with at most `cap` in flight; results keep task order.
template <typename T>
std::vector<T> run_bounded(const std::vector<std::function<T()>>& tasks, int cap) {
  std::vector<T> out(tasks.size());
  std::size_t next = 0;
  while (next < tasks.size()) {
    std::vector<std::future<T>> batch;
    const std::size_t end = std::min(tasks.size(), next + static_cast<std::size_t>(cap));
    for (std::size_t i = next; i < end; ++i) batch.push_back(std::async(std::launch::async, tasks[i]));
    for (std::size_t i = next; i < end; ++i) out[i] = batch[i - next].get();
    next = end;
  }
  return out;
}

}  // namespace detail

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

inline CommandResult cmd_validate(const RunConfig& cfg) {
  json doc = detail::header(cfg);
  detail::Table table{{"key", "value"}, {}};
  try {
    const ModelParams mp = build_params(cfg.n, cfg.p, cfg.M, cfg.g);
    const Model model(mp);
    const auto cls = classify_coupling(mp.n, mp.gamma());
    json nearby = json::array();
    for (double v : excluded_g_values(mp))
      if (std::abs(v - mp.g) <= 0.25) nearby.push_back(v);
    doc["valid"] = true;
    doc["alpha"] = mp.alpha;
    doc["q"] = mp.q;
    doc["sgn_M"] = mp.sgnM;
    doc["coupling_type"] = to_string(cls.kind);
    doc["dimension"] = model.size();
    doc["g_excluded"] = g_is_excluded(mp);
    doc["excluded_g_nearby"] = nearby;
    table.rows = {{"valid", "true"},
                  {"alpha", detail::fmt(mp.alpha)},
                  {"q", std::to_string(mp.q)},
                  {"sgn_M", std::to_string(mp.sgnM)},
                  {"coupling_type", to_string(cls.kind)},
                  {"dimension", std::to_string(model.size())},
                  {"g_excluded", g_is_excluded(mp) ? "true" : "false"}};
    return detail::emit(cfg, doc, table);
  } catch (const InvalidParameter& e) {
    doc["valid"] = false;
    doc["error"] = e.what();
    table.rows = {{"valid", "false"}, {"error", std::string("\"") + e.what() + "\""}};
    return detail::emit(cfg, doc, table, kExitInvalid);
  }
}

inline CommandResult cmd_lattice(const RunConfig& cfg) {
  const Model model(cfg.n, cfg.p, cfg.M, cfg.g);
  json doc = detail::header(cfg);
  doc["dimension"] = model.size();
  json pts = json::array();
  detail::Table table;
  table.columns = {"index"};
  for (int j = 1; j <= cfg.n - 1; ++j) table.columns.push_back("m_" + std::to_string(j));
  table.columns.push_back("m_n");
  for (int j = 1; j <= cfg.n; ++j) table.columns.push_back("x_" + std::to_string(j));
  for (std::size_t i = 0; i < model.size(); ++i) {
    const auto& pt = model.point(i);
    const Eigen::VectorXd x = model.lattice_point(pt);
    std::vector<double> xs(x.data(), x.data() + x.size());
    pts.push_back({{"index", i}, {"m", pt.m}, {"m_n", pt.m_n}, {"x", xs}});
    std::vector<std::string> row{std::to_string(i)};
    for (int v : pt.m) row.push_back(std::to_string(v));
    row.push_back(std::to_string(pt.m_n));
    for (double v : xs) row.push_back(detail::fmt(v));
    table.rows.push_back(std::move(row));
  }
  doc["points"] = pts;
  return detail::emit(cfg, doc, table);
}

inline CommandResult cmd_spectrum(const RunConfig& cfg) {
  const Model model(cfg.n, cfg.p, cfg.M, cfg.g);
  const Eigen::VectorXd rho = rho_standard(cfg.n, model.s() * cfg.g);
  json doc = detail::header(cfg);
  doc["dimension"] = model.size();
  detail::Table table;
  table.columns = {"lambda_index"};
  for (int r = 1; r <= cfg.n - 1; ++r) table.columns.push_back("E_" + std::to_string(r));
  json levels = json::array();
  for (std::size_t l = 0; l < model.size(); ++l) {
    const auto& lam = model.point(l).m;
    const Eigen::VectorXd u = rho + model.standard_base().from_coords(model.to_standard(lam)).to_real();
    json energies = json::array(), exps = json::array();
    std::vector<std::string> row{std::to_string(l)};
    for (int r = 1; r <= cfg.n - 1; ++r) {
      const double e = E_cos(cfg.n, model.alpha(), r, u);
      energies.push_back(e);
      exps.push_back(detail::complex_json(elementary_E(cfg.n, model.alpha(), r, u)));
      row.push_back(detail::fmt(e));
    }
    levels.push_back({{"lambda_index", l}, {"lambda", lam}, {"E", energies}, {"E_complex", exps}});
    table.rows.push_back(std::move(row));
  }
  doc["levels"] = levels;
  return detail::emit(cfg, doc, table);
}

inline CommandResult cmd_operators(const RunConfig& cfg) {
  const Model model(cfg.n, cfg.p, cfg.M, cfg.g);
  const SignTable signs(model);
  json doc = detail::header(cfg);
  doc["dimension"] = model.size();
  detail::Table table{{"kind", "r", "row", "col", "value"}, {}};
  json ops = json::array();
  const auto S = build_all_S(model, signs);
  for (int r = 1; r <= cfg.n - 1; ++r) {
    for (const auto& op : {S[r - 1], build_D(model, r), build_H(model, signs, r)}) {
      json rows = json::array();
      for (Eigen::Index i = 0; i < op.dim(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < op.dim(); ++j) {
          row.push_back(detail::complex_json(op.entries(i, j)));
          if (op.entries(i, j) != 0.0)
            table.rows.push_back({to_string(op.kind), std::to_string(r), std::to_string(i), std::to_string(j),
                                  detail::fmt(op.entries(i, j))});
        }
        rows.push_back(row);
      }
      ops.push_back({{"kind", to_string(op.kind)}, {"r", r}, {"dim", op.dim()}, {"entries", rows}});
    }
  }
  doc["operators"] = ops;
  double comm = 0.0, adj = 0.0;
  for (int r = 1; r <= cfg.n - 1; ++r) {
    adj = std::max(adj, adjoint_check(model, signs, r));
    for (int s = r + 1; s <= cfg.n - 1; ++s) comm = std::max(comm, commutator_norm(S[r - 1], S[s - 1]));
  }
  doc["max_commutator_norm"] = comm;
  doc["max_adjoint_dev"] = adj;
  return detail::emit(cfg, doc, table);
}

inline CommandResult cmd_eigenbasis(const RunConfig& cfg) {
  const Model model(cfg.n, cfg.p, cfg.M, cfg.g);
  SamplingOptions opt;
  opt.seed = cfg.seed;
  const EigenBasis basis(model, opt);
  json doc = detail::header(cfg);
  doc["D"] = model.size();
  doc["n0_sum"] = basis.n0().sum;
  doc["n0_product"] = basis.n0().product;
  doc["n0_product_signed"] = basis.n0().product_signed;
  doc["gram_max_dev"] = basis.gram_max_dev();
  doc["self_duality_dev"] = basis.self_duality_dev();
  doc["max_imag"] = basis.max_imag();
  double fw = 0.0;
  json levels = json::array();
  detail::Table table{{"lambda_index", "mu_index", "re", "im"}, {}};
  for (std::size_t l = 0; l < basis.size(); ++l) {
    fw = std::max(fw, basis.forward_residual(l));
    json tuple = json::array(), psi = json::array();
    for (int r = 1; r <= cfg.n - 1; ++r) tuple.push_back(detail::complex_json(basis.eigenvalue(l, r)));
    for (std::size_t m = 0; m < basis.size(); ++m) {
      const auto z = basis.value(l, m);
      psi.push_back(detail::complex_json(z));
      table.rows.push_back({std::to_string(l), std::to_string(m), detail::fmt(z.real()), detail::fmt(z.imag())});
    }
    levels.push_back({{"lambda_index", l}, {"lambda", model.point(l).m}, {"eigenvalues", tuple}, {"psi", psi}});
  }
  doc["forward_residual_max"] = fw;
  doc["levels"] = levels;
  return detail::emit(cfg, doc, table);
}

/// The full invariant suite for one configuration.
inline std::vector<Check> verify_checks(const RunConfig& cfg) {
  const Model model(cfg.n, cfg.p, cfg.M, cfg.g);
  const int n = cfg.n;
  SamplingOptions opt;
  opt.seed = cfg.seed;
  std::vector<std::function<std::vector<Check>()>> groups;

  groups.push_back([&]() {
    const SignTable signs(model);
    const auto S = build_all_S(model, signs);
    double comm = 0.0, adj = 0.0;
    for (int r = 1; r <= n - 1; ++r) {
      adj = std::max(adj, adjoint_check(model, signs, r));
      for (int s = 1; s <= n - 1; ++s)
        comm = std::max(comm, commutator_norm(S[r - 1], S[s - 1]) /
                                  std::max(1e-300, S[r - 1].entries.norm() * S[s - 1].entries.norm()));
    }
    // Boundary pairs must give exact zeros, interior pairs nonzero values.
    bool zeros_ok = true;
    for (const auto& pt : model.points())
      for (int r = 1; r <= n - 1; ++r)
        for (const auto& nu : model.orbit_of(r)) {
          const double w = W_nu(model, signs, nu, pt.m);
          const bool inside = model.contains(model.shifted(pt.m, nu));
          if (inside ? w == 0.0 : w != 0.0) zeros_ok = false;
        }
    return std::vector<Check>{
        {"commutator_rel", comm, 1e-9, comm <= 1e-9, ""},
        {"adjointness", adj, cfg.tol_identity, adj <= cfg.tol_identity, ""},
        {"vanishing_pattern", zeros_ok ? 0.0 : 1.0, 0.0, zeros_ok, ""},
    };
  });

  groups.push_back([&]() {
    std::mt19937_64 rng(cfg.seed);
    double mi = 0.0, rad = 0.0, sign_min = std::numeric_limits<double>::infinity(), hr = 0.0;
    for (int i = 0; i < 50; ++i) {
      const Eigen::VectorXd x = sample_simplex(model, rng, true);
      for (int r = 1; r <= n - 1; ++r)
        mi = std::max(mi, macdonald_identity_residual(n, model.alpha(), cfg.g, r, x));
    }
    for (int i = 0; i < 100; ++i) {
      const Eigen::VectorXd x = sample_simplex(model, rng, true);
      for (int r = 1; r <= n - 1; ++r)
        for (const auto& nu : model.orbit_of(r))
          rad = std::max(rad, radicand_identity_check(cfg.g, model.alpha(), orbit_subset(nu), x));
    }
    for (int i = 0; i < 200; ++i) sign_min = std::min(sign_min, sign_pattern_min(model, sample_simplex(model, rng, false)));
    for (const auto& v : model.vertices()) sign_min = std::min(sign_min, sign_pattern_min(model, v));
    std::uniform_real_distribution<double> mom(-3.0, 3.0);
    for (int i = 0; i < 100; ++i) {
      PhasePoint pt{sample_simplex(model, rng, true), Eigen::VectorXd(n)};
      for (int j = 0; j < n; ++j) pt.momenta[j] = mom(rng);
      pt.momenta.array() -= pt.momenta.mean();
      for (int r = 1; r <= n - 1; ++r)
        hr = std::max(hr, std::abs(classical_Hr(model, r, pt, cfg.g) - classical_Hr(model, r, pt, -cfg.g)));
    }
    return std::vector<Check>{
        {"macdonald_identity", mi, cfg.tol_identity, mi <= cfg.tol_identity, ""},
        {"radicand_identity", rad, 1e-12, rad <= 1e-12, ""},
        {"sign_pattern_min", sign_min, -1e-12, sign_min >= -1e-12, ""},
        {"classical_Hr_reflection", hr, 1e-11, hr <= 1e-11, ""},
    };
  });

  groups.push_back([&]() {
    std::vector<Check> out;
    const EigenBasis basis(model, opt);
    const auto& n0 = basis.n0();
    out.push_back({"n0_identity", n0.rel_dev, kN0Tol, n0.rel_dev <= kN0Tol, ""});
    const LatticeFunction p0 = psi_0(model, basis.delta(), n0.sum);
    double gs = 0.0;
    for (int r = 1; r <= n - 1; ++r) {
      const cplx e = elementary_E(n, model.alpha(), r, rho_standard(n, cfg.g));
      gs = std::max(gs, (basis.S()[r - 1] * p0 - e * p0).cwiseAbs().maxCoeff());
    }
    out.push_back({"ground_state", gs, 1e-9, gs <= 1e-9, ""});
    const auto& mac = basis.macdonald();
    out.push_back({"monomial_fit", mac.fit_residual(), 1e-8, mac.fit_residual() < 1e-8, ""});
    const double tri = mac.triangularity_defect();
    out.push_back({"triangularity", tri, 1e-8, tri < 1e-8, ""});
    const double diag = mac.diagonal_defect();
    out.push_back({"diagonal_coefficients", diag, 1e-8, diag < 1e-8, ""});
    const double gram = basis.gram_max_dev();
    out.push_back({"gram", gram, cfg.tol_gram, gram <= cfg.tol_gram, ""});
    const double sd = basis.self_duality_dev();
    out.push_back({"self_duality", sd, 1e-9, sd <= 1e-9, ""});
    double fw = 0.0, du = 0.0;
    for (std::size_t l = 0; l < basis.size(); ++l) fw = std::max(fw, basis.forward_residual(l));
    std::mt19937_64 rng(cfg.seed + 1);
    std::uniform_int_distribution<std::size_t> pick(0, basis.size() - 1);
    std::uniform_int_distribution<int> pick_r(1, n - 1);
    for (int i = 0; i < 100; ++i) {
      const std::size_t a = pick(rng), b = pick(rng);
      const int r = pick_r(rng);
      du = std::max(du, basis.dual_eigen_check(r, a, b));
    }
    out.push_back({"forward_eigen", fw, cfg.tol_eigen, fw <= cfg.tol_eigen, ""});
    out.push_back({"dual_eigen", du, cfg.tol_eigen, du <= cfg.tol_eigen, ""});
    const auto [nr, wmin] = basis.norm_recurrence_check();
    out.push_back({"norm_recurrence", nr, 1e-10, nr <= 1e-10 && wmin > 0.0, ""});
    const double comp = basis.completeness_dev();
    out.push_back({"completeness", comp, 1e-7, comp <= 1e-7, ""});
    const auto cc = basis.spectral_crosscheck(cfg.seed);
    double ev = 0.0;
    for (double d : cc.eigenvalue_dev) ev = std::max(ev, d);
    out.push_back({"spectrum_H", ev, cfg.tol_eigen, ev <= cfg.tol_eigen, ""});
    out.push_back({"eigenvector_overlap", cc.overlap_dev, 1e-7, cc.matched && cc.overlap_dev <= 1e-7,
                   cc.matched ? "" : "unmatched joint eigenvector"});
    return out;
  });

  const auto results = detail::run_bounded<std::vector<Check>>(groups, detail::thread_cap());
  std::vector<Check> all;
  for (const auto& r : results) all.insert(all.end(), r.begin(), r.end());
  return all;
}

inline CommandResult cmd_verify(const RunConfig& cfg) {
  json doc = detail::header(cfg);
  detail::Table table{{"check", "value", "tolerance", "pass"}, {}};
  std::vector<Check> checks;
  std::string error;
  try {
    checks = verify_checks(cfg);
  } catch (const InvalidParameter&) {
    throw;
  } catch (const Error& e) {
    error = e.what();
  }
  bool all = error.empty();
  json arr = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    json item{{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}};
    if (!c.note.empty()) item["note"] = c.note;
    arr.push_back(item);
    table.rows.push_back({c.name, detail::fmt(c.value), detail::fmt(c.tolerance), c.pass ? "true" : "false"});
  }
  doc["checks"] = arr;
  if (!error.empty()) doc["error"] = error;
  doc["pass"] = all;
  return detail::emit(cfg, doc, table, all ? kExitOk : kExitFailure);
}

inline CommandResult cmd_classical(const RunConfig& cfg) {
  const Model model(cfg.n, cfg.p, cfg.M, cfg.g);
  const int n = cfg.n;
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> mom(-3.0, 3.0);
  json doc = detail::header(cfg);
  detail::Table table{{"sample", "r", "H_r"}, {}};
  json samples = json::array();
  for (int i = 0; i < 20; ++i) {
    PhasePoint pt{sample_simplex(model, rng, true), Eigen::VectorXd(n)};
    for (int j = 0; j < n; ++j) pt.momenta[j] = mom(rng);
    pt.momenta.array() -= pt.momenta.mean();
    json hs = json::array();
    for (int r = 1; r <= n - 1; ++r) {
      const double h = classical_Hr(model, r, pt);
      hs.push_back(h);
      table.rows.push_back({std::to_string(i), std::to_string(r), detail::fmt(h)});
    }
    samples.push_back({{"x", std::vector<double>(pt.x.data(), pt.x.data() + n)},
                       {"momenta", std::vector<double>(pt.momenta.data(), pt.momenta.data() + n)},
                       {"H_r", hs}});
  }
  doc["samples"] = samples;
  // Zero-momentum values next to E_r(rho): logged for inspection only.
  json rest = json::array();
  for (int r = 1; r <= n - 1; ++r) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int i = 0; i < 50; ++i) {
      const double h = classical_Hr(model, r, {sample_simplex(model, rng, true), Eigen::VectorXd::Zero(n)});
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
    rest.push_back({{"r", r},
                    {"zero_momentum_min", lo},
                    {"zero_momentum_max", hi},
                    {"E_r_rho", detail::complex_json(elementary_E(n, model.alpha(), r, rho_standard(n, model.s() * cfg.g)))}});
  }
  doc["zero_momentum"] = rest;
  return detail::emit(cfg, doc, table);
}

/// Dispatch; invalid parameters map to exit code 2, other library errors to 1.
inline CommandResult run(const RunConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv") return {kExitInvalid, "unknown format: " + cfg.format + "\n"};
  try {
    if (cfg.command == "validate") return cmd_validate(cfg);
    if (cfg.command == "lattice") return cmd_lattice(cfg);
    if (cfg.command == "spectrum") return cmd_spectrum(cfg);
    if (cfg.command == "operators") return cmd_operators(cfg);
    if (cfg.command == "eigenbasis") return cmd_eigenbasis(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "classical") return cmd_classical(cfg);
    return {kExitInvalid, "unknown command: " + cfg.command + "\n"};
  } catch (const InvalidParameter& e) {
    json doc = detail::header(cfg);
    doc["valid"] = false;
    doc["error"] = e.what();
    return {kExitInvalid, cfg.format == "csv" ? std::string("error,") + e.what() + "\n" : doc.dump(2) + "\n"};
  } catch (const Error& e) {
    json doc = detail::header(cfg);
    doc["error"] = e.what();
    return {kExitFailure, cfg.format == "csv" ? std::string("error,") + e.what() + "\n" : doc.dump(2) + "\n"};
  }
}

}  // namespace rscd::cli
