// Command-line front end: certificate verification, feasibility reports,
// closed-loop experiments, scheme comparison and (T, N) sweeps.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "reachquant/config.hpp"
#include "reachquant/errors.hpp"
#include "reachquant/observer.hpp"
#include "reachquant/schemes.hpp"
#include "reachquant/sim.hpp"

namespace rq = reachquant;
namespace fs = std::filesystem;

namespace {

// Exit codes shared with the test suite.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCertificate = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitOverflow = 5;

struct Options {
  std::string config_path;
  std::string scheme;
  std::optional<std::uint64_t> seed;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::optional<double> dt;
  std::optional<double> horizon;
  bool paper_decoder = false;
  unsigned workers = 1;
  std::vector<double> sweep_T;
  std::vector<int> sweep_N;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string num17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string row_text(const rq::Mat& m, std::size_t i) {
  std::string out = "[";
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (j) out += ", ";
    out += num(m(i, j));
  }
  return out + "]";
}

rq::ExperimentConfig load_config(const Options& o) {
  rq::ExperimentConfig cfg = rq::ExperimentConfig::parse_file(o.config_path);

  if (o.scheme == "set")
    cfg.schemes = {rq::SchemeKind::SetBased};
  else if (o.scheme == "norm")
    cfg.schemes = {rq::SchemeKind::NormBased};
  else if (o.scheme == "both")
    cfg.schemes = {rq::SchemeKind::SetBased, rq::SchemeKind::NormBased};

  if (!o.seeds.empty()) cfg.seeds = o.seeds;
  if (o.seed) cfg.seeds = {*o.seed};
  if (o.dt) cfg.dt = *o.dt;
  if (o.horizon) cfg.horizon = *o.horizon;
  if (o.paper_decoder) cfg.decoder = rq::DecoderRange::Half;
  if (!o.sweep_T.empty()) cfg.sweep_T = o.sweep_T;
  if (!o.sweep_N.empty()) cfg.sweep_N = o.sweep_N;

  // Output directory precedence: flag, then environment, then config.
  if (!o.out.empty()) {
    cfg.out_dir = o.out;
  } else if (const char* env = std::getenv("REACHQUANT_OUT"); env && *env) {
    cfg.out_dir = env;
  }

  cfg.validate();
  return cfg;
}

rq::SimOptions sim_options(const rq::ExperimentConfig& cfg, std::uint64_t seed) {
  rq::SimOptions opts;
  opts.T = cfg.T;
  opts.horizon = cfg.horizon;
  opts.dt = cfg.dt;
  opts.seed = seed;
  opts.x0 = cfg.x0;
  opts.growth = cfg.growth;
  opts.decoder = cfg.decoder;
  return opts;
}

// Runs jobs 0..count-1 on up to `workers` threads; rethrows the first failed
// job (by index) so behavior does not depend on thread interleaving.
void run_jobs(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  const unsigned pool = std::min<unsigned>(workers, static_cast<unsigned>(count));
  if (pool <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (unsigned w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

int cmd_verify(const Options& o) {
  const rq::ExperimentConfig cfg = load_config(o);
  const rq::CertificateReport report = rq::verify_certificate(cfg.plant, cfg.cert);

  std::cout << "certificate check: " << (report.pass ? "PASS" : "FAIL") << "\n";
  std::cout << "  block form     " << report.form << "\n";
  std::cout << "  max eigenvalue " << num(report.max_eigenvalue) << " (tolerance "
            << num(report.tolerance) << ")\n";
  std::cout << "  lambda_min(P)  " << num(report.lambda_min_p) << "\n";
  std::cout << "  lambda_max(P)  " << num(report.lambda_max_p) << "\n";

  const std::size_t n = cfg.plant.state_dim();
  const std::size_t rank = cfg.plant.observability_rank();
  std::cout << "observability rank: " << rank << " / " << n;
  if (rank < n) std::cout << "  (warning: rank-deficient pair)";
  std::cout << "\n";

  if (!report.pass) return kExitCertificate;

  const rq::ObserverGains gains = rq::derive_gains(cfg.cert, cfg.plant);
  const rq::ErrorBounds eb(cfg.cert, gains, cfg.plant, cfg.bounds);
  std::cout << "derived gains and constants:\n";
  for (std::size_t i = 0; i < n; ++i)
    std::cout << "  K row " << i + 1 << "        " << row_text(gains.K, i) << "\n";
  std::cout << "  lambda_e       " << num(gains.lambda_e) << "\n";
  std::cout << "  decay factor   " << num(eb.condition_term()) << "  (sqrt(n lmax/lmin))\n";
  std::cout << "  gain factor    " << num(eb.gamma_gain()) << "  (disturbance-to-error)\n";
  std::cout << "  interval gain  " << num(eb.rec_gain()) << "  (reconstruction inputs)\n";
  std::cout << "  initial bound  " << num(eb.estimation_error_bound(0.0)) << "\n";
  return kExitOk;
}

struct MinimalLevels {
  int set_levels = -1;
  int norm_levels = -1;
};

MinimalLevels minimal_feasible_levels(const rq::Mat& a, double T) {
  MinimalLevels out;
  for (int n = 2; n <= 65536; ++n) {
    if (out.set_levels < 0 && rq::feasibility_set(a, T, n).feasible) out.set_levels = n;
    if (out.norm_levels < 0 && rq::feasibility_norm(a, T, n).feasible) out.norm_levels = n;
    if (out.set_levels > 0 && out.norm_levels > 0) break;
  }
  return out;
}

int cmd_feasibility(const Options& o) {
  const rq::ExperimentConfig cfg = load_config(o);
  const auto [set, norm] = rq::compare_schemes(cfg.plant.A, cfg.T, cfg.quantizer.levels);

  const auto line = [](const rq::FeasibilityReport& r, const char* expr) {
    std::cout << "  " << rq::scheme_name(r.scheme) << ": " << expr << " = " << num(r.lhs) << "  -> "
              << (r.feasible ? "feasible" : "infeasible") << " (margin " << num(r.margin) << ")\n";
  };
  std::cout << "feasibility at T = " << num(cfg.T) << ", N = " << cfg.quantizer.levels << "\n";
  line(set, "rho(|exp(A T)| / N)");
  line(norm, "exp(|A| T) / N");
  std::cout << "  dominance: set factor <= norm factor  -> "
            << (set.lhs <= norm.lhs + 1e-8 ? "holds" : "VIOLATED") << "\n";

  const MinimalLevels ml = minimal_feasible_levels(cfg.plant.A, cfg.T);
  std::cout << "minimal feasible N at this T: set " << ml.set_levels << ", norm "
            << ml.norm_levels << "\n";
  return kExitOk;
}

struct RunResult {
  rq::SchemeKind scheme = rq::SchemeKind::SetBased;
  std::uint64_t seed = 0;
  bool has_metrics = false;
  rq::SteadyState metrics;
  std::size_t encoded = 0;
  std::string trace_path;
};

RunResult execute_run(const rq::ExperimentConfig& cfg, rq::SchemeKind scheme, std::uint64_t seed,
                      bool write_files) {
  const rq::SimTrace trace = rq::run_closed_loop(cfg.plant, cfg.bounds, cfg.cert, cfg.quantizer,
                                                 scheme, cfg.signals, sim_options(cfg, seed));
  RunResult r;
  r.scheme = scheme;
  r.seed = seed;
  r.encoded = trace.encoded_count();
  if (r.encoded >= 8) {
    r.metrics = rq::steady_state_metrics(trace);
    r.has_metrics = true;
  }
  if (write_files) {
    const std::string stem =
        std::string(rq::scheme_name(scheme)) + "_seed" + std::to_string(seed);
    const fs::path trace_path = fs::path(cfg.out_dir) / ("trace_" + stem + ".csv");
    const fs::path packet_path = fs::path(cfg.out_dir) / ("packets_" + stem + ".bin");
    std::ofstream tf(trace_path, std::ios::binary);
    trace.write_csv(tf);
    if (!tf) throw std::runtime_error("cannot write " + trace_path.string());
    std::ofstream pf(packet_path, std::ios::binary);
    trace.write_packets(pf);
    if (!pf) throw std::runtime_error("cannot write " + packet_path.string());
    r.trace_path = trace_path.string();
  }
  return r;
}

void print_aggregates(const std::vector<RunResult>& results) {
  for (const rq::SchemeKind scheme : {rq::SchemeKind::SetBased, rq::SchemeKind::NormBased}) {
    std::vector<double> eqs, ers;
    for (const RunResult& r : results)
      if (r.scheme == scheme && r.has_metrics) {
        eqs.push_back(r.metrics.eq_inf);
        ers.push_back(r.metrics.er_inf);
      }
    if (eqs.empty()) continue;
    std::sort(eqs.begin(), eqs.end());
    std::sort(ers.begin(), ers.end());
    const auto agg = [](const std::vector<double>& v) {
      return "min " + num(v.front()) + " / median " + num(v[v.size() / 2]) + " / max " +
             num(v.back());
    };
    std::cout << "  " << rq::scheme_name(scheme) << ": eq_inf " << agg(eqs) << "; er_inf "
              << agg(ers) << "\n";
  }
}

int cmd_simulate(const Options& o) {
  const rq::ExperimentConfig cfg = load_config(o);
  fs::create_directories(cfg.out_dir);

  struct Job {
    rq::SchemeKind scheme;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const rq::SchemeKind scheme : cfg.schemes)
    for (const std::uint64_t seed : cfg.seeds) jobs.push_back({scheme, seed});

  std::vector<RunResult> results(jobs.size());
  run_jobs(jobs.size(), o.workers, [&](std::size_t i) {
    results[i] = execute_run(cfg, jobs[i].scheme, jobs[i].seed, true);
  });

  std::cout << "scheme  seed  transmissions  eq_inf      er_inf      trace\n";
  std::string summary_csv = "scheme,seed,transmissions,eq_inf,er_inf,trace\n";
  for (const RunResult& r : results) {
    const std::string eq = r.has_metrics ? num(r.metrics.eq_inf) : "n/a";
    const std::string er = r.has_metrics ? num(r.metrics.er_inf) : "n/a";
    char line[512];
    std::snprintf(line, sizeof line, "%-7s %-5llu %-14zu %-11s %-11s %s\n",
                  rq::scheme_name(r.scheme), static_cast<unsigned long long>(r.seed), r.encoded,
                  eq.c_str(), er.c_str(), r.trace_path.c_str());
    std::cout << line;
    summary_csv += std::string(rq::scheme_name(r.scheme)) + "," + std::to_string(r.seed) + "," +
                   std::to_string(r.encoded) + "," +
                   (r.has_metrics ? num17(r.metrics.eq_inf) : "") + "," +
                   (r.has_metrics ? num17(r.metrics.er_inf) : "") + "," + r.trace_path + "\n";
  }
  std::cout << "aggregates over seeds:\n";
  print_aggregates(results);

  const fs::path summary_path = fs::path(cfg.out_dir) / "summary.csv";
  std::ofstream sf(summary_path, std::ios::binary);
  sf << summary_csv;
  if (!sf) throw std::runtime_error("cannot write " + summary_path.string());
  std::cout << "summary written to " << summary_path.string() << "\n";
  return kExitOk;
}

int cmd_compare(const Options& o) {
  rq::ExperimentConfig cfg = load_config(o);
  cfg.schemes = {rq::SchemeKind::SetBased, rq::SchemeKind::NormBased};

  const auto [set_rep, norm_rep] = rq::compare_schemes(cfg.plant.A, cfg.T, cfg.quantizer.levels);
  std::cout << "contraction factors: set " << num(set_rep.lhs) << ", norm " << num(norm_rep.lhs)
            << "\n";

  std::vector<RunResult> set_runs(cfg.seeds.size()), norm_runs(cfg.seeds.size());
  run_jobs(cfg.seeds.size() * 2, o.workers, [&](std::size_t i) {
    const std::size_t s = i / 2;
    if (i % 2 == 0)
      set_runs[s] = execute_run(cfg, rq::SchemeKind::SetBased, cfg.seeds[s], false);
    else
      norm_runs[s] = execute_run(cfg, rq::SchemeKind::NormBased, cfg.seeds[s], false);
  });

  std::cout << "seed   eq_inf(set)  eq_inf(norm)  er_inf(set)  er_inf(norm)  ordering\n";
  std::size_t eq_ordered = 0, er_ordered = 0, usable = 0;
  for (std::size_t s = 0; s < cfg.seeds.size(); ++s) {
    const RunResult& a = set_runs[s];
    const RunResult& b = norm_runs[s];
    if (!a.has_metrics || !b.has_metrics) continue;
    ++usable;
    const bool eq_ok = a.metrics.eq_inf < b.metrics.eq_inf;
    const bool er_ok = a.metrics.er_inf < b.metrics.er_inf;
    eq_ordered += eq_ok;
    er_ordered += er_ok;
    char line[256];
    std::snprintf(line, sizeof line, "%-6llu %-12s %-13s %-12s %-13s %s\n",
                  static_cast<unsigned long long>(cfg.seeds[s]), num(a.metrics.eq_inf).c_str(),
                  num(b.metrics.eq_inf).c_str(), num(a.metrics.er_inf).c_str(),
                  num(b.metrics.er_inf).c_str(), eq_ok && er_ok ? "set < norm" : "mixed");
    std::cout << line;
  }
  std::vector<RunResult> all;
  all.insert(all.end(), set_runs.begin(), set_runs.end());
  all.insert(all.end(), norm_runs.begin(), norm_runs.end());
  std::cout << "aggregates over seeds:\n";
  print_aggregates(all);
  std::cout << "set below norm: eq_inf " << eq_ordered << "/" << usable << " seeds, er_inf "
            << er_ordered << "/" << usable << " seeds\n";
  return kExitOk;
}

int cmd_sweep(const Options& o) {
  const rq::ExperimentConfig cfg = load_config(o);
  if (cfg.sweep_T.empty() || cfg.sweep_N.empty())
    throw rq::ConfigError("sweep needs sweep_T and sweep_N (config keys or --sweep-T/--sweep-N)");
  for (const double T : cfg.sweep_T) {
    const double ratio = T / cfg.dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0)
      throw rq::ConfigError("sweep_T entry " + num(T) + " is not a multiple of dt");
  }
  fs::create_directories(cfg.out_dir);

  struct Cell {
    double T;
    int levels;
    rq::FeasibilityReport set, norm;
    std::string eq_set, er_set, note_set;
    std::string eq_norm, er_norm, note_norm;
  };
  std::vector<Cell> cells;
  for (const double T : cfg.sweep_T)
    for (const int levels : cfg.sweep_N) cells.push_back({T, levels, {}, {}, "", "", "", "", "", ""});

  run_jobs(cells.size(), o.workers, [&](std::size_t i) {
    Cell& cell = cells[i];
    cell.set = rq::feasibility_set(cfg.plant.A, cell.T, cell.levels);
    cell.norm = rq::feasibility_norm(cfg.plant.A, cell.T, cell.levels);

    rq::ExperimentConfig local = cfg;
    local.T = cell.T;
    local.quantizer = rq::QuantizerConfig::from_levels(cell.levels, cfg.plant.state_dim());

    const auto run_cell = [&](rq::SchemeKind scheme, const rq::FeasibilityReport& feas,
                              std::string& eq, std::string& er, std::string& note) {
      if (!feas.feasible) return;
      try {
        const RunResult r = execute_run(local, scheme, cfg.seeds.front(), false);
        if (r.has_metrics) {
          eq = num17(r.metrics.eq_inf);
          er = num17(r.metrics.er_inf);
        } else {
          note = "short-trace";
        }
      } catch (const rq::QuantizerOverflow&) {
        note = "overflow";
      }
    };
    run_cell(rq::SchemeKind::SetBased, cell.set, cell.eq_set, cell.er_set, cell.note_set);
    run_cell(rq::SchemeKind::NormBased, cell.norm, cell.eq_norm, cell.er_norm, cell.note_norm);
  });

  std::string csv =
      "T,N,lhs_set,feasible_set,lhs_norm,feasible_norm,"
      "eq_inf_set,er_inf_set,note_set,eq_inf_norm,er_inf_norm,note_norm\n";
  std::size_t feasible_set = 0, feasible_norm = 0;
  for (const Cell& cell : cells) {
    feasible_set += cell.set.feasible;
    feasible_norm += cell.norm.feasible;
    csv += num17(cell.T) + "," + std::to_string(cell.levels) + "," + num17(cell.set.lhs) + "," +
           (cell.set.feasible ? "1" : "0") + "," + num17(cell.norm.lhs) + "," +
           (cell.norm.feasible ? "1" : "0") + "," + cell.eq_set + "," + cell.er_set + "," +
           cell.note_set + "," + cell.eq_norm + "," + cell.er_norm + "," + cell.note_norm + "\n";
  }
  const fs::path path = fs::path(cfg.out_dir) / "sweep.csv";
  std::ofstream f(path, std::ios::binary);
  f << csv;
  if (!f) throw std::runtime_error("cannot write " + path.string());

  std::cout << "sweep grid " << cfg.sweep_T.size() << " x " << cfg.sweep_N.size() << " ("
            << cells.size() << " cells): set feasible in " << feasible_set << ", norm feasible in "
            << feasible_norm << "\n";
  std::cout << "sweep written to " << path.string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Remote state estimation over a finite-rate channel: dynamic quantization "
      "feasibility checks, observer verification and closed-loop experiments"};
  app.require_subcommand(1);

  Options o;
  const auto add_common = [&](CLI::App* sub, bool run_flags) {
    sub->add_option("--config", o.config_path, "experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    if (!run_flags) return;
    sub->add_option("--scheme", o.scheme, "override scheme selection")
        ->check(CLI::IsMember({"set", "norm", "both"}));
    auto* seed = sub->add_option("--seed", o.seed, "single seed override");
    sub->add_option("--seeds", o.seeds, "seed list override")->delimiter(',')->excludes(seed);
    sub->add_option("--out", o.out, "output directory (overrides REACHQUANT_OUT and config)");
    sub->add_option("--dt", o.dt, "integration step override")->check(CLI::PositiveNumber);
    sub->add_option("--horizon", o.horizon, "horizon override")->check(CLI::PositiveNumber);
    sub->add_flag("--paper-decoder", o.paper_decoder,
                  "use the historical half-range decoder variant");
    sub->add_option("--workers", o.workers, "parallel runs")->check(CLI::Range(1u, 64u));
  };

  CLI::App* verify = app.add_subcommand("verify", "check the certificate, print derived constants");
  add_common(verify, false);
  CLI::App* feas = app.add_subcommand("feasibility", "report both scheme conditions at (T, N)");
  add_common(feas, false);
  CLI::App* simulate = app.add_subcommand("simulate", "run experiments, write traces and summary");
  add_common(simulate, true);
  CLI::App* compare = app.add_subcommand("compare", "run both schemes and compare steady errors");
  add_common(compare, true);
  CLI::App* sweep = app.add_subcommand("sweep", "grid of (T, N) cells with feasibility and errors");
  add_common(sweep, true);
  sweep->add_option("--sweep-T", o.sweep_T, "transmission intervals to sweep")->delimiter(',');
  sweep->add_option("--sweep-N", o.sweep_N, "level counts to sweep")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (feas->parsed()) return cmd_feasibility(o);
    if (simulate->parsed()) return cmd_simulate(o);
    if (compare->parsed()) return cmd_compare(o);
    if (sweep->parsed()) return cmd_sweep(o);
  } catch (const rq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const rq::CertificateError& e) {
    std::cerr << "certificate error: " << e.what() << "\n";
    return kExitCertificate;
  } catch (const rq::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const rq::QuantizerOverflow& e) {
    std::cerr << "overflow fault: " << e.what() << "\n";
    return kExitOverflow;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
