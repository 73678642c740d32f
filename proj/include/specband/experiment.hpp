#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "specband/env.hpp"
#include "specband/io.hpp"
#include "specband/policies.hpp"
#include "specband/random.hpp"
#include "specband/spectral_basis.hpp"

namespace specband {

// Static work partition over [0, n) with an atomic cursor; the first worker
// exception aborts the remaining items and is rethrown on the caller.
inline void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  jobs = std::clamp(jobs, 1, n);
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&] {
      while (!failed.load(std::memory_order_relaxed)) {
        const int i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!err) err = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
  for (auto& t : workers) t.join();
  if (err) std::rethrow_exception(err);
}

struct MeanStderr {
  double mean = 0.0;
  double std_err = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& xs) {
  if (xs.empty()) throw ParamError("mean_stderr: empty sample");
  const int n = static_cast<int>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double var = n > 1 ? ss / (n - 1) : 0.0;
  return {mean, std::sqrt(var / n)};
}

inline std::vector<std::pair<std::string, std::string>> snapshot_config(
    const AlgoConfig& cfg, const EnvOptions& env) {
  std::vector<std::pair<std::string, std::string>> s;
  s.emplace_back("algorithm", to_string(cfg.algorithm));
  s.emplace_back("reg_lambda", format_double(cfg.reg_lambda));
  s.emplace_back("scale", format_double(cfg.scale));
  s.emplace_back("theoretical_scale", cfg.theoretical_scale ? "1" : "0");
  s.emplace_back("noise_bound", format_double(cfg.noise_bound));
  if (cfg.norm_bound) s.emplace_back("norm_bound", format_double(*cfg.norm_bound));
  s.emplace_back("failure_prob", format_double(cfg.failure_prob));
  s.emplace_back("horizon", std::to_string(cfg.horizon));
  s.emplace_back("lazy", cfg.lazy ? "1" : "0");
  s.emplace_back("k_nonzero", std::to_string(env.k_nonzero));
  s.emplace_back("magnitude", format_double(env.magnitude));
  s.emplace_back("rescale_unit_max", env.rescale_unit_max ? "1" : "0");
  s.emplace_back("clip", env.clip ? "1" : "0");
  return s;
}

inline RunRecord run_single(std::shared_ptr<const SpectralBasis> basis, const AlgoConfig& cfg,
                            const EnvOptions& env_opts, std::uint64_t env_seed,
                            std::uint64_t graph_hash = 0, const RunOptions& run_opts = {}) {
  EnvOptions eo = env_opts;
  eo.noise_bound = cfg.noise_bound;
  SmoothRewardEnv env(basis, eo, env_seed);
  auto policy = make_policy(basis, cfg);
  RunRecord rec = run(env, *policy, cfg.horizon, run_opts);
  rec.env_seed = env_seed;
  rec.algo_seed = cfg.seed;
  rec.graph_hash = graph_hash;
  rec.config_snapshot = snapshot_config(cfg, eo);
  return rec;
}

// A batch crosses algorithms with env seeds seed_lo..seed_hi (inclusive).
// Common random numbers: every algorithm sees the same env seed; the
// algorithm-side rng is derived from the env seed and the algorithm id.
struct BatchSpec {
  std::vector<AlgoConfig> algorithms;
  std::uint64_t seed_lo = 0;
  std::uint64_t seed_hi = 4;
  EnvOptions env;
  int jobs = 1;
  RunOptions run_opts;
  std::uint64_t graph_hash = 0;
};

inline std::vector<RunRecord> run_batch(std::shared_ptr<const SpectralBasis> basis,
                                        const BatchSpec& spec) {
  if (spec.algorithms.empty()) throw ParamError("batch: no algorithms");
  if (spec.seed_hi < spec.seed_lo) throw ParamError("batch: empty seed range");
  const long n_seeds = static_cast<long>(spec.seed_hi - spec.seed_lo + 1);
  const long n = static_cast<long>(spec.algorithms.size()) * n_seeds;
  std::vector<RunRecord> out(n);
  parallel_for(static_cast<int>(n), spec.jobs, [&](int i) {
    const std::size_t ai = static_cast<std::size_t>(i) / n_seeds;
    const std::uint64_t env_seed = spec.seed_lo + static_cast<std::uint64_t>(i % n_seeds);
    AlgoConfig cfg = spec.algorithms[ai];
    cfg.seed = derive_seed(env_seed, static_cast<std::uint64_t>(cfg.algorithm) + 1, 0xa190);
    out[i] = run_single(basis, cfg, spec.env, env_seed, spec.graph_hash, spec.run_opts);
  });
  return out;
}

struct SweepCell {
  double reg_lambda = 0.0;
  double scale = 0.0;
  double mean_regret = 0.0;
  double std_err = 0.0;
  int n_runs = 0;
};

struct SweepResult {
  std::vector<SweepCell> cells;  // lambdas outer, scales inner
  int best_index = 0;            // argmin of mean_regret, first on ties

  const SweepCell& best() const { return cells.at(best_index); }
};

// Grid search over (lambda, confidence scale) with common random numbers:
// run r uses the same env seed in every cell. The environment depends only
// on the eigenvectors, not on lambda, so envs match across cells exactly.
inline SweepResult sweep(const SpectralBasis& base_basis, const AlgoConfig& base_cfg,
                         const EnvOptions& env_opts, const std::vector<double>& lambdas,
                         const std::vector<double>& scales, int runs_per_cell,
                         std::uint64_t master_seed, int jobs = 1,
                         std::uint64_t graph_hash = 0) {
  if (lambdas.empty() || scales.empty()) throw ParamError("sweep: empty grid");
  if (runs_per_cell < 1) throw ParamError("sweep: need at least one run per cell");
  std::vector<std::shared_ptr<const SpectralBasis>> bases;
  bases.reserve(lambdas.size());
  for (double l : lambdas)
    bases.push_back(std::make_shared<SpectralBasis>(with_reg_lambda(base_basis, l)));
  const int n_cells = static_cast<int>(lambdas.size() * scales.size());
  SweepResult res;
  res.cells.resize(n_cells);
  parallel_for(n_cells, jobs, [&](int c) {
    const std::size_t li = static_cast<std::size_t>(c) / scales.size();
    const std::size_t si = static_cast<std::size_t>(c) % scales.size();
    AlgoConfig cfg = base_cfg;
    cfg.reg_lambda = lambdas[li];
    cfg.scale = scales[si];
    cfg.theoretical_scale = false;
    std::vector<double> finals;
    finals.reserve(runs_per_cell);
    for (int r = 0; r < runs_per_cell; ++r) {
      cfg.seed = derive_seed(master_seed, 0xA17000 + static_cast<std::uint64_t>(c), r);
      const std::uint64_t env_seed = derive_seed(master_seed, 0xE0, r);
      finals.push_back(
          run_single(bases[li], cfg, env_opts, env_seed, graph_hash).final_regret());
    }
    const MeanStderr ms = mean_stderr(finals);
    res.cells[c] = {lambdas[li], scales[si], ms.mean, ms.std_err, runs_per_cell};
  });
  for (int c = 1; c < n_cells; ++c)
    if (res.cells[c].mean_regret < res.cells[res.best_index].mean_regret) res.best_index = c;
  return res;
}

inline std::string run_csv(const RunRecord& rec) {
  std::string s = "t,arm,reward,inst_regret,cum_regret\n";
  for (const auto& r : rec.rounds) {
    s += std::to_string(r.t);
    s += ',';
    s += std::to_string(r.arm);
    s += ',';
    s += format_double(r.reward);
    s += ',';
    s += format_double(r.inst_regret);
    s += ',';
    s += format_double(r.cum_regret);
    s += '\n';
  }
  return s;
}

inline void write_run_csv(const RunRecord& rec, const std::string& path) {
  atomic_write_text(path, run_csv(rec));
}

inline void write_summary_csv(const std::vector<RunRecord>& recs, const std::string& path) {
  std::string s = "algorithm,seed,final_regret,wall_ms\n";
  for (const auto& r : recs) {
    s += r.algorithm;
    s += ',';
    s += std::to_string(r.env_seed);
    s += ',';
    s += format_double(r.final_regret());
    s += ',';
    s += format_double(r.wall_ms);
    s += '\n';
  }
  atomic_write_text(path, s);
}

inline void write_sweep_csv(const SweepResult& res, const std::string& path) {
  std::string s = "lambda,scale,mean_regret,stderr,n_runs\n";
  for (const auto& c : res.cells) {
    s += format_double(c.reg_lambda);
    s += ',';
    s += format_double(c.scale);
    s += ',';
    s += format_double(c.mean_regret);
    s += ',';
    s += format_double(c.std_err);
    s += ',';
    s += std::to_string(c.n_runs);
    s += '\n';
  }
  atomic_write_text(path, s);
}

}  // namespace specband
