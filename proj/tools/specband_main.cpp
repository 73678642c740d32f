#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specband/specband.hpp"

namespace fs = std::filesystem;
using namespace specband;

namespace {

std::vector<double> parse_double_list(const std::string& csv, const std::string& flag) {
  std::vector<double> out;
  std::size_t at = 0;
  while (at <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', at), csv.size());
    const std::string tok = csv.substr(at, comma - at);
    if (tok.empty()) throw ParamError(flag + ": empty entry in list '" + csv + "'");
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParamError(flag + ": cannot parse '" + tok + "' as a number");
    }
    at = comma + 1;
  }
  return out;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& s) {
  const auto parse_one = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ParamError("--seeds: cannot parse '" + tok + "' in range '" + s + "'");
    }
  };
  const std::size_t dots = s.find("..");
  if (dots == std::string::npos) {
    const std::uint64_t v = parse_one(s);
    return {v, v};
  }
  const auto lo = parse_one(s.substr(0, dots));
  const auto hi = parse_one(s.substr(dots + 2));
  if (hi < lo) throw ParamError("--seeds: empty range '" + s + "'");
  return {lo, hi};
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

void start_manifest(std::vector<std::pair<std::string, std::string>>& m,
                    const std::string& command) {
  m.emplace_back("command", command);
  m.emplace_back("version", kVersion);
}

void add_graph_keys(std::vector<std::pair<std::string, std::string>>& m,
                    const WeightedGraph& g) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(g.content_hash()));
  m.emplace_back("graph_hash", hash);
  m.emplace_back("n_nodes", std::to_string(g.num_nodes()));
  m.emplace_back("n_edges", std::to_string(g.num_edges()));
}

struct GenOpts {
  std::string model = "er";
  int n = 500;
  double p = 0.005;
  int m = 2;
  int k0 = 3;
  int K = 0;
  int M = 0;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_gen_graph(const GenOpts& o, bool n_given) {
  std::optional<WeightedGraph> g;
  if (o.model == "er") {
    g = generate_er(o.n, o.p, o.seed);
  } else if (o.model == "ba") {
    g = generate_ba(o.n, o.m, o.k0, o.seed);
  } else if (o.model == "lattice") {
    g = generate_lattice(o.n);
  } else if (o.model == "blocks") {
    if (o.K < 1 || o.M < 1) throw ParamError("blocks: --K and --M are required");
    if (n_given && o.n != o.K * o.M)
      throw ParamError("blocks: --n contradicts --K * --M");
    g = generate_blocks(o.K, o.M);
  } else {
    throw ParamError("unknown model: " + o.model + " (er, ba, lattice, blocks)");
  }
  save_graph(*g, o.out);
  std::vector<std::pair<std::string, std::string>> m;
  start_manifest(m, "gen-graph");
  m.emplace_back("model", o.model);
  m.emplace_back("seed", std::to_string(o.seed));
  add_graph_keys(m, *g);
  write_manifest(m, o.out + ".manifest");
  std::printf("nodes=%d edges=%ld components=%d\n", g->num_nodes(), g->num_edges(),
              g->component_count());
}

struct EffdimOpts {
  std::string graph;
  long T = 100;
  double lambda = 0.1;
  int L = 0;
  bool waterfill = false;
};

void cmd_effdim(const EffdimOpts& o) {
  const WeightedGraph g = load_graph(o.graph);
  const SpectralBasis basis = eigendecompose(g, o.lambda, o.L);
  const EffDimInput in = EffDimInput::from_basis(basis, o.T);
  const int d = effective_dimension(in);
  const int d_old = old_effective_dimension(in);
  const WaterfillResult wf = waterfill(in);
  std::printf("d=%d d_old=%d omega=%d\n", d, d_old, wf.omega);
  if (o.waterfill) {
    std::printf("index,reg_eigenvalue,allocation\n");
    for (int i = 0; i < in.reg_eigenvalues.size(); ++i)
      std::printf("%d,%s,%s\n", i, format_double(in.reg_eigenvalues[i]).c_str(),
                  format_double(wf.allocation[i]).c_str());
  }
}

struct BasisOpts {
  std::string graph;
  double lambda = 0.1;
  int L = 0;
  bool vectors = false;
  std::string out;
};

void cmd_basis(const BasisOpts& o) {
  const WeightedGraph g = load_graph(o.graph);
  const SpectralBasis basis = eigendecompose(g, o.lambda, o.L);
  std::string s = "index,eigenvalue,reg_eigenvalue\n";
  for (int i = 0; i < basis.basis_size(); ++i) {
    s += std::to_string(i);
    s += ',';
    s += format_double(basis.eigenvalues[i]);
    s += ',';
    s += format_double(basis.reg_eigenvalues[i]);
    s += '\n';
  }
  atomic_write_text(join_path(o.out, "eigenvalues.csv"), s);
  if (o.vectors) {
    std::string v;
    v.reserve(static_cast<std::size_t>(basis.num_arms()) * basis.basis_size() * 8);
    v += "node";
    for (int j = 0; j < basis.basis_size(); ++j) {
      v += ",q";
      v += std::to_string(j);
    }
    v += '\n';
    for (int i = 0; i < basis.num_arms(); ++i) {
      v += std::to_string(i);
      for (int j = 0; j < basis.basis_size(); ++j) {
        v += ',';
        v += format_double(basis.eigenvectors(i, j));
      }
      v += '\n';
    }
    atomic_write_text(join_path(o.out, "eigenvectors.csv"), v);
  }
  std::vector<std::pair<std::string, std::string>> m;
  start_manifest(m, "basis");
  m.emplace_back("graph", o.graph);
  add_graph_keys(m, g);
  m.emplace_back("lambda", format_double(o.lambda));
  m.emplace_back("L", std::to_string(basis.basis_size()));
  m.emplace_back("n_components", std::to_string(basis.n_components));
  write_manifest(m, join_path(o.out, "manifest.txt"));
}

struct SimOpts {
  std::string graph;
  std::string algos = "spectral-ucb";
  long T = 100;
  double lambda = 0.1;
  double scale = 1.0;
  bool theoretical = false;
  double R = 0.05;
  double C = -1.0;
  double delta = 0.05;
  std::string seeds = "0..4";
  int L = 0;
  bool lazy = false;
  int jobs = 1;
  bool check_invariants = false;
  int k_nonzero = 20;
  double magnitude = 1.0;
  bool no_rescale = false;
  bool clip = false;
  std::uint64_t env_master = 0;  // unused for simulate; env seeds come from --seeds
  std::string out;
};

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::size_t at = 0;
  while (at <= csv.size()) {
    const std::size_t comma = std::min(csv.find(',', at), csv.size());
    out.push_back(csv.substr(at, comma - at));
    at = comma + 1;
  }
  return out;
}

AlgoConfig base_config(const SimOpts& o, AlgorithmId id) {
  AlgoConfig cfg;
  cfg.algorithm = id;
  cfg.reg_lambda = o.lambda;
  cfg.scale = o.scale;
  cfg.theoretical_scale = o.theoretical;
  cfg.noise_bound = o.R;
  if (o.C >= 0.0) cfg.norm_bound = o.C;
  cfg.failure_prob = o.delta;
  cfg.horizon = o.T;
  cfg.lazy = o.lazy;
  cfg.validate();
  return cfg;
}

void add_sim_keys(std::vector<std::pair<std::string, std::string>>& m, const SimOpts& o) {
  m.emplace_back("graph", o.graph);
  m.emplace_back("T", std::to_string(o.T));
  m.emplace_back("lambda", format_double(o.lambda));
  m.emplace_back("R", format_double(o.R));
  if (o.C >= 0.0) m.emplace_back("C", format_double(o.C));
  m.emplace_back("delta", format_double(o.delta));
  m.emplace_back("L", std::to_string(o.L));
  m.emplace_back("k_nonzero", std::to_string(o.k_nonzero));
  m.emplace_back("magnitude", format_double(o.magnitude));
  m.emplace_back("rescale", o.no_rescale ? "0" : "1");
  m.emplace_back("clip", o.clip ? "1" : "0");
  m.emplace_back("lazy", o.lazy ? "1" : "0");
  m.emplace_back("jobs", std::to_string(o.jobs));
}

std::shared_ptr<const SpectralBasis> make_cli_basis(const WeightedGraph& g, double lambda,
                                                    int L, int k_nonzero) {
  if (L != 0 && L < k_nonzero)
    throw ParamError("basis truncated below k_nonzero (need --L >= --k-nonzero)");
  return std::make_shared<SpectralBasis>(eigendecompose(g, lambda, L));
}

void cmd_simulate(const SimOpts& o) {
  const WeightedGraph g = load_graph(o.graph);
  const auto basis = make_cli_basis(g, o.lambda, o.L, o.k_nonzero);
  const auto [lo, hi] = parse_seed_range(o.seeds);
  BatchSpec spec;
  for (const auto& name : split_names(o.algos))
    spec.algorithms.push_back(base_config(o, parse_algorithm(name)));
  spec.seed_lo = lo;
  spec.seed_hi = hi;
  spec.env.k_nonzero = o.k_nonzero;
  spec.env.magnitude = o.magnitude;
  spec.env.noise_bound = o.R;
  spec.env.rescale_unit_max = !o.no_rescale;
  spec.env.clip = o.clip;
  spec.jobs = o.jobs;
  spec.run_opts.check_invariants = o.check_invariants;
  spec.graph_hash = g.content_hash();
  const std::vector<RunRecord> records = run_batch(basis, spec);
  for (const auto& rec : records)
    write_run_csv(rec, join_path(o.out, "run_" + rec.algorithm + "_" +
                                            std::to_string(rec.env_seed) + ".csv"));
  write_summary_csv(records, join_path(o.out, "summary.csv"));
  std::vector<std::pair<std::string, std::string>> m;
  start_manifest(m, "simulate");
  m.emplace_back("algos", o.algos);
  m.emplace_back("seeds", o.seeds);
  m.emplace_back("scale", format_double(o.scale));
  m.emplace_back("theoretical", o.theoretical ? "1" : "0");
  m.emplace_back("check_invariants", o.check_invariants ? "1" : "0");
  add_sim_keys(m, o);
  add_graph_keys(m, g);
  write_manifest(m, join_path(o.out, "manifest.txt"));
  for (const auto& rec : records)
    std::printf("%s seed=%llu final_regret=%s\n", rec.algorithm.c_str(),
                static_cast<unsigned long long>(rec.env_seed),
                format_double(rec.final_regret()).c_str());
}

struct SweepOpts {
  SimOpts sim;
  std::string lambdas = "0.001,0.01,0.1,1";
  std::string scales = "0.01,0.1,1";
  int runs = 5;
  std::uint64_t seed = 0;
};

void cmd_sweep(const SweepOpts& o) {
  const WeightedGraph g = load_graph(o.sim.graph);
  const std::vector<double> lambdas = parse_double_list(o.lambdas, "--lambdas");
  const std::vector<double> scales = parse_double_list(o.scales, "--scales");
  for (double l : lambdas)
    if (!(l > 0.0)) throw ParamError("--lambdas: entries must be positive");
  const auto names = split_names(o.sim.algos);
  if (names.size() != 1) throw ParamError("sweep: exactly one --algo");
  const double lambda0 = *std::min_element(lambdas.begin(), lambdas.end());
  SimOpts base = o.sim;
  base.lambda = lambda0;
  const auto basis = make_cli_basis(g, lambda0, o.sim.L, o.sim.k_nonzero);
  AlgoConfig cfg = base_config(base, parse_algorithm(names[0]));
  EnvOptions env;
  env.k_nonzero = o.sim.k_nonzero;
  env.magnitude = o.sim.magnitude;
  env.noise_bound = o.sim.R;
  env.rescale_unit_max = !o.sim.no_rescale;
  env.clip = o.sim.clip;
  const SweepResult res = sweep(*basis, cfg, env, lambdas, scales, o.runs, o.seed,
                                o.sim.jobs, g.content_hash());
  write_sweep_csv(res, join_path(o.sim.out, "sweep.csv"));
  std::vector<std::pair<std::string, std::string>> m;
  start_manifest(m, "sweep");
  m.emplace_back("algo", names[0]);
  m.emplace_back("lambdas", o.lambdas);
  m.emplace_back("scales", o.scales);
  m.emplace_back("runs", std::to_string(o.runs));
  m.emplace_back("seed", std::to_string(o.seed));
  add_sim_keys(m, o.sim);
  add_graph_keys(m, g);
  write_manifest(m, join_path(o.sim.out, "manifest.txt"));
  const SweepCell& best = res.best();
  std::printf("best lambda=%s scale=%s mean_regret=%s stderr=%s\n",
              format_double(best.reg_lambda).c_str(), format_double(best.scale).c_str(),
              format_double(best.mean_regret).c_str(), format_double(best.std_err).c_str());
}

struct IngestOpts {
  std::string ratings;
  int min_item_ratings = 0;
  int min_user_ratings = 0;
  int rank = 10;
  double mu = 0.1;
  int sweeps = 30;
  int knn = 5;
  int users = 0;  // 0 keeps every user
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_ingest(const IngestOpts& o) {
  const RatingsTable table = load_ratings(o.ratings, o.min_item_ratings, o.min_user_ratings);
  const auto parts = three_way_split(table, o.seed);
  const RatingsTable& model_part = parts[0];
  const RatingsTable& tuning_part = parts[1];
  const RatingsTable& graph_part = parts[2];
  const Factorization fact_model =
      als_factorize(model_part, o.rank, o.mu, o.sweeps, derive_seed(o.seed, 1));
  const Factorization fact_graph =
      als_factorize(graph_part, o.rank, o.mu, o.sweeps, derive_seed(o.seed, 2));
  const WeightedGraph g = knn_graph(fact_graph.item_factors, o.knn);
  save_graph(g, join_path(o.out, "graph.txt"));

  std::vector<int> users(table.num_users());
  for (int i = 0; i < table.num_users(); ++i) users[i] = i;
  if (o.users > 0 && o.users < table.num_users()) {
    Rng rng(derive_seed(o.seed, 3));
    for (int i = 0; i < o.users; ++i) {
      const int j = static_cast<int>(
          rng.uniform_int(i, static_cast<std::int64_t>(users.size()) - 1));
      std::swap(users[i], users[j]);
    }
    users.resize(o.users);
    std::sort(users.begin(), users.end());
  }
  std::string rewards = "user,item,reward\n";
  for (int u : users) {
    const Eigen::VectorXd f = user_reward_vector(fact_model, u);
    for (int j = 0; j < f.size(); ++j) {
      rewards += std::to_string(u);
      rewards += ',';
      rewards += std::to_string(j);
      rewards += ',';
      rewards += format_double(f[j]);
      rewards += '\n';
    }
  }
  atomic_write_text(join_path(o.out, "rewards.csv"), rewards);

  std::string factors = "item";
  for (int j = 0; j < o.rank; ++j) {
    factors += ",f";
    factors += std::to_string(j);
  }
  factors += '\n';
  for (int i = 0; i < fact_graph.item_factors.rows(); ++i) {
    factors += std::to_string(i);
    for (int j = 0; j < o.rank; ++j) {
      factors += ',';
      factors += format_double(fact_graph.item_factors(i, j));
    }
    factors += '\n';
  }
  atomic_write_text(join_path(o.out, "factors.csv"), factors);

  std::vector<std::pair<std::string, std::string>> m;
  start_manifest(m, "ingest");
  m.emplace_back("ratings", o.ratings);
  m.emplace_back("min_item_ratings", std::to_string(o.min_item_ratings));
  m.emplace_back("min_user_ratings", std::to_string(o.min_user_ratings));
  m.emplace_back("rank", std::to_string(o.rank));
  m.emplace_back("mu", format_double(o.mu));
  m.emplace_back("sweeps", std::to_string(o.sweeps));
  m.emplace_back("knn", std::to_string(o.knn));
  m.emplace_back("users", std::to_string(static_cast<int>(users.size())));
  m.emplace_back("seed", std::to_string(o.seed));
  m.emplace_back("n_users", std::to_string(table.num_users()));
  m.emplace_back("n_items", std::to_string(table.num_items()));
  m.emplace_back("n_ratings", std::to_string(table.num_ratings()));
  m.emplace_back("model_ratings", std::to_string(model_part.num_ratings()));
  m.emplace_back("tuning_ratings", std::to_string(tuning_part.num_ratings()));
  m.emplace_back("graph_ratings", std::to_string(graph_part.num_ratings()));
  m.emplace_back("model_rmse", format_double(fact_model.train_rmse));
  m.emplace_back("graph_rmse", format_double(fact_graph.train_rmse));
  add_graph_keys(m, g);
  write_manifest(m, join_path(o.out, "manifest.txt"));
  std::printf("items=%d users=%d edges=%ld\n", table.num_items(),
              static_cast<int>(users.size()), g.num_edges());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph bandit toolkit: spectral and linear bandits on graph Laplacian bases"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* gen_cmd = app.add_subcommand("gen-graph", "Generate a graph file");
  gen_cmd->add_option("--model", gen.model, "er | ba | lattice | blocks")
      ->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "node count")->capture_default_str();
  gen_cmd->add_option("--p", gen.p, "er edge probability")->capture_default_str();
  gen_cmd->add_option("--m", gen.m, "ba edges per new node")->capture_default_str();
  gen_cmd->add_option("--k0", gen.k0, "ba initial core size")->capture_default_str();
  gen_cmd->add_option("--K", gen.K, "blocks: number of blocks");
  gen_cmd->add_option("--M", gen.M, "blocks: nodes per block");
  gen_cmd->add_option("--seed", gen.seed, "rng seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output graph file")->required();

  EffdimOpts eff;
  auto* eff_cmd = app.add_subcommand("effdim", "Effective dimension of a graph at a horizon");
  eff_cmd->add_option("--graph", eff.graph, "graph file")->required();
  eff_cmd->add_option("--T", eff.T, "horizon")->capture_default_str();
  eff_cmd->add_option("--lambda", eff.lambda, "regularization")->capture_default_str();
  eff_cmd->add_option("--L", eff.L, "basis truncation, 0 = full")->capture_default_str();
  eff_cmd->add_flag("--waterfill", eff.waterfill, "print the water-filling allocation");

  BasisOpts bas;
  auto* bas_cmd = app.add_subcommand("basis", "Eigendecompose a graph Laplacian");
  bas_cmd->add_option("--graph", bas.graph, "graph file")->required();
  bas_cmd->add_option("--lambda", bas.lambda, "regularization")->capture_default_str();
  bas_cmd->add_option("--L", bas.L, "basis truncation, 0 = full")->capture_default_str();
  bas_cmd->add_flag("--vectors", bas.vectors, "also write eigenvectors.csv");
  bas_cmd->add_option("--out", bas.out, "output directory")->required();

  SimOpts sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run bandit algorithms on a smooth env");
  sim_cmd->add_option("--graph", sim.graph, "graph file")->required();
  sim_cmd->add_option("--algo", sim.algos,
                      "comma list: spectral-ucb, spectral-ts, spectral-eliminator, lin-ucb, "
                      "lin-ts, lin-eliminator")
      ->capture_default_str();
  sim_cmd->add_option("--T", sim.T, "horizon")->capture_default_str();
  sim_cmd->add_option("--lambda", sim.lambda, "regularization")->capture_default_str();
  sim_cmd->add_option("--scale", sim.scale, "confidence scale (c, v, or beta)")
      ->capture_default_str();
  sim_cmd->add_flag("--theoretical", sim.theoretical,
                    "derive the confidence scale from (R, C, delta, T)");
  sim_cmd->add_option("--R", sim.R, "noise bound")->capture_default_str();
  sim_cmd->add_option("--C", sim.C, "norm bound (required with --theoretical)");
  sim_cmd->add_option("--delta", sim.delta, "failure probability")->capture_default_str();
  sim_cmd->add_option("--seeds", sim.seeds, "env seed range a..b")->capture_default_str();
  sim_cmd->add_option("--L", sim.L, "basis truncation, 0 = full")->capture_default_str();
  sim_cmd->add_flag("--lazy", sim.lazy, "lazy UCB evaluation");
  sim_cmd->add_option("--jobs", sim.jobs, "worker threads")->capture_default_str();
  sim_cmd->add_flag("--check-invariants", sim.check_invariants,
                    "assert log-det bound and inverse drift during runs");
  sim_cmd->add_option("--k-nonzero", sim.k_nonzero, "support size of the reward coefficients")
      ->capture_default_str();
  sim_cmd->add_option("--magnitude", sim.magnitude, "coefficient magnitude")
      ->capture_default_str();
  sim_cmd->add_flag("--no-rescale", sim.no_rescale, "keep raw coefficients, max |f| != 1");
  sim_cmd->add_flag("--clip", sim.clip, "clip rewards to [-1, 1]");
  sim_cmd->add_option("--out", sim.out, "output directory")->required();

  SweepOpts swp;
  auto* swp_cmd = app.add_subcommand("sweep", "Grid-search (lambda, scale) for one algorithm");
  swp_cmd->add_option("--graph", swp.sim.graph, "graph file")->required();
  swp_cmd->add_option("--algo", swp.sim.algos, "algorithm name")->capture_default_str();
  swp_cmd->add_option("--T", swp.sim.T, "horizon")->capture_default_str();
  swp_cmd->add_option("--lambdas", swp.lambdas, "comma list of lambda values")
      ->capture_default_str();
  swp_cmd->add_option("--scales", swp.scales, "comma list of confidence scales")
      ->capture_default_str();
  swp_cmd->add_option("--runs", swp.runs, "runs per grid cell")->capture_default_str();
  swp_cmd->add_option("--seed", swp.seed, "master seed")->capture_default_str();
  swp_cmd->add_option("--R", swp.sim.R, "noise bound")->capture_default_str();
  swp_cmd->add_option("--L", swp.sim.L, "basis truncation, 0 = full")->capture_default_str();
  swp_cmd->add_option("--jobs", swp.sim.jobs, "worker threads")->capture_default_str();
  swp_cmd->add_option("--k-nonzero", swp.sim.k_nonzero,
                      "support size of the reward coefficients")
      ->capture_default_str();
  swp_cmd->add_option("--magnitude", swp.sim.magnitude, "coefficient magnitude")
      ->capture_default_str();
  swp_cmd->add_flag("--no-rescale", swp.sim.no_rescale, "keep raw coefficients, max |f| != 1");
  swp_cmd->add_flag("--lazy", swp.sim.lazy, "lazy UCB evaluation");
  swp_cmd->add_option("--out", swp.sim.out, "output directory")->required();

  IngestOpts ing;
  auto* ing_cmd = app.add_subcommand("ingest", "Ratings -> rewards, factors, and a kNN graph");
  ing_cmd->add_option("--ratings", ing.ratings, "ratings file")->required();
  ing_cmd->add_option("--min-item-ratings", ing.min_item_ratings, "item threshold")
      ->capture_default_str();
  ing_cmd->add_option("--min-user-ratings", ing.min_user_ratings, "user threshold")
      ->capture_default_str();
  ing_cmd->add_option("--rank", ing.rank, "factorization rank")->capture_default_str();
  ing_cmd->add_option("--mu", ing.mu, "factorization ridge")->capture_default_str();
  ing_cmd->add_option("--sweeps", ing.sweeps, "ALS sweeps")->capture_default_str();
  ing_cmd->add_option("--knn", ing.knn, "neighbours per item")->capture_default_str();
  ing_cmd->add_option("--users", ing.users, "sampled user count, 0 = all")
      ->capture_default_str();
  ing_cmd->add_option("--seed", ing.seed, "rng seed")->capture_default_str();
  ing_cmd->add_option("--out", ing.out, "output directory")->required();

  gen_cmd->callback([&] { cmd_gen_graph(gen, gen_cmd->count("--n") > 0); });
  eff_cmd->callback([&] { cmd_effdim(eff); });
  bas_cmd->callback([&] { cmd_basis(bas); });
  sim_cmd->callback([&] { cmd_simulate(sim); });
  swp_cmd->callback([&] { cmd_sweep(swp); });
  ing_cmd->callback([&] { cmd_ingest(ing); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
