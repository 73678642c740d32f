#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "specband/env.hpp"
#include "specband/generate.hpp"
#include "specband/policies.hpp"
#include "specband/random.hpp"
#include "specband/spectral_basis.hpp"

using namespace specband;

namespace {

std::shared_ptr<const SpectralBasis> shared_basis(const WeightedGraph& g, double lambda,
                                                  int L = 0) {
  return std::make_shared<SpectralBasis>(eigendecompose(g, lambda, L));
}

AlgoConfig config(AlgorithmId id, double lambda, double scale, long T,
                  std::uint64_t seed = 0) {
  AlgoConfig cfg;
  cfg.algorithm = id;
  cfg.reg_lambda = lambda;
  cfg.scale = scale;
  cfg.horizon = T;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("algorithm names round-trip") {
  for (auto id : {AlgorithmId::kSpectralUcb, AlgorithmId::kSpectralTs,
                  AlgorithmId::kSpectralEliminator, AlgorithmId::kLinUcb, AlgorithmId::kLinTs,
                  AlgorithmId::kLinEliminator})
    CHECK(parse_algorithm(to_string(id)) == id);
  CHECK_THROWS_AS(parse_algorithm("ucb"), ParamError);
  CHECK(is_linear(AlgorithmId::kLinTs));
  CHECK_FALSE(is_linear(AlgorithmId::kSpectralTs));
}

TEST_CASE("config validation") {
  AlgoConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.reg_lambda = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
  cfg = AlgoConfig{};
  cfg.scale = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
  cfg = AlgoConfig{};
  cfg.failure_prob = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
  cfg = AlgoConfig{};
  cfg.horizon = 0;
  CHECK_THROWS_AS(cfg.validate(), ParamError);
}

TEST_CASE("theoretical constants match direct evaluation of the closed forms") {
  // UCB: R=0.05, C=1, delta=0.05, d=8, T=100, K=1, lambda=0.01
  const double c = theoretical_ucb_scale(0.05, 1.0, 0.05, 100, 1, 0.01, 8);
  const double c_direct =
      0.05 * std::sqrt(2.0 * 8.0 * std::log(1.0 + 100.0 / (1.0 * 0.01)) +
                       8.0 * std::log(1.0 / 0.05)) +
      1.0;
  CHECK(c == Catch::Approx(c_direct).epsilon(1e-12));

  const double v = theoretical_ts_scale(0.05, 1.0, 0.05, 100, 2, 0.1, 6);
  const double v_direct =
      0.05 * std::sqrt(3.0 * 6.0 * std::log(1.0 / 0.05 + 100.0 / (0.05 * 0.1 * 2.0))) + 1.0;
  CHECK(v == Catch::Approx(v_direct).epsilon(1e-12));

  const double beta = theoretical_eliminator_scale(0.05, 1.0, 0.05, 100, 250);
  const double beta_direct =
      0.05 * std::sqrt(std::log(2.0 * 250.0 * (1.0 + std::log2(100.0)) / 0.05)) + 1.0;
  CHECK(beta == Catch::Approx(beta_direct).epsilon(1e-12));
}

TEST_CASE("theoretical scale is wired into policies and requires the norm bound") {
  const WeightedGraph g = generate_er(12, 0.4, 2);
  const auto basis = shared_basis(g, 0.1);
  AlgoConfig cfg = config(AlgorithmId::kSpectralUcb, 0.1, 0.0, 50);
  cfg.theoretical_scale = true;
  CHECK_THROWS_AS(make_policy(basis, cfg), ParamError);
  cfg.norm_bound = 1.5;
  const auto policy = make_policy(basis, cfg);
  const int d = policy->effective_dim();
  CHECK(policy->scale() ==
        Catch::Approx(theoretical_ucb_scale(cfg.noise_bound, 1.5, cfg.failure_prob, 50,
                                            basis->n_components, 0.1, d)));
}

TEST_CASE("symmetric two-arm instance breaks the initial tie toward arm 0") {
  const WeightedGraph g(2, {{0, 1, 1.0}});
  const auto basis = shared_basis(g, 0.1);
  for (bool lazy : {false, true}) {
    AlgoConfig cfg = config(AlgorithmId::kSpectralUcb, 0.1, 1.0, 10);
    cfg.lazy = lazy;
    const auto policy = make_policy(basis, cfg);
    CHECK(policy->select_arm() == 0);
  }
}

TEST_CASE("c=0 plays greedily against the seeded estimate") {
  const WeightedGraph g = generate_er(9, 0.5, 4);
  const auto basis = shared_basis(g, 0.2);
  AlgoConfig cfg = config(AlgorithmId::kSpectralUcb, 0.2, 0.0, 20);
  const auto policy = make_policy(basis, cfg);
  Rng rng(5);
  Eigen::VectorXd alpha(9);
  for (int i = 0; i < 9; ++i) alpha[i] = rng.uniform(-1.0, 1.0);
  policy->mutable_state().seed_estimate(alpha);
  const Eigen::VectorXd f = basis->eigenvectors * alpha;
  int expect = 0;
  for (int a = 1; a < 9; ++a)
    if (f[a] > f[expect]) expect = a;
  CHECK(policy->select_arm() == expect);
}

TEST_CASE("ucb selection equals the brute-force reference on a 10-arm instance") {
  const WeightedGraph g = generate_er(10, 0.4, 6);
  const auto basis = shared_basis(g, 0.3);
  const double c = 0.9;
  for (bool lazy : {false, true}) {
    AlgoConfig cfg = config(AlgorithmId::kSpectralUcb, 0.3, c, 40);
    cfg.lazy = lazy;
    const auto policy = make_policy(basis, cfg);
    EllipsoidState reference(basis->reg_eigenvalues);
    Rng noise(7);
    for (int t = 0; t < 40; ++t) {
      const int want = select_arm_ucb(reference, basis->eigenvectors, c);
      const int got = policy->select_arm();
      CHECK(got == want);
      const double reward = noise.uniform(-1.0, 1.0);
      policy->observe(got, reward);
      reference.update(basis->eigenvectors.row(got).transpose(), reward);
    }
  }
}

TEST_CASE("lazy and exhaustive ucb agree over 200 rounds") {
  const WeightedGraph g = generate_er(30, 0.2, 11);
  const auto basis = shared_basis(g, 0.1);
  for (std::uint64_t seed : {3ull, 4ull}) {
    AlgoConfig lazy_cfg = config(AlgorithmId::kSpectralUcb, 0.1, 0.7, 200, seed);
    lazy_cfg.lazy = true;
    AlgoConfig ex_cfg = lazy_cfg;
    ex_cfg.lazy = false;
    const auto lazy = make_policy(basis, lazy_cfg);
    const auto ex = make_policy(basis, ex_cfg);
    SmoothRewardEnv env_a(basis, EnvOptions{}, seed);
    SmoothRewardEnv env_b(basis, EnvOptions{}, seed);
    for (int t = 0; t < 200; ++t) {
      const int a = lazy->select_arm();
      const int b = ex->select_arm();
      REQUIRE(a == b);
      lazy->observe(a, env_a.pull(a));
      ex->observe(b, env_b.pull(b));
    }
  }
}

TEST_CASE("thompson sampling is deterministic per seed") {
  const WeightedGraph g = generate_er(14, 0.3, 21);
  const auto basis = shared_basis(g, 0.1);
  const AlgoConfig cfg = config(AlgorithmId::kSpectralTs, 0.1, 0.5, 60, 99);
  const auto p1 = make_policy(basis, cfg);
  const auto p2 = make_policy(basis, cfg);
  EnvOptions eo;
  eo.k_nonzero = 7;
  SmoothRewardEnv e1(basis, eo, 1);
  SmoothRewardEnv e2(basis, eo, 1);
  for (int t = 0; t < 60; ++t) {
    const int a = p1->select_arm();
    const int b = p2->select_arm();
    REQUIRE(a == b);
    p1->observe(a, e1.pull(a));
    p2->observe(b, e2.pull(b));
  }
}

TEST_CASE("thompson sampling with v=0 is greedy") {
  const WeightedGraph g = generate_er(11, 0.4, 23);
  const auto basis = shared_basis(g, 0.1);
  const auto policy = make_policy(basis, config(AlgorithmId::kSpectralTs, 0.1, 0.0, 10, 1));
  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(11);
  alpha[1] = 1.0;
  policy->mutable_state().seed_estimate(alpha);
  const Eigen::VectorXd f = basis->eigenvectors * alpha;
  int expect = 0;
  for (int a = 1; a < 11; ++a)
    if (f[a] > f[expect]) expect = a;
  CHECK(policy->select_arm() == expect);
}

TEST_CASE("lin-ucb equals spectral-ucb run on the flattened spectrum") {
  const WeightedGraph g = generate_er(16, 0.3, 31);
  const auto basis = shared_basis(g, 0.4);
  const auto flat = std::make_shared<SpectralBasis>(with_flat_spectrum(*basis));
  AlgoConfig lin_cfg = config(AlgorithmId::kLinUcb, 0.4, 0.8, 80);
  AlgoConfig spec_cfg = config(AlgorithmId::kSpectralUcb, 0.4, 0.8, 80);
  const auto lin = make_policy(basis, lin_cfg);
  const auto spec = make_policy(flat, spec_cfg);
  EnvOptions eo;
  eo.k_nonzero = 8;
  SmoothRewardEnv e1(basis, eo, 5);
  SmoothRewardEnv e2(basis, eo, 5);
  for (int t = 0; t < 80; ++t) {
    const int a = lin->select_arm();
    const int b = spec->select_arm();
    REQUIRE(a == b);
    lin->observe(a, e1.pull(a));
    spec->observe(b, e2.pull(b));
  }
}

TEST_CASE("eliminator phase starts double") {
  CHECK(SpectralEliminatorPolicy::eliminator_phase_starts(10) ==
        std::vector<long>{1, 2, 4, 8});
  CHECK(SpectralEliminatorPolicy::eliminator_phase_starts(1) == std::vector<long>{1});
  CHECK(SpectralEliminatorPolicy::eliminator_phase_starts(16) ==
        std::vector<long>{1, 2, 4, 8, 16});
}

TEST_CASE("a single arm is never eliminated and earns zero regret without noise") {
  const auto basis = shared_basis(WeightedGraph::empty(1), 0.1);
  AlgoConfig cfg = config(AlgorithmId::kSpectralEliminator, 0.1, 1.0, 32);
  const auto policy = make_policy(basis, cfg);
  Eigen::VectorXd alpha(1);
  alpha << 0.5;
  SmoothRewardEnv env(basis, alpha, 0.0, 0);
  const RunRecord rec = run(env, *policy, 32);
  CHECK(rec.final_regret() == 0.0);
  const auto* elim = dynamic_cast<const SpectralEliminatorPolicy*>(policy.get());
  REQUIRE(elim != nullptr);
  CHECK(elim->active_count() == 1);
}

TEST_CASE("eliminator drops the suboptimal arm of a separated noise-free pair") {
  const WeightedGraph g(2, {{0, 1, 1.0}});
  const auto basis = shared_basis(g, 0.1);
  Eigen::VectorXd f(2);
  f << 0.2, 1.0;
  const Eigen::VectorXd alpha = basis->eigenvectors.transpose() * f;
  AlgoConfig cfg = config(AlgorithmId::kSpectralEliminator, 0.1, 0.05, 64);
  const auto policy = make_policy(basis, cfg);
  SmoothRewardEnv env(basis, alpha, 0.0, 0);
  REQUIRE(env.best_arm() == 1);
  const RunRecord rec = run(env, *policy, 64);
  const auto* elim = dynamic_cast<const SpectralEliminatorPolicy*>(policy.get());
  REQUIRE(elim != nullptr);
  CHECK(elim->active()[1] == 1);
  CHECK(elim->active()[0] == 0);
  // after elimination every pull hits the best arm
  CHECK(rec.rounds.back().inst_regret == 0.0);
}

TEST_CASE("log-det bound is positive and satisfied on a short run") {
  const WeightedGraph g = generate_ba(25, 2, 3, 3);
  const auto basis = shared_basis(g, 0.2);
  AlgoConfig cfg = config(AlgorithmId::kSpectralUcb, 0.2, 1.0, 50);
  const auto policy = make_policy(basis, cfg);
  CHECK(policy->log_det_bound() > 0.0);
  SmoothRewardEnv env(basis, EnvOptions{}, 2);
  RunOptions opts;
  opts.check_invariants = true;
  CHECK_NOTHROW(run(env, *policy, 50, opts));
  CHECK(policy->state().log_det_ratio() <= policy->log_det_bound() + 1e-6);
  CHECK(policy->rounds_played() == 50);
}

TEST_CASE("make_policy honors the config lambda over the basis lambda") {
  const WeightedGraph g = generate_er(8, 0.5, 13);
  const auto basis = shared_basis(g, 0.1);
  const auto policy = make_policy(basis, config(AlgorithmId::kSpectralUcb, 2.5, 1.0, 10));
  // prior V must be Lambda + 2.5 I on the diagonal
  CHECK(policy->state().V()(0, 0) == Catch::Approx(2.5));
}
