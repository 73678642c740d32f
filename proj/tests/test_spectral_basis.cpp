#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <Eigen/Dense>

#include "specband/effective_dimension.hpp"
#include "specband/generate.hpp"
#include "specband/graph.hpp"
#include "specband/random.hpp"
#include "specband/spectral_basis.hpp"

using namespace specband;

TEST_CASE("P2 basis at lambda 0.1") {
  const WeightedGraph g(2, {{0, 1, 1.0}});
  const SpectralBasis b = eigendecompose(g, 0.1);
  REQUIRE(b.basis_size() == 2);
  CHECK(b.eigenvalues[0] == 0.0);
  CHECK(b.eigenvalues[1] == Catch::Approx(2.0));
  CHECK(b.reg_eigenvalues[0] == Catch::Approx(0.1));
  CHECK(b.reg_eigenvalues[1] == Catch::Approx(2.1));
  CHECK(b.n_components == 1);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(b.eigenvectors(0, 0) == Catch::Approx(s));
  CHECK(b.eigenvectors(1, 0) == Catch::Approx(s));
  CHECK(b.eigenvectors(0, 1) == Catch::Approx(s));
  CHECK(b.eigenvectors(1, 1) == Catch::Approx(-s));
  CHECK(b.arm_feature(1).size() == 2);
  CHECK(b.arm_feature(1)[1] == Catch::Approx(-s));
  CHECK_THROWS_AS(b.arm_feature(2), ParamError);
}

TEST_CASE("blocks eigenvalues are 0 with multiplicity K and M with multiplicity (M-1)K") {
  const int K = 3, M = 4;
  const WeightedGraph g = generate_blocks(K, M);
  const SpectralBasis b = eigendecompose(g, 0.01);
  REQUIRE(b.basis_size() == K * M);
  CHECK(b.n_components == K);
  for (int i = 0; i < K; ++i) CHECK(b.eigenvalues[i] == 0.0);  // snapped exactly
  for (int i = K; i < K * M; ++i) CHECK(b.eigenvalues[i] == Catch::Approx(M).margin(1e-9));
}

TEST_CASE("ER(20, 0.3) basis satisfies residual and orthonormality bounds") {
  const WeightedGraph g = generate_er(20, 0.3, 17);
  const Eigen::MatrixXd L = build_laplacian(g);
  const SpectralBasis b = eigendecompose(g, 0.5);
  const int n = b.basis_size();
  REQUIRE(n == 20);
  const Eigen::MatrixXd gram =
      b.eigenvectors.transpose() * b.eigenvectors - Eigen::MatrixXd::Identity(n, n);
  CHECK(gram.cwiseAbs().maxCoeff() <= 1e-8);
  for (int k = 0; k < n; ++k) {
    const double resid = (L * b.eigenvectors.col(k) - b.eigenvalues[k] * b.eigenvectors.col(k))
                             .norm();
    CHECK(resid <= 1e-6 * std::max(1.0, b.eigenvalues[k]));
  }
  CHECK(std::abs(b.eigenvalues[0]) <= 1e-8 * std::max(1.0, b.eigenvalues[n - 1]));
  CHECK(b.reg_eigenvalues[0] == 0.5);
  for (int k = 1; k < n; ++k) CHECK(b.eigenvalues[k] >= b.eigenvalues[k - 1]);
}

TEST_CASE("truncation keeps the smallest eigenpairs") {
  const WeightedGraph g = generate_er(15, 0.4, 3);
  const SpectralBasis full = eigendecompose(g, 0.1);
  const SpectralBasis cut = eigendecompose(g, 0.1, 6);
  REQUIRE(cut.basis_size() == 6);
  CHECK(cut.truncated());
  CHECK_FALSE(full.truncated());
  CHECK((cut.eigenvalues - full.eigenvalues.head(6)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cut.eigenvectors - full.eigenvectors.leftCols(6)).cwiseAbs().maxCoeff() == 0.0);
  const SpectralBasis cut2 = truncate_basis(full, 6);
  CHECK((cut2.eigenvalues - cut.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((cut2.eigenvectors - cut.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK(cut2.n_components == 1);
  CHECK_THROWS_AS(truncate_basis(full, 0), ParamError);
  CHECK_THROWS_AS(truncate_basis(full, 16), ParamError);
}

TEST_CASE("decomposition is deterministic including signs") {
  const WeightedGraph g = generate_ba(40, 2, 3, 5);
  const SpectralBasis a = eigendecompose(g, 0.2);
  const SpectralBasis b = eigendecompose(g, 0.2);
  CHECK((a.eigenvectors - b.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  // sign convention: the largest-magnitude entry of each column is positive
  for (int k = 0; k < a.basis_size(); ++k) {
    Eigen::Index which;
    a.eigenvectors.col(k).cwiseAbs().maxCoeff(&which);
    CHECK(a.eigenvectors(which, k) > 0.0);
  }
}

TEST_CASE("with_reg_lambda changes only the regularized spectrum") {
  const WeightedGraph g = generate_er(12, 0.4, 9);
  const SpectralBasis a = eigendecompose(g, 0.1);
  const SpectralBasis b = with_reg_lambda(a, 2.0);
  CHECK(b.reg_lambda == 2.0);
  CHECK((b.eigenvalues - a.eigenvalues).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b.eigenvectors - a.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b.reg_eigenvalues - (a.eigenvalues.array() + 2.0).matrix()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK_THROWS_AS(with_reg_lambda(a, 0.0), ParamError);
}

TEST_CASE("flat spectrum turns the penalty into a plain ridge") {
  const WeightedGraph g = generate_er(12, 0.4, 9);
  const SpectralBasis a = eigendecompose(g, 0.7);
  const SpectralBasis flat = with_flat_spectrum(a);
  CHECK(flat.eigenvalues.isZero(0.0));
  CHECK((flat.reg_eigenvalues.array() == 0.7).all());
  CHECK(flat.n_components == flat.basis_size());
  CHECK((flat.eigenvectors - a.eigenvectors).cwiseAbs().maxCoeff() == 0.0);
  // flat penalty: lambda_norm = sqrt(lambda) * two-norm
  Eigen::VectorXd alpha = Eigen::VectorXd::Random(12);
  CHECK(lambda_norm(alpha, flat) == Catch::Approx(std::sqrt(0.7) * alpha.norm()));
}

TEST_CASE("eigendecompose validates parameters") {
  const WeightedGraph g(2, {{0, 1, 1.0}});
  CHECK_THROWS_AS(eigendecompose(g, 0.0), ParamError);
  CHECK_THROWS_AS(eigendecompose(g, -1.0), ParamError);
  CHECK_THROWS_AS(eigendecompose(g, 0.1, 3), ParamError);
  CHECK_THROWS_AS(eigendecompose(build_laplacian(g), 0.1, 0, 3), ParamError);
  CHECK_THROWS_AS(eigendecompose(Eigen::MatrixXd::Zero(2, 3), 0.1, 0, 1), ParamError);
}

TEST_CASE("lambda-norm of projected rewards equals smoothness plus ridge") {
  Rng rng(31);
  const WeightedGraph g = generate_er(25, 0.25, 13);
  const double lambda = 0.3;
  const SpectralBasis b = eigendecompose(g, lambda);
  Eigen::VectorXd f(25);
  for (int i = 0; i < f.size(); ++i) f[i] = rng.uniform(-2.0, 2.0);
  const Eigen::VectorXd alpha = b.eigenvectors.transpose() * f;
  const double lhs = lambda_norm(alpha, b);
  const double rhs = std::sqrt(smoothness(g, f) + lambda * f.squaredNorm());
  CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
}
