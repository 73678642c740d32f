#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "specband/errors.hpp"
#include "specband/random.hpp"

namespace specband {

struct RatingTriple {
  int user;
  int item;
  double rating;
};

// Dense-indexed rating triples, sorted by (user, item), one rating per pair.
// user_ids / item_ids map dense indices back to the source file ids.
class RatingsTable {
 public:
  RatingsTable(int n_users, int n_items, std::vector<RatingTriple> triples)
      : RatingsTable(n_users, n_items, std::move(triples), identity_ids(n_users),
                     identity_ids(n_items)) {}

  RatingsTable(int n_users, int n_items, std::vector<RatingTriple> triples,
               std::vector<long> user_ids, std::vector<long> item_ids)
      : n_users_(n_users),
        n_items_(n_items),
        triples_(std::move(triples)),
        user_ids_(std::move(user_ids)),
        item_ids_(std::move(item_ids)) {
    if (n_users_ < 1 || n_items_ < 1) throw ParamError("ratings: empty dimension");
    if (static_cast<int>(user_ids_.size()) != n_users_ ||
        static_cast<int>(item_ids_.size()) != n_items_)
      throw ParamError("ratings: id map size mismatch");
    for (std::size_t i = 0; i < triples_.size(); ++i) {
      const auto& t = triples_[i];
      if (t.user < 0 || t.user >= n_users_ || t.item < 0 || t.item >= n_items_)
        throw ParamError("ratings: triple index out of range");
      if (!std::isfinite(t.rating)) throw ParamError("ratings: rating must be finite");
      if (i > 0) {
        const auto& p = triples_[i - 1];
        if (t.user < p.user || (t.user == p.user && t.item <= p.item))
          throw ParamError("ratings: triples must be sorted with one rating per (user, item)");
      }
    }
  }

  int num_users() const { return n_users_; }
  int num_items() const { return n_items_; }
  long num_ratings() const { return static_cast<long>(triples_.size()); }
  const std::vector<RatingTriple>& triples() const { return triples_; }
  const std::vector<long>& user_ids() const { return user_ids_; }
  const std::vector<long>& item_ids() const { return item_ids_; }

  // Same dimensions and id maps, different (already dense-indexed) triples.
  RatingsTable with_triples(std::vector<RatingTriple> triples) const {
    return RatingsTable(n_users_, n_items_, std::move(triples), user_ids_, item_ids_);
  }

 private:
  static std::vector<long> identity_ids(int n) {
    std::vector<long> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    return ids;
  }

  int n_users_;
  int n_items_;
  std::vector<RatingTriple> triples_;
  std::vector<long> user_ids_;
  std::vector<long> item_ids_;
};

// One triple per line: "user item rating" separated by whitespace or the
// "::" convention; a fourth field (timestamp) is ignored. Duplicate
// (user, item) pairs keep the first rating. Items below min_item_ratings and
// users below min_user_ratings are dropped alternately until a fixpoint,
// then indices are compacted in ascending source-id order.
inline RatingsTable load_ratings(const std::string& path, int min_item_ratings = 0,
                                 int min_user_ratings = 0) {
  if (min_item_ratings < 0 || min_user_ratings < 0)
    throw ParamError("ratings: thresholds must be >= 0");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ratings file: " + path);
  std::string line;
  long line_no = 0;
  std::map<std::pair<long, long>, double> first_seen;
  std::vector<std::pair<long, long>> order;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t pos;
    while ((pos = line.find("::")) != std::string::npos) line.replace(pos, 2, " ");
    std::istringstream ss(line);
    long user, item;
    double rating;
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!(ss >> user >> item >> rating) || !std::isfinite(rating))
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected 'user item rating'");
    const auto key = std::make_pair(user, item);
    if (first_seen.emplace(key, rating).second) order.push_back(key);
  }
  if (order.empty()) throw DataError(path + ": no ratings");

  std::map<long, long> user_count, item_count;
  for (const auto& k : order) {
    ++user_count[k.first];
    ++item_count[k.second];
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<std::pair<long, long>> kept;
    kept.reserve(order.size());
    for (const auto& k : order) {
      if (item_count[k.second] < min_item_ratings) {
        --user_count[k.first];
        changed = true;
      } else {
        kept.push_back(k);
      }
    }
    order.swap(kept);
    kept.clear();
    for (const auto& k : order) {
      if (user_count[k.first] < min_user_ratings) {
        --item_count[k.second];
        changed = true;
      } else {
        kept.push_back(k);
      }
    }
    order.swap(kept);
  }
  if (order.empty()) throw DataError(path + ": no ratings survive the thresholds");

  std::map<long, int> user_index, item_index;
  for (const auto& k : order) {
    user_index.emplace(k.first, 0);
    item_index.emplace(k.second, 0);
  }
  std::vector<long> user_ids, item_ids;
  for (auto& [id, idx] : user_index) {
    idx = static_cast<int>(user_ids.size());
    user_ids.push_back(id);
  }
  for (auto& [id, idx] : item_index) {
    idx = static_cast<int>(item_ids.size());
    item_ids.push_back(id);
  }
  std::vector<RatingTriple> triples;
  triples.reserve(order.size());
  for (const auto& k : order)
    triples.push_back({user_index[k.first], item_index[k.second], first_seen[k]});
  std::sort(triples.begin(), triples.end(), [](const RatingTriple& a, const RatingTriple& b) {
    return a.user != b.user ? a.user < b.user : a.item < b.item;
  });
  const int n_users = static_cast<int>(user_ids.size());
  const int n_items = static_cast<int>(item_ids.size());
  return RatingsTable(n_users, n_items, std::move(triples), std::move(user_ids),
                      std::move(item_ids));
}

struct Factorization {
  Eigen::MatrixXd user_factors;  // u x r
  Eigen::MatrixXd item_factors;  // m x r
  int rank = 0;
  double train_rmse = 0.0;
  std::vector<double> rmse_history;  // observed-entry RMSE after each half-sweep
  // Regularized objective sum(err^2) + mu (|U|_F^2 + |V|_F^2) after each
  // half-sweep. Each half-sweep minimizes this exactly, so it never
  // increases; the plain RMSE may wiggle when a solve trades observed error
  // for smaller factor norms.
  std::vector<double> objective_history;
};

// Alternating ridge regressions on the observed entries. Item factors start
// uniform in [-0.5, 0.5]/sqrt(r); user factors are solved first, so the
// initial draw fully determines the result for a given seed.
inline Factorization als_factorize(const RatingsTable& table, int rank, double mu, int sweeps,
                                   std::uint64_t seed) {
  const int u = table.num_users();
  const int m = table.num_items();
  if (rank < 1 || rank > std::min(u, m))
    throw ParamError("als: rank must lie in [1, min(users, items)]");
  if (!(mu > 0.0)) throw ParamError("als: regularization must be positive");
  if (sweeps < 1) throw ParamError("als: need at least one sweep");

  std::vector<std::vector<std::pair<int, double>>> by_user(u), by_item(m);
  for (const auto& t : table.triples()) {
    by_user[t.user].emplace_back(t.item, t.rating);
    by_item[t.item].emplace_back(t.user, t.rating);
  }

  Factorization fact;
  fact.rank = rank;
  fact.user_factors = Eigen::MatrixXd::Zero(u, rank);
  fact.item_factors.resize(m, rank);
  Rng rng(derive_seed(seed, 0xA15));
  const double init_mag = 0.5 / std::sqrt(static_cast<double>(rank));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < rank; ++j) fact.item_factors(i, j) = rng.symmetric_uniform(init_mag);

  auto record_state = [&]() {
    double ss = 0.0;
    for (const auto& t : table.triples()) {
      const double e = t.rating - fact.user_factors.row(t.user).dot(fact.item_factors.row(t.item));
      ss += e * e;
    }
    fact.rmse_history.push_back(std::sqrt(ss / static_cast<double>(table.num_ratings())));
    fact.objective_history.push_back(ss + mu * (fact.user_factors.squaredNorm() +
                                                fact.item_factors.squaredNorm()));
  };
  auto solve_side = [&](Eigen::MatrixXd& target, const Eigen::MatrixXd& fixed,
                        const std::vector<std::vector<std::pair<int, double>>>& obs) {
    Eigen::MatrixXd A(rank, rank);
    Eigen::VectorXd b(rank);
    for (std::size_t i = 0; i < obs.size(); ++i) {
      A = mu * Eigen::MatrixXd::Identity(rank, rank);
      b.setZero();
      for (const auto& [j, r] : obs[i]) {
        A.noalias() += fixed.row(j).transpose() * fixed.row(j);
        b.noalias() += r * fixed.row(j).transpose();
      }
      target.row(i) = A.llt().solve(b).transpose();
    }
  };

  for (int s = 0; s < sweeps; ++s) {
    solve_side(fact.user_factors, fact.item_factors, by_user);
    record_state();
    solve_side(fact.item_factors, fact.user_factors, by_item);
    record_state();
  }
  fact.train_rmse = fact.rmse_history.back();
  return fact;
}

// Predicted payoff of every item for one user: V u_i.
inline Eigen::VectorXd user_reward_vector(const Factorization& fact, int user) {
  if (user < 0 || user >= fact.user_factors.rows())
    throw ParamError("ratings: user index out of range");
  return fact.item_factors * fact.user_factors.row(user).transpose();
}

// Uniformly random partition into three near-equal disjoint parts sharing
// the parent's dimensions and id maps.
inline std::array<RatingsTable, 3> three_way_split(const RatingsTable& table,
                                                   std::uint64_t seed) {
  const long n = table.num_ratings();
  if (n < 3) throw ParamError("split: need at least three ratings");
  std::vector<long> perm(n);
  for (long i = 0; i < n; ++i) perm[i] = i;
  Rng rng(derive_seed(seed, 0x3511));
  for (long i = n - 1; i > 0; --i) {
    const long j = static_cast<long>(rng.uniform_int(0, i));
    std::swap(perm[i], perm[j]);
  }
  const long q = n / 3;
  const long r = n % 3;
  const std::array<long, 3> sizes = {q + (r > 0 ? 1 : 0), q + (r > 1 ? 1 : 0), q};
  std::array<std::vector<RatingTriple>, 3> parts;
  long at = 0;
  for (int p = 0; p < 3; ++p) {
    parts[p].reserve(sizes[p]);
    for (long i = 0; i < sizes[p]; ++i) parts[p].push_back(table.triples()[perm[at++]]);
    std::sort(parts[p].begin(), parts[p].end(),
              [](const RatingTriple& a, const RatingTriple& b) {
                return a.user != b.user ? a.user < b.user : a.item < b.item;
              });
  }
  return {table.with_triples(std::move(parts[0])), table.with_triples(std::move(parts[1])),
          table.with_triples(std::move(parts[2]))};
}

}  // namespace specband
