#pragma once

// Global edge order from pairwise precedence: Borda aggregation, the
// score-order shortcut, and the pairwise-accuracy → ordering-error relation
// with its Monte Carlo check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include "netchron/error.hpp"
#include "netchron/graph.hpp"
#include "netchron/matrix.hpp"
#include "netchron/random.hpp"
#include "netchron/ranker.hpp"

namespace netchron {

enum class OrderingSource { FromScores, FromMatrix, GroundTruth };

constexpr std::string_view to_string(OrderingSource s) {
  switch (s) {
    case OrderingSource::FromScores: return "scores";
    case OrderingSource::FromMatrix: return "matrix";
    case OrderingSource::GroundTruth: return "ground-truth";
  }
  return "unknown";
}

struct GlobalOrdering {
  std::vector<double> borda_scores;
  std::vector<std::size_t> rank;  // 1-based position of each edge; 1 = earliest
  OrderingSource source = OrderingSource::FromScores;

  std::size_t size() const noexcept { return rank.size(); }

  /// Edge indices in predicted formation order.
  std::vector<EdgeId> sequence() const {
    std::vector<EdgeId> seq(rank.size());
    for (EdgeId e = 0; e < rank.size(); ++e) seq[rank[e] - 1] = e;
    return seq;
  }
};

/// Ranks by descending key, ties by ascending index.
inline std::vector<std::size_t> ranks_descending(std::span<const double> key) {
  std::vector<EdgeId> idx(key.size());
  for (EdgeId e = 0; e < idx.size(); ++e) idx[e] = e;
  std::stable_sort(idx.begin(), idx.end(), [&](EdgeId a, EdgeId b) { return key[a] > key[b]; });
  std::vector<std::size_t> rank(key.size());
  for (std::size_t pos = 0; pos < idx.size(); ++pos) rank[idx[pos]] = pos + 1;
  return rank;
}

inline GlobalOrdering ordering_from_sequence(std::span<const EdgeId> sequence,
                                             OrderingSource source) {
  validate_sequence(sequence, sequence.size());
  GlobalOrdering o;
  o.source = source;
  const std::size_t m = sequence.size();
  o.rank.resize(m);
  o.borda_scores.resize(m);
  for (std::size_t pos = 0; pos < m; ++pos) {
    o.rank[sequence[pos]] = pos + 1;
    // A perfect comparator wins against every later edge.
    o.borda_scores[sequence[pos]] = static_cast<double>(m - 1 - pos);
  }
  return o;
}

inline GlobalOrdering ground_truth_ordering(const TemporalNetwork& net) {
  const auto seq = ground_truth_sequence(net);
  return ordering_from_sequence(seq, OrderingSource::GroundTruth);
}

/// B[i] = Σ_{j≠i} P[i][j]; order by descending B, ties by edge index.
inline GlobalOrdering borda_aggregate(const Matrix& p) {
  if (p.rows() != p.cols()) throw Error(ErrorKind::InconsistentMatrix, "matrix must be square");
  const std::size_t m = p.rows();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (std::abs(p(i, j) + p(j, i) - 1.0) > 1e-9) {
        throw Error(ErrorKind::InconsistentMatrix,
                    "P[i][j] + P[j][i] != 1 at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  GlobalOrdering o;
  o.source = OrderingSource::FromMatrix;
  o.borda_scores.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) o.borda_scores[i] += p(i, j);
    }
  }
  o.rank = ranks_descending(o.borda_scores);
  return o;
}

/// Full pairwise matrix P[i][j] = softmax(z_i, z_j).
inline Matrix probability_matrix(std::span<const double> z) {
  Matrix p(z.size(), z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (i != j) p(i, j) = pair_probability(z[i], z[j]);
    }
  }
  return p;
}

/// Borda order for scores without materializing the M x M matrix. Since
/// B[i] = Σ_j softmax(z_i, z_j) is strictly increasing in z_i, the order is
/// the descending-score order; B itself is accumulated in O(M) memory.
inline GlobalOrdering order_from_scores(std::span<const double> z) {
  GlobalOrdering o;
  o.source = OrderingSource::FromScores;
  const std::size_t m = z.size();
  o.borda_scores.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    double b = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j != i) b += pair_probability(z[i], z[j]);
    }
    o.borda_scores[i] = b;
  }
  o.rank = ranks_descending(z);
  return o;
}

struct TheoryPoint {
  double p = 1.0;
  std::size_t edges = 0;
  double expected_error = 0.0;
};

/// sqrt(p(1-p)/(2p-1)^2) / sqrt(M)
inline TheoryPoint theoretical_error(double p, std::size_t m) {
  if (!(p > 0.5 && p <= 1.0)) throw Error(ErrorKind::OutOfDomain, "p must lie in (0.5, 1]");
  if (m < 2) throw Error(ErrorKind::OutOfDomain, "M must be >= 2");
  const double q = 2.0 * p - 1.0;
  return {p, m, std::sqrt(p * (1.0 - p) / (q * q)) / std::sqrt(static_cast<double>(m))};
}

/// Worker count: hardware concurrency, capped by NETCHRON_THREADS.
inline std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NETCHRON_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

/// One synthetic trial: edges indexed in true order, one comparator outcome
/// per unordered pair (correct with probability p), u_i = wins / (M-1),
/// sort (random tie-break), RMSE of recovered vs true positions i/M.
inline double monte_carlo_trial(double p, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> wins(m, 0.0);  // number of edges predicted earlier than i
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      // True relation: j is later than i.
      const bool correct = uniform01(rng) < p;
      if (correct) {
        wins[j] += 1.0;
      } else {
        wins[i] += 1.0;
      }
    }
  }
  std::vector<double> jitter(m);
  for (auto& v : jitter) v = uniform01(rng);
  std::vector<std::size_t> idx(m);
  for (std::size_t i = 0; i < m; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (wins[a] != wins[b]) return wins[a] < wins[b];
    return jitter[a] < jitter[b];
  });
  const double md = static_cast<double>(m);
  double ss = 0.0;
  for (std::size_t pos = 0; pos < m; ++pos) {
    const double d = static_cast<double>(pos + 1) / md - static_cast<double>(idx[pos] + 1) / md;
    ss += d * d;
  }
  return std::sqrt(ss / md);
}

/// Mean RMSE over `trials`. Trial t uses a seed derived from (seed, t), so
/// the result does not depend on the worker count.
inline double monte_carlo_error(double p, std::size_t m, std::size_t trials, std::uint64_t seed) {
  if (!(p > 0.5 && p <= 1.0)) throw Error(ErrorKind::OutOfDomain, "p must lie in (0.5, 1]");
  if (m < 2 || trials < 1) throw Error(ErrorKind::OutOfDomain, "need M >= 2 and trials >= 1");
  std::vector<double> results(trials);
  const std::size_t workers = std::min(worker_count(), trials);
  auto run = [&](std::size_t w) {
    for (std::size_t t = w; t < trials; t += workers) {
      results[t] = monte_carlo_trial(p, m, derive_seed(seed, t));
    }
  };
  if (workers <= 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  double sum = 0.0;
  for (double r : results) sum += r;
  return sum / static_cast<double>(trials);
}

}  // namespace netchron
