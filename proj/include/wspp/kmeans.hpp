#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace wspp {

/// Result of Lloyd's algorithm. Row c of `centroids` is cluster c.
template <typename Scalar>
struct ClusterModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix centroids;
  /// Share of points in each cluster (count / N).
  Vector probabilities;
  std::vector<int> counts;
  std::vector<int> labels;
  Scalar inertia = Scalar(0);
  /// Inertia after every assignment step, first entry from the seeded centroids.
  std::vector<Scalar> inertia_history;
  int iterations = 0;

  int k() const { return static_cast<int>(centroids.rows()); }
};

namespace detail {

template <typename Scalar, typename Points>
int nearest(const Points& points, Eigen::Index i,
            const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& centroids, Scalar& dist) {
  int best = 0;
  dist = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
    const Scalar d = (points.row(i) - centroids.row(c)).squaredNorm();
    if (d < dist) {
      dist = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

}  // namespace detail

/// k-means with k-means++ seeding. Rows of `points` are observations.
/// Ties in assignment go to the lowest cluster index. A cluster left empty
/// by an update is reseeded at the point farthest from its centroid; if all
/// points coincide with their centroids the cluster stays empty.
template <typename Scalar>
ClusterModel<Scalar> kmeans(const Eigen::Ref<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& points,
                            int k, std::uint64_t seed, int max_iter = 300) {
  using Model = ClusterModel<Scalar>;
  using Matrix = typename Model::Matrix;
  const Eigen::Index n = points.rows();
  const Eigen::Index dim = points.cols();
  if (k < 1) throw std::invalid_argument("kmeans needs k >= 1");
  if (k > n) {
    throw std::invalid_argument("kmeans k=" + std::to_string(k) + " exceeds " + std::to_string(n) +
                                " points");
  }
  if (max_iter < 1) throw std::invalid_argument("kmeans needs max_iter >= 1");
  if (!points.allFinite()) throw std::invalid_argument("kmeans points must be finite");

  std::mt19937_64 rng(seed);
  Matrix centroids(k, dim);
  std::vector<Scalar> d2(static_cast<std::size_t>(n), std::numeric_limits<Scalar>::infinity());
  std::vector<char> chosen(static_cast<std::size_t>(n), 0);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  Eigen::Index first = pick(rng);
  for (int c = 0; c < k; ++c) {
    Eigen::Index next = first;
    if (c > 0) {
      Scalar total = Scalar(0);
      for (Eigen::Index i = 0; i < n; ++i) total += d2[i];
      if (total > Scalar(0)) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Scalar target = static_cast<Scalar>(u(rng)) * total;
        next = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (d2[i] <= Scalar(0)) continue;
          next = i;
          target -= d2[i];
          if (target < Scalar(0)) break;
        }
      } else {
        // every point coincides with a centroid: take the first unused one
        next = 0;
        while (chosen[next]) ++next;
      }
    }
    chosen[next] = 1;
    centroids.row(c) = points.row(next);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Scalar d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < d2[i]) d2[i] = d;
    }
  }

  Model model;
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::vector<Scalar> dist(static_cast<std::size_t>(n));
  auto assign = [&](std::vector<int>& out) {
    Scalar inertia = Scalar(0);
    for (Eigen::Index i = 0; i < n; ++i) {
      out[i] = detail::nearest<Scalar>(points, i, centroids, dist[i]);
      inertia += dist[i];
    }
    return inertia;
  };
  model.inertia_history.push_back(assign(labels));

  std::vector<int> counts(static_cast<std::size_t>(k));
  std::vector<int> next_labels(static_cast<std::size_t>(n));
  for (int it = 0; it < max_iter; ++it) {
    centroids.setZero();
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      centroids.row(labels[i]) += points.row(i);
      ++counts[labels[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centroids.row(c) /= static_cast<Scalar>(counts[c]);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      Eigen::Index far = -1;
      Scalar far_dist = Scalar(0);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (counts[labels[i]] < 2) continue;
        const Scalar d = (points.row(i) - centroids.row(labels[i])).squaredNorm();
        if (d > far_dist) {
          far_dist = d;
          far = i;
        }
      }
      if (far < 0) continue;
      --counts[labels[far]];
      labels[far] = c;
      counts[c] = 1;
      centroids.row(c) = points.row(far);
    }
    model.iterations = it + 1;
    model.inertia_history.push_back(assign(next_labels));
    const bool stable = next_labels == labels;
    labels.swap(next_labels);
    if (stable) break;
  }

  std::fill(counts.begin(), counts.end(), 0);
  for (Eigen::Index i = 0; i < n; ++i) ++counts[labels[i]];
  model.centroids = std::move(centroids);
  model.counts = counts;
  model.probabilities.resize(k);
  for (int c = 0; c < k; ++c) model.probabilities(c) = static_cast<Scalar>(counts[c]) / static_cast<Scalar>(n);
  model.labels = std::move(labels);
  model.inertia = model.inertia_history.back();
  return model;
}

}  // namespace wspp
