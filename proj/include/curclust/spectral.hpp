#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "curclust/matrix.hpp"
#include "curclust/rng.hpp"

namespace curclust {

enum class LaplacianKind { random_walk, symmetric };

// Isolated vertices get their degree clamped to this value so the
// normalizations stay finite.
inline constexpr double kDegreeFloor = 1e-12;
inline constexpr double kGapFloor = 1e-12;

namespace detail {

inline Vector degrees(const Matrix& weights) {
    Vector d = weights.rowwise().sum();
    for (Index i = 0; i < d.size(); ++i) d(i) = std::max(d(i), kDegreeFloor);
    return d;
}

/// D^{-1/2} W D^{-1/2}, the symmetric matrix similar to D^{-1} W.
inline Matrix symmetric_normalized(const Matrix& weights) {
    const Vector d = degrees(weights);
    const Vector dinv_sqrt = d.cwiseSqrt().cwiseInverse();
    return dinv_sqrt.asDiagonal() * weights * dinv_sqrt.asDiagonal();
}

}  // namespace detail

inline Matrix laplacian(const Matrix& weights, LaplacianKind kind) {
    const Index n = weights.rows();
    if (kind == LaplacianKind::random_walk) {
        const Vector d = detail::degrees(weights);
        return Matrix::Identity(n, n) - d.cwiseInverse().asDiagonal() * weights;
    }
    return Matrix::Identity(n, n) - detail::symmetric_normalized(weights);
}

/// Eigenvalues of the random-walk Laplacian, ascending. Computed through the
/// similar symmetric form so the arithmetic stays real symmetric.
inline Vector random_walk_eigenvalues(const Matrix& weights) {
    const Index n = weights.rows();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix::Identity(n, n) -
                                             detail::symmetric_normalized(weights));
    return es.eigenvalues();
}

namespace detail {

/// Lloyd k-means on row vectors with greedy farthest-point seeding.
/// The first center is random; the rest maximize the distance to the
/// nearest chosen center (ties to the lowest index). Empty clusters are
/// reseeded with the point farthest from its current center.
inline std::pair<LabelVector, double> kmeans_once(const Matrix& points, int k, RandomStream& rng,
                                                  int max_iters) {
    const Index n = points.rows();
    Matrix centers(k, points.cols());
    std::vector<Index> seeds;
    seeds.push_back(static_cast<Index>(uniform_index(rng, static_cast<std::uint64_t>(n))));
    centers.row(0) = points.row(seeds[0]);
    Vector nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        Index far = 0;
        for (Index i = 1; i < n; ++i)
            if (nearest(i) > nearest(far)) far = i;
        centers.row(c) = points.row(far);
        seeds.push_back(far);
        const Vector d = (points.rowwise() - centers.row(c)).rowwise().squaredNorm();
        nearest = nearest.cwiseMin(d);
    }

    LabelVector labels(static_cast<size_t>(n), 0);
    Vector assigned_dist = Vector::Zero(n);
    for (int iter = 0; iter < max_iters; ++iter) {
        bool changed = false;
        for (Index i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (points.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (points.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            assigned_dist(i) = best_d;
            if (labels[static_cast<size_t>(i)] != best) {
                labels[static_cast<size_t>(i)] = best;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;

        Matrix sums = Matrix::Zero(k, points.cols());
        std::vector<Index> counts(static_cast<size_t>(k), 0);
        for (Index i = 0; i < n; ++i) {
            sums.row(labels[static_cast<size_t>(i)]) += points.row(i);
            ++counts[static_cast<size_t>(labels[static_cast<size_t>(i)])];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<size_t>(c)] > 0) {
                centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<size_t>(c)]);
            } else {
                Index far = 0;
                for (Index i = 1; i < n; ++i)
                    if (assigned_dist(i) > assigned_dist(far)) far = i;
                centers.row(c) = points.row(far);
                assigned_dist(far) = 0.0;
            }
        }
    }

    double inertia = 0.0;
    for (Index i = 0; i < n; ++i)
        inertia += (points.row(i) - centers.row(labels[static_cast<size_t>(i)])).squaredNorm();
    return {labels, inertia};
}

inline LabelVector kmeans(const Matrix& points, int k, RandomStream& rng, int restarts = 10,
                          int max_iters = 100) {
    LabelVector best;
    double best_inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        auto [labels, inertia] = kmeans_once(points, k, rng, max_iters);
        if (inertia < best_inertia) {
            best_inertia = inertia;
            best = std::move(labels);
        }
    }
    return best;
}

}  // namespace detail

/// Normalized spectral clustering: embed on the eigenvectors of L_sym with
/// the smallest eigenvalues, normalize the embedding rows (zero rows stay at
/// the origin), then k-means the rows.
inline LabelVector spectral_clustering(const Matrix& weights, int n_clusters, RandomStream& rng) {
    const Index n = weights.rows();
    if (n_clusters < 1) throw std::invalid_argument("spectral_clustering: need at least 1 cluster");
    if (n_clusters > n)
        throw std::invalid_argument("spectral_clustering: more clusters than data points");
    if (n_clusters == 1) return LabelVector(static_cast<size_t>(n), 0);

    Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(weights, LaplacianKind::symmetric));
    Matrix embedding = es.eigenvectors().leftCols(n_clusters);
    for (Index i = 0; i < n; ++i) {
        const double norm = embedding.row(i).norm();
        if (norm > 0.0) embedding.row(i) /= norm;
    }
    return detail::kmeans(embedding, n_clusters, rng);
}

/// Total cut of a labelled partition: sum over clusters A of
/// sum_{i in A, j not in A} w_ij (ordered pairs).
inline double cut_value(const Matrix& weights, const LabelVector& labels) {
    const Index n = weights.rows();
    if (static_cast<Index>(labels.size()) != n)
        throw std::invalid_argument("cut_value: labels length does not match matrix size");
    double total = 0.0;
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (labels[static_cast<size_t>(i)] != labels[static_cast<size_t>(j)])
                total += weights(i, j);
    return total;
}

/// Rank-selection cost: total cut divided by the spectral gap
/// |lambda_{r+1} - lambda_r| of the random-walk Laplacian (eigenvalues
/// ascending, 1-indexed). A vanishing gap yields +infinity so the rank drops
/// out of the argmin.
inline double clustering_cost(const Matrix& weights, const LabelVector& labels, Index r) {
    const Index n = weights.rows();
    if (r + 1 > n)
        throw std::invalid_argument("clustering_cost: spectral gap at r needs r + 1 <= n");
    if (r < 1) throw std::invalid_argument("clustering_cost: r must be >= 1");
    const Vector eig = random_walk_eigenvalues(weights);
    const double gap = std::abs(eig(r) - eig(r - 1));
    if (gap < kGapFloor) return std::numeric_limits<double>::infinity();
    return cut_value(weights, labels) / gap;
}

/// Per-rank outcome of an RCUR sweep.
struct RankOutcome {
    Index rank = 0;
    double cost = 0.0;
    LabelVector labels;
};

struct CostReport {
    std::vector<RankOutcome> per_rank;
    Index best_rank = 0;
};

}  // namespace curclust
