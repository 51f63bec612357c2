#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "curclust/linalg.hpp"
#include "curclust/matrix.hpp"
#include "curclust/rng.hpp"
#include "curclust/sampling.hpp"
#include "curclust/spectral.hpp"

namespace curclust {

/// Plain matrix power by repeated multiplication (p >= 1).
inline Matrix matrix_power(const Matrix& m, Index p) {
    if (p < 1) throw std::invalid_argument("matrix_power: p must be >= 1");
    Matrix out = m;
    for (Index i = 1; i < p; ++i) out = out * m;
    return out;
}

/// Shape interaction matrix abs(V_r V_r^T), raised to the matrix power p.
/// p = 1 is the classical SVD similarity; larger p propagates within-subspace
/// connectivity along paths.
inline Matrix shape_interaction(const Matrix& x, Index r, Index p = 1) {
    require_nonempty(x, "shape_interaction");
    if (r < 1 || r > std::min(x.rows(), x.cols()))
        throw std::invalid_argument("shape_interaction: r out of range");
    auto svd = detail::thin_svd(x);
    const Matrix vr = svd.matrixV().leftCols(r);
    return matrix_power((vr * vr.transpose()).cwiseAbs(), p);
}

/// One CUR similarity trial (Algorithm lines: U = D(I,J), R = D(I,:),
/// Y = U^dagger R, columns of Y normalized in l2, return Y^T Y).
inline Matrix trial_similarity(const Matrix& d, const IndexList& row_indices,
                               const IndexList& col_indices) {
    require_nonempty(d, "trial_similarity");
    validate_index_set(row_indices, d.rows(), "trial_similarity rows");
    validate_index_set(col_indices, d.cols(), "trial_similarity cols");
    const Matrix u = select_submatrix(d, row_indices, col_indices);
    const Matrix r = select_rows(d, row_indices);
    Matrix y = pseudoinverse(u) * r;
    for (Index j = 0; j < y.cols(); ++j) {
        const double norm = y.col(j).norm();
        if (norm > 0.0) y.col(j) /= norm;
    }
    return y.transpose() * y;
}

/// Entrywise median across trials, absolute value, then the entrywise
/// soft-threshold power tau. An even trial count takes the mean of the two
/// middle values.
inline Matrix aggregate_and_threshold(const std::vector<Matrix>& trials, double tau) {
    if (trials.empty()) throw std::invalid_argument("aggregate_and_threshold: no trials");
    if (tau < 1.0) throw std::invalid_argument("aggregate_and_threshold: tau must be >= 1");
    const Index n_rows = trials.front().rows();
    const Index n_cols = trials.front().cols();
    for (const Matrix& t : trials)
        if (t.rows() != n_rows || t.cols() != n_cols)
            throw std::invalid_argument("aggregate_and_threshold: trial shape mismatch");

    const size_t n = trials.size();
    std::vector<double> vals(n);
    Matrix out(n_rows, n_cols);
    for (Index i = 0; i < n_rows; ++i) {
        for (Index j = 0; j < n_cols; ++j) {
            for (size_t t = 0; t < n; ++t) vals[t] = trials[t](i, j);
            const size_t mid = n / 2;
            std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
            double med = vals[mid];
            if (n % 2 == 0) {
                const double lower = *std::max_element(vals.begin(), vals.begin() + mid);
                med = 0.5 * (med + lower);
            }
            out(i, j) = std::pow(std::abs(med), tau);
        }
    }
    return out;
}

/// Infinite kappa means "take all columns".
inline constexpr double kAllColumns = std::numeric_limits<double>::infinity();

struct RcurConfig {
    Index r_min = 1;
    Index r_max = 1;
    double kappa = kAllColumns;  // columns per rank guess: min(n, ceil(kappa * r))
    Index trials = 30;
    double tau = 2.0;
    Index power = 1;
    int clusters = 1;
    SamplingSpec row_spec{SamplingMethod::uniform, Axis::rows, 0, false};
    SamplingSpec col_spec{SamplingMethod::uniform, Axis::cols, 0, false};
    std::uint64_t seed = 0;

    void validate(Index m, Index n) const {
        if (r_min < 1 || r_min > r_max) throw std::invalid_argument("rcur: need 1 <= r_min <= r_max");
        if (r_max > m) throw std::invalid_argument("rcur: r_max exceeds row count, cannot select r distinct rows");
        if (r_max + 1 > n)
            throw std::invalid_argument("rcur: cost gap at r_max needs r_max + 1 <= column count");
        if (!(kappa > 0.0)) throw std::invalid_argument("rcur: kappa must be positive");
        if (trials < 1) throw std::invalid_argument("rcur: need at least one trial");
        if (!(tau > 1.0)) throw std::invalid_argument("rcur: tau must be > 1");
        if (power < 1) throw std::invalid_argument("rcur: power must be >= 1");
        if (clusters < 1) throw std::invalid_argument("rcur: need at least one cluster");
        if (static_cast<Index>(clusters) > n)
            throw std::invalid_argument("rcur: more clusters than data columns");
        if (row_spec.axis != Axis::rows || col_spec.axis != Axis::cols)
            throw std::invalid_argument("rcur: sampling specs bound to the wrong axis");
    }
};

struct ClusteringOutcome {
    LabelVector labels;
    Index best_rank = 0;
    CostReport costs;
    Matrix similarity;
};

namespace detail {

/// Per-rank index source for one axis: either a fixed DEIM selection or a
/// probability distribution to draw from.
struct AxisSampler {
    std::optional<IndexList> fixed;
    std::optional<Distribution> dist;
    bool replacement = false;
    bool all = false;  // take every index, skip sampling
};

inline AxisSampler make_axis_sampler(const Matrix& d, const SamplingSpec& spec, Index rank,
                                     Index target, Index axis_size, const SvdFactors* svd,
                                     bool force_all = false) {
    AxisSampler s;
    s.replacement = spec.replacement;
    // Drawing the whole axis without replacement is the identity draw.
    s.all = force_all || (target >= axis_size && !spec.replacement &&
                          spec.method != SamplingMethod::deim);
    if (s.all) return s;
    switch (spec.method) {
        case SamplingMethod::deim: {
            const Matrix& vecs = spec.axis == Axis::cols ? svd->right : svd->left;
            const Index k = std::min(target, svd->rank());
            s.fixed = deim_indices(vecs, k);
            break;
        }
        case SamplingMethod::leverage: {
            const Index k = spec.rank_hint >= 1 ? spec.rank_hint : rank;
            const Matrix& vecs = spec.axis == Axis::cols ? svd->right : svd->left;
            Distribution dist = leverage_distribution(vecs, std::min(k, vecs.cols()));
            dist.validate();
            s.dist = std::move(dist);
            break;
        }
        case SamplingMethod::length:
            s.dist = length_distribution(d, spec.axis);
            break;
        case SamplingMethod::uniform:
            s.dist = uniform_distribution(axis_size);
            break;
    }
    return s;
}

inline IndexList sample_axis(const AxisSampler& s, Index target, Index axis_size,
                             RandomStream& rng) {
    if (s.all) return all_indices(axis_size);
    if (s.fixed) return *s.fixed;
    return draw_indices(*s.dist, target, rng, s.replacement);
}

}  // namespace detail

/// Robust CUR similarity matrix. For each rank guess r it runs `trials`
/// CUR similarity trials with |I| = r rows and |J| = min(n, ceil(kappa r))
/// columns, aggregates them by median/abs/threshold, spectral-clusters the
/// aggregate, and scores the clustering; the rank with the smallest cost
/// wins. Trials whose intersection U has numerical rank zero are redrawn up
/// to 10 times and then contribute a zero matrix.
inline ClusteringOutcome rcur(const Matrix& d, const RcurConfig& cfg) {
    require_nonempty(d, "rcur");
    const Index m = d.rows();
    const Index n = d.cols();
    cfg.validate(m, n);

    auto svd_backed = [](const SamplingSpec& s) {
        return s.method == SamplingMethod::leverage || s.method == SamplingMethod::deim;
    };
    const bool needs_svd = svd_backed(cfg.row_spec) ||
                           (svd_backed(cfg.col_spec) && !std::isinf(cfg.kappa));
    std::optional<SvdFactors> svd;
    if (needs_svd) svd = svd_compact(d);

    ClusteringOutcome outcome;
    Matrix best_similarity;
    double best_cost = std::numeric_limits<double>::infinity();

    for (Index r = cfg.r_min; r <= cfg.r_max; ++r) {
        const Index row_target = r;
        const Index col_target = std::isinf(cfg.kappa)
                                     ? n
                                     : std::min<Index>(n, static_cast<Index>(std::ceil(
                                                              cfg.kappa * static_cast<double>(r))));
        const auto row_sampler = detail::make_axis_sampler(d, cfg.row_spec, r, row_target, m,
                                                           svd ? &*svd : nullptr);
        // kappa = infinity means "take all columns" outright, whatever the
        // column method says.
        const auto col_sampler = detail::make_axis_sampler(d, cfg.col_spec, r, col_target, n,
                                                           svd ? &*svd : nullptr,
                                                           std::isinf(cfg.kappa));

        // Fully deterministic sampling makes every trial identical; the
        // median of identical matrices is that matrix, so one trial suffices.
        const bool deterministic = (row_sampler.fixed || row_sampler.all) &&
                                   (col_sampler.fixed || col_sampler.all);
        const Index n_trials = deterministic ? 1 : cfg.trials;

        std::vector<Matrix> trials;
        trials.reserve(static_cast<size_t>(n_trials));
        for (Index t = 0; t < n_trials; ++t) {
            RandomStream rng = derive_stream(cfg.seed, 1, static_cast<std::uint64_t>(r),
                                             static_cast<std::uint64_t>(t));
            IndexList rows, cols;
            bool usable = false;
            for (int attempt = 0; attempt < 10; ++attempt) {
                rows = detail::sample_axis(row_sampler, row_target, m, rng);
                cols = detail::sample_axis(col_sampler, col_target, n, rng);
                if (numerical_rank(select_submatrix(d, rows, cols)) > 0) {
                    usable = true;
                    break;
                }
                if (deterministic) break;  // redrawing cannot change anything
            }
            trials.push_back(usable ? trial_similarity(d, rows, cols) : Matrix::Zero(n, n));
        }

        Matrix xi = aggregate_and_threshold(trials, cfg.tau);
        if (cfg.power > 1) xi = matrix_power(xi, cfg.power);

        RandomStream cluster_rng = derive_stream(cfg.seed, 2, static_cast<std::uint64_t>(r));
        RankOutcome ro;
        ro.rank = r;
        ro.labels = spectral_clustering(xi, cfg.clusters, cluster_rng);
        ro.cost = clustering_cost(xi, ro.labels, r);
        if (ro.cost < best_cost) {
            best_cost = ro.cost;
            outcome.best_rank = r;
            outcome.labels = ro.labels;
            best_similarity = xi;
        }
        outcome.costs.per_rank.push_back(std::move(ro));
    }

    if (!std::isfinite(best_cost))
        throw std::runtime_error("rcur: every rank produced a degenerate (infinite) cost");
    outcome.costs.best_rank = outcome.best_rank;
    outcome.similarity = std::move(best_similarity);
    return outcome;
}

}  // namespace curclust
