#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "curclust/linalg.hpp"
#include "curclust/matrix.hpp"
#include "curclust/rng.hpp"

namespace curclust {

enum class SamplingMethod { uniform, length, leverage, deim };
enum class Axis { rows, cols };

inline const char* to_string(SamplingMethod m) {
    switch (m) {
        case SamplingMethod::uniform: return "uniform";
        case SamplingMethod::length: return "length";
        case SamplingMethod::leverage: return "leverage";
        case SamplingMethod::deim: return "deim";
    }
    return "?";
}

inline SamplingMethod sampling_method_from_string(const std::string& s) {
    if (s == "uniform") return SamplingMethod::uniform;
    if (s == "length") return SamplingMethod::length;
    if (s == "leverage") return SamplingMethod::leverage;
    if (s == "deim") return SamplingMethod::deim;
    throw std::invalid_argument("unknown sampling method: " + s);
}

/// How to pick indices along one axis. rank_hint is the k of the leverage
/// distribution (and the DEIM depth); 0 means "use the current rank guess",
/// which the RCUR driver substitutes per loop iteration.
struct SamplingSpec {
    SamplingMethod method = SamplingMethod::uniform;
    Axis axis = Axis::cols;
    Index rank_hint = 0;
    bool replacement = false;
};

struct Distribution {
    std::vector<double> probs;

    void validate() const {
        double sum = 0.0;
        for (double p : probs) {
            if (p < 0.0) throw std::invalid_argument("Distribution: negative probability");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12)
            throw std::invalid_argument("Distribution: probabilities sum to " + std::to_string(sum));
    }

    Index support_size() const {
        Index n = 0;
        for (double p : probs)
            if (p > 0.0) ++n;
        return n;
    }
};

namespace detail {

inline Distribution uniform_distribution(Index n) {
    Distribution d;
    d.probs.assign(static_cast<size_t>(n), 1.0 / static_cast<double>(n));
    return d;
}

inline Distribution length_distribution(const Matrix& x, Axis axis) {
    const double total = x.squaredNorm();
    if (total == 0.0)
        throw std::invalid_argument("length distribution is degenerate: zero matrix");
    Distribution d;
    if (axis == Axis::cols) {
        d.probs.resize(static_cast<size_t>(x.cols()));
        for (Index j = 0; j < x.cols(); ++j)
            d.probs[static_cast<size_t>(j)] = x.col(j).squaredNorm() / total;
    } else {
        d.probs.resize(static_cast<size_t>(x.rows()));
        for (Index i = 0; i < x.rows(); ++i)
            d.probs[static_cast<size_t>(i)] = x.row(i).squaredNorm() / total;
    }
    return d;
}

/// Leverage scores from a singular-vector block (first k columns of the
/// left/right singular vectors): p_i = ||W(i, 0:k)||^2 / k.
inline Distribution leverage_distribution(const Matrix& vectors, Index k) {
    Distribution d;
    d.probs.resize(static_cast<size_t>(vectors.rows()));
    const Index kk = std::min(k, vectors.cols());
    for (Index i = 0; i < vectors.rows(); ++i)
        d.probs[static_cast<size_t>(i)] =
            vectors.row(i).head(kk).squaredNorm() / static_cast<double>(k);
    return d;
}

/// One inverse-CDF draw over nonnegative weights summing to `total`.
inline Index draw_weighted(const std::vector<double>& w, double total, RandomStream& rng) {
    const double u = uniform01(rng) * total;
    double acc = 0.0;
    Index last_positive = -1;
    for (Index i = 0; i < static_cast<Index>(w.size()); ++i) {
        const double wi = w[static_cast<size_t>(i)];
        if (wi <= 0.0) continue;
        last_positive = i;
        acc += wi;
        if (u < acc) return i;
    }
    return last_positive;  // rounding guard for u ~ total
}

}  // namespace detail

inline Distribution build_distribution(const Matrix& x, const SamplingSpec& spec) {
    require_nonempty(x, "build_distribution");
    const Index n = spec.axis == Axis::cols ? x.cols() : x.rows();
    Distribution d;
    switch (spec.method) {
        case SamplingMethod::uniform:
            d = detail::uniform_distribution(n);
            break;
        case SamplingMethod::length:
            d = detail::length_distribution(x, spec.axis);
            break;
        case SamplingMethod::leverage: {
            if (spec.rank_hint < 1)
                throw std::invalid_argument("build_distribution: leverage requires rank_hint >= 1");
            if (spec.rank_hint > std::min(x.rows(), x.cols()))
                throw std::invalid_argument("build_distribution: leverage rank_hint exceeds min(m, n)");
            auto svd = detail::thin_svd(x);
            const Matrix& vecs = spec.axis == Axis::cols ? svd.matrixV() : svd.matrixU();
            d = detail::leverage_distribution(vecs, spec.rank_hint);
            break;
        }
        case SamplingMethod::deim:
            throw std::invalid_argument(
                "build_distribution: DEIM is deterministic and has no distribution");
    }
    d.validate();
    return d;
}

/// Draws `count` indices from `dist`. Without replacement this performs
/// sequential weighted draws, zeroing each chosen weight (implicit
/// renormalization). With replacement the draws are i.i.d. and then
/// deduplicated keeping first occurrences, so the output may be shorter
/// than `count`.
inline IndexList draw_indices(const Distribution& dist, Index count, RandomStream& rng,
                              bool replacement = false) {
    if (count < 1) throw std::invalid_argument("draw_indices: count must be >= 1");
    IndexList out;
    out.reserve(static_cast<size_t>(count));
    if (replacement) {
        std::vector<char> taken(dist.probs.size(), 0);
        for (Index t = 0; t < count; ++t) {
            const Index i = detail::draw_weighted(dist.probs, 1.0, rng);
            if (i < 0) throw std::invalid_argument("draw_indices: distribution has empty support");
            if (!taken[static_cast<size_t>(i)]) {
                taken[static_cast<size_t>(i)] = 1;
                out.push_back(i);
            }
        }
        return out;
    }
    if (count > dist.support_size())
        throw std::invalid_argument("draw_indices: count exceeds support size (" +
                                    std::to_string(dist.support_size()) +
                                    ") without replacement");
    std::vector<double> w = dist.probs;
    double total = std::accumulate(w.begin(), w.end(), 0.0);
    for (Index t = 0; t < count; ++t) {
        const Index i = detail::draw_weighted(w, total, rng);
        out.push_back(i);
        total -= w[static_cast<size_t>(i)];
        w[static_cast<size_t>(i)] = 0.0;
    }
    return out;
}

/// DEIM greedy selection on a singular-vector block (columns ordered by
/// singular value). Step i solves the oblique interpolation system on the
/// already-chosen indices, subtracts the projection, and takes the index of
/// the largest residual entry. Ties break to the lowest index.
inline IndexList deim_indices(const Matrix& vectors, Index k) {
    if (k < 1 || k > vectors.cols())
        throw std::invalid_argument("deim_indices: k out of range");
    const Index n = vectors.rows();
    IndexList picked;
    picked.reserve(static_cast<size_t>(k));

    auto argmax_abs = [n](const Vector& v) {
        Index best = 0;
        double best_val = std::abs(v(0));
        for (Index i = 1; i < n; ++i) {
            const double a = std::abs(v(i));
            if (a > best_val) {
                best_val = a;
                best = i;
            }
        }
        return best;
    };

    for (Index step = 0; step < k; ++step) {
        Vector residual = vectors.col(step);
        if (step > 0) {
            const Index s = step;
            Matrix sub(s, s);
            Vector rhs(s);
            for (Index a = 0; a < s; ++a) {
                rhs(a) = residual(picked[static_cast<size_t>(a)]);
                for (Index b = 0; b < s; ++b)
                    sub(a, b) = vectors(picked[static_cast<size_t>(a)], b);
            }
            const Vector coeff = sub.partialPivLu().solve(rhs);
            residual -= vectors.leftCols(s) * coeff;
        }
        const Index next = argmax_abs(residual);
        if (std::abs(residual(next)) == 0.0)
            throw std::invalid_argument("deim_indices: residual vanished at step " +
                                        std::to_string(step + 1) + "; k exceeds usable rank");
        picked.push_back(next);
    }
    return picked;
}

/// DEIM on the leading k singular vectors of X along the given axis
/// (right singular vectors for columns, left for rows).
inline IndexList deim_select(const Matrix& x, Index k, Axis axis) {
    require_nonempty(x, "deim_select");
    const SvdFactors svd = svd_compact(x);
    if (k < 1 || k > svd.rank())
        throw std::invalid_argument("deim_select: k must satisfy 1 <= k <= numerical rank (" +
                                    std::to_string(svd.rank()) + ")");
    return deim_indices(axis == Axis::cols ? svd.right : svd.left, k);
}

}  // namespace curclust
