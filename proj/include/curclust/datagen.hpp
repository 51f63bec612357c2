#pragma once

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/QR>

#include "curclust/linalg.hpp"
#include "curclust/matrix.hpp"
#include "curclust/rng.hpp"

namespace curclust {

struct SyntheticConfig {
    Index ambient_dim = 2;
    std::vector<Index> subspace_dims;
    std::vector<Index> points_per_subspace;
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    void validate() const {
        if (ambient_dim < 1) throw std::invalid_argument("SyntheticConfig: ambient_dim must be >= 1");
        if (subspace_dims.empty() || subspace_dims.size() != points_per_subspace.size())
            throw std::invalid_argument("SyntheticConfig: dims and points lists must be non-empty and equal length");
        for (size_t i = 0; i < subspace_dims.size(); ++i) {
            if (subspace_dims[i] < 1 || subspace_dims[i] > ambient_dim)
                throw std::invalid_argument("SyntheticConfig: subspace dim out of [1, ambient_dim]");
            if (points_per_subspace[i] < subspace_dims[i])
                throw std::invalid_argument("SyntheticConfig: need at least dim points per subspace");
        }
        if (noise_sigma < 0.0) throw std::invalid_argument("SyntheticConfig: noise_sigma must be >= 0");
    }
};

struct LabeledDataset {
    Matrix data;  // columns are points
    LabelVector labels;
};

namespace detail {

inline Matrix gaussian_matrix(Index rows, Index cols, RandomStream& rng) {
    Matrix g(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i) g(i, j) = standard_normal(rng);
    return g;
}

/// Orthonormal basis of a random d-dimensional subspace of R^n.
inline Matrix random_orthonormal_basis(Index n, Index d, RandomStream& rng) {
    const Matrix g = gaussian_matrix(n, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    return Matrix(qr.householderQ()) * Matrix::Identity(n, d);
}

/// Uniform draw from the unit ball of R^d: random direction scaled by
/// U^{1/d}.
inline Vector uniform_ball(Index d, RandomStream& rng) {
    Vector g(d);
    double norm2 = 0.0;
    do {
        for (Index i = 0; i < d; ++i) g(i) = standard_normal(rng);
        norm2 = g.squaredNorm();
    } while (norm2 == 0.0);
    const double radius = std::pow(uniform01(rng), 1.0 / static_cast<double>(d));
    return g * (radius / std::sqrt(norm2));
}

}  // namespace detail

/// Samples a union-of-subspaces dataset: per subspace a random orthonormal
/// basis, coefficients uniform in the unit ball, then i.i.d. Gaussian noise
/// with standard deviation noise_sigma on every entry. Columns are grouped
/// by subspace in order.
inline LabeledDataset generate_union(const SyntheticConfig& cfg) {
    cfg.validate();
    RandomStream rng = derive_stream(cfg.seed, 3);
    const Index total =
        std::accumulate(cfg.points_per_subspace.begin(), cfg.points_per_subspace.end(), Index{0});
    LabeledDataset out;
    out.data.resize(cfg.ambient_dim, total);
    out.labels.reserve(static_cast<size_t>(total));
    Index col = 0;
    for (size_t s = 0; s < cfg.subspace_dims.size(); ++s) {
        const Index d = cfg.subspace_dims[s];
        const Matrix basis = detail::random_orthonormal_basis(cfg.ambient_dim, d, rng);
        for (Index p = 0; p < cfg.points_per_subspace[s]; ++p, ++col) {
            out.data.col(col) = basis * detail::uniform_ball(d, rng);
            out.labels.push_back(static_cast<int>(s));
        }
    }
    if (cfg.noise_sigma > 0.0)
        out.data += cfg.noise_sigma * detail::gaussian_matrix(cfg.ambient_dim, total, rng);
    return out;
}

struct Incoherence {
    double mu1 = 0.0;  // sqrt(m/k) * max row norm of U_k
    double mu2 = 0.0;  // sqrt(n/k) * max row norm of V_k
};

inline Incoherence incoherence(const Matrix& x, Index k) {
    require_nonempty(x, "incoherence");
    if (k < 1 || k > std::min(x.rows(), x.cols()))
        throw std::invalid_argument("incoherence: k out of [1, min(m, n)]");
    auto svd = detail::thin_svd(x);
    const Matrix uk = svd.matrixU().leftCols(k);
    const Matrix vk = svd.matrixV().leftCols(k);
    Incoherence inc;
    inc.mu1 = std::sqrt(static_cast<double>(x.rows()) / static_cast<double>(k)) *
              uk.rowwise().norm().maxCoeff();
    inc.mu2 = std::sqrt(static_cast<double>(x.cols()) / static_cast<double>(k)) *
              vk.rowwise().norm().maxCoeff();
    return inc;
}

}  // namespace curclust
