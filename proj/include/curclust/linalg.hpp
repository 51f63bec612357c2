#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "curclust/matrix.hpp"

namespace curclust {

/// Compact SVD: X = left * diag(singulars) * right^T, truncated at the
/// numerical rank, so the factor shapes are m x k, k, n x k.
struct SvdFactors {
    Matrix left;
    std::vector<double> singulars;  // nonnegative, non-increasing
    Matrix right;

    Index rank() const { return static_cast<Index>(singulars.size()); }

    Matrix reconstruct() const {
        if (singulars.empty()) return Matrix::Zero(left.rows(), right.rows());
        Vector s = Eigen::Map<const Vector>(singulars.data(), rank());
        return left * s.asDiagonal() * right.transpose();
    }
};

/// Threshold below which singular values count as zero:
/// max(m, n) * machine_epsilon * sigma_1.
inline double rank_threshold(const std::vector<double>& singulars, Index m, Index n) {
    if (singulars.empty()) return 0.0;
    const double eps = std::numeric_limits<double>::epsilon();
    return static_cast<double>(std::max(m, n)) * eps * singulars.front();
}

inline Index numerical_rank(const std::vector<double>& singulars, Index m, Index n) {
    const double tol = rank_threshold(singulars, m, n);
    Index r = 0;
    for (double s : singulars) {
        if (s > tol) ++r;
    }
    return r;
}

namespace detail {

inline Eigen::BDCSVD<Matrix> thin_svd(const Matrix& x) {
    return Eigen::BDCSVD<Matrix>(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace detail

inline SvdFactors svd_compact(const Matrix& x) {
    require_nonempty(x, "svd_compact");
    auto svd = detail::thin_svd(x);
    std::vector<double> all(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
    const Index k = numerical_rank(all, x.rows(), x.cols());
    SvdFactors out;
    out.left = svd.matrixU().leftCols(k);
    out.right = svd.matrixV().leftCols(k);
    out.singulars.assign(all.begin(), all.begin() + k);
    return out;
}

inline Index numerical_rank(const Matrix& x) {
    if (x.rows() == 0 || x.cols() == 0) return 0;
    auto svd = Eigen::BDCSVD<Matrix>(x);
    std::vector<double> s(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
    return numerical_rank(s, x.rows(), x.cols());
}

/// Moore-Penrose pseudoinverse via truncated SVD. Singular values at or below
/// tol are dropped; tol < 0 selects the numerical-rank threshold.
inline Matrix pseudoinverse(const Matrix& x, double tol = -1.0) {
    require_nonempty(x, "pseudoinverse");
    auto svd = detail::thin_svd(x);
    const auto& s = svd.singularValues();
    std::vector<double> sv(s.data(), s.data() + s.size());
    if (tol < 0.0) tol = rank_threshold(sv, x.rows(), x.cols());
    Vector inv = Vector::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol) inv(i) = 1.0 / s(i);
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

/// CUR factors of X for row set I and column set J:
/// C = X(:,J), U = X(I,J), R = X(I,:).
struct CurFactors {
    IndexList row_indices;
    IndexList col_indices;
    Matrix C;
    Matrix U;
    Matrix R;
    bool exact = false;  // rank(U) == rank(X)
};

inline CurFactors cur_approximation(const Matrix& x, const IndexList& row_indices,
                                    const IndexList& col_indices) {
    require_nonempty(x, "cur_approximation");
    validate_index_set(row_indices, x.rows(), "cur_approximation rows");
    validate_index_set(col_indices, x.cols(), "cur_approximation cols");
    CurFactors f;
    f.row_indices = row_indices;
    f.col_indices = col_indices;
    f.C = select_cols(x, col_indices);
    f.U = select_submatrix(x, row_indices, col_indices);
    f.R = select_rows(x, row_indices);
    f.exact = numerical_rank(f.U) == numerical_rank(x);
    return f;
}

inline Matrix cur_reconstruct(const CurFactors& f) { return f.C * pseudoinverse(f.U) * f.R; }

}  // namespace curclust
