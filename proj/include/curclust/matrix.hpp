#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace curclust {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexList = std::vector<Index>;

/// One cluster id per data column, ids in [0, L).
using LabelVector = std::vector<int>;

inline bool all_finite(const Matrix& x) { return x.allFinite(); }

inline void require_finite(const Matrix& x, const std::string& what) {
    if (!x.allFinite())
        throw std::invalid_argument(what + ": matrix contains NaN or Inf entries");
}

inline void require_nonempty(const Matrix& x, const std::string& what) {
    if (x.rows() == 0 || x.cols() == 0)
        throw std::invalid_argument(what + ": matrix is empty");
}

/// Checks that every index is in [0, bound) and that there are no duplicates.
inline void validate_index_set(const IndexList& indices, Index bound, const std::string& what) {
    if (indices.empty())
        throw std::invalid_argument(what + ": index set is empty");
    std::unordered_set<Index> seen;
    for (Index i : indices) {
        if (i < 0 || i >= bound)
            throw std::out_of_range(what + ": index " + std::to_string(i) +
                                    " out of range [0, " + std::to_string(bound) + ")");
        if (!seen.insert(i).second)
            throw std::invalid_argument(what + ": duplicate index " + std::to_string(i));
    }
}

inline Matrix select_rows(const Matrix& x, const IndexList& rows) {
    Matrix out(static_cast<Index>(rows.size()), x.cols());
    for (Index i = 0; i < out.rows(); ++i) out.row(i) = x.row(rows[static_cast<size_t>(i)]);
    return out;
}

inline Matrix select_cols(const Matrix& x, const IndexList& cols) {
    Matrix out(x.rows(), static_cast<Index>(cols.size()));
    for (Index j = 0; j < out.cols(); ++j) out.col(j) = x.col(cols[static_cast<size_t>(j)]);
    return out;
}

inline Matrix select_submatrix(const Matrix& x, const IndexList& rows, const IndexList& cols) {
    Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (Index i = 0; i < out.rows(); ++i)
        for (Index j = 0; j < out.cols(); ++j)
            out(i, j) = x(rows[static_cast<size_t>(i)], cols[static_cast<size_t>(j)]);
    return out;
}

inline IndexList all_indices(Index n) {
    IndexList out(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) out[static_cast<size_t>(i)] = i;
    return out;
}

}  // namespace curclust
