#pragma once

#include <Eigen/Core>

#include "ttcross/common.hpp"

namespace ttcross {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;

/// Dense N-dimensional real tensor, column-major (i_1 fastest-varying),
/// immutable in spirit after construction.
class DenseTensor {
public:
    explicit DenseTensor(std::vector<index_t> dims);
    DenseTensor(std::vector<index_t> dims, std::vector<double> data);

    const std::vector<index_t>& dims() const { return dims_; }
    index_t order() const { return static_cast<index_t>(dims_.size()); }
    index_t size() const { return static_cast<index_t>(data_.size()); }

    double at(const MultiIndex& mi) const;
    double at_flat(index_t off) const { return data_[static_cast<std::size_t>(off)]; }
    double& at_flat(index_t off) { return data_[static_cast<std::size_t>(off)]; }

    const double* data() const { return data_.data(); }
    double* data() { return data_.data(); }
    const std::vector<double>& flat() const { return data_; }

    Eigen::Map<const Vector> vec() const {
        return Eigen::Map<const Vector>(data_.data(), static_cast<Eigen::Index>(data_.size()));
    }
    Eigen::Map<Vector> vec() {
        return Eigen::Map<Vector>(data_.data(), static_cast<Eigen::Index>(data_.size()));
    }

    double frobenius_norm() const;

private:
    std::vector<index_t> dims_;
    std::vector<double> data_;
};

/// k-th unfolding: (d_1...d_k) x (d_{k+1}...d_N) view of the flat data.
/// Row index is the column-major linearization of (i_1..i_k), column index
/// that of (i_{k+1}..i_N), so no data movement is needed. 1 <= k <= N-1.
ConstMatrixMap unfold(const DenseTensor& t, index_t k);

/// Inverse of unfold: reshape M back into a tensor with the given dims.
DenseTensor refold(const Eigen::Ref<const Matrix>& m, std::vector<index_t> dims, index_t k);

double frobenius_norm(const DenseTensor& t);

/// Normalized mean square error on a decibel scale,
/// 10*log10(|T-That|_F^2 / |T|_F^2). Exact recovery yields -inf.
double mse_db(const DenseTensor& t, const DenseTensor& that);

/// Sampled submatrix of the k-th unfolding: entry (s,t) is the tensor value
/// at the concatenation of rows[s] (over d_1..d_k) and cols[t] (over the rest).
Matrix gather(const DenseTensor& t, index_t k, const std::vector<MultiIndex>& rows,
              const std::vector<MultiIndex>& cols);

}  // namespace ttcross
