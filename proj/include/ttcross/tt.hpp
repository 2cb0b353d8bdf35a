#pragma once

#include "ttcross/dense_tensor.hpp"

namespace ttcross {

/// One order-3 core, shape r_left x d x r_right, flat column-major with the
/// left bond index fastest. The same buffer exposes both standard unfoldings.
class TTCore {
public:
    TTCore(index_t r_left, index_t d, index_t r_right);

    index_t r_left() const { return r_left_; }
    index_t d() const { return d_; }
    index_t r_right() const { return r_right_; }
    index_t size() const { return static_cast<index_t>(data_.size()); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    /// Slice X(:, i, :) as an r_left x r_right matrix (strided view).
    using SliceMap = Eigen::Map<const Matrix, 0, Eigen::OuterStride<>>;
    SliceMap slice(index_t i) const;
    Eigen::Map<Matrix, 0, Eigen::OuterStride<>> slice(index_t i);

    /// (r_left * d) x r_right view.
    ConstMatrixMap left_unfold() const { return ConstMatrixMap(data_.data(), r_left_ * d_, r_right_); }
    MatrixMap left_unfold() { return MatrixMap(data_.data(), r_left_ * d_, r_right_); }

    /// r_left x (d * r_right) view.
    ConstMatrixMap right_unfold() const { return ConstMatrixMap(data_.data(), r_left_, d_ * r_right_); }
    MatrixMap right_unfold() { return MatrixMap(data_.data(), r_left_, d_ * r_right_); }

private:
    index_t r_left_, d_, r_right_;
    std::vector<double> data_;
};

/// Tensor train: a chain of order-3 cores with matching bond dimensions and
/// r_0 = r_N = 1. Immutable after construction.
class TTTensor {
public:
    explicit TTTensor(std::vector<TTCore> cores);

    index_t order() const { return static_cast<index_t>(cores_.size()); }
    const TTCore& core(index_t j) const { return cores_[static_cast<std::size_t>(j)]; }
    TTCore& core(index_t j) { return cores_[static_cast<std::size_t>(j)]; }

    std::vector<index_t> dims() const;
    /// Representation bond dimensions r_1..r_{N-1}.
    std::vector<index_t> ranks() const;

    double eval(const MultiIndex& mi) const;

private:
    std::vector<TTCore> cores_;
};

inline double tt_eval(const TTTensor& g, const MultiIndex& mi) { return g.eval(mi); }
inline std::vector<index_t> tt_ranks(const TTTensor& g) { return g.ranks(); }

namespace detail {
inline constexpr index_t kDenseElementBudget = 100'000'000;
}

/// Materialize every entry by progressive contraction. Guarded by an element
/// budget so accidental use on huge tensors fails loudly.
DenseTensor tt_to_dense(const TTTensor& g, index_t max_elements = detail::kDenseElementBudget);

/// Sequential left-to-right SVD truncation at the prescribed bond ranks.
/// A requested rank larger than the current working matrix allows is clamped
/// (the discarded directions do not exist). The result satisfies
/// |T - dense(result)|_F <= sqrt(sum_k eps_k^2) with eps_k the local residuals.
TTTensor tt_svd(const DenseTensor& t, const std::vector<index_t>& ranks);

/// Tolerance-driven variant: picks r_k as the smallest rank with local
/// residual <= tol / sqrt(N-1).
TTTensor tt_svd_tol(const DenseTensor& t, double tol);

}  // namespace ttcross
