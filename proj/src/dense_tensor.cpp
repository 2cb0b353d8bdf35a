#include "ttcross/dense_tensor.hpp"

#include <cmath>
#include <limits>

namespace ttcross {

static void check_dims(const std::vector<index_t>& dims) {
    if (dims.empty()) throw std::invalid_argument("DenseTensor: empty dimension vector");
    for (index_t d : dims)
        if (d < 1) throw std::invalid_argument("DenseTensor: every dimension must be >= 1");
}

DenseTensor::DenseTensor(std::vector<index_t> dims) : dims_(std::move(dims)) {
    check_dims(dims_);
    data_.assign(static_cast<std::size_t>(product(dims_)), 0.0);
}

DenseTensor::DenseTensor(std::vector<index_t> dims, std::vector<double> data)
    : dims_(std::move(dims)), data_(std::move(data)) {
    check_dims(dims_);
    if (static_cast<index_t>(data_.size()) != product(dims_))
        throw std::invalid_argument("DenseTensor: data length does not match product of dims");
}

double DenseTensor::at(const MultiIndex& mi) const {
    if (!in_range(mi, dims_)) throw std::invalid_argument("DenseTensor::at: index out of range");
    return data_[static_cast<std::size_t>(linearize(mi, dims_))];
}

double DenseTensor::frobenius_norm() const { return vec().norm(); }

ConstMatrixMap unfold(const DenseTensor& t, index_t k) {
    const index_t n = t.order();
    if (k < 1 || k > n - 1) throw std::invalid_argument("unfold: k must satisfy 1 <= k <= N-1");
    const auto& d = t.dims();
    const index_t rows = product(std::span<const index_t>(d.data(), static_cast<std::size_t>(k)));
    const index_t cols = t.size() / rows;
    return ConstMatrixMap(t.data(), rows, cols);
}

DenseTensor refold(const Eigen::Ref<const Matrix>& m, std::vector<index_t> dims, index_t k) {
    check_dims(dims);
    const index_t n = static_cast<index_t>(dims.size());
    if (k < 1 || k > n - 1) throw std::invalid_argument("refold: k must satisfy 1 <= k <= N-1");
    const index_t rows = product(std::span<const index_t>(dims.data(), static_cast<std::size_t>(k)));
    const index_t cols = product(dims) / rows;
    if (m.rows() != rows || m.cols() != cols)
        throw std::invalid_argument("refold: matrix shape does not match dims split at k");
    std::vector<double> data(static_cast<std::size_t>(rows * cols));
    MatrixMap(data.data(), rows, cols) = m;
    return DenseTensor(std::move(dims), std::move(data));
}

double frobenius_norm(const DenseTensor& t) { return t.frobenius_norm(); }

double mse_db(const DenseTensor& t, const DenseTensor& that) {
    if (t.dims() != that.dims()) throw std::invalid_argument("mse_db: dimension mismatch");
    const double ref = t.frobenius_norm();
    if (ref == 0.0) throw std::invalid_argument("mse_db: reference tensor has zero norm");
    const double err = (t.vec() - that.vec()).norm();
    if (err == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10((err * err) / (ref * ref));
}

Matrix gather(const DenseTensor& t, index_t k, const std::vector<MultiIndex>& rows,
              const std::vector<MultiIndex>& cols) {
    const index_t n = t.order();
    if (k < 1 || k > n - 1) throw std::invalid_argument("gather: k must satisfy 1 <= k <= N-1");
    const auto& d = t.dims();
    const std::span<const index_t> row_dims(d.data(), static_cast<std::size_t>(k));
    const std::span<const index_t> col_dims(d.data() + k, static_cast<std::size_t>(n - k));
    const index_t row_count = product(row_dims);

    std::vector<index_t> roff(rows.size());
    for (std::size_t s = 0; s < rows.size(); ++s) {
        if (!in_range(rows[s], row_dims)) throw std::invalid_argument("gather: row index out of range");
        roff[s] = linearize(rows[s], row_dims);
    }
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (!in_range(cols[c], col_dims)) throw std::invalid_argument("gather: column index out of range");
        const index_t base = linearize(cols[c], col_dims) * row_count;
        for (std::size_t s = 0; s < rows.size(); ++s)
            out(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(c)) = t.at_flat(base + roff[s]);
    }
    return out;
}

}  // namespace ttcross
