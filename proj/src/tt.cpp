#include "ttcross/tt.hpp"

#include <Eigen/SVD>

namespace ttcross {

TTCore::TTCore(index_t r_left, index_t d, index_t r_right)
    : r_left_(r_left), d_(d), r_right_(r_right) {
    if (r_left < 1 || d < 1 || r_right < 1)
        throw std::invalid_argument("TTCore: all extents must be >= 1");
    data_.assign(static_cast<std::size_t>(r_left * d * r_right), 0.0);
}

TTCore::SliceMap TTCore::slice(index_t i) const {
    return SliceMap(data_.data() + r_left_ * i, r_left_, r_right_,
                    Eigen::OuterStride<>(r_left_ * d_));
}

Eigen::Map<Matrix, 0, Eigen::OuterStride<>> TTCore::slice(index_t i) {
    return Eigen::Map<Matrix, 0, Eigen::OuterStride<>>(data_.data() + r_left_ * i, r_left_, r_right_,
                                                       Eigen::OuterStride<>(r_left_ * d_));
}

TTTensor::TTTensor(std::vector<TTCore> cores) : cores_(std::move(cores)) {
    if (cores_.empty()) throw std::invalid_argument("TTTensor: no cores");
    if (cores_.front().r_left() != 1 || cores_.back().r_right() != 1)
        throw std::invalid_argument("TTTensor: boundary bond dimensions must be 1");
    for (std::size_t j = 0; j + 1 < cores_.size(); ++j)
        if (cores_[j].r_right() != cores_[j + 1].r_left())
            throw std::invalid_argument("TTTensor: adjacent bond dimensions do not match");
}

std::vector<index_t> TTTensor::dims() const {
    std::vector<index_t> d;
    d.reserve(cores_.size());
    for (const auto& c : cores_) d.push_back(c.d());
    return d;
}

std::vector<index_t> TTTensor::ranks() const {
    std::vector<index_t> r;
    for (std::size_t j = 0; j + 1 < cores_.size(); ++j) r.push_back(cores_[j].r_right());
    return r;
}

double TTTensor::eval(const MultiIndex& mi) const {
    const auto d = dims();
    if (!in_range(mi, d)) throw std::invalid_argument("tt_eval: index out of range");
    Eigen::RowVectorXd v = cores_.front().slice(mi[0]).row(0);
    for (std::size_t j = 1; j < cores_.size(); ++j) v = v * cores_[j].slice(mi[static_cast<std::size_t>(j)]);
    return v(0);
}

DenseTensor tt_to_dense(const TTTensor& g, index_t max_elements) {
    const auto dims = g.dims();
    const index_t total = product(dims);
    if (total > max_elements)
        throw budget_error("tt_to_dense: tensor would exceed the element budget");

    // progressively absorb cores: m holds (d_1...d_k) x r_k, column-major, so
    // m * right_unfold(core_{k+1}) reshapes directly into the next stage
    Matrix m = g.core(0).right_unfold();  // 1 x (d_1 r_1)
    m.resize(g.core(0).d(), g.core(0).r_right());
    index_t lead = g.core(0).d();
    for (index_t j = 1; j < g.order(); ++j) {
        Matrix next = m * g.core(j).right_unfold();
        lead *= g.core(j).d();
        next.resize(lead, g.core(j).r_right());
        m.swap(next);
    }
    std::vector<double> data(static_cast<std::size_t>(total));
    Eigen::Map<Vector>(data.data(), total) = m.col(0);
    return DenseTensor(dims, std::move(data));
}

namespace {

// One truncation step shared by the fixed-rank and tolerance-driven sweeps.
// `pick` maps the singular values to the kept rank.
template <typename PickRank>
TTTensor tt_svd_impl(const DenseTensor& t, PickRank pick) {
    const auto& dims = t.dims();
    const index_t n = t.order();
    std::vector<TTCore> cores;
    cores.reserve(static_cast<std::size_t>(n));

    if (n == 1) {
        TTCore c(1, dims[0], 1);
        Eigen::Map<Vector>(c.data(), dims[0]) = t.vec();
        cores.push_back(std::move(c));
        return TTTensor(std::move(cores));
    }

    Matrix work = ConstMatrixMap(t.data(), dims[0], t.size() / dims[0]);
    index_t r_prev = 1;
    for (index_t k = 0; k + 1 < n; ++k) {
        Eigen::BDCSVD<Matrix> dec(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Vector& sig = dec.singularValues();
        const index_t rank = pick(k, sig);

        TTCore c(r_prev, dims[static_cast<std::size_t>(k)], rank);
        c.left_unfold() = dec.matrixU().leftCols(rank);
        cores.push_back(std::move(c));

        Matrix next = sig.head(rank).asDiagonal() * dec.matrixV().leftCols(rank).transpose();
        if (k + 2 < n) {
            const index_t d_next = dims[static_cast<std::size_t>(k + 1)];
            next.resize(rank * d_next, next.size() / (rank * d_next));
        }
        work.swap(next);
        r_prev = rank;
    }
    TTCore last(r_prev, dims[static_cast<std::size_t>(n - 1)], 1);
    MatrixMap(last.data(), r_prev, dims[static_cast<std::size_t>(n - 1)]) = work;
    cores.push_back(std::move(last));
    return TTTensor(std::move(cores));
}

}  // namespace

TTTensor tt_svd(const DenseTensor& t, const std::vector<index_t>& ranks) {
    const index_t n = t.order();
    if (static_cast<index_t>(ranks.size()) != std::max<index_t>(n - 1, 0))
        throw std::invalid_argument("tt_svd: need N-1 bond ranks");
    const auto& dims = t.dims();
    index_t left = 1;
    for (index_t k = 0; k + 1 < n; ++k) {
        left *= dims[static_cast<std::size_t>(k)];
        const index_t cap = std::min(left, t.size() / left);
        if (ranks[static_cast<std::size_t>(k)] < 1 || ranks[static_cast<std::size_t>(k)] > cap)
            throw std::invalid_argument("tt_svd: bond rank out of range for the unfolding");
    }
    return tt_svd_impl(t, [&](index_t k, const Vector& sig) {
        return std::min<index_t>(ranks[static_cast<std::size_t>(k)], sig.size());
    });
}

TTTensor tt_svd_tol(const DenseTensor& t, double tol) {
    if (tol < 0.0) throw std::invalid_argument("tt_svd_tol: tol must be >= 0");
    const index_t n = t.order();
    const double local = n > 1 ? tol / std::sqrt(static_cast<double>(n - 1)) : tol;
    return tt_svd_impl(t, [local](index_t, const Vector& sig) {
        index_t rank = sig.size();
        double tail = 0.0;
        while (rank > 1) {
            const double s = sig(rank - 1);
            if (std::sqrt(tail + s * s) > local) break;
            tail += s * s;
            --rank;
        }
        return rank;
    });
}

}  // namespace ttcross
