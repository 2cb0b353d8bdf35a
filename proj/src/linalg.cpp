#include "ttcross/linalg.hpp"

#include <Eigen/SVD>

namespace ttcross {

// Jacobi is the more accurate choice for small blocks (intersection matrices,
// maxvol bases); divide-and-conquer takes over for larger unfoldings.
Svd svd(const Eigen::Ref<const Matrix>& a) {
    if (!a.allFinite()) throw std::invalid_argument("svd: input has non-finite entries");

    Svd out;
    if (std::max(a.rows(), a.cols()) <= 32) {
        Eigen::JacobiSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.w = dec.matrixU();
        out.sigma = dec.singularValues();
        out.v = dec.matrixV();
    } else {
        Eigen::BDCSVD<Matrix> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.w = dec.matrixU();
        out.sigma = dec.singularValues();
        out.v = dec.matrixV();
    }

    // sign convention: largest-magnitude component of each left vector >= 0
    for (Eigen::Index j = 0; j < out.w.cols(); ++j) {
        Eigen::Index imax = 0;
        out.w.col(j).cwiseAbs().maxCoeff(&imax);
        if (out.w(imax, j) < 0.0) {
            out.w.col(j) = -out.w.col(j);
            out.v.col(j) = -out.v.col(j);
        }
    }
    return out;
}

Matrix pinv_tau(const Eigen::Ref<const Matrix>& a, double tau) {
    if (tau < 0.0) throw std::invalid_argument("pinv_tau: tau must be >= 0");
    const Svd dec = svd(a);
    const double smax = dec.sigma.size() > 0 ? dec.sigma(0) : 0.0;
    const double cutoff = std::max(tau, detail::kPinvMachineCutoff * smax);
    Vector g = Vector::Zero(dec.sigma.size());
    for (Eigen::Index i = 0; i < dec.sigma.size(); ++i)
        if (dec.sigma(i) > cutoff) g(i) = 1.0 / dec.sigma(i);
    return dec.v * g.asDiagonal() * dec.w.transpose();
}

std::pair<Matrix, double> best_rank_r(const Eigen::Ref<const Matrix>& a, index_t r) {
    if (r < 1 || r > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("best_rank_r: r out of range");
    const Svd dec = svd(a);
    const auto rr = static_cast<Eigen::Index>(r);
    Matrix ar = dec.w.leftCols(rr) * dec.sigma.head(rr).asDiagonal() * dec.v.leftCols(rr).transpose();
    const double resid = dec.sigma.tail(dec.sigma.size() - rr).norm();
    return {std::move(ar), resid};
}

double spectral_norm(const Eigen::Ref<const Matrix>& a) {
    if (a.size() == 0) return 0.0;
    return svd(a).sigma(0);
}

}  // namespace ttcross
