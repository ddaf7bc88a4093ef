#include "hopfdec/sampled_map.hpp"

#include <Eigen/SVD>

namespace hopfdec {

SampledMap::SampledMap(const SimplicialComplex& mesh, Eigen::MatrixXd values)
    : mesh_(&mesh), values_(std::move(values)) {
    if (values_.rows() != static_cast<Eigen::Index>(mesh.count(0)))
        throw DimensionMismatch("SampledMap: one value row per vertex");
    if (!values_.allFinite())
        throw std::invalid_argument("SampledMap: non-finite values");

    const int d = mesh.dim();
    const auto& verts = mesh.vertex_coords();
    const auto& tops = mesh.simplices(d);
    differentials_.resize(tops.size());
    degenerate_.assign(tops.size(), 0);

    Eigen::MatrixXd edges(verts.cols(), d);
    Eigen::MatrixXd vedges(values_.cols(), d);
    for (std::size_t t = 0; t < tops.size(); ++t) {
        const auto& s = tops[t];
        for (int i = 0; i < d; ++i) {
            edges.col(i) = (verts.row(s[i + 1]) - verts.row(s[0])).transpose();
            vedges.col(i) = (values_.row(s[i + 1]) - values_.row(s[0])).transpose();
        }
        // df = (value edges) * R^{-1} with edges = Q R; columns then refer to
        // an orthonormal tangent basis, so singular values are intrinsic.
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(edges);
        Eigen::MatrixXd r =
            qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
        double rmin = r.diagonal().cwiseAbs().minCoeff();
        if (rmin < 1e-14) {
            differentials_[t] = Eigen::MatrixXd::Zero(values_.cols(), d);
            degenerate_[t] = 1;
            ++degenerate_count_;
            continue;
        }
        differentials_[t] =
            r.transpose().triangularView<Eigen::Lower>().solve(vedges.transpose())
                .transpose();
        double opnorm = differentials_[t].jacobiSvd().singularValues()[0];
        lipschitz_ = std::max(lipschitz_, opnorm);
    }
}

}  // namespace hopfdec
