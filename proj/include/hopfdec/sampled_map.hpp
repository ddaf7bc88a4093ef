#ifndef HOPFDEC_SAMPLED_MAP_HPP
#define HOPFDEC_SAMPLED_MAP_HPP

#include <Eigen/Dense>
#include <vector>

#include "hopfdec/mesh.hpp"

namespace hopfdec {

/// Map values at mesh vertices into R^m, with the affine differential of the
/// piecewise-linear interpolant on each top simplex (an m x dim matrix in an
/// orthonormal basis of the simplex's tangent plane).
class SampledMap {
public:
    SampledMap(const SimplicialComplex& mesh, Eigen::MatrixXd values);

    const SimplicialComplex& mesh() const { return *mesh_; }
    const Eigen::MatrixXd& values() const { return values_; }
    int codomain_dim() const { return static_cast<int>(values_.cols()); }

    const Eigen::MatrixXd& differential(std::size_t top_index) const {
        return differentials_[top_index];
    }
    /// Simplices whose own geometry is degenerate get a zero differential
    /// and a flag; analyzers exclude them from statistics.
    bool domain_degenerate(std::size_t top_index) const {
        return degenerate_[top_index] != 0;
    }
    int degenerate_count() const { return degenerate_count_; }

    /// Max per-simplex operator norm of the differential.
    double lipschitz_estimate() const { return lipschitz_; }

private:
    const SimplicialComplex* mesh_;
    Eigen::MatrixXd values_;  // V x m
    std::vector<Eigen::MatrixXd> differentials_;
    std::vector<char> degenerate_;
    int degenerate_count_ = 0;
    double lipschitz_ = 0.0;
};

}  // namespace hopfdec

#endif
