#ifndef HOPFDEC_QUADRATURE_HPP
#define HOPFDEC_QUADRATURE_HPP

#include <Eigen/Dense>
#include <cmath>

namespace hopfdec {

/// Symmetric quadrature rule on the reference d-simplex, exact for
/// polynomials of total degree 2. Nodes are given in barycentric
/// coordinates (d+1 columns, one row per node); weights sum to the
/// reference simplex volume 1/d!.
struct SimplexQuadrature {
    Eigen::MatrixXd barycentric;  // nodes x (d+1)
    Eigen::VectorXd weights;      // nodes
};

inline SimplexQuadrature simplex_quadrature_order2(int d) {
    // (d+1)-point rule: each node has one barycentric coordinate a and d
    // coordinates b, with (d+1) b^2 terms matching the degree-2 moments.
    // For d=2 this reduces to the classical edge-midpoint rule.
    const int m = d + 1;
    double b = (1.0 - std::sqrt(1.0 / (d + 2.0))) / (d + 1.0);
    double a = 1.0 - d * b;
    double refvol = 1.0;
    for (int i = 2; i <= d; ++i) refvol /= i;

    SimplexQuadrature q;
    q.barycentric = Eigen::MatrixXd::Constant(m, m, b);
    for (int i = 0; i < m; ++i) q.barycentric(i, i) = a;
    q.weights = Eigen::VectorXd::Constant(m, refvol / m);
    return q;
}

}  // namespace hopfdec

#endif
