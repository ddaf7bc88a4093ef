#ifndef HOPFDEC_HEISENBERG_HPP
#define HOPFDEC_HEISENBERG_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "hopfdec/errors.hpp"

namespace hopfdec {

/// A point (z, t) of the Heisenberg group H_n in exponential coordinates.
/// z holds the 2n reals (x_1, y_1, ..., x_n, y_n); the group law is
///   (z,t) * (z',t') = (z + z', t + t' + 2 Im sum_j z_j conj(z'_j)).
struct HeisPoint {
    int n;
    Eigen::VectorXd z;  // 2n entries, interleaved (x_1, y_1, ..., x_n, y_n)
    double t;

    HeisPoint(int n, Eigen::VectorXd z, double t);
    static HeisPoint origin(int n);

    double x(int j) const { return z[2 * j]; }
    double y(int j) const { return z[2 * j + 1]; }

    /// Coordinate vector (x_1, y_1, ..., x_n, y_n, t) in R^{2n+1}.
    Eigen::VectorXd coords() const;
    static HeisPoint from_coords(const Eigen::VectorXd& c);
};

/// Tangent vector at a base point, components in the coordinate frame
/// (d/dx_1, d/dy_1, ..., d/dy_n, d/dt).
struct TangentVector {
    HeisPoint base;
    Eigen::VectorXd components;  // 2n+1 entries

    TangentVector(HeisPoint base, Eigen::VectorXd components);
};

HeisPoint group_mul(const HeisPoint& p, const HeisPoint& q);
HeisPoint group_inv(const HeisPoint& p);

/// Left-invariant frame at p, ordered X_1, Y_1, ..., X_n, Y_n, T with
/// X_j = d/dx_j + 2 y_j d/dt and Y_j = d/dy_j - 2 x_j d/dt.
std::vector<TangentVector> frame_at(const HeisPoint& p);

/// The contact form alpha = dt + 2 sum_j (x_j dy_j - y_j dx_j) applied to v.
double contact_form(const HeisPoint& p, const TangentVector& v);

/// Norm of a horizontal vector in the metric making X_1,...,Y_n orthonormal.
/// Throws ContactResidualError when |alpha(v)| > tol * |v|.
double horizontal_norm(const HeisPoint& p, const TangentVector& v,
                       double tol = 1e-9);

/// Horizontal polyline obtained by lifting planar samples: t increments by
/// the trapezoid rule on 2 sum_j (y_j dx_j - x_j dy_j), which renders each
/// chord exactly horizontal in the frame at the segment midpoint.
struct HorizontalCurve {
    int n;
    Eigen::MatrixXd base_samples;   // samples x 2n
    double t0;
    Eigen::VectorXd t_samples;      // samples
    Eigen::VectorXd parameter_values;
};

/// Lift planar samples (rows of `base`, 2n columns) starting at vertical
/// coordinate t0. `parameter_values` defaults to 0..N-1.
HorizontalCurve lift_curve(const Eigen::MatrixXd& base, double t0,
                           Eigen::VectorXd parameter_values = Eigen::VectorXd());

/// Sub-Riemannian length of a lifted polyline: sum over segments of the
/// horizontal norm of the chord in the midpoint frame (equals the planar
/// chord length for trapezoid lifts).
double cc_length(const HorizontalCurve& curve);

struct CcOptions {
    int interior_vertices = 6;
    int restarts = 4;
    int max_iterations = 300;   // per restart
    double rel_improvement_tol = 1e-6;
    std::uint64_t seed = 0;
};

struct MetricReport {
    double distance_upper = 0.0;
    double lower_bound = 0.0;
    int iterations = 0;
    bool converged = true;
};

/// Estimate d_cc(p, q). The planar path is a polyline with free interior
/// vertices; the residual vertical gap is closed by an appended circular
/// loop whose analytic length sqrt(pi |gap|) enters the cost, so the search
/// is unconstrained. lower_bound is the planar projection bound |z_p - z_q|.
MetricReport cc_distance(const HeisPoint& p, const HeisPoint& q,
                         const CcOptions& options = CcOptions());

/// Smallest empirical constants with C_lower^{-1} |p-q| <= lower_bound and
/// distance_upper <= C_upper |p-q|^{1/2} over the sample. Pairs must lie in
/// the box |coordinate| <= box_radius.
std::pair<double, double> metric_comparison_check(
    const std::vector<std::pair<HeisPoint, HeisPoint>>& sample_pairs,
    double box_radius = 1.0, const CcOptions& options = CcOptions());

}  // namespace hopfdec

#endif
