#ifndef HOPFDEC_HOPF_HPP
#define HOPFDEC_HOPF_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "hopfdec/forms.hpp"
#include "hopfdec/hodge.hpp"
#include "hopfdec/sampled_map.hpp"

namespace hopfdec {

struct PullbackStats {
    int degenerate_simplices = 0;  // simplices whose quadrature was zeroed
};

/// Discrete pullback f*alpha as a cochain of degree alpha.degree(): per
/// simplex, an order-2 quadrature of alpha over the affine image of the
/// simplex under f.
Cochain pullback(const SampledMap& f, const FormSpec& alpha, int threads = 1,
                 PullbackStats* stats = nullptr);

/// ||d(f*alpha)|| / (1 + ||f*alpha||). Small for maps with rank df <= degree;
/// the gate that stands in for the low-rank hypothesis.
double closedness_residual(const SampledMap& f, const FormSpec& alpha,
                           int threads = 1);

struct HopfOptions {
    double closedness_budget = 0.05;
    double primitive_accept = 0.05;   // accepted ||d omega - f*alpha||/||f*alpha||
    double solver_tolerance = 1e-10;  // normal-equation relative tolerance
    int threads = 1;
    bool with_oracle = false;
    std::uint64_t seed = 20240801;
};

struct HopfReport {
    double value = 0.0;
    double closedness_residual = 0.0;
    double primitive_residual = 0.0;
    double mesh_h = 0.0;
    double gauge_check = 0.0;
    std::optional<int> oracle_value;

    std::string to_json_string() const;
};

/// The generalized Hopf invariant: integrate omega cup d omega over the top
/// simplices, where omega is the minimal-norm primitive of f*alpha. The
/// closedness gate runs first; failing it means the rank hypothesis does not
/// hold for this input.
HopfReport hopf(const SampledMap& f, const FormSpec& alpha,
                const HopfOptions& options = HopfOptions());

/// Hopf invariant of the restriction of a ball map to the radius-r vertex
/// ring of a cone mesh, rescaled to the unit sphere. Snaps to the nearest
/// ring when r is off-ring (with a warning on stderr).
HopfReport hopf_scaled(const SampledMap& f_on_ball, const ConeMesh& cone,
                       double r, const FormSpec& alpha,
                       const HopfOptions& options = HopfOptions());

/// Max over trials of |HI(omega) - HI(omega + d beta)| for random beta; exact
/// to roundoff by the Leibniz rule and discrete Stokes.
double gauge_independence_check(const SampledMap& f, const FormSpec& alpha,
                                int trials,
                                const HopfOptions& options = HopfOptions());

struct HomotopySweep {
    std::vector<double> times;
    std::vector<SampledMap> maps;
    std::vector<double> values;
    std::vector<double> closedness_residuals;
    std::vector<double> primitive_residuals;
    double max_deviation = 0.0;
};

/// HI along a family of maps; max_deviation relative to the first member.
/// Any member failing the closedness gate aborts, identifying its time.
HomotopySweep homotopy_sweep(std::vector<SampledMap> family,
                             std::vector<double> times, const FormSpec& alpha,
                             const HopfOptions& options = HopfOptions());

struct ConvergenceRow {
    int k = 0;
    double lp_pullback_diff = 0.0;  // ||g_k* alpha - g* alpha||_{L^p}
    double hi_diff = 0.0;           // |HI(g_k) - HI(g)|
    double bound_product = 0.0;     // (||g_k* a||_p + ||g* a||_p) ||diff||_p
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    double domination_constant = 0.0;  // max hi_diff / bound_product
};

/// Per-k pullback distance in the discrete L^p norm and Hopf invariant gap,
/// together with the product that should dominate the gap. Requires
/// p >= 2 - 1/degree... i.e. 2 - 1/(2n).
ConvergenceTable convergence_experiment(const std::vector<SampledMap>& g_seq,
                                        const SampledMap& g, const FormSpec& alpha,
                                        double p,
                                        const HopfOptions& options = HopfOptions());

/// Linking number of the classical Hopf fibers over two distinct points of
/// S^2: stereographic projection to R^3 and a periodic-trapezoid Gauss
/// linking integral, rounded to the nearest integer. Errors when the
/// quadrature value is farther than 0.1 from an integer.
int linking_oracle(const Eigen::Vector3d& value_a, const Eigen::Vector3d& value_b,
                   int quadrature_points = 256);

}  // namespace hopfdec

#endif
