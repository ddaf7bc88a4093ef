#ifndef HOPFDEC_MAPS_HPP
#define HOPFDEC_MAPS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "hopfdec/heisenberg.hpp"
#include "hopfdec/sampled_map.hpp"

namespace hopfdec {

/// Builtin identifier plus parameters, or a tabulated per-vertex value file.
struct MapSpec {
    std::string name;                // "hopf", "constant", "full_rank_control",
                                     // or "tabulated"
    std::vector<double> parameters;  // builtin-specific
    int codomain_dim = 3;
    std::string tabulated_path;      // CSV rows: vertex_index, v_1, ..., v_m
};

/// Resolve a map spec on the given domain mesh. Builtin names must resolve;
/// tabulated specs must carry one value row per vertex.
SampledMap resolve_map_spec(const MapSpec& spec, const SimplicialComplex& domain,
                            std::uint64_t seed = 0);

/// Parse the tabulated map format: CSV rows (vertex_index, v_1, ..., v_m).
Eigen::MatrixXd load_tabulated_values(const std::string& csv_path,
                                      std::size_t vertex_count, int codomain_dim);

/// Classical Hopf fibration h(z1, z2) = (2 z1 conj(z2), |z1|^2 - |z2|^2)
/// sampled at the vertices of an S^3 mesh; values lie on the unit S^2.
SampledMap hopf_fibration_map(const SimplicialComplex& sphere3);

/// Full-rank negative control: an affine map R^4 -> R^3 restricted to S^3,
/// scaled so its image crosses the cutoff shell of the extended area form.
SampledMap full_rank_control_map(const SimplicialComplex& sphere3,
                                 std::uint64_t seed = 7);

/// Constant map (all vertices to the same point).
SampledMap constant_map(const SimplicialComplex& mesh, const Eigen::VectorXd& value);

/// Horizontal lift of the Gerono figure-eight (sin s, sin s cos s), t0 = 0:
/// a closed injective curve in H_1 (the two planar lobes have opposite
/// signed areas, so the lift closes while the self-intersection separates).
HorizontalCurve figure_eight_embedding(int samples);

/// The figure-eight lift resampled as vertex values on a circle mesh.
SampledMap figure_eight_on_circle(const SimplicialComplex& circle);

struct EmbeddingReport {
    bool accepted = false;
    double max_contact_residual = 0.0;
    double min_value_separation = 0.0;  // over sampled vertex pairs
    std::string reason;
};

/// Validation plug point for user-supplied S^2 -> H_2 vertex values (no
/// builtin formula is shipped): contact residual gate plus a duplicate-value
/// injectivity sampler.
EmbeddingReport validate_sphere2_embedding_into_h2(const SimplicialComplex& sphere2,
                                                   const Eigen::MatrixXd& values,
                                                   double contact_tol = 1e-6,
                                                   double separation_tol = 1e-9);

/// Radial extension f(x) = boundary(x/|x|) onto a cone mesh; the apex gets
/// the boundary value of `apex_base_vertex` and its star is excluded from
/// rank and energy statistics by the analyzers' degeneracy flags.
SampledMap radial_extension(const SampledMap& boundary_map, const ConeMesh& cone,
                            int apex_base_vertex = 0);

struct RankProfile {
    std::vector<Eigen::VectorXd> per_simplex_singular_values;
    std::vector<int> numerical_rank;
    Eigen::VectorXd histogram;  // volume-weighted fraction per rank 0..dim
    double tol_relative = 0.0;
    int excluded_degenerate = 0;

    /// Volume fraction of simplices with numerical rank > r.
    double fraction_above(int r) const;
    double fraction_at_most(int r) const { return 1.0 - fraction_above(r); }
};

/// Per-simplex singular values of the affine differentials; numerical rank
/// counts sigma_i >= tol_relative * sigma_1, histogram weighted by simplex
/// volume. Degenerate domain simplices are excluded and counted.
RankProfile rank_profile(const SampledMap& f, double tol_relative = 0.05);

struct ContactReport {
    Eigen::VectorXd per_simplex_residual;
    double max_residual = 0.0;
    double mean_residual = 0.0;
    double horizontal_energy = 0.0;  // sum vol * |grad f|_H^p
};

/// Residual of the contact equation grad t = 2 sum_j (y_j grad x_j -
/// x_j grad y_j) per top simplex, with simplex-averaged coefficients, plus
/// the horizontal Dirichlet energy for the given exponent.
ContactReport contact_check(const SampledMap& f, double energy_exponent = 2.0);

struct SymplecticRankReport {
    Eigen::VectorXd pullback_norm;  // ||F* omega||_F per top simplex
    std::vector<int> numerical_rank;
    std::vector<int> violators;  // small pullback but rank > n
    double volume_fraction_violating = 0.0;
};

/// Pullback of the symplectic form omega = sum dx_j ^ dy_j under each affine
/// differential; checks the implication "F* omega small => rank <= n".
SymplecticRankReport symplectic_rank_check(const SampledMap& f, double tol,
                                           double rank_tol_relative = 0.05);

/// f_t = R_{t pi} o f for t on a uniform grid of `steps` values in [0, 1],
/// R the z-axis rotation of S^2. Values must lie on S^2 within 1e-9.
std::vector<SampledMap> rotation_homotopy(const SampledMap& f, int steps);

/// Rotation of S^2 about the z-axis by `angle`, applied to vertex values.
SampledMap rotate_sphere_values(const SampledMap& f, double angle);

struct CenterDifferenceReport {
    std::vector<int> qualifying_simplices;  // all vertices have g^{-1}*f near Z
    Eigen::VectorXd differential_gap;       // ||df - dg||_F on those simplices
    double max_gap = 0.0;
};

/// Vertices where the group difference g^{-1} * f lies near the center Z
/// (|z| <= tol); on simplices all of whose vertices qualify, reports the
/// Frobenius gap between the affine differentials.
CenterDifferenceReport center_difference_check(const SampledMap& f,
                                               const SampledMap& g, double tol);

}  // namespace hopfdec

#endif
