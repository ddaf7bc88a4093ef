#ifndef HOPFDEC_MESH_HPP
#define HOPFDEC_MESH_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <unordered_map>
#include <vector>

#include "hopfdec/errors.hpp"

namespace hopfdec {

using VertexTuple = std::vector<int>;  // ascending vertex ids

struct VertexTupleHash {
    std::size_t operator()(const VertexTuple& v) const noexcept {
        std::size_t h = 1469598103934665603ull;
        for (int x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
            h *= 1099511628211ull;
        }
        return h;
    }
};

/// Oriented simplicial complex. Only vertex coordinates, top simplices and
/// per-top-simplex orientation flags are primary data; all lower skeleta,
/// signed incidence and volumes are derived at construction.
///
/// Simplices of every degree are stored with ascending vertex ids; the
/// boundary operator carries the usual (-1)^i face signs relative to that
/// order, so boundary-of-boundary vanishes as an exact integer identity.
class SimplicialComplex {
public:
    SimplicialComplex(int dim, Eigen::MatrixXd vertices,
                      std::vector<VertexTuple> top_simplices,
                      std::vector<int> orientation);

    int dim() const { return dim_; }
    std::size_t count(int k) const { return simplices_[k].size(); }
    const Eigen::MatrixXd& vertex_coords() const { return vertices_; }
    const std::vector<VertexTuple>& simplices(int k) const { return simplices_[k]; }
    const std::vector<int>& orientation() const { return orientation_; }

    /// Index of the ascending tuple among degree-k simplices, or -1.
    int simplex_index(int k, const VertexTuple& sorted_tuple) const;

    /// Signed boundary operator C_k -> C_{k-1}, entries in {-1, 0, +1}.
    const Eigen::SparseMatrix<double>& boundary(int k) const;

    /// Affine k-volume of a simplex (Gram determinant formula).
    double simplex_volume(int k, std::size_t index) const;
    const Eigen::VectorXd& volumes(int k) const { return volumes_[k]; }

    double max_edge_length() const;

    /// True when every (dim-1)-simplex has exactly two cofaces and the
    /// orientation flags make the fundamental chain a cycle.
    bool is_closed_manifold() const;

    /// Boundary of the fundamental chain as a vector over (dim-1)-simplices.
    Eigen::VectorXd fundamental_boundary() const;

    void save_json(const std::string& path) const;
    static SimplicialComplex load_json(const std::string& path);
    std::string to_json_string() const;
    static SimplicialComplex from_json_string(const std::string& text);

private:
    int dim_;
    Eigen::MatrixXd vertices_;                       // V x embed_dim
    std::vector<std::vector<VertexTuple>> simplices_;  // per degree 0..dim
    std::vector<std::unordered_map<VertexTuple, int, VertexTupleHash>> index_;
    std::vector<Eigen::SparseMatrix<double>> boundary_;  // [k] = d_k, k=1..dim
    std::vector<int> orientation_;
    std::vector<Eigen::VectorXd> volumes_;

    void build_skeleton();
    void build_boundaries();
    void build_volumes();
};

/// Triangulated S^3: the 16-cell boundary refined by `level` rounds of
/// edge-midpoint subdivision with projection to the unit sphere. Orientation
/// flags are det signs, i.e. the outward orientation of the boundary of B^4.
SimplicialComplex build_sphere3_mesh(int refinement_level);

/// Triangulated S^2 (octahedron base), same subdivision and orientation
/// conventions; used for embedding validation and pullback fixtures.
SimplicialComplex build_sphere2_mesh(int refinement_level);

/// Closed polygonal S^1 in R^2 with `segments` edges.
SimplicialComplex build_circle_mesh(int segments);

/// Layered triangulated ball over a closed oriented base sphere complex:
/// apex at the origin, vertex rings at radii j/radial_layers, prism blocks
/// between consecutive rings split by the global-vertex-order staircase rule.
struct ConeMesh {
    SimplicialComplex complex;
    SimplicialComplex base;
    int layers;
    int base_vertex_count;

    int apex_index() const { return 0; }
    int ring_vertex(int ring, int base_vertex) const {
        return 1 + (ring - 1) * base_vertex_count + base_vertex;
    }
    double ring_radius(int ring) const { return double(ring) / double(layers); }
    /// Ring index whose radius is closest to r (1..layers).
    int nearest_ring(double r) const;
};

ConeMesh build_cone_mesh(const SimplicialComplex& base, int radial_layers);

}  // namespace hopfdec

#endif
