#ifndef HOPFDEC_COCHAIN_HPP
#define HOPFDEC_COCHAIN_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>

#include "hopfdec/mesh.hpp"

namespace hopfdec {

/// Real-valued assignment on the oriented k-simplices of a complex. Values
/// are indexed by the complex's ascending-order simplex list.
struct Cochain {
    const SimplicialComplex* complex = nullptr;
    int degree = 0;
    Eigen::VectorXd values;

    Cochain() = default;
    Cochain(const SimplicialComplex& complex, int degree);
    Cochain(const SimplicialComplex& complex, int degree, Eigen::VectorXd values);

    static Cochain zero(const SimplicialComplex& complex, int degree);

    std::string to_json_string() const;
    static Cochain from_json_string(const SimplicialComplex& complex,
                                    const std::string& text);
};

/// Discrete exterior derivative: signed incidence transpose. Exact integer
/// signs; errors on top degree.
Cochain coboundary(const Cochain& c);

enum class CupKind { alexander_whitney, symmetrized };

/// Alexander-Whitney cup product in the mesh's fixed global vertex order:
/// (a cup b)(v_0..v_{p+q}) = a(v_0..v_p) * b(v_p..v_{p+q}). Satisfies the
/// Leibniz rule d(a cup b) = da cup b + (-1)^p a cup db exactly.
Cochain cup(const Cochain& a, const Cochain& b,
            CupKind kind = CupKind::alexander_whitney);

/// Orientation-signed sum over top simplices.
double integrate_top(const Cochain& c);

/// Discrete L^p cochain norm (sum |value|^p * simplex-volume)^{1/p} with
/// affine simplex volumes.
double lp_norm(const Cochain& c, double p);

enum class MassKind { identity, whitney };

/// Inner-product matrix for degree-k cochains. identity is the combinatorial
/// default; whitney assembles the Galerkin mass matrix of lowest-order
/// Whitney forms (degree-2 exact quadrature of barycentric products).
Eigen::SparseMatrix<double> mass_matrix(const SimplicialComplex& complex,
                                        int degree, MassKind kind);

}  // namespace hopfdec

#endif
