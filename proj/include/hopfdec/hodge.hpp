#ifndef HOPFDEC_HODGE_HPP
#define HOPFDEC_HODGE_HPP

#include "hopfdec/cochain.hpp"

namespace hopfdec {

struct SolveOptions {
    double rel_tolerance = 1e-10;   // normal-equation relative tolerance
    int max_iterations = 0;         // 0: scaled to mesh size
    double closedness_budget = 0.05;
    MassKind mass = MassKind::identity;
};

struct PrimitiveResult {
    Cochain omega;
    double residual = 0.0;  // ||d omega - eta|| / ||eta|| (absolute when eta = 0)
    int iterations = 0;
};

/// Thrown when the least-squares iteration exhausts its budget above tol;
/// carries the best omega so the caller may accept it anyway.
class PrimitiveError : public std::runtime_error {
public:
    PrimitiveError(const std::string& what, Cochain omega, double residual,
                   int iterations)
        : std::runtime_error(what), omega(std::move(omega)), residual(residual),
          iterations(iterations) {}
    Cochain omega;
    double residual;
    int iterations;
};

/// Minimal-norm primitive: omega of degree eta.degree - 1 minimizing
/// ||d omega - eta|| with omega orthogonal to ker d (the Krylov iteration
/// starts at zero and stays in range(d^T)). Checks that eta is approximately
/// closed first. An explicit gauge shift omega + d beta leaves d omega
/// unchanged; independence tests exploit that hook.
PrimitiveResult solve_primitive(const Cochain& eta, double tol,
                                const SolveOptions& options = SolveOptions());

struct HodgeSplit {
    Cochain exact_part;
    Cochain coexact_part;
    Cochain harmonic_part;
    double residual = 0.0;  // max of ||d h||, ||d^T h|| relative to eta
};

/// Splits eta into image-of-d, image-of-adjoint-d, and discrete-harmonic
/// parts using the combinatorial Hodge Laplacian for the selected mass.
HodgeSplit hodge_decompose(const Cochain& eta, double tol,
                           const SolveOptions& options = SolveOptions());

}  // namespace hopfdec

#endif
