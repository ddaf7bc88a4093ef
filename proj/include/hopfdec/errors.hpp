#ifndef HOPFDEC_ERRORS_HPP
#define HOPFDEC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hopfdec {

/// Rejected input: incompatible dimensions, group indices, or complexes.
class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what)
        : std::invalid_argument(what) {}
};

/// A vector failed the horizontality precondition; carries the contact residual.
class ContactResidualError : public std::domain_error {
public:
    ContactResidualError(const std::string& what, double residual)
        : std::domain_error(what), residual(residual) {}
    double residual;
};

/// A cochain failed its approximate-closedness gate. For pullbacks this means
/// the low-rank hypothesis does not hold for the sampled map.
class ClosednessError : public std::domain_error {
public:
    ClosednessError(const std::string& what, double residual, double budget,
                    double family_time = -1.0)
        : std::domain_error(what), residual(residual), budget(budget),
          family_time(family_time) {}
    double residual;
    double budget;
    double family_time;  // parameter of the failing family member, or -1
};

/// Solver did not reach the requested tolerance. Carries the best iterate so
/// the caller may still accept it.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), residual(residual), iterations(iterations) {}
    double residual;
    int iterations;
};

/// Mesh construction request exceeds the configured size budget.
class MeshSizeError : public std::invalid_argument {
public:
    MeshSizeError(const std::string& what, std::size_t estimated_top_simplices)
        : std::invalid_argument(what), estimated_top_simplices(estimated_top_simplices) {}
    std::size_t estimated_top_simplices;
};

}  // namespace hopfdec

#endif
