#include "hopfdec/hodge.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace hopfdec {

namespace {

struct CgOutcome {
    Eigen::VectorXd x;
    int iterations = 0;
    double rel_normal_residual = 0.0;
    bool converged = true;
};

// CG on a (possibly singular, consistent) SPD operator. Starting from zero
// keeps the iterates inside the operator's range, which is what gives the
// minimal-norm gauge of the least-squares solves below. `scale` is the norm
// of the original data; an RHS that vanishes relative to it (for example
// d(d omega)) solves to zero without iterating.
template <typename Op>
CgOutcome conjugate_gradient(const Op& op, const Eigen::VectorXd& b, double tol,
                             int maxit, double scale = 0.0) {
    CgOutcome out;
    out.x = Eigen::VectorXd::Zero(b.size());
    double bnorm = b.norm();
    if (bnorm == 0.0 || bnorm <= 1e-13 * scale) return out;

    Eigen::VectorXd r = b;
    Eigen::VectorXd p = r;
    double rho = r.squaredNorm();
    for (int it = 0; it < maxit; ++it) {
        Eigen::VectorXd q = op(p);
        double pq = p.dot(q);
        if (pq <= 0.0) break;  // numerical null-space direction
        double alpha = rho / pq;
        out.x += alpha * p;
        r -= alpha * q;
        ++out.iterations;
        double rho_new = r.squaredNorm();
        if (std::sqrt(rho_new) <= tol * bnorm) {
            out.rel_normal_residual = std::sqrt(rho_new) / bnorm;
            return out;
        }
        p = r + (rho_new / rho) * p;
        rho = rho_new;
    }
    out.rel_normal_residual = r.norm() / bnorm;
    out.converged = false;
    return out;
}

int default_maxit(const SolveOptions& options, Eigen::Index unknowns) {
    if (options.max_iterations > 0) return options.max_iterations;
    return std::max<Eigen::Index>(1000, 2 * unknowns);
}

}  // namespace

PrimitiveResult solve_primitive(const Cochain& eta, double tol,
                                const SolveOptions& options) {
    if (!eta.complex) throw std::invalid_argument("solve_primitive: empty cochain");
    const SimplicialComplex& cx = *eta.complex;
    const int k = eta.degree;
    if (k < 1) throw std::invalid_argument("solve_primitive: degree must be >= 1");

    double eta_norm = eta.values.norm();
    if (k < cx.dim()) {
        double closeness = (cx.boundary(k + 1).transpose() * eta.values).norm() /
                           (1.0 + eta_norm);
        if (closeness > options.closedness_budget)
            throw ClosednessError(
                "solve_primitive: input is not approximately closed", closeness,
                options.closedness_budget);
    }

    // d_{k-1} maps (k-1)-cochains to k-cochains
    Eigen::SparseMatrix<double> d = cx.boundary(k).transpose();

    CgOutcome cg;
    if (options.mass == MassKind::identity) {
        Eigen::VectorXd rhs = d.transpose() * eta.values;
        auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
            return d.transpose() * (d * v);
        };
        cg = conjugate_gradient(op, rhs, options.rel_tolerance,
                                default_maxit(options, d.cols()), eta_norm);
    } else {
        Eigen::SparseMatrix<double> mk = mass_matrix(cx, k, options.mass);
        Eigen::VectorXd weighted = mk * eta.values;
        Eigen::VectorXd rhs = d.transpose() * weighted;
        auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
            return d.transpose() * (mk * (d * v));
        };
        cg = conjugate_gradient(op, rhs, options.rel_tolerance,
                                default_maxit(options, d.cols()), weighted.norm());
    }

    PrimitiveResult result;
    result.omega = Cochain(cx, k - 1, std::move(cg.x));
    result.iterations = cg.iterations;
    double defect = (d * result.omega.values - eta.values).norm();
    result.residual = (eta_norm > 0.0) ? defect / eta_norm : defect;

    if (result.residual > tol) {
        const char* why = cg.converged ? " (eta is not exact)"
                                       : " after the iteration budget";
        throw PrimitiveError("solve_primitive: residual " +
                                 std::to_string(result.residual) +
                                 " above tolerance" + why,
                             result.omega, result.residual, result.iterations);
    }
    return result;
}

HodgeSplit hodge_decompose(const Cochain& eta, double tol,
                           const SolveOptions& options) {
    if (!eta.complex) throw std::invalid_argument("hodge_decompose: empty cochain");
    const SimplicialComplex& cx = *eta.complex;
    const int k = eta.degree;
    if (k < 1 || k > cx.dim())
        throw std::invalid_argument("hodge_decompose: degree out of range");

    const bool weighted = options.mass != MassKind::identity;
    Eigen::SparseMatrix<double> mk;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mk_chol;
    if (weighted) {
        mk = mass_matrix(cx, k, options.mass);
        mk_chol.compute(mk);
        if (mk_chol.info() != Eigen::Success)
            throw SolverError("hodge_decompose: mass matrix factorization failed",
                              0.0, 0);
    }

    const Eigen::VectorXd& b = eta.values;
    const int maxit = default_maxit(options, static_cast<Eigen::Index>(cx.count(k)));

    // exact part: M-orthogonal projection onto range(d_{k-1})
    Eigen::SparseMatrix<double> dlow = cx.boundary(k).transpose();
    CgOutcome ex;
    if (!weighted) {
        auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
            return dlow.transpose() * (dlow * v);
        };
        ex = conjugate_gradient(op, Eigen::VectorXd(dlow.transpose() * b),
                                options.rel_tolerance, maxit, b.norm());
    } else {
        auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
            return dlow.transpose() * (mk * (dlow * v));
        };
        ex = conjugate_gradient(op, Eigen::VectorXd(dlow.transpose() * (mk * b)),
                                options.rel_tolerance, maxit,
                                Eigen::VectorXd(mk * b).norm());
    }
    if (!ex.converged)
        throw SolverError("hodge_decompose: exact-part solve did not converge",
                          ex.rel_normal_residual, ex.iterations);
    Eigen::VectorXd exact = dlow * ex.x;

    // coexact part: M-orthogonal projection onto range(delta)
    Eigen::VectorXd coexact = Eigen::VectorXd::Zero(b.size());
    if (k < cx.dim()) {
        Eigen::SparseMatrix<double> dk = cx.boundary(k + 1).transpose();  // C^k -> C^{k+1}
        if (!weighted) {
            auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
                return dk * (dk.transpose() * v);
            };
            CgOutcome co = conjugate_gradient(op, Eigen::VectorXd(dk * b),
                                              options.rel_tolerance, maxit, b.norm());
            if (!co.converged)
                throw SolverError("hodge_decompose: coexact-part solve did not converge",
                                  co.rel_normal_residual, co.iterations);
            coexact = dk.transpose() * co.x;
        } else {
            // solve (d_k M_k^{-1} d_k^T) y = d_k eta, coexact = M_k^{-1} d_k^T y
            auto op = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
                return dk * mk_chol.solve(Eigen::VectorXd(dk.transpose() * v));
            };
            CgOutcome co = conjugate_gradient(op, Eigen::VectorXd(dk * b),
                                              options.rel_tolerance, maxit, b.norm());
            if (!co.converged)
                throw SolverError("hodge_decompose: coexact-part solve did not converge",
                                  co.rel_normal_residual, co.iterations);
            coexact = mk_chol.solve(Eigen::VectorXd(dk.transpose() * co.x));
        }
    }

    HodgeSplit split;
    split.exact_part = Cochain(cx, k, exact);
    split.coexact_part = Cochain(cx, k, coexact);
    split.harmonic_part = Cochain(cx, k, b - exact - coexact);

    const Eigen::VectorXd& h = split.harmonic_part.values;
    double scale = 1.0 + b.norm();
    double closed = 0.0, coclosed = 0.0;
    if (k < cx.dim())
        closed = (cx.boundary(k + 1).transpose() * h).norm() / scale;
    if (!weighted) {
        coclosed = (cx.boundary(k) * h).norm() / scale;
    } else {
        Eigen::SparseMatrix<double> mlow = mass_matrix(cx, k - 1, options.mass);
        Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> mlow_chol(mlow);
        Eigen::VectorXd delta_h =
            mlow_chol.solve(Eigen::VectorXd(cx.boundary(k) * (mk * h)));
        coclosed = delta_h.norm() / scale;
    }
    split.residual = std::max(closed, coclosed);
    if (split.residual > tol)
        throw SolverError("hodge_decompose: harmonic defect above tolerance",
                          split.residual, ex.iterations);
    return split;
}

}  // namespace hopfdec
