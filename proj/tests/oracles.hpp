// Test-only oracles, independent of the implementation paths they check.
#ifndef HOPFDEC_TESTS_ORACLES_HPP
#define HOPFDEC_TESTS_ORACLES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

#include <hopfdec/cochain.hpp>

namespace oracles {

/// Fine trapezoid quadrature of int 2 sum_j (y_j x'_j - x_j y'_j) ds for a
/// smooth planar curve given by position and velocity callbacks.
inline double lift_delta_t(const std::function<Eigen::Vector2d(double)>& pos,
                           const std::function<Eigen::Vector2d(double)>& vel,
                           double s0, double s1, int samples) {
    auto integrand = [&](double s) {
        Eigen::Vector2d p = pos(s), v = vel(s);
        return 2.0 * (p[1] * v[0] - p[0] * v[1]);
    };
    double h = (s1 - s0) / samples;
    double total = 0.5 * (integrand(s0) + integrand(s1));
    for (int i = 1; i < samples; ++i) total += integrand(s0 + i * h);
    return total * h;
}

/// Signed planar area enclosed by a parametric curve (Green's theorem),
/// fine trapezoid rule.
inline double enclosed_area(const std::function<Eigen::Vector2d(double)>& pos,
                            const std::function<Eigen::Vector2d(double)>& vel,
                            double s0, double s1, int samples) {
    auto integrand = [&](double s) {
        Eigen::Vector2d p = pos(s), v = vel(s);
        return 0.5 * (p[0] * v[1] - p[1] * v[0]);
    };
    double h = (s1 - s0) / samples;
    double total = 0.5 * (integrand(s0) + integrand(s1));
    for (int i = 1; i < samples; ++i) total += integrand(s0 + i * h);
    return total * h;
}

/// Signed solid angle of the plane triangle (a, b, c) seen from the origin
/// (van Oosterom & Strackee). Equals the integral of the solid-angle 2-form
/// over the triangle, so dividing by 4 pi gives the normalized-area pullback.
inline double signed_solid_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                 const Eigen::Vector3d& c) {
    double det = a.dot(b.cross(c));
    double denom = a.norm() * b.norm() * c.norm() + a.dot(b) * c.norm() +
                   a.dot(c) * b.norm() + b.dot(c) * a.norm();
    return 2.0 * std::atan2(det, denom);
}

/// Exact moments of barycentric coordinates over a d-simplex of volume vol:
/// int lambda_i = vol/(d+1), int lambda_i lambda_j = vol (1+delta)/((d+1)(d+2)).
inline double lambda_moment1(double vol, int d) { return vol / (d + 1); }
inline double lambda_moment2(double vol, int d, bool diagonal) {
    return vol * (diagonal ? 2.0 : 1.0) / double((d + 1) * (d + 2));
}

inline hopfdec::Cochain random_cochain(const hopfdec::SimplicialComplex& cx,
                                       int degree, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    hopfdec::Cochain c(cx, degree);
    for (Eigen::Index i = 0; i < c.values.size(); ++i) c.values[i] = dist(rng);
    return c;
}

/// Integer-valued cochain: double arithmetic on small integers is exact, so
/// the algebraic identities below can be asserted with equality.
inline hopfdec::Cochain random_integer_cochain(const hopfdec::SimplicialComplex& cx,
                                               int degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> dist(-9, 9);
    hopfdec::Cochain c(cx, degree);
    for (Eigen::Index i = 0; i < c.values.size(); ++i) c.values[i] = dist(rng);
    return c;
}

}  // namespace oracles

#endif
