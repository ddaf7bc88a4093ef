#include "hopfdec/hopf.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <random>

#include <json.hpp>

#include "hopfdec/parallel.hpp"
#include "hopfdec/quadrature.hpp"

namespace hopfdec {

namespace {

double minor_det(const Eigen::MatrixXd& j, const std::vector<int>& rows) {
    const int k = static_cast<int>(rows.size());
    Eigen::MatrixXd sub(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = j(rows[r], c);
    return sub.determinant();
}

}  // namespace

Cochain pullback(const SampledMap& f, const FormSpec& alpha, int threads,
                 PullbackStats* stats) {
    if (alpha.ambient_dim() != f.codomain_dim())
        throw DimensionMismatch("pullback: form dimension != map codomain");
    const SimplicialComplex& cx = f.mesh();
    const int k = alpha.degree();
    if (k > cx.dim())
        throw std::invalid_argument("pullback: form degree exceeds mesh dimension");

    Cochain out(cx, k);
    const auto& simplices = cx.simplices(k);
    const auto& values = f.values();
    const SimplexQuadrature quad = simplex_quadrature_order2(k);
    std::atomic<int> degenerate{0};

    parallel_for(simplices.size(), threads, [&](std::size_t lo, std::size_t hi) {
        Eigen::MatrixXd j(values.cols(), k);
        Eigen::VectorXd x(values.cols());
        for (std::size_t s = lo; s < hi; ++s) {
            const auto& v = simplices[s];
            for (int c = 0; c < k; ++c)
                j.col(c) = (values.row(v[c + 1]) - values.row(v[0])).transpose();
            double total = 0.0;
            for (Eigen::Index q = 0; q < quad.weights.size(); ++q) {
                x.setZero();
                for (int c = 0; c <= k; ++c)
                    x += quad.barycentric(q, c) * values.row(v[c]).transpose();
                double integrand = 0.0;
                for (const auto& tuple : alpha.tuples())
                    integrand += alpha.coefficient(tuple, x) * minor_det(j, tuple);
                total += quad.weights[q] * integrand;
            }
            if (!std::isfinite(total)) {
                total = 0.0;
                degenerate.fetch_add(1, std::memory_order_relaxed);
            }
            out.values[static_cast<Eigen::Index>(s)] = total;
        }
    });
    if (stats) stats->degenerate_simplices = degenerate.load();
    return out;
}

double closedness_residual(const SampledMap& f, const FormSpec& alpha,
                           int threads) {
    Cochain c = pullback(f, alpha, threads);
    if (c.degree == c.complex->dim()) return 0.0;
    return coboundary(c).values.norm() / (1.0 + c.values.norm());
}

namespace {

double hopf_value(const Cochain& omega) {
    return integrate_top(cup(omega, coboundary(omega)));
}

Cochain random_gauge_shift(const SimplicialComplex& cx, int degree,
                           std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Cochain beta(cx, degree);
    for (Eigen::Index i = 0; i < beta.values.size(); ++i)
        beta.values[i] = dist(rng);
    return coboundary(beta);
}

struct Pipeline {
    Cochain pulled;
    double closedness = 0.0;
    PrimitiveResult primitive;
};

Pipeline run_pipeline(const SampledMap& f, const FormSpec& alpha,
                      const HopfOptions& options) {
    Pipeline p;
    p.pulled = pullback(f, alpha, options.threads);
    p.closedness = (p.pulled.degree == p.pulled.complex->dim())
                       ? 0.0
                       : coboundary(p.pulled).values.norm() /
                             (1.0 + p.pulled.values.norm());
    if (p.closedness > options.closedness_budget)
        throw ClosednessError(
            "hopf: closedness residual " + std::to_string(p.closedness) +
                " exceeds budget " + std::to_string(options.closedness_budget) +
                " (rank hypothesis fails for this map)",
            p.closedness, options.closedness_budget);
    SolveOptions solve;
    solve.rel_tolerance = options.solver_tolerance;
    solve.closedness_budget = options.closedness_budget;
    p.primitive = solve_primitive(p.pulled, options.primitive_accept, solve);
    return p;
}

bool factors_through_sphere(const SampledMap& f) {
    if (f.codomain_dim() != 3) return false;
    for (Eigen::Index v = 0; v < f.values().rows(); ++v)
        if (std::abs(f.values().row(v).norm() - 1.0) > 1e-6) return false;
    return true;
}

}  // namespace

HopfReport hopf(const SampledMap& f, const FormSpec& alpha,
                const HopfOptions& options) {
    Pipeline p = run_pipeline(f, alpha, options);
    HopfReport report;
    report.closedness_residual = p.closedness;
    report.primitive_residual = p.primitive.residual;
    report.mesh_h = f.mesh().max_edge_length();
    report.value = hopf_value(p.primitive.omega);

    std::mt19937_64 rng(options.seed);
    Cochain shifted = p.primitive.omega;
    shifted.values += random_gauge_shift(f.mesh(), alpha.degree() - 2, rng).values;
    report.gauge_check = std::abs(hopf_value(shifted) - report.value);

    if (options.with_oracle && alpha.name() == "s2_area_extended" &&
        factors_through_sphere(f)) {
        report.oracle_value = linking_oracle(Eigen::Vector3d(0, 0, 1),
                                             Eigen::Vector3d(0, 0, -1));
    }
    return report;
}

HopfReport hopf_scaled(const SampledMap& f_on_ball, const ConeMesh& cone,
                       double r, const FormSpec& alpha,
                       const HopfOptions& options) {
    const SimplicialComplex& fm = f_on_ball.mesh();
    bool compatible =
        fm.dim() == cone.complex.dim() && fm.count(0) == cone.complex.count(0) &&
        (fm.vertex_coords() - cone.complex.vertex_coords())
                .lpNorm<Eigen::Infinity>() < 1e-12;
    if (!compatible)
        throw DimensionMismatch("hopf_scaled: map does not live on the cone mesh");
    if (!(r > 0.0 && r < 1.0 + 1e-12))
        throw std::invalid_argument("hopf_scaled: r must lie in (0, 1]");
    int ring = cone.nearest_ring(r);
    if (std::abs(cone.ring_radius(ring) - r) > 1e-12)
        std::clog << "hopf_scaled: snapping r=" << r << " to ring radius "
                  << cone.ring_radius(ring) << "\n";

    Eigen::MatrixXd ring_values(cone.base.count(0), f_on_ball.codomain_dim());
    for (int v = 0; v < cone.base_vertex_count; ++v)
        ring_values.row(v) = f_on_ball.values().row(cone.ring_vertex(ring, v));
    SampledMap restricted(cone.base, std::move(ring_values));
    return hopf(restricted, alpha, options);
}

double gauge_independence_check(const SampledMap& f, const FormSpec& alpha,
                                int trials, const HopfOptions& options) {
    if (trials <= 0) return 0.0;
    Pipeline p = run_pipeline(f, alpha, options);
    double base = hopf_value(p.primitive.omega);
    std::mt19937_64 rng(options.seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        Cochain shifted = p.primitive.omega;
        shifted.values +=
            random_gauge_shift(f.mesh(), alpha.degree() - 2, rng).values;
        worst = std::max(worst, std::abs(hopf_value(shifted) - base));
    }
    return worst;
}

HomotopySweep homotopy_sweep(std::vector<SampledMap> family,
                             std::vector<double> times, const FormSpec& alpha,
                             const HopfOptions& options) {
    if (family.empty())
        throw std::invalid_argument("homotopy_sweep: empty family");
    if (times.empty()) {
        times.resize(family.size());
        for (std::size_t i = 0; i < times.size(); ++i)
            times[i] = family.size() == 1
                           ? 0.0
                           : double(i) / double(family.size() - 1);
    }
    if (times.size() != family.size())
        throw DimensionMismatch("homotopy_sweep: times/maps count mismatch");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i - 1] < times[i]))
            throw std::invalid_argument("homotopy_sweep: times must increase");

    HomotopySweep sweep;
    sweep.times = std::move(times);
    sweep.values.reserve(family.size());
    for (std::size_t i = 0; i < family.size(); ++i) {
        try {
            HopfReport rep = hopf(family[i], alpha, options);
            sweep.values.push_back(rep.value);
            sweep.closedness_residuals.push_back(rep.closedness_residual);
            sweep.primitive_residuals.push_back(rep.primitive_residual);
        } catch (const ClosednessError& err) {
            throw ClosednessError("homotopy_sweep: member at t=" +
                                      std::to_string(sweep.times[i]) +
                                      " failed the closedness gate",
                                  err.residual, err.budget, sweep.times[i]);
        }
    }
    for (double v : sweep.values)
        sweep.max_deviation =
            std::max(sweep.max_deviation, std::abs(v - sweep.values.front()));
    sweep.maps = std::move(family);
    return sweep;
}

ConvergenceTable convergence_experiment(const std::vector<SampledMap>& g_seq,
                                        const SampledMap& g, const FormSpec& alpha,
                                        double p, const HopfOptions& options) {
    double p_min = 2.0 - 1.0 / alpha.degree();
    if (p < p_min - 1e-12)
        throw std::invalid_argument(
            "convergence_experiment: p must satisfy p >= 2 - 1/degree");

    ConvergenceTable table;
    Cochain cg = pullback(g, alpha, options.threads);
    double hi_g = hopf(g, alpha, options).value;
    double cg_norm = lp_norm(cg, p);

    for (std::size_t i = 0; i < g_seq.size(); ++i) {
        Cochain ck = pullback(g_seq[i], alpha, options.threads);
        Cochain diff(*cg.complex, cg.degree, ck.values - cg.values);
        ConvergenceRow row;
        row.k = static_cast<int>(i + 1);
        row.lp_pullback_diff = lp_norm(diff, p);
        row.hi_diff = std::abs(hopf(g_seq[i], alpha, options).value - hi_g);
        row.bound_product =
            (lp_norm(ck, p) + cg_norm) * row.lp_pullback_diff;
        if (row.bound_product > 0.0)
            table.domination_constant = std::max(
                table.domination_constant, row.hi_diff / row.bound_product);
        table.rows.push_back(row);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Gauss linking oracle for the classical Hopf fibration

namespace {

// A point of the fiber circle over p in S^2: the circle is
// theta -> cos(theta) u + sin(theta) u_perp with u_perp = i u.
void hopf_fiber_basis(const Eigen::Vector3d& p, Eigen::Vector4d& u,
                      Eigen::Vector4d& u_perp) {
    Eigen::Vector3d q = p.normalized();
    double z2 = std::sqrt(std::max(0.0, (1.0 - q[2]) / 2.0));
    double re1, im1;
    if (z2 < 1e-12) {
        re1 = 1.0;
        im1 = 0.0;
        z2 = 0.0;
    } else {
        re1 = q[0] / (2.0 * z2);
        im1 = q[1] / (2.0 * z2);
    }
    u = Eigen::Vector4d(re1, im1, z2, 0.0);
    u_perp = Eigen::Vector4d(-im1, re1, 0.0, z2);
}

}  // namespace

int linking_oracle(const Eigen::Vector3d& value_a, const Eigen::Vector3d& value_b,
                   int quadrature_points) {
    if ((value_a - value_b).norm() < 1e-12)
        throw std::invalid_argument("linking_oracle: values must be distinct");
    if (quadrature_points < 16)
        throw std::invalid_argument("linking_oracle: too few quadrature points");

    Eigen::Vector4d ua, wa, ub, wb;
    hopf_fiber_basis(value_a, ua, wa);
    hopf_fiber_basis(value_b, ub, wb);

    // stereographic pole away from both fibers, with an orientation-preserving
    // frame of its orthogonal complement: det[pole, e1, e2, e3] = -1
    Eigen::Vector4d pole = Eigen::Vector4d(0.31, -0.77, 0.52, 0.16).normalized();
    Eigen::Matrix4d frame;
    frame.col(0) = pole;
    frame.col(1) = Eigen::Vector4d(1, 0, 0, 0);
    frame.col(2) = Eigen::Vector4d(0, 1, 0, 0);
    frame.col(3) = Eigen::Vector4d(0, 0, 1, 0);
    Eigen::HouseholderQR<Eigen::Matrix4d> qr(frame);
    Eigen::Matrix4d q = qr.householderQ();
    if (q.col(0).dot(pole) < 0.0) q = -q;
    Eigen::Vector4d e1 = q.col(1), e2 = q.col(2), e3 = q.col(3);
    Eigen::Matrix4d det_check;
    det_check << pole, e1, e2, e3;
    if (det_check.determinant() > 0.0) e3 = -e3;

    auto project = [&](const Eigen::Vector4d& x, const Eigen::Vector4d& dx,
                       Eigen::Vector3d& y, Eigen::Vector3d& dy) {
        double b = 1.0 - pole.dot(x);
        Eigen::Vector3d a(e1.dot(x), e2.dot(x), e3.dot(x));
        Eigen::Vector3d da(e1.dot(dx), e2.dot(dx), e3.dot(dx));
        y = a / b;
        dy = da / b + a * (pole.dot(dx) / (b * b));
    };

    const int n = quadrature_points;
    std::vector<Eigen::Vector3d> ga(n), ta(n), gb(n), tb(n);
    double min_pole_gap = 2.0;
    for (int i = 0; i < n; ++i) {
        double th = 2.0 * M_PI * i / n;
        Eigen::Vector4d xa = std::cos(th) * ua + std::sin(th) * wa;
        Eigen::Vector4d dxa = -std::sin(th) * ua + std::cos(th) * wa;
        Eigen::Vector4d xb = std::cos(th) * ub + std::sin(th) * wb;
        Eigen::Vector4d dxb = -std::sin(th) * ub + std::cos(th) * wb;
        min_pole_gap = std::min({min_pole_gap, (xa - pole).norm(), (xb - pole).norm()});
        project(xa, dxa, ga[i], ta[i]);
        project(xb, dxb, gb[i], tb[i]);
    }
    if (min_pole_gap < 0.05)
        throw std::runtime_error("linking_oracle: fiber passes too close to the pole");

    double dtheta = 2.0 * M_PI / n;
    double lk = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Eigen::Vector3d r = ga[i] - gb[j];
            double rn = r.norm();
            lk += r.dot(ta[i].cross(tb[j])) / (rn * rn * rn);
        }
    }
    lk *= dtheta * dtheta / (4.0 * M_PI);

    double rounded = std::round(lk);
    if (std::abs(lk - rounded) > 0.1)
        throw std::runtime_error(
            "linking_oracle: quadrature value " + std::to_string(lk) +
            " is not close to an integer (circles too close or rule too coarse)");
    return static_cast<int>(rounded);
}

std::string HopfReport::to_json_string() const {
    nlohmann::json j;
    j["value"] = value;
    j["closedness_residual"] = closedness_residual;
    j["primitive_residual"] = primitive_residual;
    j["mesh_h"] = mesh_h;
    j["gauge_check"] = gauge_check;
    if (oracle_value)
        j["oracle_value"] = *oracle_value;
    else
        j["oracle_value"] = nullptr;
    return j.dump();
}

}  // namespace hopfdec
