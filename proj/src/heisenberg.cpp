#include "hopfdec/heisenberg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace hopfdec {

namespace {

void check_finite(const Eigen::VectorXd& v, const char* what) {
    if (!v.allFinite())
        throw std::invalid_argument(std::string(what) + ": non-finite coordinates");
}

}  // namespace

HeisPoint::HeisPoint(int n_, Eigen::VectorXd z_, double t_)
    : n(n_), z(std::move(z_)), t(t_) {
    if (n < 1) throw std::invalid_argument("HeisPoint: group index must be >= 1");
    if (z.size() != 2 * n)
        throw DimensionMismatch("HeisPoint: z must have 2n entries");
    check_finite(z, "HeisPoint");
    if (!std::isfinite(t))
        throw std::invalid_argument("HeisPoint: non-finite t");
}

HeisPoint HeisPoint::origin(int n) {
    return HeisPoint(n, Eigen::VectorXd::Zero(2 * n), 0.0);
}

Eigen::VectorXd HeisPoint::coords() const {
    Eigen::VectorXd c(2 * n + 1);
    c.head(2 * n) = z;
    c[2 * n] = t;
    return c;
}

HeisPoint HeisPoint::from_coords(const Eigen::VectorXd& c) {
    if (c.size() < 3 || c.size() % 2 == 0)
        throw DimensionMismatch("HeisPoint::from_coords: size must be 2n+1");
    int n = static_cast<int>((c.size() - 1) / 2);
    return HeisPoint(n, c.head(2 * n), c[2 * n]);
}

TangentVector::TangentVector(HeisPoint base_, Eigen::VectorXd components_)
    : base(std::move(base_)), components(std::move(components_)) {
    if (components.size() != 2 * base.n + 1)
        throw DimensionMismatch("TangentVector: components must have 2n+1 entries");
}

HeisPoint group_mul(const HeisPoint& p, const HeisPoint& q) {
    if (p.n != q.n)
        throw DimensionMismatch("group_mul: group indices differ");
    // Im(z_j conj(z'_j)) = y_j x'_j - x_j y'_j
    double twist = 0.0;
    for (int j = 0; j < p.n; ++j)
        twist += p.y(j) * q.x(j) - p.x(j) * q.y(j);
    return HeisPoint(p.n, p.z + q.z, p.t + q.t + 2.0 * twist);
}

HeisPoint group_inv(const HeisPoint& p) {
    return HeisPoint(p.n, -p.z, -p.t);
}

std::vector<TangentVector> frame_at(const HeisPoint& p) {
    std::vector<TangentVector> frame;
    frame.reserve(2 * p.n + 1);
    const int tdim = 2 * p.n + 1;
    for (int j = 0; j < p.n; ++j) {
        Eigen::VectorXd xj = Eigen::VectorXd::Zero(tdim);
        xj[2 * j] = 1.0;
        xj[2 * p.n] = 2.0 * p.y(j);
        frame.emplace_back(p, std::move(xj));

        Eigen::VectorXd yj = Eigen::VectorXd::Zero(tdim);
        yj[2 * j + 1] = 1.0;
        yj[2 * p.n] = -2.0 * p.x(j);
        frame.emplace_back(p, std::move(yj));
    }
    Eigen::VectorXd tt = Eigen::VectorXd::Zero(tdim);
    tt[2 * p.n] = 1.0;
    frame.emplace_back(p, std::move(tt));
    return frame;
}

double contact_form(const HeisPoint& p, const TangentVector& v) {
    double value = v.components[2 * p.n];
    for (int j = 0; j < p.n; ++j)
        value += 2.0 * (p.x(j) * v.components[2 * j + 1] -
                        p.y(j) * v.components[2 * j]);
    return value;
}

double horizontal_norm(const HeisPoint& p, const TangentVector& v, double tol) {
    double residual = std::abs(contact_form(p, v));
    double scale = v.components.norm();
    if (residual > tol * std::max(scale, 1e-300))
        throw ContactResidualError("horizontal_norm: vector is not horizontal",
                                   residual);
    // In the frame X_j, Y_j the horizontal coefficients are the planar
    // components themselves.
    return v.components.head(2 * p.n).norm();
}

HorizontalCurve lift_curve(const Eigen::MatrixXd& base, double t0,
                           Eigen::VectorXd parameter_values) {
    const auto samples = base.rows();
    if (samples < 2)
        throw std::invalid_argument("lift_curve: need at least 2 samples");
    if (base.cols() % 2 != 0 || base.cols() == 0)
        throw DimensionMismatch("lift_curve: base must have 2n columns");
    const int n = static_cast<int>(base.cols() / 2);

    if (parameter_values.size() == 0) {
        parameter_values = Eigen::VectorXd::LinSpaced(samples, 0.0,
                                                      double(samples - 1));
    }
    if (parameter_values.size() != samples)
        throw DimensionMismatch("lift_curve: parameter_values count mismatch");
    for (Eigen::Index i = 0; i + 1 < samples; ++i)
        if (!(parameter_values[i] < parameter_values[i + 1]))
            throw std::invalid_argument("lift_curve: parameters must increase");

    HorizontalCurve curve;
    curve.n = n;
    curve.base_samples = base;
    curve.t0 = t0;
    curve.parameter_values = std::move(parameter_values);
    curve.t_samples.resize(samples);
    curve.t_samples[0] = t0;
    for (Eigen::Index i = 0; i + 1 < samples; ++i) {
        double dt = 0.0;
        for (int j = 0; j < n; ++j) {
            double dx = base(i + 1, 2 * j) - base(i, 2 * j);
            double dy = base(i + 1, 2 * j + 1) - base(i, 2 * j + 1);
            double ym = 0.5 * (base(i, 2 * j + 1) + base(i + 1, 2 * j + 1));
            double xm = 0.5 * (base(i, 2 * j) + base(i + 1, 2 * j));
            dt += 2.0 * (ym * dx - xm * dy);
        }
        curve.t_samples[i + 1] = curve.t_samples[i] + dt;
    }
    return curve;
}

double cc_length(const HorizontalCurve& curve) {
    double total = 0.0;
    for (Eigen::Index i = 0; i + 1 < curve.base_samples.rows(); ++i)
        total += (curve.base_samples.row(i + 1) - curve.base_samples.row(i)).norm();
    return total;
}

namespace {

// Holonomy 2 sum_j int (y_j dx_j - x_j dy_j) along the polyline through
// z_p, interior vertices, z_q; exact for straight segments.
double polyline_holonomy(const Eigen::VectorXd& zp, const Eigen::VectorXd& zq,
                         const Eigen::VectorXd& interior, int n, int k) {
    double h = 0.0;
    Eigen::VectorXd prev = zp;
    for (int v = 0; v <= k; ++v) {
        Eigen::VectorXd cur =
            (v < k) ? Eigen::VectorXd(interior.segment(2 * n * v, 2 * n)) : zq;
        for (int j = 0; j < n; ++j) {
            double dx = cur[2 * j] - prev[2 * j];
            double dy = cur[2 * j + 1] - prev[2 * j + 1];
            double xm = 0.5 * (cur[2 * j] + prev[2 * j]);
            double ym = 0.5 * (cur[2 * j + 1] + prev[2 * j + 1]);
            h += 2.0 * (ym * dx - xm * dy);
        }
        prev = cur;
    }
    return h;
}

double polyline_length(const Eigen::VectorXd& zp, const Eigen::VectorXd& zq,
                       const Eigen::VectorXd& interior, int n, int k) {
    double len = 0.0;
    Eigen::VectorXd prev = zp;
    for (int v = 0; v <= k; ++v) {
        Eigen::VectorXd cur =
            (v < k) ? Eigen::VectorXd(interior.segment(2 * n * v, 2 * n)) : zq;
        len += (cur - prev).norm();
        prev = cur;
    }
    return len;
}

}  // namespace

MetricReport cc_distance(const HeisPoint& p, const HeisPoint& q,
                         const CcOptions& options) {
    if (p.n != q.n)
        throw DimensionMismatch("cc_distance: group indices differ");
    MetricReport report;
    report.lower_bound = (p.z - q.z).norm();
    double dt_target = q.t - p.t;
    if (report.lower_bound == 0.0 && dt_target == 0.0) {
        report.distance_upper = 0.0;
        report.converged = true;
        return report;
    }

    const int n = p.n;
    const int k = options.interior_vertices;
    const int dim = 2 * n * k;
    const double eps2 = 1e-24;  // smoothing of |gap| near zero

    auto cost = [&](const Eigen::VectorXd& u) {
        double len = polyline_length(p.z, q.z, u, n, k);
        double gap = dt_target - polyline_holonomy(p.z, q.z, u, n, k);
        // Closing circular loop: length 2 pi r with 4 pi r^2 = |gap|.
        return len + std::sqrt(M_PI * std::sqrt(gap * gap + eps2));
    };

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double scale = std::max(1.0, report.lower_bound + std::sqrt(std::abs(dt_target)));

    double best = std::numeric_limits<double>::infinity();
    int total_iterations = 0;
    bool any_converged = false;

    for (int r = 0; r < std::max(1, options.restarts); ++r) {
        Eigen::VectorXd u(dim);
        for (int v = 0; v < k; ++v) {
            double s = double(v + 1) / double(k + 1);
            u.segment(2 * n * v, 2 * n) = (1.0 - s) * p.z + s * q.z;
        }
        if (r > 0) {
            for (int i = 0; i < dim; ++i) u[i] += 0.35 * scale * gauss(rng);
        }

        double f = cost(u);
        double step0 = 0.25 * scale;
        Eigen::VectorXd grad(dim);
        for (int it = 0; it < options.max_iterations; ++it) {
            ++total_iterations;
            // central finite differences
            const double h = 1e-6 * scale;
            for (int i = 0; i < dim; ++i) {
                Eigen::VectorXd up = u, um = u;
                up[i] += h;
                um[i] -= h;
                grad[i] = (cost(up) - cost(um)) / (2.0 * h);
            }
            double gnorm = grad.norm();
            if (gnorm < 1e-14) {
                any_converged = true;
                break;
            }
            // backtracking line search on the descent direction
            double step = step0;
            double fnew = f;
            Eigen::VectorXd unew = u;
            bool improved = false;
            for (int ls = 0; ls < 30; ++ls) {
                Eigen::VectorXd cand = u - (step / gnorm) * grad;
                double fc = cost(cand);
                if (fc < f - 1e-4 * step * gnorm) {
                    unew = cand;
                    fnew = fc;
                    improved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!improved) {
                any_converged = true;
                break;
            }
            step0 = std::max(2.0 * step, 1e-9 * scale);
            double rel = (f - fnew) / std::max(f, 1e-300);
            u = unew;
            f = fnew;
            if (rel < options.rel_improvement_tol) {
                any_converged = true;
                break;
            }
        }
        best = std::min(best, f);
    }

    report.distance_upper = std::max(best, report.lower_bound);
    report.iterations = total_iterations;
    report.converged = any_converged;
    return report;
}

std::pair<double, double> metric_comparison_check(
    const std::vector<std::pair<HeisPoint, HeisPoint>>& sample_pairs,
    double box_radius, const CcOptions& options) {
    if (sample_pairs.empty())
        throw std::invalid_argument("metric_comparison_check: empty sample set");
    double c_lower = 0.0;
    double c_upper = 0.0;
    for (const auto& [p, q] : sample_pairs) {
        if (p.coords().lpNorm<Eigen::Infinity>() > box_radius + 1e-12 ||
            q.coords().lpNorm<Eigen::Infinity>() > box_radius + 1e-12)
            throw std::invalid_argument(
                "metric_comparison_check: pair outside the declared box");
        double euclid = (p.coords() - q.coords()).norm();
        if (euclid == 0.0) continue;  // contributes trivially
        MetricReport rep = cc_distance(p, q, options);
        if (rep.lower_bound > 0.0)
            c_lower = std::max(c_lower, euclid / rep.lower_bound);
        else
            c_lower = std::numeric_limits<double>::infinity();
        c_upper = std::max(c_upper, rep.distance_upper / std::sqrt(euclid));
    }
    return {c_lower, c_upper};
}

}  // namespace hopfdec
