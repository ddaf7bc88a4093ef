#include "hopfdec/maps.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace hopfdec {

Eigen::MatrixXd load_tabulated_values(const std::string& csv_path,
                                      std::size_t vertex_count, int codomain_dim) {
    std::ifstream in(csv_path);
    if (!in)
        throw std::runtime_error("load_tabulated_values: cannot open " + csv_path);
    Eigen::MatrixXd values(vertex_count, codomain_dim);
    std::vector<char> seen(vertex_count, 0);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream row(line);
        std::string cell;
        if (!std::getline(row, cell, ','))
            throw std::runtime_error("load_tabulated_values: malformed row");
        long v = std::stol(cell);
        if (v < 0 || v >= static_cast<long>(vertex_count))
            throw std::runtime_error("load_tabulated_values: vertex index out of range");
        for (int c = 0; c < codomain_dim; ++c) {
            if (!std::getline(row, cell, ','))
                throw std::runtime_error("load_tabulated_values: short row");
            values(v, c) = std::stod(cell);
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
    for (std::size_t v = 0; v < vertex_count; ++v)
        if (!seen[v])
            throw std::runtime_error("load_tabulated_values: missing vertex " +
                                     std::to_string(v));
    return values;
}

SampledMap resolve_map_spec(const MapSpec& spec, const SimplicialComplex& domain,
                            std::uint64_t seed) {
    if (spec.name == "hopf") return hopf_fibration_map(domain);
    if (spec.name == "constant") {
        Eigen::VectorXd value(spec.codomain_dim);
        for (int i = 0; i < spec.codomain_dim; ++i)
            value[i] = i < static_cast<int>(spec.parameters.size())
                           ? spec.parameters[i]
                           : 0.25 * (i + 1);
        return constant_map(domain, value);
    }
    if (spec.name == "full_rank_control") return full_rank_control_map(domain, seed);
    if (spec.name == "tabulated")
        return SampledMap(domain, load_tabulated_values(spec.tabulated_path,
                                                        domain.count(0),
                                                        spec.codomain_dim));
    throw std::invalid_argument("resolve_map_spec: unknown builtin '" + spec.name +
                                "'");
}

SampledMap hopf_fibration_map(const SimplicialComplex& sphere3) {
    const auto& verts = sphere3.vertex_coords();
    if (verts.cols() != 4)
        throw DimensionMismatch("hopf_fibration_map: mesh vertices must lie in R^4");
    Eigen::MatrixXd values(verts.rows(), 3);
    for (Eigen::Index v = 0; v < verts.rows(); ++v) {
        // z1 = x1 + i y1, z2 = x2 + i y2
        double x1 = verts(v, 0), y1 = verts(v, 1);
        double x2 = verts(v, 2), y2 = verts(v, 3);
        values(v, 0) = 2.0 * (x1 * x2 + y1 * y2);   // Re(2 z1 conj(z2))
        values(v, 1) = 2.0 * (y1 * x2 - x1 * y2);   // Im(2 z1 conj(z2))
        values(v, 2) = x1 * x1 + y1 * y1 - x2 * x2 - y2 * y2;
    }
    return SampledMap(sphere3, std::move(values));
}

SampledMap full_rank_control_map(const SimplicialComplex& sphere3,
                                 std::uint64_t seed) {
    const auto& verts = sphere3.vertex_coords();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::Matrix<double, 3, 4> a;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 4; ++c) a(r, c) = gauss(rng);
    // scale so the image sweeps across both cutoff ramps of the extended
    // area form; the pullback of d alpha is then far from zero
    Eigen::MatrixXd values = verts * a.transpose();
    double top = values.rowwise().norm().maxCoeff();
    values *= 2.2 / top;
    return SampledMap(sphere3, std::move(values));
}

SampledMap constant_map(const SimplicialComplex& mesh, const Eigen::VectorXd& value) {
    Eigen::MatrixXd values(mesh.count(0), value.size());
    values.rowwise() = value.transpose();
    return SampledMap(mesh, std::move(values));
}

HorizontalCurve figure_eight_embedding(int samples) {
    if (samples < 8)
        throw std::invalid_argument("figure_eight_embedding: need >= 8 samples");
    Eigen::MatrixXd base(samples, 2);
    Eigen::VectorXd params(samples);
    for (int i = 0; i < samples; ++i) {
        double s = 2.0 * M_PI * i / (samples - 1);
        base(i, 0) = std::sin(s);
        base(i, 1) = std::sin(s) * std::cos(s);
        params[i] = s;
    }
    return lift_curve(base, 0.0, params);
}

SampledMap figure_eight_on_circle(const SimplicialComplex& circle) {
    if (circle.dim() != 1)
        throw DimensionMismatch("figure_eight_on_circle: need a circle mesh");
    const int n = static_cast<int>(circle.count(0));
    // resample the accurately-lifted curve at the mesh nodes: the fine lift
    // stands in for the smooth curve, so the per-segment contact residual
    // shows the genuine O(h) behaviour of the coarse chords
    const int oversample = 256;
    HorizontalCurve fine = figure_eight_embedding(n * oversample + 1);
    Eigen::MatrixXd values(n, 3);
    for (int i = 0; i < n; ++i) {
        int s = i * oversample;
        values(i, 0) = fine.base_samples(s, 0);
        values(i, 1) = fine.base_samples(s, 1);
        values(i, 2) = fine.t_samples[s];
    }
    return SampledMap(circle, std::move(values));
}

EmbeddingReport validate_sphere2_embedding_into_h2(const SimplicialComplex& sphere2,
                                                   const Eigen::MatrixXd& values,
                                                   double contact_tol,
                                                   double separation_tol) {
    EmbeddingReport report;
    if (sphere2.dim() != 2)
        throw DimensionMismatch("validate_sphere2_embedding_into_h2: need an S^2 mesh");
    if (values.cols() != 5)
        throw DimensionMismatch(
            "validate_sphere2_embedding_into_h2: values must be H_2 coordinates (R^5)");
    SampledMap map(sphere2, values);
    ContactReport contact = contact_check(map);
    report.max_contact_residual = contact.max_residual;
    if (contact.max_residual > contact_tol) {
        report.accepted = false;
        report.reason = "contact residual above tolerance (not horizontal)";
        return report;
    }
    double min_sep = std::numeric_limits<double>::infinity();
    for (Eigen::Index a = 0; a < values.rows(); ++a)
        for (Eigen::Index b = a + 1; b < values.rows(); ++b)
            min_sep = std::min(min_sep, (values.row(a) - values.row(b)).norm());
    report.min_value_separation = min_sep;
    if (!(min_sep > separation_tol)) {
        report.accepted = false;
        report.reason = "duplicate vertex values (not injective)";
        return report;
    }
    report.accepted = true;
    report.reason = "ok";
    return report;
}

SampledMap radial_extension(const SampledMap& boundary_map, const ConeMesh& cone,
                            int apex_base_vertex) {
    const SimplicialComplex& bm = boundary_map.mesh();
    bool compatible = bm.dim() == cone.base.dim() &&
                      bm.count(0) == cone.base.count(0) &&
                      bm.count(bm.dim()) == cone.base.count(cone.base.dim()) &&
                      (bm.vertex_coords() - cone.base.vertex_coords())
                              .lpNorm<Eigen::Infinity>() < 1e-12;
    if (!compatible)
        throw DimensionMismatch(
            "radial_extension: boundary map does not live on the cone's base");
    const int m = boundary_map.codomain_dim();
    Eigen::MatrixXd values(cone.complex.count(0), m);
    values.row(0) = boundary_map.values().row(apex_base_vertex);
    for (int ring = 1; ring <= cone.layers; ++ring)
        for (int v = 0; v < cone.base_vertex_count; ++v)
            values.row(cone.ring_vertex(ring, v)) = boundary_map.values().row(v);
    return SampledMap(cone.complex, std::move(values));
}

double RankProfile::fraction_above(int r) const {
    double f = 0.0;
    for (int rank = r + 1; rank < histogram.size(); ++rank) f += histogram[rank];
    return f;
}

RankProfile rank_profile(const SampledMap& f, double tol_relative) {
    const SimplicialComplex& cx = f.mesh();
    const int d = cx.dim();
    RankProfile profile;
    profile.tol_relative = tol_relative;
    profile.histogram = Eigen::VectorXd::Zero(d + 1);
    profile.per_simplex_singular_values.reserve(cx.count(d));
    profile.numerical_rank.reserve(cx.count(d));

    double total_volume = 0.0;
    for (std::size_t t = 0; t < cx.count(d); ++t) {
        if (f.domain_degenerate(t)) {
            ++profile.excluded_degenerate;
            profile.per_simplex_singular_values.emplace_back();
            profile.numerical_rank.push_back(-1);
            continue;
        }
        Eigen::VectorXd sigma = f.differential(t).jacobiSvd().singularValues();
        int rank = 0;
        if (sigma.size() > 0 && sigma[0] > 0.0)
            for (Eigen::Index i = 0; i < sigma.size(); ++i)
                if (sigma[i] >= tol_relative * sigma[0]) ++rank;
        double vol = cx.simplex_volume(d, t);
        total_volume += vol;
        profile.histogram[rank] += vol;
        profile.per_simplex_singular_values.push_back(std::move(sigma));
        profile.numerical_rank.push_back(rank);
    }
    if (total_volume > 0.0) profile.histogram /= total_volume;
    return profile;
}

ContactReport contact_check(const SampledMap& f, double energy_exponent) {
    const int m = f.codomain_dim();
    if (m < 3 || m % 2 == 0)
        throw DimensionMismatch("contact_check: codomain must be H_n coordinates (2n+1)");
    const int n = (m - 1) / 2;
    const SimplicialComplex& cx = f.mesh();
    const int d = cx.dim();

    ContactReport report;
    report.per_simplex_residual.resize(cx.count(d));
    double sum = 0.0;
    for (std::size_t t = 0; t < cx.count(d); ++t) {
        const Eigen::MatrixXd& df = f.differential(t);  // m x d
        const auto& s = cx.simplices(d)[t];
        // simplex-averaged coefficients
        Eigen::VectorXd mean = Eigen::VectorXd::Zero(m);
        for (int v : s) mean += f.values().row(v).transpose();
        mean /= double(s.size());

        Eigen::RowVectorXd residual = df.row(2 * n);  // grad t
        for (int j = 0; j < n; ++j)
            residual -= 2.0 * (mean[2 * j + 1] * df.row(2 * j) -
                               mean[2 * j] * df.row(2 * j + 1));
        double r = residual.norm();
        report.per_simplex_residual[static_cast<Eigen::Index>(t)] = r;
        report.max_residual = std::max(report.max_residual, r);
        sum += r;

        double horizontal_sq = df.topRows(2 * n).squaredNorm();
        report.horizontal_energy += cx.simplex_volume(d, t) *
                                    std::pow(horizontal_sq, energy_exponent / 2.0);
    }
    if (cx.count(d) > 0) report.mean_residual = sum / double(cx.count(d));
    return report;
}

SymplecticRankReport symplectic_rank_check(const SampledMap& f, double tol,
                                           double rank_tol_relative) {
    const int m = f.codomain_dim();
    if (m < 2 || m % 2 != 0)
        throw DimensionMismatch("symplectic_rank_check: codomain must be R^{2n}");
    const int n = m / 2;
    const SimplicialComplex& cx = f.mesh();
    const int d = cx.dim();

    SymplecticRankReport report;
    report.pullback_norm.resize(cx.count(d));
    report.numerical_rank.reserve(cx.count(d));
    double total_volume = 0.0, violating_volume = 0.0;
    for (std::size_t t = 0; t < cx.count(d); ++t) {
        const Eigen::MatrixXd& df = f.differential(t);  // 2n x d
        // (F* omega)(e_a, e_b) = sum_j (dx_j(a) dy_j(b) - dx_j(b) dy_j(a))
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(d, d);
        for (int j = 0; j < n; ++j)
            w += df.row(2 * j).transpose() * df.row(2 * j + 1) -
                 df.row(2 * j + 1).transpose() * df.row(2 * j);
        report.pullback_norm[static_cast<Eigen::Index>(t)] = w.norm();

        Eigen::VectorXd sigma = df.jacobiSvd().singularValues();
        int rank = 0;
        if (sigma.size() > 0 && sigma[0] > 0.0)
            for (Eigen::Index i = 0; i < sigma.size(); ++i)
                if (sigma[i] >= rank_tol_relative * sigma[0]) ++rank;
        report.numerical_rank.push_back(rank);

        double vol = cx.simplex_volume(d, t);
        total_volume += vol;
        double scale = std::max(1.0, sigma.size() > 0 ? sigma[0] * sigma[0] : 0.0);
        if (w.norm() <= tol * scale && rank > n) {
            report.violators.push_back(static_cast<int>(t));
            violating_volume += vol;
        }
    }
    if (total_volume > 0.0)
        report.volume_fraction_violating = violating_volume / total_volume;
    return report;
}

SampledMap rotate_sphere_values(const SampledMap& f, double angle) {
    if (f.codomain_dim() != 3)
        throw DimensionMismatch("rotate_sphere_values: values must lie in R^3");
    Eigen::Matrix3d rot;
    rot << std::cos(angle), -std::sin(angle), 0.0,
           std::sin(angle),  std::cos(angle), 0.0,
           0.0, 0.0, 1.0;
    return SampledMap(f.mesh(), f.values() * rot.transpose());
}

std::vector<SampledMap> rotation_homotopy(const SampledMap& f, int steps) {
    if (steps < 1)
        throw std::invalid_argument("rotation_homotopy: need >= 1 step");
    for (Eigen::Index v = 0; v < f.values().rows(); ++v)
        if (std::abs(f.values().row(v).norm() - 1.0) > 1e-9)
            throw std::invalid_argument(
                "rotation_homotopy: vertex values must lie on S^2");
    std::vector<SampledMap> family;
    family.reserve(steps);
    for (int i = 0; i < steps; ++i) {
        double t = (steps == 1) ? 0.0 : double(i) / double(steps - 1);
        family.push_back(rotate_sphere_values(f, t * M_PI));
    }
    return family;
}

CenterDifferenceReport center_difference_check(const SampledMap& f,
                                               const SampledMap& g, double tol) {
    if (&f.mesh() != &g.mesh())
        throw DimensionMismatch("center_difference_check: maps on different meshes");
    if (f.codomain_dim() != g.codomain_dim())
        throw DimensionMismatch("center_difference_check: codomain mismatch");
    const int m = f.codomain_dim();
    if (m < 3 || m % 2 == 0)
        throw DimensionMismatch("center_difference_check: codomain must be H_n");
    const int n = (m - 1) / 2;
    const SimplicialComplex& cx = f.mesh();
    const int d = cx.dim();

    // the group difference g^{-1} * f has z-part z_f - z_g; near the center
    // means that planar part is small
    std::vector<char> qualifies(cx.count(0), 0);
    for (std::size_t v = 0; v < cx.count(0); ++v) {
        double znorm = (f.values().row(v).head(2 * n) -
                        g.values().row(v).head(2 * n)).norm();
        qualifies[v] = znorm <= tol ? 1 : 0;
    }

    CenterDifferenceReport report;
    std::vector<double> gaps;
    for (std::size_t t = 0; t < cx.count(d); ++t) {
        bool all = true;
        for (int v : cx.simplices(d)[t])
            if (!qualifies[v]) {
                all = false;
                break;
            }
        if (!all) continue;
        double gap = (f.differential(t) - g.differential(t)).norm();
        report.qualifying_simplices.push_back(static_cast<int>(t));
        gaps.push_back(gap);
        report.max_gap = std::max(report.max_gap, gap);
    }
    report.differential_gap =
        Eigen::Map<Eigen::VectorXd>(gaps.data(), static_cast<Eigen::Index>(gaps.size()));
    return report;
}

}  // namespace hopfdec
