#include <doctest.h>

#include <hopfdec/hopf.hpp>
#include <hopfdec/maps.hpp>

#include <random>

#include "oracles.hpp"

using namespace hopfdec;

namespace {

HopfOptions fast_options() {
    HopfOptions o;
    o.threads = 2;
    return o;
}

}  // namespace

TEST_CASE("hopf invariant of a constant map is zero") {
    SimplicialComplex s3 = build_sphere3_mesh(1);
    SampledMap c = constant_map(s3, Eigen::Vector3d(0.4, 0.1, -0.7));
    HopfReport rep = hopf(c, FormSpec::s2_area_extended(), fast_options());
    CHECK(std::abs(rep.value) <= 1e-10);
    CHECK(rep.closedness_residual == 0.0);
    CHECK(rep.gauge_check <= 1e-12);
}

TEST_CASE("hopf fibration fixture at level 2") {
    SimplicialComplex s3 = build_sphere3_mesh(2);
    SampledMap h = hopf_fibration_map(s3);
    HopfOptions opts = fast_options();
    opts.with_oracle = true;
    HopfReport rep = hopf(h, FormSpec::s2_area_extended(), opts);
    // recorded fixture; level 3 (|HI - 1| <= 0.05) runs in the acceptance suite
    CHECK(rep.value == doctest::Approx(0.97200).epsilon(0.01));
    CHECK(rep.closedness_residual < 0.05);
    CHECK(rep.primitive_residual < 0.05);
    CHECK(rep.gauge_check <= 1e-8);
    CHECK(rep.mesh_h == doctest::Approx(0.8165).epsilon(0.01));
    REQUIRE(rep.oracle_value.has_value());
    CHECK(*rep.oracle_value == 1);
    CHECK(std::lround(rep.value) == *rep.oracle_value);
}

TEST_CASE("reflection of the target sphere squares the degree") {
    SimplicialComplex s3 = build_sphere3_mesh(2);
    SampledMap h = hopf_fibration_map(s3);
    Eigen::MatrixXd reflected = h.values();
    reflected.col(0) *= -1.0;  // reflect S^2 through the x=0 plane
    SampledMap rh(s3, reflected);
    HopfOptions opts = fast_options();
    opts.with_oracle = true;
    HopfReport a = hopf(h, FormSpec::s2_area_extended(), opts);
    HopfReport b = hopf(rh, FormSpec::s2_area_extended(), opts);
    // deg(-1)^2 = 1: the reflected composition reproduces the fixture value
    CHECK(b.value == doctest::Approx(a.value).epsilon(0.02));
    CHECK(*b.oracle_value == 1);
}

TEST_CASE("closedness gate rejects the full-rank control") {
    SimplicialComplex s3 = build_sphere3_mesh(2);
    SampledMap bad = full_rank_control_map(s3);
    CHECK_THROWS_AS(hopf(bad, FormSpec::s2_area_extended(), fast_options()),
                    ClosednessError);
}

TEST_CASE("gauge independence") {
    SimplicialComplex s3 = build_sphere3_mesh(2);
    SampledMap h = hopf_fibration_map(s3);
    FormSpec area = FormSpec::s2_area_extended();
    CHECK(gauge_independence_check(h, area, 0, fast_options()) == 0.0);
    CHECK(gauge_independence_check(h, area, 10, fast_options()) <= 1e-8);
    SampledMap c = constant_map(s3, Eigen::Vector3d(0.1, 0.9, 0.2));
    CHECK(gauge_independence_check(c, area, 5, fast_options()) <= 1e-12);
}

TEST_CASE("linking oracle") {
    CHECK(linking_oracle(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, -1)) == 1);
    // linking is independent of the chosen regular values
    CHECK(linking_oracle(Eigen::Vector3d(0.6, 0.64, 0.48).normalized(),
                         Eigen::Vector3d(0.58, 0.63, 0.52).normalized()) == 1);
    CHECK(linking_oracle(Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0)) == 1);
    CHECK_THROWS_AS(
        linking_oracle(Eigen::Vector3d(0, 0, 1), Eigen::Vector3d(0, 0, 1)),
        std::invalid_argument);
}

TEST_CASE("hopf_scaled restriction equals the boundary pipeline") {
    SimplicialComplex base = build_sphere3_mesh(2);
    ConeMesh cone = build_cone_mesh(base, 4);
    SampledMap h = hopf_fibration_map(base);
    SampledMap ext = radial_extension(h, cone);
    HopfOptions opts = fast_options();
    HopfReport direct = hopf(hopf_fibration_map(cone.base), FormSpec::s2_area_extended(), opts);
    for (double r : {0.25, 0.5, 0.75}) {
        HopfReport rep = hopf_scaled(ext, cone, r, FormSpec::s2_area_extended(), opts);
        CHECK(rep.value == doctest::Approx(direct.value).epsilon(1e-12));
    }
    // off-ring radius snaps to the nearest ring instead of failing
    HopfReport snapped =
        hopf_scaled(ext, cone, 0.42, FormSpec::s2_area_extended(), opts);
    CHECK(snapped.value == doctest::Approx(direct.value).epsilon(1e-12));

    // constant extension vanishes at every ring
    SampledMap cmap = constant_map(cone.base, Eigen::Vector3d(0.2, 0.4, 0.6));
    SampledMap cext = radial_extension(cmap, cone);
    for (double r : {0.25, 0.75})
        CHECK(std::abs(
                  hopf_scaled(cext, cone, r, FormSpec::s2_area_extended(), opts)
                      .value) <= 1e-10);

    CHECK_THROWS_AS(
        hopf_scaled(ext, cone, -0.5, FormSpec::s2_area_extended(), opts),
        std::invalid_argument);
}

TEST_CASE("homotopy sweep: constant family, rotation family, negative control") {
    SimplicialComplex s3 = build_sphere3_mesh(2);
    FormSpec area = FormSpec::s2_area_extended();
    HopfOptions opts = fast_options();

    SampledMap c = constant_map(s3, Eigen::Vector3d(0.3, 0.3, 0.3));
    HomotopySweep flat = homotopy_sweep({c, c, c}, {0.0, 0.5, 1.0}, area, opts);
    CHECK(flat.max_deviation <= 1e-12);
    for (double v : flat.values) CHECK(std::abs(v) <= 1e-10);

    SampledMap h = hopf_fibration_map(s3);
    HomotopySweep sweep = homotopy_sweep(rotation_homotopy(h, 5), {}, area, opts);
    CHECK(sweep.values.size() == 5);
    CHECK(sweep.times.front() == 0.0);
    CHECK(sweep.times.back() == 1.0);
    // the normalized area form is rotation invariant, so the family's
    // pullbacks coincide and the sweep is flat to roundoff
    CHECK(sweep.max_deviation <= 1e-12);
    // every rotation of the fibration rounds to the linking oracle's value
    for (double v : sweep.values) CHECK(std::lround(v) == 1);
    for (double r : sweep.closedness_residuals) CHECK(r < 0.05);
    CHECK(sweep.primitive_residuals.size() == 5);

    // interpolating toward a full-rank map aborts with the failing time
    SampledMap bad = full_rank_control_map(s3);
    Eigen::MatrixXd mid_values = 0.5 * (h.values() + bad.values());
    SampledMap mid(s3, mid_values);
    try {
        homotopy_sweep({h, mid, bad}, {0.0, 0.5, 1.0}, area, opts);
        CHECK(false);
    } catch (const ClosednessError& e) {
        CHECK(e.family_time > 0.0);
        CHECK(e.residual > e.budget);
    }
}

TEST_CASE("convergence experiment: trivial and perturbation families") {
    SimplicialComplex s3 = build_sphere3_mesh(2);
    FormSpec area = FormSpec::s2_area_extended();
    HopfOptions opts = fast_options();
    SampledMap h = hopf_fibration_map(s3);

    CHECK_THROWS_AS(convergence_experiment({h}, h, area, 1.2, opts),
                    std::invalid_argument);

    // g_k = g: both columns vanish
    ConvergenceTable trivial = convergence_experiment({h, h}, h, area, 2.0, opts);
    for (const auto& row : trivial.rows) {
        CHECK(row.lp_pullback_diff <= 1e-12);
        CHECK(row.hi_diff <= 1e-12);
    }

    // a single constant member against a constant target: all zeros
    SampledMap cmap = constant_map(s3, Eigen::Vector3d(0.2, 0.1, 0.6));
    ConvergenceTable flat = convergence_experiment({cmap}, cmap, area, 2.0, opts);
    REQUIRE(flat.rows.size() == 1);
    CHECK(flat.rows[0].lp_pullback_diff == 0.0);
    CHECK(flat.rows[0].hi_diff <= 1e-12);

    // a genuinely converging family: normalized perturbations of the Hopf map;
    // both columns decrease and the HI gap is dominated by the product bound
    const auto& verts = s3.vertex_coords();
    std::vector<SampledMap> gs;
    for (int k = 1; k <= 5; ++k) {
        Eigen::MatrixXd vals = h.values();
        for (Eigen::Index v = 0; v < vals.rows(); ++v) {
            Eigen::Vector3d d(std::sin(3.0 * verts(v, 0)),
                              std::cos(2.0 * verts(v, 1)) - 0.4,
                              verts(v, 2) * verts(v, 3));
            Eigen::Vector3d w = vals.row(v).transpose() + (0.35 / k) * d;
            vals.row(v) = w.normalized().transpose();
        }
        gs.emplace_back(s3, vals);
    }
    ConvergenceTable table = convergence_experiment(gs, h, area, 2.0, opts);
    for (std::size_t i = 1; i < table.rows.size(); ++i) {
        CHECK(table.rows[i].lp_pullback_diff < table.rows[i - 1].lp_pullback_diff);
        CHECK(table.rows[i].hi_diff < table.rows[i - 1].hi_diff);
    }
    for (const auto& row : table.rows)
        CHECK(row.hi_diff <= table.domination_constant * row.bound_product + 1e-15);
    CHECK(table.domination_constant < 1.0);
}

TEST_CASE("refinement consistency of the fibration invariant") {
    FormSpec area = FormSpec::s2_area_extended();
    double hi[3];
    int i = 0;
    for (int level : {2, 3, 4}) {
        SimplicialComplex s3 = build_sphere3_mesh(level);
        hi[i++] = hopf(hopf_fibration_map(s3), area, fast_options()).value;
    }
    // recorded values converge toward 1 and the level gaps shrink
    CHECK(hi[0] == doctest::Approx(0.97199507).epsilon(1e-4));
    CHECK(hi[1] == doctest::Approx(0.99605890).epsilon(1e-4));
    CHECK(hi[2] == doctest::Approx(0.99977143).epsilon(1e-4));
    CHECK(std::abs(hi[2] - hi[1]) < std::abs(hi[1] - hi[0]));
}

TEST_CASE("pullback is independent of the thread count") {
    SimplicialComplex s3 = build_sphere3_mesh(2);
    SampledMap h = hopf_fibration_map(s3);
    FormSpec area = FormSpec::s2_area_extended();
    Cochain serial = pullback(h, area, 1);
    Cochain threaded = pullback(h, area, 3);
    // per-simplex quadrature writes disjoint entries, so the partition
    // cannot change any value
    CHECK((serial.values - threaded.values).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("hopf report json serialization") {
    SimplicialComplex s3 = build_sphere3_mesh(1);
    SampledMap c = constant_map(s3, Eigen::Vector3d(0.4, 0.1, -0.7));
    HopfReport rep = hopf(c, FormSpec::s2_area_extended(), fast_options());
    std::string json_text = rep.to_json_string();
    CHECK(json_text.find("\"value\"") != std::string::npos);
    CHECK(json_text.find("\"closedness_residual\"") != std::string::npos);
    CHECK(json_text.find("\"oracle_value\":null") != std::string::npos);
}
