#include <doctest.h>

#include <hopfdec/mesh.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace hopfdec;

TEST_CASE("16-cell base mesh") {
    SimplicialComplex s3 = build_sphere3_mesh(0);
    CHECK(s3.count(0) == 8);
    CHECK(s3.count(3) == 16);
    CHECK(s3.dim() == 3);
    CHECK(s3.is_closed_manifold());
    for (Eigen::Index v = 0; v < 8; ++v)
        CHECK(s3.vertex_coords().row(v).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("subdivision: counts, Euler characteristic, closedness") {
    // fixtures from the subdivision rule: T = 16 * 8^L, V inherited + edges
    const std::size_t expect_v[4] = {8, 32, 192, 1408};
    const std::size_t expect_t[4] = {16, 128, 1024, 8192};
    for (int level = 0; level <= 3; ++level) {
        SimplicialComplex s3 = build_sphere3_mesh(level);
        CHECK(s3.count(0) == expect_v[level]);
        CHECK(s3.count(3) == expect_t[level]);
        long chi = long(s3.count(0)) - long(s3.count(1)) + long(s3.count(2)) -
                   long(s3.count(3));
        CHECK(chi == 0);
        CHECK(s3.is_closed_manifold());
        for (Eigen::Index v = 0; v < s3.vertex_coords().rows(); ++v)
            CHECK(std::abs(s3.vertex_coords().row(v).norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("boundary of boundary vanishes as integer identity") {
    SimplicialComplex s3 = build_sphere3_mesh(1);
    for (int k = 2; k <= 3; ++k) {
        Eigen::SparseMatrix<double> dd = s3.boundary(k - 1) * s3.boundary(k);
        double worst = 0.0;
        for (int c = 0; c < dd.outerSize(); ++c)
            for (Eigen::SparseMatrix<double>::InnerIterator it(dd, c); it; ++it)
                worst = std::max(worst, std::abs(it.value()));
        CHECK(worst == 0.0);
    }
}

TEST_CASE("orientation is outward: positive total volume form") {
    SimplicialComplex s3 = build_sphere3_mesh(1);
    const auto& verts = s3.vertex_coords();
    for (std::size_t t = 0; t < s3.count(3); ++t) {
        const auto& s = s3.simplices(3)[t];
        Eigen::Matrix4d m;
        for (int i = 0; i < 4; ++i) m.row(i) = verts.row(s[i]);
        CHECK(s3.orientation()[t] * m.determinant() > 0.0);
    }
}

TEST_CASE("mesh size guard") {
    CHECK_THROWS_AS(build_sphere3_mesh(-1), std::invalid_argument);
    try {
        build_sphere3_mesh(9);
        CHECK(false);
    } catch (const MeshSizeError& e) {
        CHECK(e.estimated_top_simplices == (16ull << 27));
    }
}

TEST_CASE("sphere2 and circle meshes") {
    SimplicialComplex s2 = build_sphere2_mesh(2);
    CHECK(s2.dim() == 2);
    CHECK(s2.count(2) == 8 * 16);
    CHECK(s2.is_closed_manifold());

    SimplicialComplex circle = build_circle_mesh(12);
    CHECK(circle.dim() == 1);
    CHECK(circle.count(0) == 12);
    CHECK(circle.count(1) == 12);
    CHECK(circle.is_closed_manifold());
}

TEST_CASE("cone mesh: combinatorial fixtures and boundary") {
    SimplicialComplex base = build_sphere3_mesh(1);

    CHECK_THROWS_AS(build_cone_mesh(base, 0), std::invalid_argument);

    // layering rule fixture: pure cone emits one 4-simplex per base tet,
    // each prism block emits four per base tet
    ConeMesh cone1 = build_cone_mesh(base, 1);
    CHECK(cone1.complex.count(4) == base.count(3));
    ConeMesh cone2 = build_cone_mesh(base, 2);
    CHECK(cone2.complex.count(4) == 5 * base.count(3));
    CHECK(cone2.complex.count(0) == 1 + 2 * base.count(0));

    // all vertices inside the closed unit ball
    for (Eigen::Index v = 0; v < cone2.complex.vertex_coords().rows(); ++v)
        CHECK(cone2.complex.vertex_coords().row(v).norm() <= 1.0 + 1e-12);

    // boundary of the fundamental chain is the base sphere with matching
    // induced orientation
    Eigen::VectorXd fb = cone2.complex.fundamental_boundary();
    int boundary_faces = 0;
    for (Eigen::Index i = 0; i < fb.size(); ++i)
        if (fb[i] != 0.0) ++boundary_faces;
    CHECK(boundary_faces == static_cast<int>(base.count(3)));

    int matching = 0;
    for (std::size_t bt = 0; bt < base.count(3); ++bt) {
        VertexTuple lifted;
        for (int v : base.simplices(3)[bt]) lifted.push_back(cone2.ring_vertex(2, v));
        int idx = cone2.complex.simplex_index(3, lifted);
        REQUIRE(idx >= 0);
        double induced = fb[idx];
        CHECK(std::abs(induced) == 1.0);
        if (static_cast<int>(induced) == base.orientation()[bt]) ++matching;
    }
    // induced orientations agree with the base convention
    CHECK(matching == static_cast<int>(base.count(3)));

    CHECK(cone2.nearest_ring(0.4) == 1);
    CHECK(cone2.nearest_ring(0.9) == 2);
}

TEST_CASE("mesh json round trip is byte-identical") {
    SimplicialComplex s3 = build_sphere3_mesh(1);
    std::string text = s3.to_json_string();
    SimplicialComplex back = SimplicialComplex::from_json_string(text);
    CHECK(back.to_json_string() == text);
    CHECK(back.count(1) == s3.count(1));
    CHECK(back.is_closed_manifold());

    auto path = std::filesystem::temp_directory_path() / "hopfdec_mesh_test.json";
    s3.save_json(path.string());
    SimplicialComplex loaded = SimplicialComplex::load_json(path.string());
    CHECK(loaded.to_json_string() == text);
    std::filesystem::remove(path);

    CHECK_THROWS(SimplicialComplex::from_json_string("{\"format_version\": 99}"));
}
