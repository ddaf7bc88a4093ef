#include "hopfdec/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

namespace hopfdec {

namespace {

int det_sign(const Eigen::MatrixXd& m) {
    double d = m.determinant();
    if (d > 0.0) return 1;
    if (d < 0.0) return -1;
    return 0;
}

// Orientation of a simplex on a sphere mesh: sign of the determinant of the
// vertex coordinates themselves (outward convention, origin inside).
int sphere_orientation(const Eigen::MatrixXd& vertices, const VertexTuple& s) {
    Eigen::MatrixXd m(s.size(), vertices.cols());
    for (std::size_t i = 0; i < s.size(); ++i) m.row(i) = vertices.row(s[i]);
    return det_sign(m);
}

// Orientation of a full-dimensional simplex: sign of the edge determinant.
int affine_orientation(const Eigen::MatrixXd& vertices, const VertexTuple& s) {
    Eigen::Index d = static_cast<Eigen::Index>(s.size()) - 1;
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        m.col(i) = (vertices.row(s[i + 1]) - vertices.row(s[0])).transpose();
    return det_sign(m);
}

void enumerate_subsets(const VertexTuple& simplex, int size,
                       std::vector<VertexTuple>& out) {
    VertexTuple current;
    current.reserve(size);
    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (static_cast<int>(current.size()) == size) {
            out.push_back(current);
            return;
        }
        for (std::size_t i = start; i < simplex.size(); ++i) {
            current.push_back(simplex[i]);
            rec(i + 1);
            current.pop_back();
        }
    };
    rec(0);
}

}  // namespace

SimplicialComplex::SimplicialComplex(int dim, Eigen::MatrixXd vertices,
                                     std::vector<VertexTuple> top_simplices,
                                     std::vector<int> orientation)
    : dim_(dim), vertices_(std::move(vertices)), orientation_(std::move(orientation)) {
    if (dim_ < 1) throw std::invalid_argument("SimplicialComplex: dim must be >= 1");
    if (orientation_.size() != top_simplices.size())
        throw DimensionMismatch("SimplicialComplex: one orientation flag per top simplex");
    for (auto& s : top_simplices) {
        if (static_cast<int>(s.size()) != dim_ + 1)
            throw DimensionMismatch("SimplicialComplex: top simplex arity mismatch");
        if (!std::is_sorted(s.begin(), s.end()))
            throw std::invalid_argument("SimplicialComplex: top simplices must be ascending");
        for (int v : s)
            if (v < 0 || v >= vertices_.rows())
                throw std::invalid_argument("SimplicialComplex: vertex id out of range");
    }
    for (int o : orientation_)
        if (o != 1 && o != -1)
            throw std::invalid_argument("SimplicialComplex: orientation flags must be +-1");

    simplices_.resize(dim_ + 1);
    simplices_[dim_] = std::move(top_simplices);
    build_skeleton();
    build_boundaries();
    build_volumes();
}

void SimplicialComplex::build_skeleton() {
    index_.resize(dim_ + 1);
    // vertices: every id referenced keeps its slot so vertex k-cochain
    // indices match vertex ids
    simplices_[0].resize(vertices_.rows());
    for (Eigen::Index v = 0; v < vertices_.rows(); ++v)
        simplices_[0][v] = VertexTuple{static_cast<int>(v)};

    for (int k = 1; k < dim_; ++k) {
        std::vector<VertexTuple> faces;
        for (const auto& top : simplices_[dim_])
            enumerate_subsets(top, k + 1, faces);
        std::sort(faces.begin(), faces.end());
        faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
        simplices_[k] = std::move(faces);
    }
    for (int k = 0; k <= dim_; ++k) {
        index_[k].reserve(simplices_[k].size() * 2);
        for (std::size_t i = 0; i < simplices_[k].size(); ++i)
            index_[k][simplices_[k][i]] = static_cast<int>(i);
    }
    if (index_[dim_].size() != simplices_[dim_].size())
        throw std::invalid_argument("SimplicialComplex: duplicate top simplices");
}

void SimplicialComplex::build_boundaries() {
    boundary_.resize(dim_ + 1);
    for (int k = 1; k <= dim_; ++k) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(simplices_[k].size() * (k + 1));
        for (std::size_t c = 0; c < simplices_[k].size(); ++c) {
            const auto& s = simplices_[k][c];
            VertexTuple face(s.size() - 1);
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                std::size_t w = 0;
                for (std::size_t i = 0; i < s.size(); ++i)
                    if (i != drop) face[w++] = s[i];
                auto it = index_[k - 1].find(face);
                if (it == index_[k - 1].end())
                    throw std::logic_error("SimplicialComplex: missing face");
                double sign = (drop % 2 == 0) ? 1.0 : -1.0;
                trips.emplace_back(it->second, static_cast<int>(c), sign);
            }
        }
        boundary_[k].resize(static_cast<Eigen::Index>(simplices_[k - 1].size()),
                            static_cast<Eigen::Index>(simplices_[k].size()));
        boundary_[k].setFromTriplets(trips.begin(), trips.end());
    }
}

void SimplicialComplex::build_volumes() {
    volumes_.resize(dim_ + 1);
    volumes_[0] = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(simplices_[0].size()));
    double kfact = 1.0;
    for (int k = 1; k <= dim_; ++k) {
        kfact *= k;
        volumes_[k].resize(static_cast<Eigen::Index>(simplices_[k].size()));
        for (std::size_t i = 0; i < simplices_[k].size(); ++i) {
            const auto& s = simplices_[k][i];
            Eigen::MatrixXd e(vertices_.cols(), k);
            for (int j = 0; j < k; ++j)
                e.col(j) = (vertices_.row(s[j + 1]) - vertices_.row(s[0])).transpose();
            double g = (e.transpose() * e).determinant();
            volumes_[k][static_cast<Eigen::Index>(i)] =
                std::sqrt(std::max(g, 0.0)) / kfact;
        }
    }
}

int SimplicialComplex::simplex_index(int k, const VertexTuple& sorted_tuple) const {
    auto it = index_[k].find(sorted_tuple);
    return it == index_[k].end() ? -1 : it->second;
}

const Eigen::SparseMatrix<double>& SimplicialComplex::boundary(int k) const {
    if (k < 1 || k > dim_)
        throw std::invalid_argument("boundary: degree out of range");
    return boundary_[k];
}

double SimplicialComplex::simplex_volume(int k, std::size_t index) const {
    return volumes_[k][static_cast<Eigen::Index>(index)];
}

double SimplicialComplex::max_edge_length() const {
    double h = 0.0;
    for (const auto& e : simplices_[1])
        h = std::max(h, (vertices_.row(e[1]) - vertices_.row(e[0])).norm());
    return h;
}

Eigen::VectorXd SimplicialComplex::fundamental_boundary() const {
    Eigen::VectorXd chain(static_cast<Eigen::Index>(count(dim_)));
    for (std::size_t i = 0; i < count(dim_); ++i)
        chain[static_cast<Eigen::Index>(i)] = orientation_[i];
    return boundary_[dim_] * chain;
}

bool SimplicialComplex::is_closed_manifold() const {
    std::vector<int> cofaces(count(dim_ - 1), 0);
    for (int c = 0; c < static_cast<int>(count(dim_)); ++c) {
        const auto& s = simplices_[dim_][c];
        VertexTuple face(s.size() - 1);
        for (std::size_t drop = 0; drop < s.size(); ++drop) {
            std::size_t w = 0;
            for (std::size_t i = 0; i < s.size(); ++i)
                if (i != drop) face[w++] = s[i];
            cofaces[simplex_index(dim_ - 1, face)]++;
        }
    }
    for (int c : cofaces)
        if (c != 2) return false;
    return fundamental_boundary().lpNorm<Eigen::Infinity>() == 0.0;
}

// ---------------------------------------------------------------------------
// JSON mesh format (versioned; lower skeleta are derived on load, not stored)

std::string SimplicialComplex::to_json_string() const {
    nlohmann::json j;
    j["format_version"] = 1;
    j["dim"] = dim_;
    nlohmann::json verts = nlohmann::json::array();
    for (Eigen::Index v = 0; v < vertices_.rows(); ++v) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < vertices_.cols(); ++c) row.push_back(vertices_(v, c));
        verts.push_back(std::move(row));
    }
    j["vertices"] = std::move(verts);
    j["top_simplices"] = simplices_[dim_];
    j["orientation"] = orientation_;
    return j.dump();
}

SimplicialComplex SimplicialComplex::from_json_string(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    if (!j.contains("format_version") || j["format_version"].get<int>() != 1)
        throw std::invalid_argument("mesh json: unsupported format_version");
    int dim = j.at("dim").get<int>();
    const auto& jverts = j.at("vertices");
    if (jverts.empty()) throw std::invalid_argument("mesh json: no vertices");
    Eigen::MatrixXd vertices(jverts.size(), jverts[0].size());
    for (std::size_t v = 0; v < jverts.size(); ++v)
        for (std::size_t c = 0; c < jverts[v].size(); ++c)
            vertices(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(c)) =
                jverts[v][c].get<double>();
    auto tops = j.at("top_simplices").get<std::vector<VertexTuple>>();
    auto orient = j.at("orientation").get<std::vector<int>>();
    return SimplicialComplex(dim, std::move(vertices), std::move(tops), std::move(orient));
}

void SimplicialComplex::save_json(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_json: cannot open " + path);
    out << to_json_string();
    if (!out) throw std::runtime_error("save_json: write failed for " + path);
}

SimplicialComplex SimplicialComplex::load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_json: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

// ---------------------------------------------------------------------------
// Sphere mesh builders

namespace {

struct RawMesh {
    Eigen::MatrixXd vertices;
    std::vector<VertexTuple> cells;  // ascending
};

int midpoint_id(std::map<std::pair<int, int>, int>& cache, RawMesh& mesh, int a,
                int b, std::vector<Eigen::VectorXd>& new_vertices) {
    auto key = std::minmax(a, b);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    Eigen::VectorXd mid =
        0.5 * (mesh.vertices.row(key.first) + mesh.vertices.row(key.second));
    mid.normalize();  // spherical projection
    int id = static_cast<int>(mesh.vertices.rows() + new_vertices.size());
    new_vertices.push_back(std::move(mid));
    cache.emplace(key, id);
    return id;
}

RawMesh subdivide_sphere(const RawMesh& in) {
    RawMesh out;
    out.vertices = in.vertices;
    std::map<std::pair<int, int>, int> midpoint;
    std::vector<Eigen::VectorXd> fresh;
    RawMesh scratch;  // only vertices are consulted by midpoint_id
    scratch.vertices = in.vertices;

    auto mid = [&](int a, int b) {
        return midpoint_id(midpoint, scratch, a, b, fresh);
    };

    const int arity = static_cast<int>(in.cells.front().size());
    for (const auto& cell : in.cells) {
        if (arity == 2) {  // segments
            int m = mid(cell[0], cell[1]);
            out.cells.push_back({cell[0], m});
            out.cells.push_back({m, cell[1]});
        } else if (arity == 3) {  // triangles
            int m01 = mid(cell[0], cell[1]);
            int m02 = mid(cell[0], cell[2]);
            int m12 = mid(cell[1], cell[2]);
            out.cells.push_back({cell[0], m01, m02});
            out.cells.push_back({cell[1], m01, m12});
            out.cells.push_back({cell[2], m02, m12});
            out.cells.push_back({m01, m02, m12});
        } else {  // tetrahedra: 4 corner cells + octahedron split by the
                  // shortest diagonal
            int m[4][4];
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    m[a][b] = m[b][a] = mid(cell[a], cell[b]);
            for (int a = 0; a < 4; ++a) {
                VertexTuple corner{cell[a]};
                for (int b = 0; b < 4; ++b)
                    if (b != a) corner.push_back(m[a][b]);
                out.cells.push_back(std::move(corner));
            }

            auto coord = [&](int id) -> Eigen::VectorXd {
                if (id < scratch.vertices.rows()) return scratch.vertices.row(id);
                return fresh[id - scratch.vertices.rows()];
            };
            // diagonal candidates pair opposite midpoints: (ab|cd)
            const int splits[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
            int pick = 0;
            double best_len = std::numeric_limits<double>::infinity();
            for (int i = 0; i < 3; ++i) {
                double len = (coord(m[splits[i][0]][splits[i][1]]) -
                              coord(m[splits[i][2]][splits[i][3]])).norm();
                if (len < best_len) {
                    best_len = len;
                    pick = i;
                }
            }
            int a = splits[pick][0], b = splits[pick][1];
            int c = splits[pick][2], d = splits[pick][3];
            int da = m[a][b], db = m[c][d];
            // equator cycle: consecutive midpoints share an original vertex
            int eq[4] = {m[a][c], m[a][d], m[b][d], m[b][c]};
            for (int i = 0; i < 4; ++i)
                out.cells.push_back({da, db, eq[i], eq[(i + 1) % 4]});
        }
    }
    Eigen::MatrixXd verts(in.vertices.rows() + static_cast<Eigen::Index>(fresh.size()),
                          in.vertices.cols());
    verts.topRows(in.vertices.rows()) = in.vertices;
    for (std::size_t i = 0; i < fresh.size(); ++i)
        verts.row(in.vertices.rows() + static_cast<Eigen::Index>(i)) =
            fresh[i].transpose();
    out.vertices = std::move(verts);
    for (auto& c : out.cells) std::sort(c.begin(), c.end());
    return out;
}

SimplicialComplex finish_sphere(RawMesh mesh, int dim) {
    std::vector<int> orient(mesh.cells.size());
    for (std::size_t i = 0; i < mesh.cells.size(); ++i) {
        orient[i] = sphere_orientation(mesh.vertices, mesh.cells[i]);
        if (orient[i] == 0)
            throw std::logic_error("sphere mesh: degenerate top simplex");
    }
    return SimplicialComplex(dim, std::move(mesh.vertices), std::move(mesh.cells),
                             std::move(orient));
}

}  // namespace

SimplicialComplex build_sphere3_mesh(int refinement_level) {
    if (refinement_level < 0)
        throw std::invalid_argument("build_sphere3_mesh: level must be >= 0");
    if (refinement_level > 6) {
        std::size_t estimate = 16ull << (3 * refinement_level);
        throw MeshSizeError("build_sphere3_mesh: level " +
                                std::to_string(refinement_level) +
                                " would need about " + std::to_string(estimate) +
                                " tetrahedra",
                            estimate);
    }
    RawMesh mesh;
    mesh.vertices = Eigen::MatrixXd::Zero(8, 4);
    for (int i = 0; i < 4; ++i) {
        mesh.vertices(2 * i, i) = 1.0;       // +e_i -> vertex 2i
        mesh.vertices(2 * i + 1, i) = -1.0;  // -e_i -> vertex 2i+1
    }
    for (int s0 = 0; s0 < 2; ++s0)
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
                for (int s3 = 0; s3 < 2; ++s3)
                    mesh.cells.push_back({0 + s0, 2 + s1, 4 + s2, 6 + s3});
    for (int l = 0; l < refinement_level; ++l) mesh = subdivide_sphere(mesh);
    return finish_sphere(std::move(mesh), 3);
}

SimplicialComplex build_sphere2_mesh(int refinement_level) {
    if (refinement_level < 0)
        throw std::invalid_argument("build_sphere2_mesh: level must be >= 0");
    if (refinement_level > 8) {
        std::size_t estimate = 8ull << (2 * refinement_level);
        throw MeshSizeError("build_sphere2_mesh: level too large", estimate);
    }
    RawMesh mesh;
    mesh.vertices = Eigen::MatrixXd::Zero(6, 3);
    for (int i = 0; i < 3; ++i) {
        mesh.vertices(2 * i, i) = 1.0;
        mesh.vertices(2 * i + 1, i) = -1.0;
    }
    for (int s0 = 0; s0 < 2; ++s0)
        for (int s1 = 0; s1 < 2; ++s1)
            for (int s2 = 0; s2 < 2; ++s2)
                mesh.cells.push_back({0 + s0, 2 + s1, 4 + s2});
    for (int l = 0; l < refinement_level; ++l) mesh = subdivide_sphere(mesh);
    return finish_sphere(std::move(mesh), 2);
}

SimplicialComplex build_circle_mesh(int segments) {
    if (segments < 3)
        throw std::invalid_argument("build_circle_mesh: need >= 3 segments");
    Eigen::MatrixXd verts(segments, 2);
    for (int i = 0; i < segments; ++i) {
        double a = 2.0 * M_PI * i / segments;
        verts(i, 0) = std::cos(a);
        verts(i, 1) = std::sin(a);
    }
    std::vector<VertexTuple> cells;
    std::vector<int> orient;
    for (int i = 0; i < segments; ++i) {
        int a = i, b = (i + 1) % segments;
        VertexTuple c{std::min(a, b), std::max(a, b)};
        // orient each segment along increasing angle
        orient.push_back(b == c[1] ? 1 : -1);
        cells.push_back(std::move(c));
    }
    return SimplicialComplex(1, std::move(verts), std::move(cells), std::move(orient));
}

int ConeMesh::nearest_ring(double r) const {
    int best = 1;
    double gap = std::abs(r - ring_radius(1));
    for (int j = 2; j <= layers; ++j) {
        double g = std::abs(r - ring_radius(j));
        if (g < gap) {
            gap = g;
            best = j;
        }
    }
    return best;
}

ConeMesh build_cone_mesh(const SimplicialComplex& base, int radial_layers) {
    if (radial_layers < 1)
        throw std::invalid_argument("build_cone_mesh: need >= 1 layer");
    if (!base.is_closed_manifold())
        throw std::invalid_argument("build_cone_mesh: base must be a closed oriented complex");

    const int bdim = base.dim();
    const int vb = static_cast<int>(base.count(0));
    const int layers = radial_layers;
    const Eigen::MatrixXd& bverts = base.vertex_coords();

    Eigen::MatrixXd verts(1 + layers * vb, bverts.cols());
    verts.row(0).setZero();  // apex
    for (int j = 1; j <= layers; ++j)
        verts.middleRows(1 + (j - 1) * vb, vb) = (double(j) / layers) * bverts;

    auto ring_id = [&](int ring, int v) { return 1 + (ring - 1) * vb + v; };

    std::vector<VertexTuple> cells;
    std::vector<int> orient;
    auto push_cell = [&](VertexTuple c) {
        std::sort(c.begin(), c.end());
        int o = affine_orientation(verts, c);
        if (o == 0) throw std::logic_error("build_cone_mesh: degenerate cell");
        cells.push_back(std::move(c));
        orient.push_back(o);
    };

    // innermost block: cone from the apex to ring 1
    for (const auto& s : base.simplices(bdim)) {
        VertexTuple c;
        c.push_back(0);
        for (int v : s) c.push_back(ring_id(1, v));
        push_cell(std::move(c));
    }
    // prism blocks between consecutive rings, staircase split induced by the
    // global base vertex order (conforming across neighbouring prisms)
    for (int j = 1; j < layers; ++j) {
        for (const auto& s : base.simplices(bdim)) {
            for (int i = 0; i <= bdim; ++i) {
                VertexTuple c;
                for (int a = 0; a <= i; ++a) c.push_back(ring_id(j, s[a]));
                for (int a = i; a <= bdim; ++a) c.push_back(ring_id(j + 1, s[a]));
                push_cell(std::move(c));
            }
        }
    }

    SimplicialComplex complex(bdim + 1, std::move(verts), std::move(cells),
                              std::move(orient));
    return ConeMesh{std::move(complex), base, layers, vb};
}

}  // namespace hopfdec
