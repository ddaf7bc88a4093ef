#include "hopfdec/cochain.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include <json.hpp>

namespace hopfdec {

Cochain::Cochain(const SimplicialComplex& cx, int deg)
    : complex(&cx), degree(deg),
      values(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cx.count(deg)))) {
    if (deg < 0 || deg > cx.dim())
        throw std::invalid_argument("Cochain: degree out of range");
}

Cochain::Cochain(const SimplicialComplex& cx, int deg, Eigen::VectorXd vals)
    : complex(&cx), degree(deg), values(std::move(vals)) {
    if (deg < 0 || deg > cx.dim())
        throw std::invalid_argument("Cochain: degree out of range");
    if (values.size() != static_cast<Eigen::Index>(cx.count(deg)))
        throw DimensionMismatch("Cochain: value count must match simplex count");
}

Cochain Cochain::zero(const SimplicialComplex& cx, int deg) {
    return Cochain(cx, deg);
}

std::string Cochain::to_json_string() const {
    nlohmann::json j;
    j["degree"] = degree;
    j["values"] = std::vector<double>(values.data(), values.data() + values.size());
    return j.dump();
}

Cochain Cochain::from_json_string(const SimplicialComplex& cx,
                                  const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    auto vals = j.at("values").get<std::vector<double>>();
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(vals.data(),
                                                    static_cast<Eigen::Index>(vals.size()));
    return Cochain(cx, j.at("degree").get<int>(), std::move(v));
}

Cochain coboundary(const Cochain& c) {
    if (!c.complex) throw std::invalid_argument("coboundary: empty cochain");
    if (c.degree >= c.complex->dim())
        throw std::invalid_argument("coboundary: cochain already has top degree");
    return Cochain(*c.complex, c.degree + 1,
                   c.complex->boundary(c.degree + 1).transpose() * c.values);
}

namespace {

Cochain cup_aw(const Cochain& a, const Cochain& b) {
    const SimplicialComplex& cx = *a.complex;
    const int p = a.degree, q = b.degree;
    Cochain out(cx, p + q);
    const auto& simplices = cx.simplices(p + q);
    VertexTuple front(p + 1), back(q + 1);
    for (std::size_t s = 0; s < simplices.size(); ++s) {
        const auto& v = simplices[s];
        for (int i = 0; i <= p; ++i) front[i] = v[i];
        for (int i = 0; i <= q; ++i) back[i] = v[p + i];
        int fi = cx.simplex_index(p, front);
        int bi = cx.simplex_index(q, back);
        out.values[static_cast<Eigen::Index>(s)] = a.values[fi] * b.values[bi];
    }
    return out;
}

}  // namespace

Cochain cup(const Cochain& a, const Cochain& b, CupKind kind) {
    if (!a.complex || !b.complex)
        throw std::invalid_argument("cup: empty cochain");
    if (a.complex != b.complex)
        throw DimensionMismatch("cup: cochains live on different complexes");
    if (a.degree + b.degree > a.complex->dim())
        throw std::invalid_argument("cup: degree overflow");
    if (kind == CupKind::alexander_whitney) return cup_aw(a, b);
    Cochain ab = cup_aw(a, b);
    Cochain ba = cup_aw(b, a);
    double sign = ((a.degree * b.degree) % 2 == 0) ? 1.0 : -1.0;
    ab.values = 0.5 * (ab.values + sign * ba.values);
    return ab;
}

double integrate_top(const Cochain& c) {
    if (!c.complex) throw std::invalid_argument("integrate_top: empty cochain");
    if (c.degree != c.complex->dim())
        throw std::invalid_argument("integrate_top: cochain must have top degree");
    const auto& orient = c.complex->orientation();
    double total = 0.0;
    for (std::size_t i = 0; i < orient.size(); ++i)
        total += orient[i] * c.values[static_cast<Eigen::Index>(i)];
    return total;
}

double lp_norm(const Cochain& c, double p) {
    if (!c.complex) throw std::invalid_argument("lp_norm: empty cochain");
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const Eigen::VectorXd& vol = c.complex->volumes(c.degree);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < c.values.size(); ++i)
        sum += std::pow(std::abs(c.values[i]), p) * vol[i];
    return std::pow(sum, 1.0 / p);
}

// ---------------------------------------------------------------------------
// Mass matrices

namespace {

// Gradients of barycentric coordinates of a top simplex, one per row,
// as vectors in the embedding space (pseudo-inverse of the edge matrix).
Eigen::MatrixXd barycentric_gradients(const Eigen::MatrixXd& verts,
                                      const VertexTuple& top) {
    const int d = static_cast<int>(top.size()) - 1;
    Eigen::MatrixXd e(verts.cols(), d);
    for (int i = 0; i < d; ++i)
        e.col(i) = (verts.row(top[i + 1]) - verts.row(top[0])).transpose();
    Eigen::MatrixXd pinv = (e.transpose() * e).ldlt().solve(e.transpose());
    Eigen::MatrixXd grads(d + 1, verts.cols());
    grads.bottomRows(d) = pinv;
    grads.row(0) = -pinv.colwise().sum();
    return grads;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

}  // namespace

Eigen::SparseMatrix<double> mass_matrix(const SimplicialComplex& cx, int degree,
                                        MassKind kind) {
    const Eigen::Index nk = static_cast<Eigen::Index>(cx.count(degree));
    Eigen::SparseMatrix<double> m(nk, nk);
    if (kind == MassKind::identity) {
        m.setIdentity();
        return m;
    }

    const int d = cx.dim();
    const int k = degree;
    const auto& verts = cx.vertex_coords();
    std::vector<Eigen::Triplet<double>> trips;

    // local k-faces of a (d+1)-vertex simplex
    std::vector<std::vector<int>> local_faces;
    {
        std::vector<int> cur;
        std::function<void(int)> rec = [&](int start) {
            if (static_cast<int>(cur.size()) == k + 1) {
                local_faces.push_back(cur);
                return;
            }
            for (int i = start; i <= d; ++i) {
                cur.push_back(i);
                rec(i + 1);
                cur.pop_back();
            }
        };
        rec(0);
    }

    const double kf = factorial(k);
    const double lam_diag = 2.0 / double((d + 1) * (d + 2));
    const double lam_off = 1.0 / double((d + 1) * (d + 2));

    for (std::size_t t = 0; t < cx.count(d); ++t) {
        const auto& top = cx.simplices(d)[t];
        double vol = cx.simplex_volume(d, t);
        Eigen::MatrixXd grads = barycentric_gradients(verts, top);
        Eigen::MatrixXd gram = grads * grads.transpose();  // (d+1)x(d+1)

        // global indices of the local k-faces
        std::vector<int> gidx(local_faces.size());
        for (std::size_t f = 0; f < local_faces.size(); ++f) {
            VertexTuple g(k + 1);
            for (int i = 0; i <= k; ++i) g[i] = top[local_faces[f][i]];
            gidx[f] = cx.simplex_index(k, g);
        }

        Eigen::MatrixXd sub(k, k);
        for (std::size_t fa = 0; fa < local_faces.size(); ++fa) {
            for (std::size_t fb = 0; fb < local_faces.size(); ++fb) {
                const auto& sa = local_faces[fa];
                const auto& sb = local_faces[fb];
                double acc = 0.0;
                for (int i = 0; i <= k; ++i) {
                    for (int j = 0; j <= k; ++j) {
                        // det of the Gram minor with rows sa \ {i}, cols sb \ {j}
                        int r = 0;
                        for (int u = 0; u <= k; ++u) {
                            if (u == i) continue;
                            int c = 0;
                            for (int v = 0; v <= k; ++v) {
                                if (v == j) continue;
                                sub(r, c) = gram(sa[u], sb[v]);
                                ++c;
                            }
                            ++r;
                        }
                        double det = (k == 0) ? 1.0 : sub.determinant();
                        double lam = (sa[i] == sb[j]) ? lam_diag : lam_off;
                        double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                        acc += sign * lam * det;
                    }
                }
                trips.emplace_back(gidx[fa], gidx[fb], kf * kf * vol * acc);
            }
        }
    }
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

}  // namespace hopfdec
