#include "hopfdec/forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

namespace hopfdec {

FormSpec::FormSpec(std::string name, int ambient_dim, int degree,
                   std::vector<std::vector<int>> tuples, Coefficient coefficient,
                   std::optional<double> support_radius)
    : name_(std::move(name)), m_(ambient_dim), degree_(degree),
      tuples_(std::move(tuples)), coefficient_(std::move(coefficient)),
      support_radius_(support_radius) {
    if (degree_ < 2 || degree_ % 2 != 0)
        throw std::invalid_argument("FormSpec: degree must be even and >= 2");
    if (m_ < degree_ + 1)
        throw std::invalid_argument("FormSpec: ambient dimension too small");
    for (const auto& t : tuples_) {
        if (static_cast<int>(t.size()) != degree_)
            throw std::invalid_argument("FormSpec: tuple arity must equal degree");
        if (!std::is_sorted(t.begin(), t.end()))
            throw std::invalid_argument("FormSpec: tuples must be ascending");
        for (int i : t)
            if (i < 0 || i >= m_)
                throw std::invalid_argument("FormSpec: tuple index out of range");
    }
}

namespace {

// quintic ramp, C^2, 0 below lo and 1 above hi
double smoothstep(double r, double lo, double hi) {
    if (r <= lo) return 0.0;
    if (r >= hi) return 1.0;
    double s = (r - lo) / (hi - lo);
    return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

double radial_cutoff(double r) {
    return smoothstep(r, 0.25, 0.5) * (1.0 - smoothstep(r, 1.5, 2.0));
}

}  // namespace

FormSpec FormSpec::s2_area_extended() {
    // (1/4pi) chi(r) (x dy^dz + y dz^dx + z dx^dy) / r^3; the solid-angle
    // factor is the pullback of the unit-mass area form under x -> x/|x|.
    auto coeff = [](const std::vector<int>& tuple, const Eigen::VectorXd& x) {
        double r = x.norm();
        if (r < 0.25) return 0.0;
        double c = radial_cutoff(r) / (4.0 * M_PI * r * r * r);
        if (tuple[0] == 0 && tuple[1] == 1) return c * x[2];   // dx^dy
        if (tuple[0] == 0 && tuple[1] == 2) return -c * x[1];  // dx^dz
        return c * x[0];                                       // dy^dz
    };
    return FormSpec("s2_area_extended", 3, 2, {{0, 1}, {0, 2}, {1, 2}}, coeff, 2.0);
}

FormSpec FormSpec::constant_coefficient(
    int ambient_dim, int degree,
    std::vector<std::pair<std::vector<int>, double>> terms) {
    std::vector<std::vector<int>> tuples;
    auto table = std::make_shared<std::map<std::vector<int>, double>>();
    for (auto& [t, v] : terms) {
        tuples.push_back(t);
        (*table)[t] = v;
    }
    auto coeff = [table](const std::vector<int>& tuple, const Eigen::VectorXd&) {
        auto it = table->find(tuple);
        return it == table->end() ? 0.0 : it->second;
    };
    return FormSpec("constant_coefficient", ambient_dim, degree, std::move(tuples),
                    coeff);
}

FormSpec FormSpec::sum(const FormSpec& a, const FormSpec& b) {
    if (a.ambient_dim() != b.ambient_dim() || a.degree() != b.degree())
        throw std::invalid_argument("FormSpec::sum: incompatible forms");
    std::vector<std::vector<int>> tuples = a.tuples();
    for (const auto& t : b.tuples())
        if (std::find(tuples.begin(), tuples.end(), t) == tuples.end())
            tuples.push_back(t);
    std::sort(tuples.begin(), tuples.end());
    auto fa = a;
    auto fb = b;
    auto coeff = [fa, fb](const std::vector<int>& tuple, const Eigen::VectorXd& x) {
        return fa.coefficient(tuple, x) + fb.coefficient(tuple, x);
    };
    std::optional<double> support;
    if (a.support_radius() && b.support_radius())
        support = std::max(*a.support_radius(), *b.support_radius());
    return FormSpec(a.name() + "+" + b.name(), a.ambient_dim(), a.degree(),
                    std::move(tuples), coeff, support);
}

FormSpec FormSpec::builtin(const std::string& name) {
    if (name == "s2_area_extended") return s2_area_extended();
    if (name == "constant_xy")
        return constant_coefficient(3, 2, {{{0, 1}, 1.0}});
    throw std::invalid_argument("FormSpec::builtin: unknown form '" + name + "'");
}

}  // namespace hopfdec
