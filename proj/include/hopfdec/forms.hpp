#ifndef HOPFDEC_FORMS_HPP
#define HOPFDEC_FORMS_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hopfdec {

/// A smooth even-degree form on R^m, given by coefficient functions over
/// ascending coordinate index tuples. Only tuples listed in `tuples` may
/// carry nonzero coefficients; everything else is implicitly zero.
class FormSpec {
public:
    using Coefficient =
        std::function<double(const std::vector<int>&, const Eigen::VectorXd&)>;

    FormSpec(std::string name, int ambient_dim, int degree,
             std::vector<std::vector<int>> tuples, Coefficient coefficient,
             std::optional<double> support_radius = std::nullopt);

    const std::string& name() const { return name_; }
    int ambient_dim() const { return m_; }
    int degree() const { return degree_; }
    const std::vector<std::vector<int>>& tuples() const { return tuples_; }
    std::optional<double> support_radius() const { return support_radius_; }

    double coefficient(const std::vector<int>& tuple, const Eigen::VectorXd& x) const {
        return coefficient_(tuple, x);
    }

    /// The S^2 area form (total mass 1) extended to R^3 by pullback along the
    /// radial retraction, times a radial cutoff supported in 1/4 <= r <= 2.
    static FormSpec s2_area_extended();

    /// Constant-coefficient 2n-form on R^m.
    static FormSpec constant_coefficient(int ambient_dim, int degree,
                                         std::vector<std::pair<std::vector<int>, double>> terms);

    /// Pointwise sum of two forms of matching dimension and degree.
    static FormSpec sum(const FormSpec& a, const FormSpec& b);

    /// Resolve a builtin by name ("s2_area_extended", "constant_xy", ...).
    static FormSpec builtin(const std::string& name);

private:
    std::string name_;
    int m_;
    int degree_;
    std::vector<std::vector<int>> tuples_;
    Coefficient coefficient_;
    std::optional<double> support_radius_;
};

}  // namespace hopfdec

#endif
