// Projection of multivariate mixtures onto lines. A direction x determines
// the line through the origin it spans; projecting a Gaussian (mu, S) onto
// that line gives the univariate Gaussian (u.mu, sqrt(u'Su)) with u the
// canonical unit vector of the line, and t components keep their degrees of
// freedom. Projection depends only on the line, never on the representative.
#pragma once

#include <Eigen/Dense>

#include "cwmix/model.hpp"

namespace cwmix {

/// Canonical unit vector of the line spanned by x: x normalized to unit
/// Euclidean norm, sign-fixed so that the first nonzero coordinate is
/// positive. Throws ZeroDirectionError on the zero vector.
Eigen::VectorXd line_unit_vector(const Eigen::VectorXd& x);

/// Projection of one component onto the line spanned by x.
Component1D project_component(const MixtureComponent& c, Family family,
                              const Eigen::VectorXd& x);

/// Componentwise projection; weights carry over unchanged.
Mixture1D project_mixture(const MixtureModel& model, const Eigen::VectorXd& x);

}  // namespace cwmix
