#include "cwmix/projection.hpp"

#include <cmath>

namespace cwmix {

Eigen::VectorXd line_unit_vector(const Eigen::VectorXd& x) {
  if (x.size() < 1) {
    throw InvalidArgumentError("direction vector is empty");
  }
  if (!x.allFinite()) {
    throw InvalidArgumentError("direction vector has non-finite entries");
  }
  const double n = x.norm();
  if (n == 0.0) {
    throw ZeroDirectionError("cannot project onto the zero vector");
  }
  double sign = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      sign = x[i] > 0.0 ? 1.0 : -1.0;
      break;
    }
  }
  return (sign / n) * x;
}

Component1D project_component(const MixtureComponent& c, Family family,
                              const Eigen::VectorXd& x) {
  const Eigen::VectorXd u = line_unit_vector(x);
  if (u.size() != c.mean.size()) {
    throw DimensionMismatchError("direction does not match component dimension");
  }
  return Component1D{family, c.weight, u.dot(c.mean),
                     std::sqrt(c.cov.quadratic_form(u)), c.dof};
}

Mixture1D project_mixture(const MixtureModel& model, const Eigen::VectorXd& x) {
  const Eigen::VectorXd u = line_unit_vector(x);
  if (u.size() != model.dim()) {
    throw DimensionMismatchError("direction does not match mixture dimension");
  }
  Mixture1D out;
  out.components.reserve(model.components().size());
  for (const MixtureComponent& c : model.components()) {
    out.components.push_back(Component1D{model.family(), c.weight,
                                         u.dot(c.mean),
                                         std::sqrt(c.cov.quadratic_form(u)),
                                         c.dof});
  }
  return out;
}

}  // namespace cwmix
