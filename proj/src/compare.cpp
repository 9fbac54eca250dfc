#include "cwmix/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cwmix/projection.hpp"

namespace cwmix {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scaled residual of one matched component pair: weights compare absolutely,
// means and scales relative to 1 + magnitude so the tolerance is meaningful
// for both small and large parameters.
double component_distance(const Component1D& a, const Component1D& b) {
  if (a.dof != b.dof) return kInf;
  const double dw = std::abs(a.weight - b.weight);
  const double dm = std::abs(a.mean - b.mean) /
                    (1.0 + std::max(std::abs(a.mean), std::abs(b.mean)));
  const double ds =
      std::abs(a.scale - b.scale) / (1.0 + std::max(a.scale, b.scale));
  return std::max({dw, dm, ds});
}

}  // namespace

Comparison1D compare_1d(const Mixture1D& a, const Mixture1D& b,
                        double tol_param, double tol_merge) {
  if (a.components.empty() || b.components.empty()) {
    throw EmptyMixtureError("cannot compare empty mixtures");
  }
  if (a.components.front().family != b.components.front().family) {
    throw FamilyMismatchError("mixtures belong to different families");
  }
  const Mixture1D ca = canonicalize_1d(a, tol_merge);
  const Mixture1D cb = canonicalize_1d(b, tol_merge);
  if (ca.components.size() != cb.components.size()) {
    return Comparison1D{false, kInf};
  }
  double dist = 0.0;
  for (std::size_t i = 0; i < ca.components.size(); ++i) {
    dist = std::max(dist, component_distance(ca.components[i], cb.components[i]));
  }
  return Comparison1D{dist <= tol_param, dist};
}

ComparisonVerdict compare_via_projections(const MixtureModel& p,
                                          const MixtureModel& q,
                                          const DirectionSet& s,
                                          const CompareTolerances& tol) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatchError("mixtures have different dimensions");
  }
  if (p.family() != q.family()) {
    throw FamilyMismatchError("mixtures belong to different families");
  }
  if (s.dim != p.dim()) {
    throw DimensionMismatchError("direction set dimension does not match");
  }
  if (s.size() < 1) {
    throw InvalidArgumentError("direction set is empty");
  }
  ComparisonVerdict v;
  v.tolerances = tol;
  const int mp = p.canonicalized(tol.tol_merge).size();
  const int mq = q.canonicalized(tol.tol_merge).size();
  v.mixture_size = std::max(mp, mq);
  v.required_line_count = required_lines(p.dim(), v.mixture_size);
  v.cardinality_warning = s.size() < v.required_line_count;
  v.equal = true;
  for (const Eigen::VectorXd& x : s.vectors) {
    const Comparison1D c =
        compare_1d(project_mixture(p, x), project_mixture(q, x), tol.tol_param,
                   tol.tol_merge);
    v.diagnostics.push_back(DirectionDiagnostic{x, c.distance});
    if (!c.equal) {
      v.equal = false;
      v.witness_direction = x;
      break;
    }
  }
  return v;
}

bool compare_canonical(const MixtureModel& p, const MixtureModel& q,
                       const CompareTolerances& tol) {
  if (p.dim() != q.dim()) {
    throw DimensionMismatchError("mixtures have different dimensions");
  }
  if (p.family() != q.family()) {
    throw FamilyMismatchError("mixtures belong to different families");
  }
  const MixtureModel cp = p.canonicalized(tol.tol_merge);
  const MixtureModel cq = q.canonicalized(tol.tol_merge);
  if (cp.size() != cq.size()) return false;
  for (int i = 0; i < cp.size(); ++i) {
    const MixtureComponent& a = cp.components()[i];
    const MixtureComponent& b = cq.components()[i];
    if (a.dof != b.dof) return false;
    if (std::abs(a.weight - b.weight) > tol.tol_param) return false;
    for (Eigen::Index k = 0; k < a.mean.size(); ++k) {
      const double scale =
          1.0 + std::max(std::abs(a.mean[k]), std::abs(b.mean[k]));
      if (std::abs(a.mean[k] - b.mean[k]) > tol.tol_param * scale) return false;
    }
    const Eigen::MatrixXd& ma = a.cov.entries();
    const Eigen::MatrixXd& mb = b.cov.entries();
    for (Eigen::Index r = 0; r < ma.rows(); ++r) {
      for (Eigen::Index c = 0; c < ma.cols(); ++c) {
        const double scale =
            1.0 + std::max(std::abs(ma(r, c)), std::abs(mb(r, c)));
        if (std::abs(ma(r, c) - mb(r, c)) > tol.tol_param * scale) return false;
      }
    }
  }
  return true;
}

}  // namespace cwmix
