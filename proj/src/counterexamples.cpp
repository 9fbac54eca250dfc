#include "cwmix/counterexamples.hpp"

#include <cmath>
#include <numbers>

#include "cwmix/projection.hpp"

namespace cwmix {

namespace {

Eigen::MatrixXd mat2(double a, double b, double c, double d) {
  Eigen::MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

Eigen::VectorXd vec2(double x, double y) {
  Eigen::VectorXd v(2);
  v << x, y;
  return v;
}

}  // namespace

Counterexample build_m2_example() {
  const Eigen::VectorXd zero = vec2(0.0, 0.0);
  std::vector<MixtureComponent> pc;
  pc.push_back(MixtureComponent{0.5, zero, CovMatrix(mat2(2, 0, 0, 1))});
  pc.push_back(MixtureComponent{0.5, zero, CovMatrix(mat2(1, 1, 1, 2))});
  std::vector<MixtureComponent> qc;
  qc.push_back(MixtureComponent{0.5, zero, CovMatrix(mat2(2, 1, 1, 1))});
  qc.push_back(MixtureComponent{0.5, zero, CovMatrix(mat2(1, 0, 0, 2))});
  MixtureModel p = MixtureModel::validated(Family::gaussian, 2, std::move(pc));
  MixtureModel q = MixtureModel::validated(Family::gaussian, 2, std::move(qc));
  DirectionSet s = DirectionSet::validated(
      2, {vec2(1, 0), vec2(0, 1), vec2(1, 1), vec2(1, -1)});
  return Counterexample{std::move(p), std::move(q), std::move(s)};
}

Counterexample build_polygon_example(int m) {
  if (m < 2) {
    throw InvalidArgumentError("polygon example needs at least 2 components");
  }
  const double w = 1.0 / static_cast<double>(m);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  std::vector<MixtureComponent> pc, qc;
  std::vector<Eigen::VectorXd> lines;
  for (int j = 1; j <= m; ++j) {
    const double ap = (2.0 * j - 0.5) * std::numbers::pi / m;
    const double aq = (2.0 * j + 0.5) * std::numbers::pi / m;
    const double al = j * std::numbers::pi / m;
    pc.push_back(
        MixtureComponent{w, vec2(std::cos(ap), std::sin(ap)), CovMatrix(eye)});
    qc.push_back(
        MixtureComponent{w, vec2(std::cos(aq), std::sin(aq)), CovMatrix(eye)});
    lines.push_back(vec2(std::cos(al), std::sin(al)));
  }
  MixtureModel p = MixtureModel::validated(Family::gaussian, 2, std::move(pc));
  MixtureModel q = MixtureModel::validated(Family::gaussian, 2, std::move(qc));
  DirectionSet s = DirectionSet::validated(2, std::move(lines));
  return Counterexample{std::move(p), std::move(q), std::move(s)};
}

CounterexampleRecord verify_counterexample(const MixtureModel& p,
                                           const MixtureModel& q,
                                           const DirectionSet& s,
                                           const CompareTolerances& tol) {
  CounterexampleRecord rec;
  const int D = lifted_dim(s.dim);
  rec.certification = is_strong_smu(s, kDefaultTolRank,
                                    StrongCheckMode::exact());
  // Below D directions the strong property holds vacuously: there is no
  // D-element subset that could fail.
  rec.vacuously_strong = s.size() < D;
  rec.strong_ok =
      rec.certification.is_strong == Certainty::yes || rec.vacuously_strong;
  rec.projections_all_equal = true;
  rec.projection_distances.reserve(s.vectors.size());
  for (const Eigen::VectorXd& x : s.vectors) {
    const Comparison1D c =
        compare_1d(project_mixture(p, x), project_mixture(q, x), tol.tol_param,
                   tol.tol_merge);
    rec.projection_distances.push_back(c.distance);
    if (!c.equal) rec.projections_all_equal = false;
  }
  rec.canonically_distinct = !compare_canonical(p, q, tol);
  rec.pass =
      rec.strong_ok && rec.projections_all_equal && rec.canonically_distinct;
  return rec;
}

}  // namespace cwmix
