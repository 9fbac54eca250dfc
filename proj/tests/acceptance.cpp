// Acceptance gate for the projection-certification library: ten end-to-end
// checks with pinned tolerances and runtime budgets, one pass/fail line each.
// Exits nonzero if any criterion fails.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cwmix/compare.hpp"
#include "cwmix/counterexamples.hpp"
#include "cwmix/identifiability.hpp"
#include "cwmix/json_io.hpp"
#include "cwmix/model.hpp"
#include "cwmix/projection.hpp"
#include "cwmix/smu.hpp"
#include "oracles.hpp"

using namespace cwmix;

namespace {

// ---------------------------------------------------------------------------
// Small utilities shared by the criteria.

std::string g_tmp_dir;

std::string tmp_path(const std::string& name) { return g_tmp_dir + "/" + name; }

struct CliResult {
  int exit_code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(CWMIX_CLI_PATH) + " " + args + " 2>/dev/null";
  CliResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void put_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

// Re-expression of the same distribution: split the heaviest component into
// two identical halves, then permute.
MixtureModel reexpress(const MixtureModel& m, std::mt19937_64& rng) {
  std::vector<MixtureComponent> cs(m.components().begin(),
                                   m.components().end());
  int heaviest = 0;
  for (int i = 1; i < static_cast<int>(cs.size()); ++i) {
    if (cs[i].weight > cs[heaviest].weight) heaviest = i;
  }
  MixtureComponent half = cs[heaviest];
  half.weight /= 2;
  cs[heaviest].weight /= 2;
  cs.push_back(half);
  for (int i = static_cast<int>(cs.size()) - 1; i > 0; --i) {
    std::swap(cs[i], cs[oracles::uniform_int(rng, 0, i)]);
  }
  return MixtureModel::validated(m.family(), m.dim(), std::move(cs));
}

MixtureModel perturb_first_mean(const MixtureModel& m) {
  std::vector<MixtureComponent> cs(m.components().begin(),
                                   m.components().end());
  cs[0].mean[0] += 0.1;
  return MixtureModel::validated(m.family(), m.dim(), std::move(cs));
}

bool same_points(std::vector<Eigen::VectorXd> a,
                 std::vector<Eigen::VectorXd> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool found = false;
    for (auto it = b.begin(); it != b.end(); ++it) {
      if ((x - *it).lpNorm<Eigen::Infinity>() <= tol) {
        b.erase(it);
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool fields_identical(const MixtureModel& a, const MixtureModel& b) {
  if (a.family() != b.family() || a.dim() != b.dim() || a.size() != b.size()) {
    return false;
  }
  for (int i = 0; i < a.size(); ++i) {
    const MixtureComponent& ca = a.components()[i];
    const MixtureComponent& cb = b.components()[i];
    if (ca.weight != cb.weight || ca.dof != cb.dof) return false;
    if (!(ca.mean.array() == cb.mean.array()).all()) return false;
    if (!(ca.cov.entries().array() == cb.cov.entries().array()).all()) {
      return false;
    }
  }
  return true;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

// ---------------------------------------------------------------------------
// Criterion bodies. Each returns true on success and appends failure detail.

// 1: the closed-form line counts, exact integers.
bool criterion_line_counts(std::string& detail) {
  const std::array<std::array<long long, 3>, 4> cases = {{
      {2, 1, 3}, {2, 2, 7}, {3, 2, 16}, {4, 2, 28}}};
  for (const auto& c : cases) {
    const long long got = required_lines(c[0], c[1]);
    if (got != c[2]) {
      detail = "required_lines(" + std::to_string(c[0]) + "," +
               std::to_string(c[1]) + ") = " + std::to_string(got) +
               ", want " + std::to_string(c[2]);
      return false;
    }
  }
  return true;
}

// 2: rank-based span test vs exact integer elimination, 200 random sets.
bool criterion_span_oracle(std::string& detail) {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = oracles::uniform_int(rng, 3, 6);
    std::vector<std::array<long long, 2>> ints;
    std::vector<Eigen::VectorXd> vecs;
    for (int i = 0; i < n; ++i) {
      long long a = 0, b = 0;
      while (a == 0 && b == 0) {
        a = oracles::uniform_int(rng, -3, 3);
        b = oracles::uniform_int(rng, -3, 3);
      }
      ints.push_back({a, b});
      Eigen::VectorXd v(2);
      v << static_cast<double>(a), static_cast<double>(b);
      vecs.push_back(v);
    }
    const bool want = oracles::smu_bruteforce_2d(ints);
    const bool got = is_smu(DirectionSet::validated(2, vecs)).is_smu;
    if (got != want) {
      detail = "trial " + std::to_string(trial) + ": is_smu " +
               (got ? "true" : "false") + ", oracle " +
               (want ? "true" : "false");
      return false;
    }
  }
  return true;
}

// 3: 50 random spherical draws per dimension certify strong, exact mode.
bool criterion_random_strong(std::string& detail) {
  for (int d : {2, 3}) {
    const int count = static_cast<int>(required_lines(d, 2));
    for (int i = 0; i < 50; ++i) {
      const std::uint64_t seed = 3000 + 100 * d + i;
      const DirectionSet s = sample_sphere_directions(d, count, seed);
      const SmuReport r = is_strong_smu(s);
      if (r.is_strong != Certainty::yes) {
        detail = "d=" + std::to_string(d) + " seed " + std::to_string(seed) +
                 " did not certify";
        return false;
      }
    }
  }
  return true;
}

// 4: the covariance-swap pair's sixteen quadratic forms, per-line equality
// within 1e-9, global distinctness.
bool criterion_m2_example(std::string& detail) {
  const Counterexample ce = build_m2_example();
  Eigen::VectorXd dir(2);
  const auto forms_match = [&](double x, double y,
                               std::array<double, 4> want) {
    dir << x, y;
    const double vals[4] = {ce.p.components()[0].cov.quadratic_form(dir),
                            ce.p.components()[1].cov.quadratic_form(dir),
                            ce.q.components()[0].cov.quadratic_form(dir),
                            ce.q.components()[1].cov.quadratic_form(dir)};
    for (int i = 0; i < 4; ++i) {
      if (vals[i] != want[i]) return false;
    }
    return true;
  };
  if (!forms_match(1, 0, {2, 1, 2, 1}) || !forms_match(0, 1, {1, 2, 1, 2}) ||
      !forms_match(1, 1, {3, 5, 5, 3}) || !forms_match(1, -1, {3, 1, 1, 3})) {
    detail = "a quadratic form deviates from its exact value";
    return false;
  }
  for (const auto& x : ce.directions.vectors) {
    const Comparison1D c =
        compare_1d(project_mixture(ce.p, x), project_mixture(ce.q, x), 1e-9);
    if (!c.equal) {
      detail = "projections differ on a design line (distance " +
               fmt(c.distance) + ")";
      return false;
    }
  }
  if (compare_canonical(ce.p, ce.q)) {
    detail = "canonical comparison failed to separate the pair";
    return false;
  }
  return true;
}

// 5: every certified 7-line set separates the pair, with a witness that
// replays, for 100 seeds.
bool criterion_m2_separated(std::string& detail) {
  const Counterexample ce = build_m2_example();
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t seed = 5000 + i;
    const DirectionSet s = gen_strong_smu(2, 7, seed);
    const ComparisonVerdict v = compare_via_projections(ce.p, ce.q, s);
    if (v.equal || !v.witness_direction.has_value()) {
      detail = "seed " + std::to_string(seed) + ": no separation";
      return false;
    }
    const ComparisonVerdict again = compare_via_projections(ce.p, ce.q, s);
    if (!again.witness_direction.has_value() ||
        !(v.witness_direction->array() == again.witness_direction->array())
             .all()) {
      detail = "seed " + std::to_string(seed) + ": witness not reproducible";
      return false;
    }
    const Comparison1D replay =
        compare_1d(project_mixture(ce.p, *v.witness_direction),
                   project_mixture(ce.q, *v.witness_direction));
    if (replay.equal || !(replay.distance > 1e-9)) {
      detail = "seed " + std::to_string(seed) + ": witness does not replay";
      return false;
    }
  }
  return true;
}

// 6: the polygon family verifies end to end, including the reflection
// symmetry that powers it.
bool criterion_polygon(std::string& detail) {
  for (int m = 2; m <= 6; ++m) {
    const Counterexample ce = build_polygon_example(m);
    const CounterexampleRecord rec = verify_counterexample(ce);
    if (!rec.pass || !rec.projections_all_equal || !rec.canonically_distinct) {
      detail = "m=" + std::to_string(m) + " failed verification";
      return false;
    }
    for (double dist : rec.projection_distances) {
      if (!(dist <= 1e-9)) {
        detail = "m=" + std::to_string(m) + " projection distance " +
                 fmt(dist);
        return false;
      }
    }
    std::vector<Eigen::VectorXd> pm, qm;
    for (const auto& c : ce.p.components()) pm.push_back(c.mean);
    for (const auto& c : ce.q.components()) qm.push_back(c.mean);
    for (const auto& x : ce.directions.vectors) {
      const Eigen::VectorXd u = line_unit_vector(x);
      std::vector<Eigen::VectorXd> reflected;
      for (const auto& v : pm) reflected.push_back(2.0 * v.dot(u) * u - v);
      if (!same_points(reflected, qm, 1e-12)) {
        detail = "m=" + std::to_string(m) + " reflection symmetry broken";
        return false;
      }
    }
    if (!(ce.directions.size() < required_lines(2, m))) {
      detail = "m=" + std::to_string(m) + " uses too many lines";
      return false;
    }
  }
  return true;
}

// 7: projection verdicts vs the canonical oracle, 200 trials per family,
// equal re-expressions and perturbed unequal pairs.
bool criterion_oracle_agreement(std::string& detail) {
  const int dims[6] = {2, 2, 2, 3, 3, 3};
  const int sizes[6] = {1, 2, 3, 1, 2, 3};
  for (Family family : {Family::gaussian, Family::student_t}) {
    const std::uint64_t base = family == Family::gaussian ? 70000 : 80000;
    std::mt19937_64 rng(base);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = dims[trial % 6];
      const int m = sizes[trial % 6];
      const MixtureModel p = oracles::random_mixture(rng, family, d, m);
      const MixtureModel q_eq = reexpress(p, rng);
      const MixtureModel q_ne = perturb_first_mean(p);
      const DirectionSet s = gen_strong_smu(
          d, static_cast<int>(required_lines(d, m)), base + trial);

      const bool proj_eq = compare_via_projections(p, q_eq, s).equal;
      const bool canon_eq = compare_canonical(p, q_eq);
      const bool proj_ne = compare_via_projections(p, q_ne, s).equal;
      const bool canon_ne = compare_canonical(p, q_ne);
      if (proj_eq != canon_eq || !proj_eq || proj_ne != canon_ne || proj_ne) {
        detail = std::string(family_name(family)) + " trial " +
                 std::to_string(trial) + " (d=" + std::to_string(d) +
                 ", m=" + std::to_string(m) + "): verdicts " +
                 (proj_eq ? "T" : "F") + (canon_eq ? "T" : "F") +
                 (proj_ne ? "T" : "F") + (canon_ne ? "T" : "F");
        return false;
      }
    }
  }
  return true;
}

// 8: projected density vs marginal quadrature (1e-6) and projected
// characteristic function vs the native one (1e-12), 20 random mixtures.
bool criterion_projection_consistency(std::string& detail) {
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = oracles::uniform_int(rng, 1, 3);
    const MixtureModel model =
        oracles::random_mixture(rng, Family::gaussian, 2, m);
    for (int k = 0; k < 3; ++k) {
      Eigen::VectorXd x(2);
      x << oracles::uniform(rng, -1, 1), oracles::uniform(rng, -1, 1);
      if (x.norm() < 1e-6) x << 1, 0;
      const Eigen::VectorXd u = line_unit_vector(x);
      Eigen::VectorXd v(2);
      v << -u[1], u[0];
      const Mixture1D proj = project_mixture(model, x);
      for (double t : {-3.0, -1.0, 0.0, 0.5, 2.0}) {
        const double marginal = oracles::integrate_real_line(
            [&](double s) { return density_eval(model, t * u + s * v); },
            1e-9);
        const double direct = density_eval(proj, t);
        if (!(std::abs(direct - marginal) <= 1e-6)) {
          detail = "trial " + std::to_string(trial) + ": density gap " +
                   fmt(std::abs(direct - marginal));
          return false;
        }
      }
      for (double s : {-2.0, -0.5, 0.3, 1.1, 2.7}) {
        const std::complex<double> native = char_fn_eval(model, s * u);
        std::complex<double> projected(0, 0);
        for (const auto& c : proj.components) {
          projected += c.weight *
                       std::exp(std::complex<double>(
                           -0.5 * c.scale * c.scale * s * s, c.mean * s));
        }
        if (!(std::abs(native - projected) <= 1e-12)) {
          detail = "trial " + std::to_string(trial) +
                   ": characteristic function gap " +
                   fmt(std::abs(native - projected));
          return false;
        }
      }
    }
  }
  return true;
}

// 9: closed-form inner products vs quadrature (1e-10); independence holds
// for separated families and the dof trio; duplicates always flip it.
bool criterion_identifiability(std::string& detail) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const Component1D a{Family::gaussian, 1.0, oracles::uniform(rng, -4, 4),
                        oracles::uniform(rng, 0.3, 3.0), 0};
    const Component1D b{Family::gaussian, 1.0, oracles::uniform(rng, -4, 4),
                        oracles::uniform(rng, 0.3, 3.0), 0};
    const double want = oracles::integrate_real_line(
        [&](double x) { return density_eval(a, x) * density_eval(b, x); },
        1e-13);
    const double got = gauss_l2_inner(a, b);
    if (!(std::abs(got - want) <= 1e-10)) {
      detail = "inner product off by " + fmt(std::abs(got - want));
      return false;
    }
  }
  for (int n = 2; n <= 8; ++n) {
    std::vector<Component1D> cs;
    for (int i = 0; i < n; ++i) {
      cs.push_back(Component1D{Family::gaussian, 1.0, 4.0 * i, 1.0, 0});
    }
    if (!independence_test(cs).independent) {
      detail = "separated family of size " + std::to_string(n) +
               " reported dependent";
      return false;
    }
    cs.push_back(cs.front());
    if (independence_test(cs).independent) {
      detail = "duplicate insertion at size " + std::to_string(n) +
               " did not flip the verdict";
      return false;
    }
  }
  std::vector<Component1D> trio;
  for (int dof : {1, 3, 5}) {
    trio.push_back(Component1D{Family::student_t, 1.0, 0.0, 1.0, dof});
  }
  if (!independence_test(trio).independent) {
    detail = "t dof trio reported dependent";
    return false;
  }
  trio.push_back(trio.front());
  if (independence_test(trio).independent) {
    detail = "duplicated t component did not flip the verdict";
    return false;
  }
  return true;
}

// 10: every CLI command byte-stable across repeated runs; emit/parse/emit
// byte-exact on 100 random models.
bool criterion_determinism(std::string& detail) {
  const Counterexample ce = build_m2_example();
  const std::string pfile = tmp_path("acc_p.json");
  const std::string qfile = tmp_path("acc_q.json");
  put_file(pfile, emit_mixture_json(ce.p));
  put_file(qfile, emit_mixture_json(ce.q));
  const std::string gen_out = tmp_path("acc_dirs.json");
  const std::string ce_prefix = tmp_path("acc_ce_");

  struct Step {
    std::string name;
    std::string args;
    std::vector<std::string> files;
  };
  const std::vector<Step> steps = {
      {"required-lines", "required-lines --dim 4 --mixture-size 2", {}},
      {"gen-directions",
       "gen-directions --dim 2 --mixture-size 2 --seed 33 --out " + gen_out,
       {gen_out}},
      {"check-directions", "check-directions " + gen_out, {}},
      {"project", "project --mixture " + pfile + " --direction 1,2", {}},
      {"compare",
       "compare --p " + pfile + " --q " + qfile + " --directions " + gen_out,
       {}},
      {"counterexample",
       "counterexample --which polygon --m 5 --out-prefix " + ce_prefix,
       {ce_prefix + "P.json", ce_prefix + "Q.json", ce_prefix + "S.json"}}};

  for (const Step& step : steps) {
    const CliResult first = run_cli(step.args);
    std::vector<std::string> file_bytes;
    for (const auto& f : step.files) file_bytes.push_back(slurp(f));
    const CliResult second = run_cli(step.args);
    if (first.exit_code != second.exit_code || first.out != second.out) {
      detail = step.name + ": stdout or exit code not stable";
      return false;
    }
    for (std::size_t i = 0; i < step.files.size(); ++i) {
      if (slurp(step.files[i]) != file_bytes[i]) {
        detail = step.name + ": output file not stable";
        return false;
      }
    }
  }

  std::mt19937_64 rng(1010);
  for (int trial = 0; trial < 100; ++trial) {
    const Family family =
        trial % 2 == 0 ? Family::gaussian : Family::student_t;
    const int d = oracles::uniform_int(rng, 1, 4);
    const int m = oracles::uniform_int(rng, 1, 4);
    const MixtureModel model = oracles::random_mixture(rng, family, d, m);
    const std::string doc = emit_mixture_json(model);
    const MixtureModel back = parse_mixture_json(doc);
    if (!fields_identical(model, back)) {
      detail = "round-trip changed fields on trial " + std::to_string(trial);
      return false;
    }
    if (emit_mixture_json(back) != doc) {
      detail = "round-trip changed bytes on trial " + std::to_string(trial);
      return false;
    }
  }
  return true;
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;  // 0 = no pinned budget
  std::function<bool(std::string&)> fn;
};

}  // namespace

int main() {
  {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "cwmix_acc_XXXXXX").string();
    char* got = mkdtemp(tmpl.data());
    if (got == nullptr) {
      std::fprintf(stderr, "cannot create scratch directory\n");
      return 1;
    }
    g_tmp_dir = got;
  }

  const std::vector<Criterion> criteria = {
      {1, "required line counts match the closed form", 0.001,
       criterion_line_counts},
      {2, "span test agrees with exact integer elimination on 200 sets", 5.0,
       criterion_span_oracle},
      {3, "random spherical sets of the required size certify strong", 60.0,
       criterion_random_strong},
      {4, "covariance-swap pair: equal on its 4 lines, distinct overall", 1.0,
       criterion_m2_example},
      {5, "certified 7-line sets separate the covariance-swap pair, 100 seeds",
       5.0, criterion_m2_separated},
      {6, "polygon pairs verify, including reflection symmetry", 5.0,
       criterion_polygon},
      {7, "projection verdicts agree with the canonical oracle, 400 trials",
       120.0, criterion_oracle_agreement},
      {8, "projected densities and characteristic functions are consistent",
       0.0, criterion_projection_consistency},
      {9, "inner products, independence, and duplicate detection", 30.0,
       criterion_identifiability},
      {10, "CLI byte-stability and exact JSON round-trips", 0.0,
       criterion_determinism}};

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && c.budget_seconds > 0 && elapsed > c.budget_seconds) {
      ok = false;
      detail = "runtime " + fmt(elapsed) + "s exceeds budget " +
               fmt(c.budget_seconds) + "s";
    }
    if (ok) {
      std::printf("[PASS] criterion %d: %s (%.3fs)\n", c.id, c.name, elapsed);
    } else {
      std::printf("[FAIL] criterion %d: %s (%.3fs)%s%s\n", c.id, c.name,
                  elapsed, detail.empty() ? "" : " - ", detail.c_str());
      ++failures;
    }
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
