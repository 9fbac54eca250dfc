// cwmix command line: certify direction sets and decide equality of
// Gaussian / Student-t mixtures from their 1D projections.
//
// Exit codes: 0 success (or verdict `equal`), 1 usage or validation error,
// 2 verdict `distinct`, 3 certification failed, 4 inconclusive.
#include <CLI11.hpp>

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "cwmix/compare.hpp"
#include "cwmix/counterexamples.hpp"
#include "cwmix/json_io.hpp"
#include "cwmix/model.hpp"
#include "cwmix/projection.hpp"
#include "cwmix/smu.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDistinct = 2;
constexpr int kExitNotCertified = 3;
constexpr int kExitInconclusive = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cwmix::InvalidArgumentError("cannot open file: " + path);
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw cwmix::InvalidArgumentError("cannot write file: " + path);
  }
  out << content;
  if (!out) {
    throw cwmix::InvalidArgumentError("failed writing file: " + path);
  }
}

Eigen::VectorXd parse_direction_arg(const std::string& text) {
  std::vector<double> entries;
  std::string token;
  std::istringstream is(text);
  while (std::getline(is, token, ',')) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(token, &pos);
    } catch (const std::exception&) {
      throw cwmix::InvalidArgumentError("cannot parse direction entry: " + token);
    }
    while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) {
      ++pos;
    }
    if (pos != token.size()) {
      throw cwmix::InvalidArgumentError("cannot parse direction entry: " + token);
    }
    entries.push_back(v);
  }
  if (entries.empty()) {
    throw cwmix::InvalidArgumentError("direction must list at least one entry");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = entries[i];
  }
  return v;
}

// Seed resolution: an explicit --seed wins; otherwise the CWMIX_SEED
// environment variable, when set, must parse as a nonnegative integer.
std::uint64_t resolve_seed(const CLI::Option* seed_opt, std::uint64_t flag_value) {
  if (seed_opt->count() > 0) return flag_value;
  const char* env = std::getenv("CWMIX_SEED");
  if (env == nullptr) return flag_value;
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(env, &pos);
    if (pos != std::string(env).size()) throw std::invalid_argument(env);
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw cwmix::InvalidArgumentError(
        std::string("CWMIX_SEED is not a nonnegative integer: ") + env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixture equality certification via 1D projections"};
  app.require_subcommand(1);

  // required-lines
  auto* cmd_required = app.add_subcommand(
      "required-lines", "Print how many certified lines decide equality");
  long long rl_dim = 0, rl_m = 0;
  cmd_required->add_option("--dim", rl_dim, "Ambient dimension d")->required();
  cmd_required->add_option("--mixture-size", rl_m, "Component count m")
      ->required();

  // gen-directions
  auto* cmd_gen = app.add_subcommand(
      "gen-directions", "Draw and certify a spherical direction set");
  long long gd_dim = 0, gd_m = 0, gd_count = 0;
  std::uint64_t gd_seed = 0;
  int gd_retries = 8;
  std::string gd_out;
  cmd_gen->add_option("--dim", gd_dim, "Ambient dimension d")->required();
  auto* gd_m_opt =
      cmd_gen->add_option("--mixture-size", gd_m, "Derive count for this m");
  auto* gd_count_opt =
      cmd_gen->add_option("--count", gd_count, "Explicit direction count");
  auto* gd_seed_opt = cmd_gen->add_option("--seed", gd_seed, "RNG seed");
  cmd_gen->add_option("--max-retries", gd_retries, "Redraw attempts");
  cmd_gen->add_option("--out", gd_out, "Output file")->required();
  gd_m_opt->excludes(gd_count_opt);
  gd_count_opt->excludes(gd_m_opt);

  // check-directions
  auto* cmd_check = app.add_subcommand(
      "check-directions", "Certify an existing direction set");
  std::string cd_file, cd_mode = "exact";
  long long cd_samples = cwmix::kDefaultRandomizedSamples;
  std::uint64_t cd_seed = 0;
  cmd_check->add_option("file", cd_file, "Directions JSON file")->required();
  cmd_check->add_option("--mode", cd_mode, "exact or randomized")
      ->check(CLI::IsMember({"exact", "randomized"}));
  cmd_check->add_option("--samples", cd_samples, "Randomized subset count");
  auto* cd_seed_opt = cmd_check->add_option("--seed", cd_seed, "RNG seed");

  // project
  auto* cmd_project = app.add_subcommand(
      "project", "Project a mixture onto one line");
  std::string pj_mixture, pj_direction;
  cmd_project->add_option("--mixture", pj_mixture, "Mixture JSON file")
      ->required();
  cmd_project
      ->add_option("--direction", pj_direction,
                   "Comma-separated direction entries")
      ->required();

  // compare
  auto* cmd_compare = app.add_subcommand(
      "compare", "Compare two mixtures on a direction set");
  std::string cp_p, cp_q, cp_dirs;
  double cp_tol = cwmix::CompareTolerances{}.tol_param;
  double cp_tol_merge = cwmix::CompareTolerances{}.tol_merge;
  cmd_compare->add_option("--p", cp_p, "First mixture JSON file")->required();
  cmd_compare->add_option("--q", cp_q, "Second mixture JSON file")->required();
  cmd_compare->add_option("--directions", cp_dirs, "Directions JSON file")
      ->required();
  cmd_compare->add_option("--tol", cp_tol, "Parameter tolerance");
  cmd_compare->add_option("--tol-merge", cp_tol_merge, "Merge tolerance");

  // counterexample
  auto* cmd_counter = app.add_subcommand(
      "counterexample", "Emit a built-in counterexample and verify it");
  std::string ce_which, ce_prefix;
  int ce_m = 0;
  cmd_counter->add_option("--which", ce_which, "m2 or polygon")
      ->required()
      ->check(CLI::IsMember({"m2", "polygon"}));
  auto* ce_m_opt =
      cmd_counter->add_option("--m", ce_m, "Component count (polygon)");
  cmd_counter->add_option("--out-prefix", ce_prefix, "Output path prefix")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_required->parsed()) {
      std::cout << cwmix::required_lines(rl_dim, rl_m) << '\n';
      return kExitOk;
    }

    if (cmd_gen->parsed()) {
      if (gd_m_opt->count() == 0 && gd_count_opt->count() == 0) {
        throw cwmix::InvalidArgumentError(
            "pass exactly one of --mixture-size or --count");
      }
      const long long count =
          gd_count_opt->count() > 0 ? gd_count
                                    : cwmix::required_lines(gd_dim, gd_m);
      if (gd_dim < 1 || gd_dim > 1000 || count > 1000000) {
        throw cwmix::InvalidArgumentError("dimension or count out of range");
      }
      const std::uint64_t seed = resolve_seed(gd_seed_opt, gd_seed);
      cwmix::SmuReport cert;
      const cwmix::DirectionSet s = cwmix::gen_strong_smu(
          static_cast<int>(gd_dim), static_cast<int>(count), seed, gd_retries,
          &cert);
      write_file(gd_out, cwmix::emit_directions_json(s, cert));
      return kExitOk;
    }

    if (cmd_check->parsed()) {
      const cwmix::DirectionsFile df =
          cwmix::parse_directions_json(read_file(cd_file));
      const std::uint64_t seed = resolve_seed(cd_seed_opt, cd_seed);
      const cwmix::StrongCheckMode mode =
          cd_mode == "exact"
              ? cwmix::StrongCheckMode::exact()
              : cwmix::StrongCheckMode::randomized(cd_samples, seed);
      const cwmix::SmuReport rep =
          cwmix::is_strong_smu(df.set, cwmix::kDefaultTolRank, mode);
      std::cout << cwmix::emit_smu_report_json(rep);
      switch (rep.is_strong) {
        case cwmix::Certainty::yes:
          return kExitOk;
        case cwmix::Certainty::no:
          return kExitNotCertified;
        case cwmix::Certainty::unknown:
          return kExitInconclusive;
      }
      return kExitInconclusive;
    }

    if (cmd_project->parsed()) {
      const cwmix::MixtureModel model =
          cwmix::parse_mixture_json(read_file(pj_mixture));
      const Eigen::VectorXd x = parse_direction_arg(pj_direction);
      std::cout << cwmix::emit_mixture1d_json(cwmix::project_mixture(model, x));
      return kExitOk;
    }

    if (cmd_compare->parsed()) {
      const cwmix::MixtureModel p = cwmix::parse_mixture_json(read_file(cp_p));
      const cwmix::MixtureModel q = cwmix::parse_mixture_json(read_file(cp_q));
      const cwmix::DirectionsFile df =
          cwmix::parse_directions_json(read_file(cp_dirs));
      const cwmix::CompareTolerances tol{cp_tol, cp_tol_merge};
      const cwmix::ComparisonVerdict v =
          cwmix::compare_via_projections(p, q, df.set, tol);
      std::cout << cwmix::emit_verdict_json(v);
      return v.equal ? kExitOk : kExitDistinct;
    }

    if (cmd_counter->parsed()) {
      cwmix::Counterexample ce =
          ce_which == "m2"
              ? cwmix::build_m2_example()
              : cwmix::build_polygon_example(
                    ce_m_opt->count() > 0 ? ce_m : 3);
      const cwmix::CounterexampleRecord rec = cwmix::verify_counterexample(ce);
      write_file(ce_prefix + "P.json", cwmix::emit_mixture_json(ce.p));
      write_file(ce_prefix + "Q.json", cwmix::emit_mixture_json(ce.q));
      write_file(ce_prefix + "S.json",
                 cwmix::emit_directions_json(ce.directions, std::nullopt));
      std::cout << cwmix::emit_counterexample_record_json(rec);
      return rec.pass ? kExitOk : kExitNotCertified;
    }
  } catch (const cwmix::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
