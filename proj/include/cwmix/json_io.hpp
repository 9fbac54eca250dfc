// JSON interchange. Parsing is delegated to a standard JSON parser;
// emission is hand-formatted so that numbers always carry 17 significant
// digits (guaranteeing bit-exact reparse) and the byte layout of every
// document is a pure function of the value being written.
#pragma once

#include <optional>
#include <string>

#include "cwmix/compare.hpp"
#include "cwmix/counterexamples.hpp"
#include "cwmix/model.hpp"
#include "cwmix/smu.hpp"

namespace cwmix {

/// Shortest-fixed-width decimal form of x: %.17g. Reparses to the same bits.
std::string format_double(double x);

/// Mixture document: {"family", "dim", "components": [{"weight", "mean",
/// "cov", "dof"?}]}. dof is required for student_t and rejected otherwise.
MixtureModel parse_mixture_json(const std::string& text);
std::string emit_mixture_json(const MixtureModel& model);

struct DirectionsFile {
  DirectionSet set;
  std::optional<SmuReport> certification;
};

/// Directions document: {"dim", "vectors", "certification"?}.
DirectionsFile parse_directions_json(const std::string& text);
std::string emit_directions_json(const DirectionSet& s,
                                 const std::optional<SmuReport>& certification);

std::string emit_mixture1d_json(const Mixture1D& mix);
std::string emit_smu_report_json(const SmuReport& report);
std::string emit_verdict_json(const ComparisonVerdict& verdict);
std::string emit_counterexample_record_json(const CounterexampleRecord& rec);

}  // namespace cwmix
