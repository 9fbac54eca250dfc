#include "cwmix/json_io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace cwmix {

namespace {

using nlohmann::json;

[[noreturn]] void bad_input(const std::string& msg) {
  throw InvalidArgumentError("invalid input document: " + msg);
}

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) bad_input("malformed JSON");
  return doc;
}

double get_number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    bad_input(std::string("missing or non-numeric \"") + key + "\"");
  }
  return j[key].get<double>();
}

long long get_integer(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    bad_input(std::string("missing or non-integer \"") + key + "\"");
  }
  return j[key].get<long long>();
}

Eigen::VectorXd get_vector(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad_input(std::string(what) + " must be a nonempty array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) bad_input(std::string(what) + " entries must be numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd get_matrix(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) bad_input(std::string(what) + " must be a nonempty array of rows");
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array()) bad_input(std::string(what) + " rows must be arrays");
    if (r == 0) {
      cols = j[r].size();
      if (cols == 0) bad_input(std::string(what) + " rows must be nonempty");
      m.resize(rows, cols);
    } else if (j[r].size() != cols) {
      bad_input(std::string(what) + " rows have inconsistent lengths");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[r][c].is_number()) bad_input(std::string(what) + " entries must be numbers");
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          j[r][c].get<double>();
    }
  }
  return m;
}

Family parse_family(const json& j) {
  if (!j.contains("family") || !j["family"].is_string()) {
    bad_input("missing or non-string \"family\"");
  }
  const std::string f = j["family"].get<std::string>();
  if (f == "gaussian") return Family::gaussian;
  if (f == "student_t") return Family::student_t;
  bad_input("unknown family \"" + f + "\"");
}

std::string escape_string(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

// Distances may be infinite (component count or dof mismatch). JSON has no
// literal for that, so non-finite values are encoded as strings.
std::string format_distance(double x) {
  if (std::isfinite(x)) return format_double(x);
  if (std::isnan(x)) return "\"nan\"";
  return x > 0 ? "\"inf\"" : "\"-inf\"";
}

void emit_vector(std::ostringstream& os, const Eigen::VectorXd& v) {
  os << '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) os << ", ";
    os << format_double(v[i]);
  }
  os << ']';
}

void emit_matrix(std::ostringstream& os, const Eigen::MatrixXd& m,
                 const std::string& indent) {
  os << "[\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    os << indent << "  ";
    emit_vector(os, m.row(r).transpose());
    os << (r + 1 < m.rows() ? ",\n" : "\n");
  }
  os << indent << ']';
}

void emit_smu_report_body(std::ostringstream& os, const SmuReport& r,
                          const std::string& indent) {
  const char* strong = r.is_strong == Certainty::yes
                           ? "yes"
                           : (r.is_strong == Certainty::no ? "no" : "unknown");
  os << "{\n";
  os << indent << "  \"is_smu\": " << (r.is_smu ? "true" : "false") << ",\n";
  os << indent << "  \"is_strong\": \"" << strong << "\",\n";
  os << indent << "  \"mode\": \""
     << (r.mode == SmuReport::Mode::exact ? "exact" : "randomized") << "\",\n";
  os << indent << "  \"min_singular_value\": "
     << format_double(r.min_singular_value) << ",\n";
  os << indent << "  \"subsets_checked\": " << r.subsets_checked;
  if (r.witness_bad_subset.has_value()) {
    os << ",\n" << indent << "  \"witness_bad_subset\": [";
    const auto& w = *r.witness_bad_subset;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (i > 0) os << ", ";
      os << w[i];
    }
    os << ']';
  }
  if (!r.confidence_note.empty()) {
    os << ",\n" << indent << "  \"confidence_note\": \""
       << escape_string(r.confidence_note) << '"';
  }
  os << '\n' << indent << '}';
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

MixtureModel parse_mixture_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) bad_input("top level must be an object");
  const Family family = parse_family(doc);
  const long long dim = get_integer(doc, "dim");
  if (dim < 1) bad_input("\"dim\" must be at least 1");
  if (!doc.contains("components") || !doc["components"].is_array()) {
    bad_input("missing \"components\" array");
  }
  std::vector<RawComponent> raw;
  for (const json& jc : doc["components"]) {
    if (!jc.is_object()) bad_input("components must be objects");
    RawComponent rc;
    rc.weight = get_number(jc, "weight");
    if (!jc.contains("mean")) bad_input("component missing \"mean\"");
    rc.mean = get_vector(jc["mean"], "\"mean\"");
    if (!jc.contains("cov")) bad_input("component missing \"cov\"");
    rc.cov = get_matrix(jc["cov"], "\"cov\"");
    if (family == Family::student_t) {
      rc.dof = static_cast<int>(get_integer(jc, "dof"));
    } else if (jc.contains("dof")) {
      bad_input("\"dof\" is only valid for student_t components");
    }
    raw.push_back(std::move(rc));
  }
  return validate_mixture(family, static_cast<int>(dim), raw);
}

std::string emit_mixture_json(const MixtureModel& model) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"family\": \"" << family_name(model.family()) << "\",\n";
  os << "  \"dim\": " << model.dim() << ",\n";
  os << "  \"components\": [\n";
  const auto& comps = model.components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const MixtureComponent& c = comps[i];
    os << "    {\n";
    os << "      \"weight\": " << format_double(c.weight) << ",\n";
    os << "      \"mean\": ";
    emit_vector(os, c.mean);
    os << ",\n";
    os << "      \"cov\": ";
    emit_matrix(os, c.cov.entries(), "      ");
    if (model.family() == Family::student_t) {
      os << ",\n      \"dof\": " << c.dof;
    }
    os << "\n    }" << (i + 1 < comps.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

DirectionsFile parse_directions_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) bad_input("top level must be an object");
  const long long dim = get_integer(doc, "dim");
  if (dim < 1) bad_input("\"dim\" must be at least 1");
  if (!doc.contains("vectors") || !doc["vectors"].is_array()) {
    bad_input("missing \"vectors\" array");
  }
  std::vector<Eigen::VectorXd> vecs;
  for (const json& jv : doc["vectors"]) {
    vecs.push_back(get_vector(jv, "direction"));
  }
  if (vecs.empty()) bad_input("\"vectors\" must be a nonempty array");
  DirectionsFile out{DirectionSet::validated(static_cast<int>(dim),
                                             std::move(vecs)),
                     std::nullopt};
  if (doc.contains("certification")) {
    const json& jc = doc["certification"];
    if (!jc.is_object()) bad_input("\"certification\" must be an object");
    SmuReport r;
    if (!jc.contains("is_smu") || !jc["is_smu"].is_boolean()) {
      bad_input("certification missing \"is_smu\"");
    }
    r.is_smu = jc["is_smu"].get<bool>();
    if (!jc.contains("is_strong") || !jc["is_strong"].is_string()) {
      bad_input("certification missing \"is_strong\"");
    }
    const std::string strong = jc["is_strong"].get<std::string>();
    if (strong == "yes") {
      r.is_strong = Certainty::yes;
    } else if (strong == "no") {
      r.is_strong = Certainty::no;
    } else if (strong == "unknown") {
      r.is_strong = Certainty::unknown;
    } else {
      bad_input("certification \"is_strong\" must be yes/no/unknown");
    }
    if (!jc.contains("mode") || !jc["mode"].is_string()) {
      bad_input("certification missing \"mode\"");
    }
    const std::string mode = jc["mode"].get<std::string>();
    if (mode == "exact") {
      r.mode = SmuReport::Mode::exact;
    } else if (mode == "randomized") {
      r.mode = SmuReport::Mode::randomized;
    } else {
      bad_input("certification \"mode\" must be exact/randomized");
    }
    r.min_singular_value = get_number(jc, "min_singular_value");
    r.subsets_checked = get_integer(jc, "subsets_checked");
    if (jc.contains("witness_bad_subset")) {
      if (!jc["witness_bad_subset"].is_array()) {
        bad_input("\"witness_bad_subset\" must be an array");
      }
      std::vector<int> w;
      for (const json& ji : jc["witness_bad_subset"]) {
        if (!ji.is_number_integer()) bad_input("witness indices must be integers");
        w.push_back(ji.get<int>());
      }
      r.witness_bad_subset = std::move(w);
    }
    if (jc.contains("confidence_note")) {
      if (!jc["confidence_note"].is_string()) {
        bad_input("\"confidence_note\" must be a string");
      }
      r.confidence_note = jc["confidence_note"].get<std::string>();
    }
    out.certification = std::move(r);
  }
  return out;
}

std::string emit_directions_json(const DirectionSet& s,
                                 const std::optional<SmuReport>& certification) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"dim\": " << s.dim << ",\n";
  os << "  \"vectors\": [\n";
  for (std::size_t i = 0; i < s.vectors.size(); ++i) {
    os << "    ";
    emit_vector(os, s.vectors[i]);
    os << (i + 1 < s.vectors.size() ? ",\n" : "\n");
  }
  os << "  ]";
  if (certification.has_value()) {
    os << ",\n  \"certification\": ";
    emit_smu_report_body(os, *certification, "  ");
  }
  os << "\n}\n";
  return os.str();
}

std::string emit_mixture1d_json(const Mixture1D& mix) {
  std::ostringstream os;
  const Family family =
      mix.components.empty() ? Family::gaussian : mix.components.front().family;
  os << "{\n";
  os << "  \"family\": \"" << family_name(family) << "\",\n";
  os << "  \"components\": [\n";
  for (std::size_t i = 0; i < mix.components.size(); ++i) {
    const Component1D& c = mix.components[i];
    os << "    {\"weight\": " << format_double(c.weight)
       << ", \"mean\": " << format_double(c.mean)
       << ", \"scale\": " << format_double(c.scale);
    if (c.family == Family::student_t) {
      os << ", \"dof\": " << c.dof;
    }
    os << '}' << (i + 1 < mix.components.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string emit_smu_report_json(const SmuReport& report) {
  std::ostringstream os;
  emit_smu_report_body(os, report, "");
  os << '\n';
  return os.str();
}

std::string emit_verdict_json(const ComparisonVerdict& v) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"verdict\": \"" << (v.equal ? "equal" : "distinct") << "\"";
  if (v.witness_direction.has_value()) {
    os << ",\n  \"witness_direction\": ";
    emit_vector(os, *v.witness_direction);
  }
  os << ",\n  \"cardinality_warning\": "
     << (v.cardinality_warning ? "true" : "false");
  os << ",\n  \"mixture_size\": " << v.mixture_size;
  os << ",\n  \"required_lines\": " << v.required_line_count;
  os << ",\n  \"tol_param\": " << format_double(v.tolerances.tol_param);
  os << ",\n  \"tol_merge\": " << format_double(v.tolerances.tol_merge);
  os << ",\n  \"diagnostics\": [\n";
  for (std::size_t i = 0; i < v.diagnostics.size(); ++i) {
    os << "    {\"direction\": ";
    emit_vector(os, v.diagnostics[i].direction);
    os << ", \"distance\": " << format_distance(v.diagnostics[i].distance) << '}'
       << (i + 1 < v.diagnostics.size() ? ",\n" : "\n");
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string emit_counterexample_record_json(const CounterexampleRecord& rec) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"pass\": " << (rec.pass ? "true" : "false") << ",\n";
  os << "  \"strong_ok\": " << (rec.strong_ok ? "true" : "false") << ",\n";
  os << "  \"vacuously_strong\": " << (rec.vacuously_strong ? "true" : "false")
     << ",\n";
  os << "  \"projections_all_equal\": "
     << (rec.projections_all_equal ? "true" : "false") << ",\n";
  os << "  \"canonically_distinct\": "
     << (rec.canonically_distinct ? "true" : "false") << ",\n";
  os << "  \"projection_distances\": [";
  for (std::size_t i = 0; i < rec.projection_distances.size(); ++i) {
    if (i > 0) os << ", ";
    os << format_distance(rec.projection_distances[i]);
  }
  os << "],\n";
  os << "  \"certification\": ";
  emit_smu_report_body(os, rec.certification, "  ");
  os << "\n}\n";
  return os.str();
}

}  // namespace cwmix
