#include "json_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace sasaki::cli {

namespace {

const lattice::Integer kSafeInteger = lattice::Integer(1) << 53;

Json verdict_json(const Verdict& v) {
  Json j;
  j["passed"] = v.passed;
  if (!v.passed) j["witness"] = v.witness;
  return j;
}

Json vector_json(const lattice::IntVector& v) {
  Json j = Json::array();
  for (const auto& x : v) j.push_back(integer_to_json(x));
  return j;
}

Json matrix_rows_json(const lattice::IntMatrix& m) {
  Json j = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) j.push_back(vector_json(m.row(r)));
  return j;
}

Json doubles_json(std::span<const double> v) {
  Json j = Json::array();
  for (double x : v) j.push_back(x);
  return j;
}

Json coords_json(const std::optional<std::array<std::size_t, 2>>& c) {
  if (!c) return nullptr;
  return Json::array({(*c)[0] + 1, (*c)[1] + 1});
}

}  // namespace

Json integer_to_json(const lattice::Integer& v) {
  if (abs(v) < kSafeInteger) return v.convert_to<long long>();
  return v.str();
}

lattice::Integer integer_from_json(const Json& j) {
  if (j.is_number_integer()) {
    if (j.is_number_unsigned()) return lattice::Integer(j.get<unsigned long long>());
    return lattice::Integer(j.get<long long>());
  }
  if (j.is_string()) {
    static const std::regex digits("-?[0-9]+");
    const auto s = j.get<std::string>();
    if (!std::regex_match(s, digits)) throw ParseError("not an integer: \"" + s + "\"");
    return lattice::Integer(s);
  }
  throw ParseError("expected an integer, got " + j.dump());
}

ConeSpec cone_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("cone file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "dim" && key != "normals" && key != "name")
      throw ParseError("unknown key \"" + key + "\" in cone file");
  }
  if (!j.contains("dim") || !j.contains("normals"))
    throw ParseError("cone file needs \"dim\" and \"normals\"");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw ParseError("\"dim\" must be a positive integer");
  if (!j["normals"].is_array()) throw ParseError("\"normals\" must be an array");

  std::vector<lattice::IntVector> normals;
  for (const auto& row : j["normals"]) {
    if (!row.is_array()) throw ParseError("each normal must be an array of integers");
    lattice::IntVector v;
    for (const auto& x : row) v.push_back(integer_from_json(x));
    normals.push_back(std::move(v));
  }
  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("\"name\" must be a string");
    name = j["name"].get<std::string>();
  }
  try {
    return ConeSpec(j["dim"].get<std::size_t>(), std::move(normals), std::move(name));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

ConeSpec cone_from_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return cone_from_json(j);
}

ConeSpec read_cone_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return cone_from_text(buf.str());
}

Json cone_to_json(const ConeSpec& cone) {
  Json j;
  j["dim"] = cone.dim();
  Json normals = Json::array();
  for (const auto& n : cone.normals()) normals.push_back(vector_json(n));
  j["normals"] = std::move(normals);
  if (!cone.name().empty()) j["name"] = cone.name();
  return j;
}

Json to_json(const ValidationReport& report) {
  Json j;
  j["primitive"] = verdict_json(report.primitive);
  j["strongly_convex"] = verdict_json(report.strongly_convex);
  j["full_dimensional"] = verdict_json(report.full_dimensional);
  j["minimal"] = verdict_json(report.minimal);
  j["good"] = verdict_json(report.good);
  j["ok"] = report.ok();
  return j;
}

Json to_json(const DelzantData& data) {
  Json j;
  j["beta"] = matrix_rows_json(data.beta);
  Json kernel = Json::array();
  for (std::size_t c = 0; c < data.kernel.cols(); ++c) kernel.push_back(vector_json(data.kernel.column(c)));
  j["kernel_columns"] = std::move(kernel);
  j["k"] = data.k;
  j["torsion_rank"] = data.torsion_rank;
  j["beta_divisors"] = vector_json(data.beta_divisors);
  j["kernel_saturated"] = data.kernel_saturated;
  return j;
}

Json to_json(const DeckGroup& deck) {
  Json j;
  j["order"] = deck.order();
  Json elements = Json::array();
  for (const auto& s : deck.elements) elements.push_back(s.str());
  j["elements"] = std::move(elements);
  return j;
}

Json to_json(const ReebSolution& solution) {
  Json j;
  j["xi"] = doubles_json(solution.xi);
  j["volume"] = solution.volume;
  j["grad_norm"] = solution.grad_norm;
  j["provenance"] = to_string(solution.provenance);
  j["iterations"] = solution.iterations;
  return j;
}

Json to_json(const QuadricSystem& system) {
  Json j;
  j["homogeneous"] = matrix_rows_json(system.homogeneous);
  j["inhomogeneous"] = doubles_json(system.inhomogeneous);
  return j;
}

Json to_json(const TopologyReport& report) {
  Json j;
  j["upstairs"] = report.upstairs;
  j["ellipse_coords"] = coords_json(report.ellipse_coords);
  j["fiber_coords"] = coords_json(report.fiber_coords);
  Json actions = Json::array();
  for (const auto& a : report.actions) {
    Json aj;
    aj["element"] = a.element.str();
    aj["action"] = a.action;
    aj["free_structural"] = a.free_structural;
    aj["min_displacement"] = a.min_displacement;
    aj["free"] = a.free;
    actions.push_back(std::move(aj));
  }
  j["actions"] = std::move(actions);
  j["quotient"] = report.quotient;
  j["covering_consistent"] = report.covering_consistent;
  j["sample_components"] = report.sample_components;
  j["diagnostics"] = report.diagnostics;
  return j;
}

Json to_json(const VerificationReport& report) {
  Json j;
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json cj;
    cj["name"] = c.name;
    cj["max_violation"] = c.max_violation;
    cj["tolerance"] = c.tolerance;
    cj["floor"] = c.floor;
    cj["passed"] = c.passed;
    checks.push_back(std::move(cj));
  }
  j["checks"] = std::move(checks);
  j["sample_count"] = report.sample_count;
  j["seed"] = report.seed;
  j["failures"] = report.failures;
  j["passed"] = report.passed();
  return j;
}

Json to_json(const NonConvergenceError& error) {
  Json j;
  j["message"] = error.what();
  Json trace = Json::array();
  for (const auto& t : error.trace())
    trace.push_back({{"iteration", t.iteration}, {"volume", t.volume}, {"grad_norm", t.grad_norm}, {"step", t.step}});
  j["trace"] = std::move(trace);
  return j;
}

Json samples_to_json(const QuadricSystem& system, const SampleSet& samples) {
  Json j;
  j["seed"] = samples.seed;
  j["residual_max"] = samples.residual_max;
  Json points = Json::array();
  Json residuals = Json::array();
  for (const auto& x : samples.points) {
    points.push_back(doubles_json(x));
    residuals.push_back(doubles_json(system.residuals(x)));
  }
  j["points"] = std::move(points);
  j["residuals"] = std::move(residuals);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sasaki::cli
