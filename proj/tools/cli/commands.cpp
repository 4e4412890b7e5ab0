#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <numeric>

#include "sasaki/verifier.hpp"

#ifndef SASAKI_VERSION
#define SASAKI_VERSION "0.0.0"
#endif

namespace sasaki::cli {

namespace {

CommandResult input_error(const std::string& message) {
  CommandResult r;
  r.exit_code = kInputError;
  r.error = message;
  Json j;
  j["error"] = message;
  r.output = dump(j);
  return r;
}

CommandResult finish(Json& report, int code, std::string stage = {}, std::string message = {}) {
  if (!stage.empty()) {
    report["failed_stage"] = stage;
    report["error"] = message;
  }
  report["passed"] = code == kSuccess;
  CommandResult r;
  r.exit_code = code;
  r.output = dump(report);
  if (!stage.empty()) r.error = stage + ": " + message;
  return r;
}

// Samples of the flat link pushed radially onto the unit sphere; the cone over
// them is the cone over the link, which is all the flat check looks at.
SampleSet radial_normalize(const SampleSet& samples) {
  SampleSet out = samples;
  for (auto& x : out.points) {
    const double n = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
    for (double& v : x) v /= n;
  }
  return out;
}

}  // namespace

std::string tool_version() { return SASAKI_VERSION; }

std::size_t workers_from_env() {
  const char* env = std::getenv("SASAKI_WORKERS");
  if (env == nullptr) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return 1;
  return static_cast<std::size_t>(v);
}

CommandResult cmd_validate(const ConeSpec& cone) {
  const ValidationReport report = validate(cone);
  Json j;
  j["cone"] = cone_to_json(cone);
  j["validation"] = to_json(report);
  j["passed"] = report.ok();
  CommandResult r;
  r.exit_code = report.ok() ? kSuccess : kCheckFailed;
  r.output = dump(j);
  if (!report.ok()) r.error = "cone is not good, strongly convex, minimal and primitive";
  return r;
}

CommandResult cmd_validate(const std::string& path) {
  try {
    return cmd_validate(read_cone_file(path));
  } catch (const ParseError& e) {
    return input_error(e.what());
  }
}

CommandResult cmd_ypq(long long p, long long q) {
  try {
    CommandResult r;
    r.output = dump(cone_to_json(ypq_cone(p, q)));
    return r;
  } catch (const std::invalid_argument& e) {
    return input_error(e.what());
  }
}

CommandResult cmd_pipeline(const std::string& path, const PipelineOptions& options) {
  try {
    return cmd_pipeline(read_cone_file(path), options);
  } catch (const ParseError& e) {
    return input_error(e.what());
  }
}

CommandResult cmd_pipeline(const ConeSpec& cone, const PipelineOptions& options) {
  if (!(options.tol > 0.0)) return input_error("--tol must be positive");
  if (options.samples == 0) return input_error("--samples must be positive");

  Json report;
  report["tool_version"] = tool_version();
  report["seed"] = options.seed;
  report["cone"] = cone_to_json(cone);

  const ValidationReport validation = validate(cone);
  report["validation"] = to_json(validation);
  if (!validation.ok()) return finish(report, kCheckFailed, "validate", "cone failed validation");

  const DelzantData data = build_delzant(cone);
  report["delzant"] = to_json(data);

  const auto ypq = match_ypq(cone);
  ReebSolution solution;
  try {
    if (options.reeb == ReebMode::closed) {
      if (!ypq) return finish(report, kInputError, "reeb", "--reeb closed needs a Y^{p,q} cone");
      solution = ypq_reeb(ypq->first, ypq->second);
    } else {
      solution = minimize_volume(cone);
    }
  } catch (const UnsupportedConeError& e) {
    return finish(report, kInputError, "reeb", e.what());
  } catch (const NonConvergenceError& e) {
    report["reeb"] = to_json(e);
    return finish(report, kNumericFailure, "reeb", e.what());
  }
  const RayList rays = dual_rays(cone);
  Json reeb = to_json(solution);
  reeb["in_reeb_cone"] = reeb_cone_contains(rays, solution.xi);
  const lattice::IntVector xi0 = first_normals_sum(cone);
  Json xi0_json = Json::array();
  for (const auto& v : xi0) xi0_json.push_back(integer_to_json(v));
  reeb["xi0"] = std::move(xi0_json);
  reeb["xi0_in_reeb_cone"] = reeb_cone_contains(rays, std::span<const lattice::Integer>(xi0));
  const ReebCoefficients coeffs = reeb_coefficients(data, solution.xi);
  reeb["b"] = coeffs.b;
  report["reeb"] = std::move(reeb);

  QuadricSystem system;
  try {
    system = build_system(data, coeffs);
  } catch (const InfeasibleSystemError& e) {
    return finish(report, kCheckFailed, "reallink", e.what());
  }
  report["system"] = to_json(system);
  if (ypq) report["system"]["matches_reference"] = systems_equivalent(system, ypq_reference_system(ypq->first, ypq->second));

  const DeckGroup deck = deck_group(data);
  const DeckGroup via_kernel = deck_group_from_kernel(data);
  Json deck_json = to_json(deck);
  deck_json["kernel_route"] = to_json(via_kernel);
  deck_json["routes_agree"] = deck == via_kernel;
  if (ypq) {
    const SignVector tabulated = ypq_tabulated_deck_element(ypq->first, ypq->second);
    deck_json["tabulated_element"] = tabulated.str();
    deck_json["reference_table_agreement"] = deck.contains(tabulated);
  }
  report["deck"] = std::move(deck_json);

  SampleSet samples;
  try {
    SampleOptions sopts;
    sopts.workers = options.workers;
    samples = sample(system, options.samples, options.seed, sopts);
  } catch (const SamplerError& e) {
    return finish(report, kNumericFailure, "sample", e.what());
  }
  if (options.export_samples) {
    std::ofstream out(*options.export_samples);
    if (!out) return finish(report, kInputError, "sample", "cannot write " + *options.export_samples);
    out << dump(samples_to_json(system, samples));
  }
  Json samples_json;
  samples_json["count"] = samples.points.size();
  samples_json["residual_max"] = samples.residual_max;
  const auto [rmin, rmax] = std::minmax_element(samples.jacobian_ranks.begin(), samples.jacobian_ranks.end());
  samples_json["jacobian_rank_min"] = rmin == samples.jacobian_ranks.end() ? 0 : *rmin;
  samples_json["jacobian_rank_max"] = rmax == samples.jacobian_ranks.end() ? 0 : *rmax;
  report["samples"] = std::move(samples_json);

  report["topology"] = to_json(classify_ypq(system, deck, samples));

  VerifyOptions vopts;
  vopts.pairing_tol = options.tol;
  vopts.residual_tol = std::min(options.tol, 1e-10);
  const ContactData ctx(coeffs, data.kernel);
  const VerificationReport verification = verify_link(system, ctx, samples, vopts);
  report["verification"] = to_json(verification);
  bool passed = verification.passed();

  if (data.k == 0) {
    FlatOptions fopts;
    fopts.im_tol = std::min(options.tol, 1e-12);
    fopts.calibration_tol = options.tol;
    const VerificationReport flat = verify_flat_special(cone.dim() - 1, radial_normalize(samples), fopts);
    report["flat_special"] = to_json(flat);
    passed = passed && flat.passed();
  }

  if (!passed) return finish(report, kCheckFailed, "verify", "verification checks failed");
  return finish(report, kSuccess);
}

}  // namespace sasaki::cli
