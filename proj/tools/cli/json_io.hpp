// JSON encodings for cone files, samples and the pipeline reports.
//
// Integers are written as JSON numbers while they fit in 53 bits and as
// decimal strings beyond that; the reader accepts both.

#ifndef SASAKI_CLI_JSON_IO_HPP
#define SASAKI_CLI_JSON_IO_HPP

#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "sasaki/cone.hpp"
#include "sasaki/delzant.hpp"
#include "sasaki/lattice.hpp"
#include "sasaki/reallink.hpp"
#include "sasaki/reeb.hpp"
#include "sasaki/verifier.hpp"

namespace sasaki::cli {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json integer_to_json(const lattice::Integer& v);
lattice::Integer integer_from_json(const Json& j);

ConeSpec cone_from_json(const Json& j);
ConeSpec cone_from_text(const std::string& text);
ConeSpec read_cone_file(const std::string& path);
Json cone_to_json(const ConeSpec& cone);

Json to_json(const ValidationReport& report);
Json to_json(const DelzantData& data);
Json to_json(const DeckGroup& deck);
Json to_json(const ReebSolution& solution);
Json to_json(const QuadricSystem& system);
Json to_json(const TopologyReport& report);
Json to_json(const VerificationReport& report);
Json to_json(const NonConvergenceError& error);

/// Points plus per-point residuals, for external plotting.
Json samples_to_json(const QuadricSystem& system, const SampleSet& samples);

/// Stable text form: two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace sasaki::cli

#endif  // SASAKI_CLI_JSON_IO_HPP
