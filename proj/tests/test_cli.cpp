#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "commands.hpp"

using namespace sasaki;
using namespace sasaki::cli;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("sasaki_test_" + name);
  std::ofstream(path) << text;
  return path.string();
}

Json parse(const CommandResult& r) { return Json::parse(r.output); }

}  // namespace

TEST(ConeFile, RoundTrip) {
  const ConeSpec cone = ypq_cone(5, 3);
  EXPECT_EQ(cone_from_json(cone_to_json(cone)), cone);
}

TEST(ConeFile, LargeIntegersAsStrings) {
  const lattice::Integer big = (lattice::Integer(1) << 60) + 1;
  const Json j = integer_to_json(big);
  ASSERT_TRUE(j.is_string());
  EXPECT_EQ(integer_from_json(j), big);
  EXPECT_TRUE(integer_to_json(lattice::Integer(12345)).is_number_integer());
  EXPECT_EQ(integer_from_json(Json("-42")), -42);
  EXPECT_THROW(integer_from_json(Json("4.2")), ParseError);
  EXPECT_THROW(integer_from_json(Json(4.5)), ParseError);
}

TEST(ConeFile, ParseErrors) {
  EXPECT_THROW(cone_from_text("{"), ParseError);
  EXPECT_THROW(cone_from_text(R"({"dim": 3})"), ParseError);
  EXPECT_THROW(cone_from_text(R"({"dim": 3, "normals": [[1, 0]]})"), ParseError);
  EXPECT_THROW(cone_from_text(R"({"dim": 2, "normals": [[1, 0]], "extra": 1})"), ParseError);
  EXPECT_THROW(read_cone_file("/nonexistent/cone.json"), ParseError);
}

TEST(Validate, ExitCodes) {
  EXPECT_EQ(cmd_validate(write_temp("orthant.json", R"({"dim":3,"normals":[[1,0,0],[0,1,0],[0,0,1]]})")).exit_code, 0);
  EXPECT_EQ(cmd_validate(ypq_cone(2, 1)).exit_code, 0);
  const auto bad = cmd_validate(write_temp("bad.json", R"({"dim":3,"normals":[[2,4,6],[0,1,0],[0,0,1]]})"));
  EXPECT_EQ(bad.exit_code, 1);
  EXPECT_NE(bad.output.find("not primitive"), std::string::npos);
  EXPECT_EQ(cmd_validate(write_temp("broken.json", "not json")).exit_code, 2);
}

TEST(Ypq, WritesConeFile) {
  const auto r = cmd_ypq(2, 1);
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(parse(r)["normals"], Json::parse("[[1,0,0],[1,0,1],[1,2,2],[1,1,0]]"));
  EXPECT_EQ(parse(cmd_ypq(3, 2))["normals"], Json::parse("[[1,0,0],[1,0,1],[1,3,3],[1,1,0]]"));
  EXPECT_EQ(cmd_ypq(2, 2).exit_code, 2);
  EXPECT_EQ(cmd_ypq(1, 0).exit_code, 2);
}

TEST(Pipeline, Ypq21Closed) {
  PipelineOptions opts;
  opts.reeb = ReebMode::closed;
  opts.seed = 7;
  const auto r = cmd_pipeline(ypq_cone(2, 1), opts);
  EXPECT_EQ(r.exit_code, 0) << r.error;
  const Json j = parse(r);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_TRUE(j["deck"]["routes_agree"].get<bool>());
  EXPECT_FALSE(j["deck"]["reference_table_agreement"].get<bool>());
  EXPECT_EQ(j["topology"]["quotient"], "torus");
  EXPECT_TRUE(j["system"]["matches_reference"].get<bool>());
}

TEST(Pipeline, OrthantIncludesFlatCheck) {
  const auto r = cmd_pipeline(orthant(3), PipelineOptions{});
  EXPECT_EQ(r.exit_code, 0) << r.error;
  const Json j = parse(r);
  ASSERT_TRUE(j.contains("flat_special"));
  EXPECT_TRUE(j["flat_special"]["passed"].get<bool>());
}

TEST(Pipeline, ToleranceBelowFloorExitsOne) {
  PipelineOptions opts;
  opts.reeb = ReebMode::closed;
  opts.tol = 1e-15;
  EXPECT_EQ(cmd_pipeline(ypq_cone(2, 1), opts).exit_code, 1);
}

TEST(Pipeline, InputErrors) {
  PipelineOptions opts;
  opts.reeb = ReebMode::closed;
  EXPECT_EQ(cmd_pipeline(orthant(3), opts).exit_code, 2);
  const ConeSpec no_gamma(2, {lattice::to_int_vector({2, 1}), lattice::to_int_vector({1, 2})});
  EXPECT_EQ(cmd_pipeline(no_gamma, PipelineOptions{}).exit_code, 2);
  const ConeSpec bad(3, {lattice::to_int_vector({2, 4, 6}), lattice::to_int_vector({0, 1, 0}),
                         lattice::to_int_vector({0, 0, 1})});
  const auto r = cmd_pipeline(bad, PipelineOptions{});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_EQ(parse(r)["failed_stage"], "validate");
  EXPECT_EQ(cmd_pipeline("/nonexistent/cone.json", PipelineOptions{}).exit_code, 2);
}

TEST(Pipeline, ReportIsDeterministicAcrossWorkers) {
  PipelineOptions a, b;
  a.seed = b.seed = 3;
  a.samples = b.samples = 200;
  b.workers = 3;
  const ConeSpec cone = ypq_cone(3, 2);
  EXPECT_EQ(cmd_pipeline(cone, a).output, cmd_pipeline(cone, a).output);
  EXPECT_EQ(cmd_pipeline(cone, a).output, cmd_pipeline(cone, b).output);
}

TEST(Pipeline, ExportsSamples) {
  PipelineOptions opts;
  opts.samples = 20;
  opts.export_samples = (std::filesystem::temp_directory_path() / "sasaki_test_samples.json").string();
  ASSERT_EQ(cmd_pipeline(ypq_cone(2, 1), opts).exit_code, 0);
  std::ifstream in(*opts.export_samples);
  const Json j = Json::parse(in);
  EXPECT_EQ(j["points"].size(), 20u);
  EXPECT_EQ(j["residuals"].size(), 20u);
  EXPECT_EQ(j["seed"], 0);
}
