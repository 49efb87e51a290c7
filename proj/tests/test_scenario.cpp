#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bvolterra/errors.hpp"
#include "bvolterra/scenario.hpp"

using namespace bvolterra;

namespace {
std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}
std::vector<std::filesystem::path> fixtures() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(BVOLTERRA_FIXTURES)) {
    if (e.path().extension() == ".json") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}
std::string parse_error(std::string_view text) {
  try {
    parse_scenario(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}
}  // namespace

TEST_CASE("minimal scenario") {
  const auto s = parse_scenario(
      R"({"dimension":2,"operators":{"T":[["1","0"],["0","1"]]},"checks":[{"kind":"b-volterra","operator":"T","algebra":"trivial"}]})");
  CHECK(s.dimension == 2);
  CHECK(s.algebra("trivial") == BooleanSubalgebra::trivial(2));
  REQUIRE(s.checks.size() == 1);
  CHECK(s.checks[0].name == "b-volterra-1");
  const auto r = run_checks(s);
  CHECK(r.passed() == 1);
  CHECK(r.exit_code() == 0);
}

TEST_CASE("parse errors name the offending field") {
  CHECK(parse_error(R"({"dimension":2,"operators":{"T":[["1/0","0"],["0","1"]]}})").starts_with("/operators/T/0/0:"));
  CHECK(parse_error(R"({"dimension":2,"operators":{"T":[["-1","0"],["0","1"]]}})").starts_with("/operators/T:"));
  CHECK(parse_error(R"({"dimension":0})").starts_with("/dimension:"));
  CHECK(parse_error(R"({"dimension":2,"extra":1})").starts_with("/extra:"));
  CHECK(parse_error(R"({"dimension":2,"algebras":{"trivial":[[1,2]]}})").starts_with("/algebras/trivial:"));
  CHECK(parse_error(R"({"dimension":2,"filtrations":{"f":{"prefix":[[3]]}}})").starts_with("/filtrations/f/prefix/0/0:"));
  CHECK(parse_error(R"({"dimension":2,"filtrations":{"f":{"prefix":[[1,2],[1]]}}})").starts_with("/filtrations/f:"));
  CHECK(parse_error(R"({"dimension":2,"checks":[{"kind":"b-volterra","operator":"T","algebra":"trivial"}]})")
            .starts_with("/checks/0/operator:"));
  CHECK(parse_error(R"({"dimension":2,"checks":[{"kind":"nope"}]})").starts_with("/checks/0/kind:"));
  CHECK(parse_error(R"({"dimension":2,"checks":[)").starts_with("malformed JSON at byte"));
  CHECK(parse_error(R"({"dimension":2,"filtrations":{"f":{"prefix":[[1]]}},"martingales":{"x":{"filtration":"f","prefix":[["1","1"]]}}})")
            .starts_with("/martingales/x:"));
}

TEST_CASE("fixtures pass and round-trip") {
  const auto files = fixtures();
  REQUIRE(files.size() >= 5);
  for (const auto& f : files) {
    CAPTURE(f.string());
    const auto s = parse_scenario(slurp(f));
    const auto text = serialize_scenario(s);
    const auto again = parse_scenario(text);
    CHECK(again == s);
    CHECK(serialize_scenario(again) == text);
    const auto r = run_checks(s);
    CHECK(r.exit_code() == 0);
    CHECK(report_json(r).dump() == report_json(run_checks(again)).dump());
  }
}

TEST_CASE("exit codes and witnesses") {
  const std::string base = R"({"dimension":2,"operators":{"T":[["1","1"],["1","1"]]},"checks":[)";
  const auto failing = run_checks(parse_scenario(base + R"({"kind":"b-volterra","operator":"T","algebra":"discrete"}]})"));
  CHECK(failing.exit_code() == 1);
  const auto& w = failing.records[0].witness;
  CHECK(w["pi"] == nlohmann::json::array({1}));
  CHECK(w["x"] == nlohmann::json::array({"0", "1"}));
  CHECK(w["y"] == nlohmann::json::array({"0", "0"}));
  const auto expected = run_checks(
      parse_scenario(base + R"({"kind":"b-volterra","operator":"T","algebra":"discrete","expect":false}]})"));
  CHECK(expected.exit_code() == 0);
  const auto erroring = run_checks(parse_scenario(
      R"({"dimension":2,"operators":{"T":[["1","1"],["0","1"]]},"filtrations":{"f":{"prefix":[[1]]}},)"
      R"("checks":[{"kind":"square","operator":"T","filtration":"f"}]})"));
  CHECK(erroring.exit_code() == 2);
  CHECK(erroring.records[0].verdict == Verdict::error);
  CHECK_FALSE(erroring.records[0].error.empty());
  CHECK(run_checks(parse_scenario(R"({"dimension":3,"checks":[]})")).exit_code() == 0);
  CHECK(report_json(run_checks(parse_scenario(R"({"dimension":3})")))["checks"].empty());
}

TEST_CASE("reports are deterministic and carry no timing by default") {
  const auto s = parse_scenario(slurp(std::filesystem::path(BVOLTERRA_FIXTURES) / "volterra_2d.json"));
  RunOptions opt;
  opt.seed = 9;
  const auto a = report_json(run_checks(s, opt)).dump();
  const auto b = report_json(run_checks(s, opt)).dump();
  CHECK(a == b);
  CHECK(a.find("elapsed") == std::string::npos);
  CHECK(report_json(run_checks(s, opt), true).dump().find("elapsed_ms") != std::string::npos);
  CHECK(report_text(run_checks(s, opt)).find("12 checks, 12 passed") != std::string::npos);
}
