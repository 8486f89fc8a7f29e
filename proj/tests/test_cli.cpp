#include <gtest/gtest.h>

#include "udcoh/cli.hpp"

using namespace udcoh;
using namespace udcoh::cli;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::IoError;
}

std::vector<const Record*> named(const Report& rep, const std::string& name) {
  std::vector<const Record*> out;
  for (const auto& r : rep.records)
    if (r.name == name) out.push_back(&r);
  return out;
}

}  // namespace

TEST(ParseConfig, Examples) {
  const auto rc = parse_config("primes=[3,7]\nmodulus=2\nn_max=3\nchecks=[all]\n");
  EXPECT_EQ(rc.primes, (std::vector<long>{3, 7}));
  EXPECT_EQ(rc.modulus, 2);
  EXPECT_EQ(rc.n_max, 3);
  EXPECT_EQ(rc.expanded_checks(), check_names());
  EXPECT_EQ(kind_of([] { parse_config("primes=[3,9]"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3,7]\nmodulus=3"); }), ErrorKind::ValidationError);
}

TEST(ParseConfig, KeyValueGrammar) {
  const auto rc = parse_config("# r = 21\n  primes = [ 7, 3 ]  # unsorted\n\nideal = [[3],[7]]\nchecks = [cup, lift]\n"
                               "format = markdown\nout = /tmp/r.md\n");
  EXPECT_EQ(rc.ideal, (std::vector<std::vector<long>>{{3}, {7}}));
  EXPECT_EQ(rc.order_ideal().members(2), (std::vector<Subset>{0, 1, 2}));
  EXPECT_EQ(rc.expanded_checks(), (std::vector<std::string>{"cup", "lift"}));
  EXPECT_EQ(rc.format, "markdown");
  EXPECT_EQ(rc.out, "/tmp/r.md");
}

TEST(ParseConfig, JsonEncoding) {
  const auto rc = parse_config(R"({"primes": [7, 13], "modulus": 6, "n_max": 1, "ideal": [[7, 13]]})");
  EXPECT_EQ(rc.primes, (std::vector<long>{7, 13}));
  EXPECT_EQ(rc.modulus, 6);
  EXPECT_EQ(rc.order_ideal().members(2).size(), 4u);
}

TEST(ParseConfig, ParseErrorsCarryPosition) {
  try {
    parse_config("primes=[3,7]\nmodulus = [2");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(kind_of([] { parse_config("primes [3]"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3]\nprimes=[7]"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3,,7]"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_config("{\"primes\": [3"); }), ErrorKind::ParseError);
}

TEST(ParseConfig, ValidationErrors) {
  EXPECT_EQ(kind_of([] { parse_config("modulus=2"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[2]"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3,3]"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3]\nn_max=-1"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3]\nchecks=[nothing]"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3]\nideal=[[5]]"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3]\nformat=xml"); }), ErrorKind::ValidationError);
  EXPECT_EQ(kind_of([] { parse_config("primes=[3]\ncolour=red"); }), ErrorKind::ValidationError);
  EXPECT_NO_THROW(parse_config("primes=[3,7]\nmodulus=0"));
}

TEST(RunChecks, LevelThreeAllPass) {
  const auto rep = run_checks(parse_config("primes=[3]\nmodulus=2\nn_max=3\nchecks=[all]"));
  EXPECT_TRUE(rep.pass());
  std::vector<std::string> table;
  for (const auto* r : named(rep, "theorem-a")) table.push_back(r->computed["group"].get<std::string>());
  EXPECT_EQ(table, (std::vector<std::string>{"Z", "Z/2", "Z/2", "Z/2"}));
}

TEST(RunChecks, InvariantSuiteListsBasis) {
  const auto rep = run_checks(parse_config("primes=[3,7]\nmodulus=2\nchecks=[theorem-b]"));
  ASSERT_EQ(rep.records.size(), 1u);
  EXPECT_TRUE(rep.pass());
  EXPECT_EQ(rep.records[0].computed["basis"].size(), 4u);
}

TEST(RunChecks, CupCoefficientThree) {
  const auto rep = run_checks(parse_config("primes=[7,13]\nmodulus=6\nchecks=[cup]"));
  EXPECT_TRUE(rep.pass());
  bool found = false;
  for (const auto* r : named(rep, "cup"))
    if (r->inputs["e"] == json({1, 0}) && r->inputs["e'"] == json({1, 0}))
      found = r->computed["coefficient"] == 3 && r->computed["index"] == json({2, 0});
  EXPECT_TRUE(found);
}

TEST(RunChecks, OrderedByNameAndSkipsWithoutModulus) {
  const auto rep = run_checks(parse_config("primes=[3,7]\nmodulus=0\nn_max=1\nchecks=[theorem-b, theorem-a, anderson]"));
  EXPECT_EQ(rep.skipped, (std::vector<std::string>{"theorem-b"}));
  ASSERT_FALSE(rep.records.empty());
  EXPECT_TRUE(std::is_sorted(rep.records.begin(), rep.records.end(),
                             [](const Record& a, const Record& b) { return a.name < b.name; }));
  EXPECT_TRUE(rep.pass());
}

TEST(RunChecks, EngineErrorsBecomeFailedRecords) {
  const auto rc = parse_config("primes=[3]\nmodulus=2");
  const auto rep = run_suites(rc, {"theorem-a", "no-such-suite"});
  EXPECT_FALSE(rep.pass());
  const auto bad = named(rep, "no-such-suite");
  ASSERT_EQ(bad.size(), 1u);
  EXPECT_FALSE(bad[0]->pass);
  EXPECT_TRUE(bad[0]->computed.contains("error"));
}

TEST(EmitReport, EmptyCheckList) {
  const auto rep = run_checks(parse_config("primes=[3]\nchecks=[]"));
  const auto j = json::parse(emit_report(rep, "json"));
  EXPECT_TRUE(j["results"].empty());
  EXPECT_EQ(j["meta"]["version"], kVersion);
  EXPECT_FALSE(emit_report(rep, "markdown").empty());
}

TEST(EmitReport, IntegralRecordFields) {
  const auto rep = run_checks(parse_config("primes=[3,7]\nn_max=1\nchecks=[theorem-a]"));
  const auto j = json::parse(emit_report(rep, "json"));
  for (const auto& r : j["results"]) {
    for (const char* key : {"name", "inputs", "computed", "expected", "provenance", "pass", "degree", "predicted"})
      EXPECT_TRUE(r.contains(key)) << key;
  }
  EXPECT_EQ(j["results"][1]["predicted"], "Z/2 + Z/2 + Z/6");
}

TEST(EmitReport, Deterministic) {
  const auto rc = parse_config("primes=[3,7]\nmodulus=2\nn_max=2\nchecks=[all]");
  EXPECT_EQ(emit_report(run_checks(rc), "json"), emit_report(run_checks(rc), "json"));
  EXPECT_EQ(emit_report(run_checks(rc), "markdown"), emit_report(run_checks(rc), "markdown"));
  const auto timed = run_checks(rc, true);
  EXPECT_TRUE(json::parse(emit_report(timed, "json"))["meta"].contains("timing"));
  EXPECT_FALSE(json::parse(emit_report(run_checks(rc), "json"))["meta"].contains("timing"));
}

TEST(EmitReport, IoErrors) {
  EXPECT_EQ(kind_of([] { write_file("/nonexistent-dir/x.json", "{}"); }), ErrorKind::IoError);
  EXPECT_EQ(kind_of([] { read_file("/nonexistent-dir/x.conf"); }), ErrorKind::IoError);
}
