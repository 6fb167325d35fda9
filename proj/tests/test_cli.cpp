#include <doctest.h>

#include <sstream>

#include "folner/cli.hpp"
#include "folner/errors.hpp"

using namespace folner;

namespace {

Report run_json(const char* text) { return run(RunConfig::from_json(nlohmann::json::parse(text))); }

std::string rows_dump(const Report& r) {
  auto j = r.to_json();
  return j["rows"].dump() + j["summary"].dump();
}

}  // namespace

TEST_CASE("delta report") {
  const auto r = run_json(R"({"command": "delta", "d": 5, "k_max": 3})");
  CHECK(r.pass());
  REQUIRE(r.rows.size() == 4);
  CHECK(r.rows[0]["delta"] == "4/5");
  CHECK(r.rows[1]["delta"] == "1476/2101");
  std::ostringstream csv;
  r.write_csv(csv);
  const auto text = csv.str();
  CHECK(text.rfind("k,delta_num,delta_den,delta_float\n0,4,5,0.8\n1,1476,2101,", 0) == 0);
}

TEST_CASE("oracle and lemma reports") {
  const auto o = run_json(R"({"command": "oracle", "d": 2, "k": 2})");
  CHECK(o.pass());
  CHECK(o.rows[0]["brute_force"] == "3/4");
  CHECK(o.rows[0]["recursion"] == "3/4");
  const auto mixed = run_json(R"({"command": "oracle", "valency": {"prefix": [2], "period": [3]}, "K": 1, "k": 1})");
  CHECK(mixed.pass());
  CHECK(mixed.rows[0]["recursion"] == "3/5");

  const auto l = run_json(R"({"command": "lemma-check", "d": 5, "k": 2, "n": 300, "seed": 7})");
  CHECK(l.pass());
  CHECK(l.rows.size() == 3);
  for (const auto& row : l.rows) CHECK(row["violations"] == 0);
}

TEST_CASE("reports are reproducible") {
  const char* cfg = R"({"command": "sample", "d": 5, "k": 2, "n": 3000, "seed": 11})";
  const auto a = run_json(cfg);
  const auto b = run_json(cfg);
  CHECK(rows_dump(a) == rows_dump(b));
  const auto serial = run_json(R"({"command": "sample", "d": 5, "k": 2, "n": 3000, "seed": 11, "exec": "serial"})");
  CHECK(a.to_json()["rows"] == serial.to_json()["rows"]);
  const auto other = run_json(R"({"command": "sample", "d": 5, "k": 2, "n": 3000, "seed": 12})");
  CHECK(rows_dump(a) != rows_dump(other));
  CHECK(a.metadata["config"]["seed"] == 11);
}

TEST_CASE("failing checks carry witnesses") {
  // a boundary profile checked against the interior expectation
  const auto r = run_json(R"({"command": "member", "d": 5, "k": 0, "word": "a[(1 2 3)]", "expect": "interior"})");
  CHECK_FALSE(r.pass());
  REQUIRE(r.checks.size() == 1);
  REQUIRE(r.checks[0].witness.has_value());
  CHECK(r.checks[0].witness->contains("profile"));
  const auto ok = run_json(R"({"command": "member", "d": 5, "k": 0, "word": "a[(2 3 4)]", "expect": "interior"})");
  CHECK(ok.pass());
}

TEST_CASE("other subcommands") {
  CHECK(run_json(R"({"command": "epsilon", "d": 5, "K": 20})").pass());
  CHECK(run_json(R"({"command": "cardinality", "d": 5, "k_max": 3})").pass());
  CHECK(run_json(R"({"command": "folfun", "d": 2, "n": 9})").rows[0]["k_star"] == 7);
  CHECK(run_json(R"({"command": "embed", "d": 3, "n": 20})").pass());
  CHECK(run_json(R"({"command": "orbit", "d": 5, "j": 2})").pass());
  const auto decay = run_json(R"({"command": "decay", "d": 5, "K_max": 100, "eta": 0.24})");
  CHECK(decay.pass());
  CHECK(decay.rows.size() == 101);
  CHECK(decay.rows[100].contains("normalized"));
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"command": "delta", "dd": 5})")), InvalidInput);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"command": "delta", "d": "five"})")), InvalidInput);
  CHECK_THROWS_AS(run_json(R"({"command": "nope"})"), InvalidInput);
  CHECK_THROWS_AS(run_json(R"({"command": "delta", "d": 5})"), InvalidInput);
  CHECK_THROWS_AS(run_json(R"({"command": "cardinality", "d": 5, "k_max": 30})"), ResourceLimit);
  const auto c = RunConfig::from_json(nlohmann::json::parse(R"({"command": "decay", "valency": {"formula": "sqrt-log"}, "K_max": 5})"));
  CHECK(RunConfig::from_json(nlohmann::json::parse(c.to_json().dump())).to_json() == c.to_json());
}
