#include <doctest.h>

#include "vfi/config.hpp"

using namespace vfi;

TEST_CASE("experiment config round-trips") {
  ExperimentConfig c;
  c.command = "sweep";
  c.set("domain", "torus");
  c.set("field", "torus_gamma");
  c.set("bc", "tangent");
  c.set("grid", "1.1:3.0:0.01");
  c.set("order", "32");
  std::string text = emit_config(c);
  ExperimentConfig back = parse_config(text);
  CHECK(back == c);
  CHECK(emit_config(back) == text);
}

TEST_CASE("unknown keys and malformed lines are rejected") {
  CHECK_THROWS_AS(parse_config("command=verify\nwhatever=1\n"), Error);
  CHECK_THROWS_AS(parse_config("command=verify\nnot a kv line\n"), Error);
  CHECK_THROWS_AS(parse_config("domain=ball\n"), Error);  // missing command
  CHECK_THROWS_AS(parse_config("command=a\ncommand=b\n"), Error);
}

TEST_CASE("comments and blank lines are tolerated") {
  ExperimentConfig c = parse_config("# header\ncommand=constants\n\nn=3\n");
  CHECK(c.command == "constants");
  CHECK(c.get("n", "") == "3");
}

TEST_CASE("manifest entries are unique and non-empty") {
  auto m = check_manifest();
  CHECK(m.size() >= 20);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(!m[i].check.empty());
    CHECK(!m[i].description.empty());
    for (std::size_t j = i + 1; j < m.size(); ++j) CHECK(m[i].check != m[j].check);
  }
}
