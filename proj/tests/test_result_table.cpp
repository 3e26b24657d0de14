#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mtq/errors.hpp"
#include "mtq/result_table.hpp"

using namespace mtq;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_SUITE("result_table") {
  TEST_CASE("empty table is header only") {
    CHECK(to_csv(ResultTable{}) == "time,index,value,method,scenario\n");
  }

  TEST_CASE("records round-trip with full precision") {
    ResultTable t;
    t.add(0.1, "0", 1.0 / 3.0, "ode", "moderate-up");
    t.add(0.1, "outflow", 0.123456789012345678, "pde", "moderate-up");
    t.add(0.2, "x,y", -1e-300, "odd\"name", "s");
    const auto text = to_csv(t);
    CHECK(text.find("0.33333333333333331") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
    const auto back = parse_csv(text);
    CHECK(back.records() == t.records());
  }

  TEST_CASE("duplicate keys are rejected") {
    ResultTable t;
    t.add(1.0, "0", 0.5, "ode", "s");
    CHECK_THROWS_AS(t.add(1.0, "0", 0.6, "ode", "s"), ConfigError);
    CHECK_NOTHROW(t.add(1.0, "0", 0.6, "pde", "s"));
  }

  TEST_CASE("files are written atomically and read back") {
    const auto dir = std::filesystem::temp_directory_path() / "mtq_rt_test";
    std::filesystem::create_directories(dir);
    ResultTable t;
    t.add(1.0, "0", 0.5, "des", "s");
    t.metadata["des.seed"] = "5";
    emit_csv(t, dir / "a.csv");
    CHECK(read_csv(dir / "a.csv").records() == t.records());
    CHECK(slurp(dir / "a.csv.meta") == "des.seed=5\n");
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
      CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
    }
    CHECK_THROWS_AS(emit_csv(t, dir / "missing" / "a.csv"), IoError);
    CHECK_THROWS_AS(read_csv(dir / "nothing.csv"), IoError);
    std::filesystem::remove_all(dir);
  }

  TEST_CASE("malformed csv") {
    CHECK_THROWS_AS(parse_csv("a,b\n"), IoError);
    CHECK_THROWS_AS(parse_csv("time,index,value,method,scenario\n1,0,abc,m,s\n"), IoError);
    CHECK_THROWS_AS(parse_csv("time,index,value,method,scenario\n1,0,2\n"), IoError);
  }

  TEST_CASE("plot data blocks") {
    ResultTable t;
    t.add(0.2, "0", 0.4, "ode", "s");
    t.add(0.1, "0", 0.5, "ode", "s");
    t.add(0.1, "0", 0.45, "pde", "s");
    const auto text = to_plot_data(t);
    CHECK(text ==
          "# scenario=s method=ode index=0\n0.10000000000000001 0.5\n0.20000000000000001 0.40000000000000002\n"
          "\n\n# scenario=s method=pde index=0\n0.10000000000000001 0.45000000000000001\n");
  }
}
