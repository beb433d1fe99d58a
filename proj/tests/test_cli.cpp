#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "utm/app.hpp"
#include "utm/error.hpp"

using namespace utm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("utm_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("csv round trip") {
    SolutionField f = make_field({0.0, 0.5, 1.0}, {0.0, 0.1});
    f.values(1, 1) = 1.0 / 3.0;
    f.values(0, 2) = -2.5e-17;
    const fs::path dir = scratch("csv");
    write_field_csv(f, (dir / "f.csv").string());
    const SolutionField g = read_field_csv((dir / "f.csv").string());
    CHECK(g.x_grid == f.x_grid);
    CHECK(g.t_grid == f.t_grid);
    CHECK(g.values.data == f.values.data);
  }

  TEST_CASE("config syntax errors carry a position") {
    try {
      parse_config_text("{\n  \"a\": 1,\n  \"b\": ]\n}");
      FAIL("no throw");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }

  TEST_CASE("generators") {
    const PiecewiseLinear c = generate_samples(Json(2.0), SampleRole::Signal, 0.5, 11);
    CHECK(c(0.3) == 2.0);
    const PiecewiseLinear s = generate_samples(Json::parse(R"({"generator":"sine","params":{"n":1}})"),
                                               SampleRole::Profile, 1.0, 101);
    CHECK(std::abs(s(0.5) - 1.0) < 1e-12);
    CHECK_THROWS_AS(generate_samples(Json::parse(R"({"generator":"bogus"})"), SampleRole::Profile, 1.0, 11), Error);
  }

  TEST_CASE("lifespan command") {
    std::ostringstream out, err;
    RunOptions o;
    o.config_path = UTM_CONFIG_DIR "/lifespan.json";
    o.out_dir = scratch("lifespan").string();
    CHECK(run(o, out, err) == 0);
    CHECK(out.str().find("0.0017361") != std::string::npos);
  }

  TEST_CASE("solve-linear on the eigenfunction config") {
    std::ostringstream out, err;
    RunOptions o;
    o.config_path = UTM_CONFIG_DIR "/eigen_decay.json";
    const fs::path dir = scratch("eigen");
    o.out_dir = dir.string();
    CHECK(run(o, out, err) == 0);
    const SolutionField f = read_field_csv((dir / "field.csv").string());
    CHECK(std::abs(f.at(5, 10) - 0.372708) < 1e-4);
    const std::string first = slurp(dir / "report.json");
    std::ostringstream out2;
    CHECK(run(o, out2, err) == 0);
    const Json a = Json::parse(first), b = Json::parse(slurp(dir / "report.json"));
    CHECK(a["report_hash"] == b["report_hash"]);
  }

  TEST_CASE("invalid input exits with 1") {
    const fs::path dir = scratch("bad");
    std::ofstream(dir / "bad.json") << "{\"command\": \"solve-linear\", \"problem\": {\"s\": 0.5}}";
    std::ostringstream out, err;
    RunOptions o;
    o.config_path = (dir / "bad.json").string();
    o.out_dir = dir.string();
    CHECK(run(o, out, err) == 1);
    CHECK_FALSE(err.str().empty());
  }
}
