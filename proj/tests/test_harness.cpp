#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ffenergy/energy.hpp"
#include "ffenergy/harness.hpp"

using namespace ffenergy;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() / ("ffenergy-test-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace

TEST_CASE("range tokens") {
  IntRange r;
  r.max = "ceil_half_r";
  CHECK(r.resolve(7) == std::vector<int>{1, 2, 3, 4});
  r.max = "floor_half_r";
  CHECK(r.resolve(7) == std::vector<int>{1, 2, 3});
  r.min = "2";
  r.max = "r-1";
  CHECK(r.resolve(4) == std::vector<int>{2, 3});
  r.max = "half";
  CHECK_THROWS_AS(r.resolve(4), std::invalid_argument);
  r.values = std::vector<int>{};
  CHECK(r.resolve(4).empty());
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(SweepSpec::parse("{"), std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec::parse("[]"), std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec::parse(R"({"quantities": ["energy"]})"), std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec::parse(R"({"grid": {"z": 1}})"), std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec::parse(R"({"colour": 1})"), std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec::parse(R"({"grid": {"alpha": ["x"]}})"), std::invalid_argument);
  CHECK_THROWS_AS(SweepSpec::parse(R"({"options": {"alpha_file": "a"}})"), std::invalid_argument);
  try {
    SweepSpec::parse(R"({"grid": {"m": {"max": "half_r"}}, "fields": ["3^1^3"], "quantity": "energy_inv"})");
  } catch (const std::exception& e) {
    FAIL("bounds are resolved lazily: " << e.what());
  }

  const auto s = SweepSpec::parse(R"({
    "fields": [{"p": 3, "r": {"min": 5, "max": 7}}, "5^1^3"],
    "quantity": "energy_inv",
    "grid": {"m": {"min": 1, "max": "ceil_half_r"}, "alpha": [1, "3/4"]},
    "options": {"seed": 7, "workers": 2}})");
  REQUIRE(s.fields.size() == 4);
  CHECK(s.fields[2].r == 7);
  CHECK(s.fields[3].p == 5);
  CHECK(s.quantities == std::vector<std::string>{"energy_inv"});
  CHECK(s.alpha == std::vector<std::string>{"1", "3/4"});
  CHECK(s.seed == 7);
  CHECK(s.workers == 2);
}

TEST_CASE("empty grid") {
  auto s = SweepSpec::parse(R"({"fields": ["3^1^3"], "quantities": ["energy_sqrt"], "grid": {"m": []}})");
  const auto rep = run_sweep(s);
  CHECK(rep.rows.empty());
  CHECK(rep.exit_code() == 0);
  CHECK(to_csv(rep) == std::string(kCsvHeader) + "\n");
  CHECK(run_sweep(SweepSpec{}).rows.empty());
}

TEST_CASE("energy_inv sweep rows") {
  auto s = SweepSpec::parse(R"({"fields": [{"p": 3, "r": [5, 6, 7]}], "quantities": ["energy_inv"],
                                "grid": {"m": {"max": "ceil_half_r"}}})");
  const auto rep = run_sweep(s);
  REQUIRE(rep.rows.size() == 3 + 3 + 4);
  CHECK(rep.exit_code() == 0);
  std::size_t i = 0;
  for (int r : {5, 6, 7}) {
    BuildOptions bo;
    bo.auto_modulus = true;
    const auto K = ResidueField::build(FieldSpec{3, 1, r, std::nullopt}, bo);
    for (int m = 1; m <= (r + 1) / 2; ++m, ++i) {
      const auto& row = rep.rows[i];
      CHECK(row.field == K.spec_string());
      CHECK(row.params == "m=" + std::to_string(m));
      CHECK(row.value == to_decimal(energy_inv(K, m).exact));
      REQUIRE(row.ratio);
      CHECK(*row.ratio == doctest::Approx(to_double(energy_inv(K, m).exact) / energy_inv_main_term(3, r, m)));
      CHECK(row.checks.find("mass=pass") != std::string::npos);
      CHECK(row.elapsed_ms.empty());
      CHECK(row.bound.find("q^((7m-r)/2)") != std::string::npos);
    }
  }
}

TEST_CASE("vinogradov sweep over 100 seeds") {
  auto s = SweepSpec::parse(R"({"fields": ["3^1^4"], "quantities": ["vinogradov"], "options": {"seeds": 100}})");
  const auto rep = run_sweep(s);
  REQUIRE(rep.rows.size() == 100);
  for (const auto& row : rep.rows) CHECK(row.checks == "hard_bound=pass");
  CHECK(rep.exit_code() == 0);
}

TEST_CASE("determinism and worker independence") {
  const char* text = R"({"fields": [{"p": 3, "r": [4, 5]}],
    "quantities": ["energy_sqrt", "bilinear_sqrt", "bilinear_inv", "charsum", "N", "M_alpha"],
    "grid": {"m": {"max": 2}, "n": {"max": 2}, "h": [2], "a": [1, 4], "chi": [0, 3], "c": [1, 2]},
    "options": {"seeds": 2}})";
  auto s = SweepSpec::parse(text);
  const auto a = to_csv(run_sweep(s));
  const auto b = to_csv(run_sweep(s));
  s.workers = 4;
  const auto c = to_csv(run_sweep(s));
  CHECK(a == b);
  CHECK(a == c);
  CHECK(to_json(run_sweep(s)) == to_json(run_sweep(SweepSpec::parse(text))));
}

TEST_CASE("JSON round trip and big integers") {
  auto s = SweepSpec::parse(R"({"fields": ["3^1^3"], "quantities": ["energy_sqrt", "bilinear_inv", "M_alpha"],
                                "grid": {"m": [1, 3], "n": [2]}})");
  auto rep = run_sweep(s);
  ReportRow big;
  big.field = "3^1^14";
  big.quantity = "energy_sqrt";
  big.params = "m=14";
  BigInt v = 1;
  for (int i = 0; i < 42; ++i) v *= 3;
  big.value = to_decimal(v);
  rep.rows.push_back(big);
  const auto text = to_json(rep);
  const auto back = load_report_json(text);
  CHECK(to_json(back) == text);
  CHECK(to_csv(back) == to_csv(rep));
  CHECK(back.rows.back().value == "109418989131512359209");
  CHECK(to_csv(rep).find(",109418989131512359209,") != std::string::npos);
  CHECK_THROWS_AS(load_report_json("{}"), std::invalid_argument);
}

TEST_CASE("skipped and failing points") {
  auto s = SweepSpec::parse(R"({"fields": ["3^1^4"], "quantities": ["bilinear_sqrt", "energy_inv"],
                                "grid": {"m": [1, 3, 5], "n": [3]}, "options": {"term_limit": 100}})");
  const auto rep = run_sweep(s);
  REQUIRE(rep.rows.size() == 6);
  CHECK(rep.rows[0].status == "ok");
  CHECK(rep.rows[1].status == "skipped");
  CHECK(rep.rows[2].status == "skipped");
  CHECK(rep.rows[3].status == "ok");
  CHECK(rep.rows[5].status == "skipped");
  CHECK(rep.skipped() == 4);
  CHECK(rep.exit_code() == 0);
  const auto csv = to_csv(rep);
  CHECK(csv.find("status=skipped") != std::string::npos);

  BoundReport bad = rep;
  bad.rows[0].checks = "mass=fail";
  CHECK(bad.exit_code() == 1);
  bad.rows[0].checks = "ratio=warn";
  CHECK(bad.exit_code() == 0);
  CHECK(bad.warnings() == 1);
}

TEST_CASE("soft threshold turns ratios into warnings") {
  auto s = SweepSpec::parse(R"({"fields": ["3^1^5"], "quantities": ["energy_sqrt"], "grid": {"m": [1]},
                                "options": {"soft_threshold": 0.5}})");
  const auto rep = run_sweep(s);
  REQUIRE(rep.rows.size() == 1);
  CHECK(rep.rows[0].checks.find("ratio=warn") != std::string::npos);
  CHECK(rep.exit_code() == 0);
}

TEST_CASE("emit") {
  TempDir dir;
  auto s = SweepSpec::parse(R"({"fields": ["3^1^3"], "quantities": ["energy_inv"]})");
  const auto rep = run_sweep(s);
  emit(rep, "csv", dir.path / "r.csv");
  emit(rep, "json", dir.path / "r.json");
  std::ifstream in(dir.path / "r.json");
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(to_json(load_report_json(ss.str())) == to_json(rep));
  CHECK_THROWS_AS(emit(rep, "csv", dir.path / "missing" / "r.csv"), std::runtime_error);
  CHECK_THROWS_AS(emit(rep, "xml", dir.path / "r.xml"), std::invalid_argument);
}

TEST_CASE("selftest") {
  CHECK_THROWS(selftest("slow"));
  TempDir dir;
  BuildOptions bo;
  bo.auto_modulus = true;
  bo.cache_dir = dir.path;
  const auto K = ResidueField::build(FieldSpec{3, 1, 3, std::nullopt}, bo);
  const auto file = K.cache_file(dir.path);
  std::filesystem::resize_file(file, 12);

  const auto rep = selftest("quick", dir.path);
  for (const auto& c : rep.checks) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }
  CHECK(rep.pass());
  CHECK(rep.first_failure().empty());
  CHECK(ResidueField::build(FieldSpec{3, 1, 3, std::nullopt}, bo).loaded_from_cache());
}
