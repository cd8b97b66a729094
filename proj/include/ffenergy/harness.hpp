#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ffenergy/residue_field.hpp"

namespace ffenergy {

inline constexpr const char* kArtifactVersion = "ffenergy 0.1.0";
inline constexpr const char* kWeightGenerator = "mt19937_64, re/im uniform on [-1, 1)";
inline constexpr const char* kCsvHeader = "field,quantity,params,value,main_term,ratio,checks,elapsed_ms";

/// Quantities a sweep can evaluate.
const std::vector<std::string>& sweep_quantities();

/// An integer parameter range. Bounds are either integers or one of the
/// field-relative tokens "r", "r-1", "ceil_half_r", "floor_half_r".
struct IntRange {
  std::optional<std::vector<int>> values;  // explicit list, may be empty
  std::string min = "1";
  std::string max = "r";

  std::vector<int> resolve(int r) const;
};

struct SweepSpec {
  std::vector<FieldSpec> fields;
  std::vector<std::string> quantities;

  IntRange m, n, h, k;
  std::vector<std::string> alpha = {"1"};
  /// Twist c and class a, as element encodings.
  std::vector<std::uint32_t> twist = {1};
  std::vector<std::uint32_t> a = {1};
  std::vector<std::uint64_t> chi = {1};
  std::string charsum_set = "irreducible";
  /// Weight seeds are seed, seed + 1, ..., seed + seeds - 1.
  std::uint64_t seed = 1;
  int seeds = 1;
  /// Optional weight file pair for the bilinear quantities (alpha, beta).
  std::optional<std::filesystem::path> alpha_file, beta_file;

  double term_limit = 1e9;
  std::uint64_t enumeration_budget = std::uint64_t{1} << 28;
  double soft_threshold = 100;
  unsigned workers = 1;
  bool timing = false;
  std::optional<std::filesystem::path> cache_dir;

  /// Throws std::invalid_argument with the offending key on malformed input.
  static SweepSpec parse(std::string_view json_text);
  static SweepSpec load(const std::filesystem::path& path);
};

struct ReportRow {
  std::string field;
  std::string quantity;
  /// "m=2;n=1;seed=3", keys in a fixed order.
  std::string params;
  /// Exact integers in full decimal, complex sums as "re+imi", "inf" for the M sentinel.
  std::string value;
  std::optional<double> main_term;
  std::optional<double> ratio;
  /// "name=pass|fail|warn" entries joined by ';'.
  std::string checks;
  /// ok, skipped or error
  std::string status = "ok";
  std::string reason;
  /// The bound the main term instantiates, with its formula.
  std::string bound;
  std::string elapsed_ms;
};

struct BoundReport {
  std::string version = kArtifactVersion;
  std::uint64_t seed = 0;
  std::string weight_generator = kWeightGenerator;
  double soft_threshold = 100;
  std::vector<ReportRow> rows;

  std::size_t failures() const;
  std::size_t warnings() const;
  std::size_t skipped() const;
  /// 0 iff every hard check passed and no point errored.
  int exit_code() const { return failures() == 0 ? 0 : 1; }
};

BoundReport run_sweep(const SweepSpec& spec);

void write_csv(const BoundReport& report, std::ostream& out);
void write_json(const BoundReport& report, std::ostream& out);
std::string to_csv(const BoundReport& report);
std::string to_json(const BoundReport& report);
BoundReport load_report_json(std::string_view text);
/// Writes the report in "csv" or "json"; throws std::runtime_error if the path is unwritable.
void emit(const BoundReport& report, const std::string& format, const std::filesystem::path& path);

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestCheck> checks;
  bool pass() const;
  /// First failing check's name, empty when all pass.
  std::string first_failure() const;
};

/// Exact-identity suite at pinned small parameters. level is "quick" or "full".
SelftestReport selftest(const std::string& level, const std::optional<std::filesystem::path>& cache_dir = {});

}  // namespace ffenergy
