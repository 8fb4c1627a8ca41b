#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace negdimcd::cli {

/// Bad configuration or a violated precondition; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One `[name]` block of a config file, keys in file order.
struct Section {
  std::string name;
  std::vector<std::pair<std::string, std::string>> entries;

  [[nodiscard]] bool has(const std::string& key) const;
  [[nodiscard]] std::optional<std::string> get(const std::string& key) const;
  [[nodiscard]] std::string get_or(const std::string& key, const std::string& fallback) const;
  /// Numeric value; throws ConfigError naming "section.key" if malformed.
  [[nodiscard]] double number(const std::string& key) const;
  [[nodiscard]] double number_or(const std::string& key, double fallback) const;
  [[nodiscard]] int integer_or(const std::string& key, int fallback) const;
  /// Comma-separated numbers.
  [[nodiscard]] std::vector<double> numbers(const std::string& key) const;
  [[nodiscard]] std::vector<double> numbers_or(const std::string& key,
                                               std::vector<double> fallback) const;
  /// Comma-separated words, trimmed.
  [[nodiscard]] std::vector<std::string> words_or(const std::string& key,
                                                  std::vector<std::string> fallback) const;
  /// All keys that parse as numbers, for use as expression parameters.
  [[nodiscard]] std::map<std::string, double> numeric_params() const;
  [[nodiscard]] std::string where(const std::string& key) const { return name + "." + key; }
};

/// Flat key/value lines, `[section]` headers, `#` or `;` comments. Keys
/// before the first header go to a section with an empty name.
struct Config {
  std::vector<Section> sections;

  static Config parse(const std::string& text);
  static Config load(const std::string& path);

  [[nodiscard]] const Section* find(const std::string& name) const;
  /// Top-level key (empty-name section), if any.
  [[nodiscard]] std::optional<std::string> top(const std::string& key) const;
};

/// SplitMix64. `split` derives an independent child stream.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

/// One row of a record file.
struct Record {
  std::string check_id;
  std::string params;  ///< k=v;k=v
  double worst_margin = 0.0;
  /// true, false, vacuous, inconclusive or info.
  std::string pass;
};

inline constexpr const char* kRecordHeader = "check_id,params,worst_margin,pass";

void write_records(std::ostream& os, const std::vector<Record>& records);
/// Throws ConfigError on a header or column mismatch.
std::vector<Record> read_records(std::istream& is, const std::string& origin);

/// Only false and inconclusive records make a run fail.
bool record_fails(const Record& r);

struct Options {
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::string out_dir = ".";
};

struct Outcome {
  std::vector<Record> records;
  std::string summary;
  int exit_code = 0;
};

/// Runs every suite selected by the top-level `suite` key over the matching
/// sections ([convexity], [flow], [geometry], [transport], optionally with a
/// ".label" suffix). `all` runs every section.
Outcome run(const Config& config, const Options& opts);

/// For each N in the [certify] lattice, the largest K in [K_min, K_max]
/// passing the pointwise check, by bisection to 1e-7.
Outcome certify(const Config& config, const Options& opts);

/// Combines record files into one summary; failing records are listed first.
Outcome merge(const std::vector<std::string>& paths);

/// Human-readable summary: per-suite counts, then one line per record.
std::string summarize(const std::vector<Record>& records, const std::string& title);

/// Writes <stem>.records.csv and <stem>.summary.txt into opts.out_dir.
void write_outcome(const Outcome& outcome, const std::string& out_dir, const std::string& stem);

std::string format_number(double v);

}  // namespace negdimcd::cli
