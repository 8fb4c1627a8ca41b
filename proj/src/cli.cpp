#include "negdimcd/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace negdimcd::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

std::optional<double> to_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end != begin + s.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::string suite_of(const std::string& check_id) {
  return check_id.substr(0, check_id.find('.'));
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Config

bool Section::has(const std::string& key) const { return get(key).has_value(); }

std::optional<std::string> Section::get(const std::string& key) const {
  for (const auto& [k, v] : entries) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string Section::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double Section::number(const std::string& key) const {
  const auto v = get(key);
  if (!v) throw ConfigError(where(key) + ": missing");
  const auto d = to_number(*v);
  if (!d) throw ConfigError(where(key) + ": not a number: '" + *v + "'");
  return *d;
}

double Section::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int Section::integer_or(const std::string& key, int fallback) const {
  if (!has(key)) return fallback;
  const double d = number(key);
  if (d != std::floor(d) || std::abs(d) > 1e9) throw ConfigError(where(key) + ": not an integer");
  return static_cast<int>(d);
}

std::vector<double> Section::numbers(const std::string& key) const {
  const auto v = get(key);
  if (!v) throw ConfigError(where(key) + ": missing");
  std::vector<double> out;
  for (const auto& part : split(*v, ',')) {
    const auto d = to_number(part);
    if (!d) throw ConfigError(where(key) + ": not a number: '" + part + "'");
    out.push_back(*d);
  }
  if (out.empty()) throw ConfigError(where(key) + ": empty list");
  return out;
}

std::vector<double> Section::numbers_or(const std::string& key, std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

std::vector<std::string> Section::words_or(const std::string& key,
                                           std::vector<std::string> fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  std::vector<std::string> out;
  for (auto& w : split(*v, ',')) {
    if (!w.empty()) out.push_back(w);
  }
  return out;
}

std::map<std::string, double> Section::numeric_params() const {
  std::map<std::string, double> out;
  for (const auto& [k, v] : entries) {
    if (const auto d = to_number(v)) out[k] = *d;
  }
  return out;
}

Config Config::parse(const std::string& text) {
  Config c;
  c.sections.push_back({"", {}});
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find(" #");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": bad header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      if (c.find(name)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate section [" + name + "]");
      c.sections.push_back({name, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    Section& s = c.sections.back();
    if (s.has(key)) throw ConfigError(s.where(key) + ": duplicate key");
    s.entries.emplace_back(key, value);
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Section* Config::find(const std::string& name) const {
  for (const auto& s : sections) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::optional<std::string> Config::top(const std::string& key) const {
  return sections.front().get(key);
}

// ---------------------------------------------------------------------------
// RNG

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------
// Records

void write_records(std::ostream& os, const std::vector<Record>& records) {
  os << kRecordHeader << '\n';
  for (const auto& r : records) {
    os << r.check_id << ',' << r.params << ',' << format_number(r.worst_margin) << ',' << r.pass
       << '\n';
  }
}

std::vector<Record> read_records(std::istream& is, const std::string& origin) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kRecordHeader) {
    throw ConfigError(origin + ": record header mismatch");
  }
  std::vector<Record> out;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split(line, ',');
    if (cols.size() != 4) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 4 columns");
    }
    Record r;
    r.check_id = cols[0];
    r.params = cols[1];
    if (cols[2] == "inf") r.worst_margin = INFINITY;
    else if (cols[2] == "-inf") r.worst_margin = -INFINITY;
    else if (cols[2] == "nan") r.worst_margin = NAN;
    else {
      const auto d = to_number(cols[2]);
      if (!d) throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad worst_margin");
      r.worst_margin = *d;
    }
    r.pass = cols[3];
    static const std::vector<std::string> kPass = {"true", "false", "vacuous", "inconclusive", "info"};
    if (std::find(kPass.begin(), kPass.end(), r.pass) == kPass.end()) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad pass value '" + r.pass + "'");
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool record_fails(const Record& r) { return r.pass == "false" || r.pass == "inconclusive"; }

// ---------------------------------------------------------------------------
// Merge and output

std::string summarize(const std::vector<Record>& records, const std::string& title) {
  std::ostringstream os;
  os << title << '\n';
  std::map<std::string, std::pair<int, int>> per_suite;  // passed, total
  std::vector<std::string> order;
  for (const auto& r : records) {
    const std::string s = suite_of(r.check_id);
    if (!per_suite.count(s)) order.push_back(s);
    auto& c = per_suite[s];
    c.second += 1;
    if (!record_fails(r)) c.first += 1;
  }
  for (const auto& s : order) {
    os << "  " << s << ": " << per_suite[s].first << "/" << per_suite[s].second << " ok\n";
  }
  const bool failed = std::any_of(records.begin(), records.end(), record_fails);
  for (const auto& r : records) {
    os << (record_fails(r) ? "FAIL " : "     ") << r.check_id << " [" << r.params
       << "] worst_margin=" << format_number(r.worst_margin) << " pass=" << r.pass << '\n';
  }
  os << (failed ? "result: FAIL" : "result: ok") << " (" << records.size() << " records)\n";
  return os.str();
}

Outcome merge(const std::vector<std::string>& paths) {
  std::vector<Record> all;
  for (const auto& p : paths) {
    std::ifstream in(p);
    if (!in) throw ConfigError("cannot open records '" + p + "'");
    auto recs = read_records(in, p);
    all.insert(all.end(), recs.begin(), recs.end());
  }
  std::stable_partition(all.begin(), all.end(), record_fails);
  Outcome out;
  out.records = all;
  out.summary = summarize(all, "merged " + std::to_string(paths.size()) + " record file(s)");
  out.exit_code = std::any_of(all.begin(), all.end(), record_fails) ? 1 : 0;
  return out;
}

void write_outcome(const Outcome& outcome, const std::string& out_dir, const std::string& stem) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  {
    std::ofstream f(dir / (stem + ".records.csv"), std::ios::binary);
    if (!f) throw ConfigError("cannot write to '" + out_dir + "'");
    write_records(f, outcome.records);
  }
  std::ofstream f(dir / (stem + ".summary.txt"), std::ios::binary);
  f << outcome.summary;
}

}  // namespace negdimcd::cli
