#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace manin {

struct CatalogEntry {
  std::string label;           ///< "11.a2"
  std::string cremona_label;   ///< "11a1", may be empty
  std::int64_t conductor = 0;
  std::array<std::int64_t, 5> ainvs{};
  bool optimal = false;
  std::optional<std::int64_t> modular_degree;
  int torsion_order = 1;
  int class_size = 1;
  std::map<std::int64_t, std::string> kodaira;
  std::string source;          ///< "remote" or "fixture"
  std::string fetched_at;

  bool operator==(const CatalogEntry&) const = default;
};

struct CurveLabel {
  std::int64_t conductor = 0;
  std::string isogeny_class;   ///< "a", "ba", ...
  int index = 0;
};

class LabelParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};
class NotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class Unavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class CoverageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CurveLabel parse_label(const std::string& label);
/// Sort key: conductor, class letters (length then lexicographic), index.
bool label_less(const std::string& a, const std::string& b);

std::string entry_to_json(const CatalogEntry& e);
CatalogEntry entry_from_json(const std::string& line);

/// JSON-lines cache keyed by label. Corrupt lines are skipped and reported in `warnings`;
/// a label appearing twice resolves to its last line.
std::map<std::string, CatalogEntry> read_cache(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
/// Writes all entries sorted by label through a temporary file and rename.
void write_cache(const std::filesystem::path& path, const std::map<std::string, CatalogEntry>& entries);

struct CatalogConfig {
  std::filesystem::path fixture_dir;     ///< holds curves.jsonl and class_counts.json
  std::optional<std::filesystem::path> cache_path;
  std::string endpoint;                  ///< e.g. "https://www.lmfdb.org"; empty disables remote
  bool offline = false;
  double min_request_interval = 1.0;     ///< seconds between remote requests
  int max_attempts = 4;
  double backoff_initial = 1.0;          ///< seconds, doubled per retry

  /// Fixture dir from the build, endpoint from MANIN_CATALOG_ENDPOINT when set.
  static CatalogConfig defaults();
};

class Catalog {
 public:
  explicit Catalog(CatalogConfig config);

  /// Every curve with conductor <= bound, sorted by label, complete per class sizes.
  std::vector<CatalogEntry> fetch_range(std::int64_t max_conductor);
  CatalogEntry fetch_curve(const std::string& label);

  std::int64_t fixture_max_conductor() const { return fixture_max_; }
  const std::string& snapshot() const { return snapshot_; }
  const std::vector<std::string>& warnings() const { return warnings_; }
  int remote_requests() const { return remote_requests_; }

 private:
  std::vector<CatalogEntry> fetch_remote_conductor(std::int64_t n);
  std::string http_get(const std::string& path_and_query);
  void persist(const std::vector<CatalogEntry>& entries);
  void check_complete(const std::vector<CatalogEntry>& entries, std::int64_t max_conductor, bool use_counts) const;

  CatalogConfig config_;
  std::map<std::string, CatalogEntry> fixtures_;
  std::map<std::int64_t, std::pair<int, int>> class_counts_;  ///< conductor -> (classes, curves)
  std::int64_t fixture_max_ = 0;
  std::string snapshot_;
  std::vector<std::string> warnings_;
  std::mutex mutex_;
  std::chrono::steady_clock::time_point last_request_{};
  int remote_requests_ = 0;
};

}  // namespace manin
