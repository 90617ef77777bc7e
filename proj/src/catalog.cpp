#include "manin/catalog.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#ifndef MANIN_DATA_DIR
#define MANIN_DATA_DIR "data"
#endif

namespace manin {

using nlohmann::json;

namespace {

std::string now_utc() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json to_json_object(const CatalogEntry& e) {
  json j;
  j["label"] = e.label;
  if (!e.cremona_label.empty()) j["cremona_label"] = e.cremona_label;
  j["conductor"] = e.conductor;
  j["ainvs"] = e.ainvs;
  j["optimal"] = e.optimal;
  if (e.modular_degree) j["modular_degree"] = *e.modular_degree;
  j["torsion_order"] = e.torsion_order;
  j["class_size"] = e.class_size;
  if (!e.kodaira.empty()) {
    json k = json::object();
    for (const auto& [p, t] : e.kodaira) k[std::to_string(p)] = t;
    j["kodaira"] = k;
  }
  j["source"] = e.source;
  j["fetched_at"] = e.fetched_at;
  return j;
}

CatalogEntry from_json_object(const json& j) {
  CatalogEntry e;
  e.label = j.at("label").get<std::string>();
  e.cremona_label = j.value("cremona_label", "");
  e.conductor = j.at("conductor").get<std::int64_t>();
  e.ainvs = j.at("ainvs").get<std::array<std::int64_t, 5>>();
  e.optimal = j.at("optimal").get<bool>();
  if (j.contains("modular_degree") && !j["modular_degree"].is_null()) e.modular_degree = j["modular_degree"].get<std::int64_t>();
  e.torsion_order = j.value("torsion_order", 1);
  e.class_size = j.value("class_size", 1);
  if (j.contains("kodaira"))
    for (const auto& [p, t] : j["kodaira"].items()) e.kodaira[std::stoll(p)] = t.get<std::string>();
  e.source = j.value("source", "fixture");
  e.fetched_at = j.value("fetched_at", "");
  const CurveLabel l = parse_label(e.label);
  if (l.conductor != e.conductor) throw std::invalid_argument("catalog entry " + e.label + ": conductor does not match label");
  return e;
}

}  // namespace

CurveLabel parse_label(const std::string& label) {
  static const std::regex re(R"(([1-9][0-9]{0,17})\.([a-z]+)([1-9][0-9]{0,4}))");
  std::smatch m;
  if (!std::regex_match(label, m, re)) throw LabelParseError("malformed curve label '" + label + "'");
  return {std::stoll(m[1]), m[2], std::stoi(m[3])};
}

bool label_less(const std::string& a, const std::string& b) {
  const CurveLabel x = parse_label(a), y = parse_label(b);
  return std::tuple(x.conductor, x.isogeny_class.size(), x.isogeny_class, x.index) <
         std::tuple(y.conductor, y.isogeny_class.size(), y.isogeny_class, y.index);
}

std::string entry_to_json(const CatalogEntry& e) { return to_json_object(e).dump(); }

CatalogEntry entry_from_json(const std::string& line) { return from_json_object(json::parse(line)); }

std::map<std::string, CatalogEntry> read_cache(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::map<std::string, CatalogEntry> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    try {
      CatalogEntry e = entry_from_json(line);
      const std::string key = e.label;
      out.insert_or_assign(key, std::move(e));
    } catch (const std::exception& ex) {
      const std::string msg = path.string() + ":" + std::to_string(lineno) + ": skipped corrupt entry (" + ex.what() + ")";
      if (warnings) warnings->push_back(msg);
      std::cerr << "warning: " << msg << "\n";
    }
  }
  return out;
}

void write_cache(const std::filesystem::path& path, const std::map<std::string, CatalogEntry>& entries) {
  std::vector<const CatalogEntry*> sorted;
  for (const auto& [_, e] : entries) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return label_less(a->label, b->label); });
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id()));
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache file " + tmp.string());
    for (const auto* e : sorted) out << entry_to_json(*e) << "\n";
    if (!out.flush()) throw std::runtime_error("cannot write cache file " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CatalogConfig CatalogConfig::defaults() {
  CatalogConfig c;
  c.fixture_dir = std::filesystem::path(MANIN_DATA_DIR) / "fixtures";
  if (const char* env = std::getenv("MANIN_DATA_DIR")) c.fixture_dir = std::filesystem::path(env) / "fixtures";
  c.endpoint = "https://www.lmfdb.org";
  if (const char* env = std::getenv("MANIN_CATALOG_ENDPOINT")) c.endpoint = env;
  return c;
}

Catalog::Catalog(CatalogConfig config) : config_(std::move(config)) {
  const auto curves = config_.fixture_dir / "curves.jsonl";
  const auto counts = config_.fixture_dir / "class_counts.json";
  if (std::filesystem::exists(curves) && std::filesystem::exists(counts)) {
    fixtures_ = read_cache(curves, &warnings_);
    std::ifstream in(counts);
    const json j = json::parse(in);
    fixture_max_ = j.at("max_conductor").get<std::int64_t>();
    snapshot_ = j.value("snapshot", "");
    for (const auto& [n, v] : j.at("conductors").items())
      class_counts_[std::stoll(n)] = {v.at("classes").get<int>(), v.at("curves").get<int>()};
  }
}

void Catalog::check_complete(const std::vector<CatalogEntry>& entries, std::int64_t max_conductor, bool use_counts) const {
  std::map<std::string, std::pair<int, int>> classes;  // "N.x" -> (seen, class_size)
  std::map<std::int64_t, std::pair<std::set<std::string>, int>> per_conductor;
  for (const auto& e : entries) {
    const CurveLabel l = parse_label(e.label);
    const std::string key = std::to_string(l.conductor) + "." + l.isogeny_class;
    auto& c = classes[key];
    ++c.first;
    c.second = e.class_size;
    per_conductor[l.conductor].first.insert(key);
    ++per_conductor[l.conductor].second;
  }
  for (const auto& [key, c] : classes)
    if (c.first != c.second)
      throw CoverageError("isogeny class " + key + " has " + std::to_string(c.first) + " of " + std::to_string(c.second) +
                          " curves");
  if (!use_counts) return;
  for (const auto& [n, expected] : class_counts_) {
    if (n > max_conductor) break;
    const auto it = per_conductor.find(n);
    const int cls = it == per_conductor.end() ? 0 : static_cast<int>(it->second.first.size());
    const int crv = it == per_conductor.end() ? 0 : it->second.second;
    if (cls != expected.first || crv != expected.second)
      throw CoverageError("conductor " + std::to_string(n) + ": expected " + std::to_string(expected.first) + " classes / " +
                          std::to_string(expected.second) + " curves, have " + std::to_string(cls) + " / " + std::to_string(crv));
  }
  for (const auto& [n, _] : per_conductor)
    if (!class_counts_.count(n)) throw CoverageError("conductor " + std::to_string(n) + " is absent from the class counts");
}

void Catalog::persist(const std::vector<CatalogEntry>& entries) {
  if (!config_.cache_path) return;
  std::lock_guard lock(mutex_);
  auto cached = read_cache(*config_.cache_path, &warnings_);
  for (const auto& e : entries) cached.insert_or_assign(e.label, e);
  write_cache(*config_.cache_path, cached);
}

std::vector<CatalogEntry> Catalog::fetch_range(std::int64_t max_conductor) {
  std::vector<CatalogEntry> out;
  if (max_conductor <= 0) return out;
  if (!fixtures_.empty() && max_conductor <= fixture_max_) {
    for (const auto& [_, e] : fixtures_)
      if (e.conductor <= max_conductor) out.push_back(e);
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return label_less(a.label, b.label); });
    check_complete(out, max_conductor, true);
    persist(out);
    return out;
  }
  if (config_.offline || config_.endpoint.empty())
    throw Unavailable("no fixture coverage for conductor <= " + std::to_string(max_conductor) +
                      (fixtures_.empty() ? " (fixture set missing)" : " (fixtures stop at " + std::to_string(fixture_max_) + ")") +
                      " and remote access is disabled");
  for (std::int64_t n = 1; n <= max_conductor; ++n) {
    auto part = fetch_remote_conductor(n);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return label_less(a.label, b.label); });
  check_complete(out, max_conductor, false);
  persist(out);
  return out;
}

CatalogEntry Catalog::fetch_curve(const std::string& label) {
  const CurveLabel l = parse_label(label);
  if (config_.cache_path) {
    std::lock_guard lock(mutex_);
    const auto cached = read_cache(*config_.cache_path, &warnings_);
    if (const auto it = cached.find(label); it != cached.end()) return it->second;
  }
  if (const auto it = fixtures_.find(label); it != fixtures_.end()) return it->second;
  if (!fixtures_.empty() && l.conductor <= fixture_max_) throw NotFound("unknown curve label " + label);
  if (config_.offline || config_.endpoint.empty())
    throw NotFound("curve " + label + " is not in the fixtures or cache and remote access is disabled");
  for (auto& e : fetch_remote_conductor(l.conductor))
    if (e.label == label) {
      persist({e});
      return e;
    }
  throw NotFound("unknown curve label " + label);
}

std::string Catalog::http_get(const std::string& path_and_query) {
  double backoff = config_.backoff_initial;
  std::string last_error;
  for (int attempt = 1; attempt <= config_.max_attempts; ++attempt) {
    {
      std::lock_guard lock(mutex_);
      const auto gap = std::chrono::duration<double>(config_.min_request_interval);
      const auto wait = last_request_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(gap) -
                        std::chrono::steady_clock::now();
      if (remote_requests_ > 0 && wait.count() > 0) std::this_thread::sleep_for(wait);
      last_request_ = std::chrono::steady_clock::now();
      ++remote_requests_;
    }
    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    client.set_follow_location(true);
    const auto res = client.Get(path_and_query);
    if (res && res->status == 200) {
      if (json::accept(res->body)) return res->body;
      last_error = "malformed or partial response body";
    } else {
      last_error = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
    }
    if (attempt < config_.max_attempts) {
      std::this_thread::sleep_for(std::chrono::duration<double>(backoff));
      backoff *= 2;
    }
  }
  throw Unavailable("catalog request " + path_and_query + " failed after " + std::to_string(config_.max_attempts) +
                    " attempts: " + last_error);
}

std::vector<CatalogEntry> Catalog::fetch_remote_conductor(std::int64_t n) {
  std::vector<CatalogEntry> out;
  const std::string stamp = now_utc();
  for (std::int64_t offset = 0;;) {
    const std::string query = "/api/ec_curvedata/?_format=json&conductor=i" + std::to_string(n) +
                              "&_fields=lmfdb_label,Clabel,conductor,ainvs,optimality,degree,torsion,class_size&_offset=" +
                              std::to_string(offset);
    const json page = json::parse(http_get(query));
    const json& data = page.at("data");
    for (const auto& row : data) {
      CatalogEntry e;
      e.label = row.at("lmfdb_label").get<std::string>();
      e.cremona_label = row.value("Clabel", "");
      e.conductor = row.at("conductor").get<std::int64_t>();
      e.ainvs = row.at("ainvs").get<std::array<std::int64_t, 5>>();
      e.optimal = row.value("optimality", 0) == 1;
      if (row.contains("degree") && !row["degree"].is_null() && e.optimal) e.modular_degree = row["degree"].get<std::int64_t>();
      e.torsion_order = row.value("torsion", 1);
      e.class_size = row.value("class_size", 1);
      e.source = "remote";
      e.fetched_at = stamp;
      if (parse_label(e.label).conductor != e.conductor || e.conductor != n)
        throw Unavailable("catalog returned inconsistent entry " + e.label);
      out.push_back(std::move(e));
    }
    if (!page.contains("next") || page["next"].is_null() || data.empty()) break;
    offset += static_cast<std::int64_t>(data.size());
  }
  return out;
}

}  // namespace manin
