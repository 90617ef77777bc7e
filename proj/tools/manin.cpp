#include "manin/parallel.hpp"
#include "manin/pipeline.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace manin;
using nlohmann::ordered_json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kPartial = 3, kNotOptimal = 4, kCoverage = 5, kInconsistent = 6 };

struct Options {
  bool offline = false;
  std::string cache;
  std::string format = "table";
  unsigned workers = default_workers();
  std::int64_t level = 0;
  std::int64_t max_level = 1000;
  std::int64_t congruence_max_level = 300;
  std::string label;
  std::string ainvs;
  std::int64_t conductor = 0;
  bool assume_optimal = false;
  std::int64_t max_conductor = 0;
  double tol = 1e-8;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Catalog open_catalog(const Options& o) {
  CatalogConfig cfg = CatalogConfig::defaults();
  cfg.offline = o.offline;
  if (!o.cache.empty()) cfg.cache_path = o.cache;
  return Catalog(cfg);
}

std::array<std::int64_t, 5> parse_ainvs(const std::string& s) {
  std::array<std::int64_t, 5> a{};
  std::stringstream ss(s);
  std::string item;
  std::size_t i = 0;
  while (std::getline(ss, item, ',')) {
    if (i >= 5) throw UsageError("--ainvs takes exactly five comma-separated integers");
    std::size_t used = 0;
    try {
      a[i] = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw UsageError("--ainvs: '" + item + "' is not an integer");
    ++i;
  }
  if (i != 5) throw UsageError("--ainvs takes exactly five comma-separated integers");
  return a;
}

// Resolve --label or --ainvs to a curve record, with its catalog class when known.
std::pair<CurveRecord, std::vector<CurveRecord>> resolve(const Options& o, Catalog& cat) {
  if (o.label.empty() == o.ainvs.empty()) throw UsageError("give exactly one of --label and --ainvs");
  std::optional<CatalogEntry> entry;
  if (!o.label.empty()) {
    entry = cat.fetch_curve(o.label);
  } else {
    const MinimalModel m = minimal_model(WeierstrassModel::from_integers(parse_ainvs(o.ainvs)));
    if (cat.fixture_max_conductor() > 0)
      for (const auto& e : cat.fetch_range(cat.fixture_max_conductor()))
        if ((o.conductor == 0 || e.conductor == o.conductor) &&
            minimal_model(WeierstrassModel::from_integers(e.ainvs)).a == m.a) {
          entry = e;
          break;
        }
    if (!entry) {
      if (o.conductor == 0) throw UsageError("curve " + m.ainvs_string() + " is not in the catalog; give --conductor");
      CurveRecord r = CurveRecord::from_model(m, o.conductor);
      if (o.assume_optimal) {
        r.is_optimal = true;
        r.optimality_provenance = "asserted on the command line";
      }
      return {r, {r}};
    }
  }
  CurveRecord rec = CurveRecord::from_entry(*entry, cat.snapshot());
  std::vector<CurveRecord> cls;
  const CurveLabel l = parse_label(entry->label);
  if (l.conductor <= cat.fixture_max_conductor()) {
    for (const auto& e : cat.fetch_range(l.conductor)) {
      const CurveLabel k = parse_label(e.label);
      if (k.conductor == l.conductor && k.isogeny_class == l.isogeny_class) cls.push_back(CurveRecord::from_entry(e, cat.snapshot()));
    }
  } else {
    cls.push_back(rec);
  }
  return {rec, cls};
}

void emit(const Options& o, const std::string& command, ordered_json body, const std::string& table) {
  if (o.format == "json") {
    ordered_json j;
    j["schema_version"] = 1;
    j["command"] = command;
    for (auto& [k, v] : body.items()) j[k] = v;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << table;
  }
}

std::string ap_string(const RationalNewform& f) {
  std::string s;
  for (const auto& [p, a] : f.ap) s += (s.empty() ? "" : " ") + std::to_string(a);
  return s;
}

int run_analyze(const Options& o) {
  if (o.level < 1 || o.level > o.max_level)
    throw UsageError("level must be in [1, " + std::to_string(o.max_level) + "]");
  const bool with_r = o.level <= o.congruence_max_level;
  const LevelAnalysis a = analyze_level(o.level, with_r, o.workers);
  ordered_json forms = ordered_json::array();
  std::ostringstream t;
  t << "level " << a.level << ": genus " << a.genus << ", Sturm bound " << a.sturm << ", " << a.forms.size()
    << " rational newform(s)\n";
  if (!with_r) t << "congruence numbers skipped above level " << o.congruence_max_level << "\n";
  for (const auto& f : a.forms) {
    ordered_json ap = ordered_json::object();
    for (const auto& [p, v] : f.form.ap) ap[std::to_string(p)] = v;
    ordered_json w = ordered_json::object();
    for (const auto& [q, v] : f.form.sign_w) w[std::to_string(q)] = v;
    ordered_json j{{"newform", f.form.id()}, {"ap", ap}, {"atkin_lehner", w}, {"degree", f.degree.degree.get_str()},
                   {"homology_index", f.degree.index_used.get_str()}};
    j["congruence_number"] = f.r_f ? ordered_json(f.r_f->get_str()) : ordered_json(nullptr);
    j["gap_ord2"] = f.gap ? ordered_json(f.gap->gap) : ordered_json(nullptr);
    forms.push_back(j);
    t << "\n" << f.form.id() << "\n  a_p (p <= " << a.sturm << "): " << ap_string(f.form) << "\n  w: ";
    for (const auto& [q, v] : f.form.sign_w) t << q << (v > 0 ? "+ " : "- ");
    t << "\n  degree " << f.degree.degree << " (index " << f.degree.index_used << ")";
    if (f.r_f) t << ", r_f " << *f.r_f << ", ord2 gap " << f.gap->gap;
    t << "\n";
  }
  emit(o, "analyze",
       ordered_json{{"level", a.level}, {"genus", a.genus}, {"sturm_bound", a.sturm}, {"congruence_computed", with_r}, {"newforms", forms}},
       t.str());
  return kOk;
}

int run_certify(const Options& o) {
  Catalog cat = open_catalog(o);
  auto [rec, cls] = resolve(o, cat);
  if (!rec.is_optimal.value_or(false)) {
    std::string opt;
    for (const auto& c : cls)
      if (c.is_optimal.value_or(false)) opt = c.display_label();
    throw NotOptimal(rec.display_label() + " is not designated optimal" + (opt.empty() ? "" : "; the optimal curve in its class is " + opt));
  }
  const bool with_r = rec.conductor <= o.congruence_max_level;
  const CurveAnalysis a = analyze_curve(rec, with_r);
  const Certificate manin = certify_manin(rec, a.computed);
  const Certificate stevens = certify_stevens(rec.conductor, cls, manin);
  ordered_json computed{{"newform", a.form.id()},
                        {"degree", a.degree.degree.get_str()},
                        {"degree_ingested", rec.degree ? ordered_json(rec.degree->get_str()) : ordered_json(nullptr)},
                        {"congruence_number", a.computed.r_f ? ordered_json(a.computed.r_f->get_str()) : ordered_json(nullptr)},
                        {"two_torsion_rank", *a.computed.two_torsion_rank},
                        {"minimal_model", rec.model.ainvs_string()},
                        {"delta_min", rec.model.delta.get_str()}};
  std::ostringstream t;
  t << rec.display_label() << " " << rec.model.ainvs_string() << ", n = " << rec.conductor << ", newform " << a.form.id()
    << ", degree " << a.degree.degree;
  if (a.computed.r_f) t << ", r_f " << *a.computed.r_f;
  t << ", E(Q)[2] rank " << *a.computed.two_torsion_rank << "\n\n" << to_table(manin) << "\n" << to_table(stevens);
  emit(o, "certify", ordered_json{{"computed", computed}, {"certificate", to_json(manin)}, {"stevens", to_json(stevens)}}, t.str());
  return manin.conclusion == Conclusion::Partial ? kPartial : kOk;
}

int run_census(const Options& o) {
  if (o.max_conductor < 0) throw UsageError("--max-conductor must be non-negative");
  Catalog cat = open_catalog(o);
  const auto data = cat.fetch_range(o.max_conductor);
  const std::int64_t covered = o.max_conductor <= cat.fixture_max_conductor() ? cat.fixture_max_conductor() : o.max_conductor;
  const CensusReport r = census(o.max_conductor, data, covered, cat.snapshot(), o.workers);
  emit(o, "census", to_json(r), to_table(r));
  return kOk;
}

int run_numeric(const Options& o) {
  if (!(o.tol > 0)) throw UsageError("--tol must be positive");
  Catalog cat = open_catalog(o);
  const auto [rec, cls] = resolve(o, cat);
  const NumericManin n = numeric_manin(rec, o.tol);
  auto c = [](Complex z) { return ordered_json::array({static_cast<double>(z.real()), static_cast<double>(z.imag())}); };
  std::ostringstream t;
  t << std::setprecision(12) << rec.display_label() << " " << rec.model.ainvs_string() << "\n"
    << "  curve lattice:   " << static_cast<double>(n.curve.omega1.real()) << ", " << static_cast<double>(n.curve.omega2.real()) << " + "
    << static_cast<double>(n.curve.omega2.imag()) << "i (" << (n.curve.rectangular ? "rectangular" : "non-rectangular") << ")\n"
    << "  newform lattice: " << static_cast<double>(n.form.lattice.omega1.real()) << ", " << static_cast<double>(n.form.lattice.omega2.real())
    << " + " << static_cast<double>(n.form.lattice.omega2.imag()) << "i (" << n.form.terms << " terms)\n"
    << "  |c| = " << n.constant.value << ", ratio " << static_cast<double>(n.constant.ratio) << ", residual "
    << std::scientific << std::setprecision(2) << static_cast<double>(n.constant.residual) << "\n";
  std::ostringstream res;
  res << std::scientific << std::setprecision(3) << static_cast<double>(n.constant.residual);
  std::ostringstream ratio;
  ratio << std::setprecision(15) << static_cast<double>(n.constant.ratio);
  emit(o, "numeric",
       ordered_json{{"curve_label", rec.display_label()},
                    {"tolerance", o.tol},
                    {"curve_lattice", {{"omega1", c(n.curve.omega1)}, {"omega2", c(n.curve.omega2)}, {"rectangular", n.curve.rectangular}}},
                    {"newform_lattice", {{"omega1", c(n.form.lattice.omega1)}, {"omega2", c(n.form.lattice.omega2)}, {"terms", n.form.terms}}},
                    {"manin_constant", n.constant.value.get_str()},
                    {"ratio", ratio.str()},
                    {"residual", res.str()}},
       t.str());
  return kOk;
}

int run_selftest(const Options& o) {
  struct Check {
    std::string name;
    std::function<bool()> fn;
  };
  std::vector<Check> checks{
      {"level 11: one newform, degree 1, r_f 1",
       [] {
         const auto a = analyze_level(11, true);
         return a.forms.size() == 1 && a.forms[0].degree.degree == 1 && *a.forms[0].r_f == 1 && a.forms[0].form.ap.at(2) == -2;
       }},
      {"level 37: degrees 2, 2 and r_f 2, 2",
       [] {
         const auto a = analyze_level(37, true);
         return a.forms.size() == 2 && a.forms[0].degree.degree == 2 && a.forms[1].degree.degree == 2 && *a.forms[0].r_f == 2 &&
                *a.forms[1].r_f == 2;
       }},
      {"level 22: no newforms", [] { return analyze_level(22, false).forms.empty(); }},
      {"11a1 numeric Manin constant 1",
       [] {
         const auto r = CurveRecord::from_model(minimal_model(WeierstrassModel::from_integers({0, -1, 1, -10, -20})), 11);
         return numeric_manin(r, 1e-8L).constant.value == 1;
       }},
      {"census to 200: 62 / 47 / 15 / 10 / 5",
       [&] {
         Catalog cat = open_catalog(o);
         const auto r = census(200, cat.fetch_range(200), cat.fixture_max_conductor(), cat.snapshot(), o.workers);
         return r.selected.size() == 62 && r.settled_mm1.size() == 47 && r.remaining_after_mm1.size() == 15 &&
                r.settled_mm15.size() == 10 && r.remaining.size() == 5;
       }},
  };
  bool all = true;
  ordered_json results = ordered_json::array();
  std::ostringstream t;
  for (const auto& c : checks) {
    bool ok = false;
    std::string err;
    try {
      ok = c.fn();
    } catch (const std::exception& e) {
      err = e.what();
    }
    all = all && ok;
    results.push_back({{"check", c.name}, {"pass", ok}, {"error", err}});
    t << (ok ? "PASS  " : "FAIL  ") << c.name << (err.empty() ? "" : "  (" + err + ")") << "\n";
  }
  emit(o, "selftest", ordered_json{{"pass", all}, {"checks", results}}, t.str());
  return all ? kOk : kInconsistent;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Modular degrees, congruence numbers and Manin constant certificates"};
  app.require_subcommand(1);
  app.add_flag("--offline", o.offline, "never contact the remote catalog");
  app.add_option("--cache", o.cache, "JSON-lines catalog cache file");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--workers", o.workers, "worker threads")->check(CLI::Range(1u, 1024u));

  auto* analyze = app.add_subcommand("analyze", "rational newforms at a level with degrees and congruence numbers");
  analyze->add_option("level", o.level, "level N")->required();
  analyze->add_option("--max-level", o.max_level, "largest accepted level");
  analyze->add_option("--congruence-max-level", o.congruence_max_level, "compute r_f only up to this level");

  auto* certify = app.add_subcommand("certify", "certify ord_p of the Manin constant for an optimal curve");
  auto* numeric = app.add_subcommand("numeric", "numerical Manin constant from period lattices");
  for (auto* sub : {certify, numeric}) {
    auto* l = sub->add_option("--label", o.label, "catalog label, e.g. 11.a2");
    auto* a = sub->add_option("--ainvs", o.ainvs, "a1,a2,a3,a4,a6");
    l->excludes(a);
    sub->add_option("--conductor", o.conductor, "conductor for curves given by a-invariants outside the catalog");
  }
  certify->add_flag("--assume-optimal", o.assume_optimal, "treat an uncatalogued curve as optimal");
  certify->add_option("--congruence-max-level", o.congruence_max_level, "compute r_f only up to this level");
  numeric->add_option("--tol", o.tol, "absolute error bound");

  auto* census_cmd = app.add_subcommand("census", "reproduce the staged count of 2-adic criteria");
  census_cmd->add_option("--max-conductor", o.max_conductor, "conductor bound")->required();
  auto* selftest = app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (analyze->parsed()) return run_analyze(o);
    if (certify->parsed()) return run_certify(o);
    if (census_cmd->parsed()) return run_census(o);
    if (numeric->parsed()) return run_numeric(o);
    if (selftest->parsed()) return run_selftest(o);
  } catch (const NotOptimal& e) {
    std::cerr << "not optimal: " << e.what() << "\n";
    return kNotOptimal;
  } catch (const UsageError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const LabelParseError& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const NotFound& e) {
    std::cerr << "not found: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionError& e) {
    std::cerr << "tolerance not achievable: " << e.what() << "\n";
    return kUsage;
  } catch (const CoverageError& e) {
    std::cerr << "coverage: " << e.what() << "\n";
    return kCoverage;
  } catch (const Unavailable& e) {
    std::cerr << "coverage: " << e.what() << "\n";
    return kCoverage;
  } catch (const SingularCurve& e) {
    std::cerr << "usage: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return kInconsistent;
  }
  return kUsage;
}
