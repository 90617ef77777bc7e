#include "manin/certify.hpp"

#include "manin/invariants.hpp"
#include "manin/parallel.hpp"

#include <iomanip>
#include <set>
#include <sstream>

namespace manin {

using nlohmann::ordered_json;

std::string to_string(Status s) {
  switch (s) {
    case Status::CertifiedZero: return "CertifiedZero";
    case Status::BoundedByOne: return "BoundedByOne";
    case Status::Unknown: return "Unknown";
  }
  return "?";
}

std::string to_string(Conclusion c) {
  switch (c) {
    case Conclusion::ManinHolds: return "ManinHolds";
    case Conclusion::Bounded: return "Bounded";
    case Conclusion::Partial: return "Partial";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Applicable: return "applicable";
    case Verdict::NotApplicable: return "not_applicable";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

int CurveRecord::ord(std::int64_t p) const {
  for (const auto& [q, e] : conductor_factors)
    if (q == p) return e;
  return 0;
}

std::string CurveRecord::display_label() const { return label ? *label : model.ainvs_string(); }

CurveRecord CurveRecord::from_entry(const CatalogEntry& e, const std::string& snapshot) {
  CurveRecord r = from_model(minimal_model(WeierstrassModel::from_integers(e.ainvs)), e.conductor);
  r.label = e.label;
  r.is_optimal = e.optimal;
  r.optimality_provenance = "catalog designation (" + e.source + (snapshot.empty() ? "" : ", snapshot " + snapshot) +
                            (e.fetched_at.empty() ? "" : ", fetched " + e.fetched_at) + ")";
  if (e.modular_degree) r.degree = Integer(static_cast<long>(*e.modular_degree));
  r.torsion_order = e.torsion_order;
  r.kodaira = e.kodaira;
  return r;
}

CurveRecord CurveRecord::from_model(const MinimalModel& m, std::int64_t conductor) {
  if (conductor < 1) throw std::invalid_argument("conductor must be positive");
  CurveRecord r;
  r.model = m;
  r.conductor = conductor;
  r.conductor_factors = factor(conductor);
  std::int64_t back = 1;
  for (const auto& [p, e] : r.conductor_factors)
    for (int i = 0; i < e; ++i) back *= p;
  if (back != conductor) throw std::logic_error("conductor factorization does not multiply back");
  for (const auto& [p, e] : r.conductor_factors)
    if (m.delta % p != 0) throw std::invalid_argument("conductor prime " + std::to_string(p) + " does not divide the discriminant");
  return r;
}

namespace {

std::optional<Integer> effective_degree(const CurveRecord& c, const ComputedInputs& computed) {
  if (computed.degree && c.degree && *computed.degree != *c.degree)
    throw ConsistencyError("computed modular degree " + computed.degree->get_str() + " differs from ingested " +
                           c.degree->get_str() + " for " + c.display_label());
  if (computed.degree) return computed.degree;
  return c.degree;
}

CriterionResult rule(const std::string& id, std::int64_t p, bool ok, std::string evidence) {
  return {id, p, ok ? Verdict::Applicable : Verdict::NotApplicable, std::move(evidence)};
}

bool is_potentially_ordinary_type(const std::string& k) { return k == "II" || k == "III" || k == "IV"; }

}  // namespace

std::vector<CriterionResult> evaluate_criteria(const CurveRecord& c, const ComputedInputs& computed) {
  std::vector<CriterionResult> out;
  const std::int64_t n = c.conductor;
  const int o2 = c.ord(2);
  for (const auto& [p, e] : c.conductor_factors)
    if (p != 2)
      out.push_back(rule("MK1", p, e <= 1, "p = " + std::to_string(p) + " odd, ord_p(n) = " + std::to_string(e)));

  const std::string semistable = "ord_2(n) = " + std::to_string(o2);
  if (o2 >= 2) {
    for (const char* id : {"MK2", "MK3", "MK4", "MM1", "MM15", "MM2", "SHIM"})
      out.push_back(rule(id, 2, false, semistable + " >= 2: hypothesis ord_2(n) <= 1 fails"));
  } else {
    out.push_back(rule("MK2", 2, o2 == 0, semistable));
    const int od = valuation(c.model.delta, 2);
    out.push_back(rule("MK3", 2, od % 2 == 1, "ord_2(Delta_min) = " + std::to_string(od)));
    const auto deg = effective_degree(c, computed);
    if (!deg)
      out.push_back({"MK4", 2, Verdict::Indeterminate, "modular degree unavailable"});
    else
      out.push_back(rule("MK4", 2, *deg % 2 != 0,
                         "deg phi = " + deg->get_str() + (computed.degree ? " (computed)" : " (ingested)") +
                             "; the degree of X0(n) -> E does not depend on the chosen rational point"));
    std::string q3;
    for (const auto& [p, e] : c.conductor_factors)
      if (p % 4 == 3) q3 += (q3.empty() ? "" : ",") + std::to_string(p);
    out.push_back(rule("MM1", 2, !q3.empty(), q3.empty() ? "no prime q | n with q = 3 mod 4" : "q = " + q3 + " divides n, q = 3 mod 4"));
    const bool two_p = n % 2 == 0 && is_prime(n / 2) && n / 2 != 2;
    out.push_back(rule("MM15", 2, two_p, two_p ? "n = 2*" + std::to_string(n / 2) : "n is not twice a prime"));
    if (!computed.two_torsion_rank)
      out.push_back({"MM2", 2, Verdict::Indeterminate, "E(Q)[2] not computed"});
    else
      out.push_back(rule("MM2", 2, *computed.two_torsion_rank == 0,
                         *computed.two_torsion_rank == 0 ? "E(Q)[2] = 0"
                                                         : "E(Q)[2] has rank " + std::to_string(*computed.two_torsion_rank)));
    bool shim = false;
    std::string why = "n is not of the form 2*q^r";
    if (o2 == 1 && c.conductor_factors.size() == 2) {
      const std::int64_t q = c.conductor_factors[1].first;
      shim = q % 4 == 3 || q % 8 == 5;
      why = "n = 2*" + std::to_string(q) + "^" + std::to_string(c.conductor_factors[1].second) + ", q mod 8 = " +
            std::to_string(q % 8) + (shim ? ": Shimura subgroup has odd order" : "");
    }
    out.push_back(rule("SHIM", 2, shim, why));
  }
  for (const auto& [p, e] : c.conductor_factors) {
    if (p == 2 || e < 2) continue;
    const auto k = c.kodaira.find(p);
    if (p <= 7)
      out.push_back(rule("EDIX", p, false, "p = " + std::to_string(p) + " <= 7"));
    else if (k == c.kodaira.end())
      out.push_back({"EDIX", p, Verdict::Indeterminate, "Kodaira type at " + std::to_string(p) + " not ingested"});
    else
      out.push_back(rule("EDIX", p, !is_potentially_ordinary_type(k->second),
                         "Kodaira type " + k->second + " at p = " + std::to_string(p) +
                             (is_potentially_ordinary_type(k->second) ? " (II, III, IV excluded)" : "")));
  }
  return out;
}

const PrimeCertificate& Certificate::at(std::int64_t p) const {
  for (const auto& pc : per_prime)
    if (pc.p == p) return pc;
  throw std::out_of_range("certificate has no entry for p = " + std::to_string(p));
}

namespace {

const CriterionResult* find(const std::vector<CriterionResult>& cs, const std::string& id, std::int64_t p) {
  for (const auto& c : cs)
    if (c.rule == id && c.prime == p) return &c;
  return nullptr;
}

Conclusion aggregate(const std::vector<PrimeCertificate>& per_prime) {
  bool bounded = false;
  for (const auto& pc : per_prime) {
    if (pc.status == Status::Unknown) return Conclusion::Partial;
    if (pc.status == Status::BoundedByOne) bounded = true;
  }
  return bounded ? Conclusion::Bounded : Conclusion::ManinHolds;
}

std::vector<std::int64_t> primes_to_cover(const CurveRecord& c) {
  std::vector<std::int64_t> ps{2};
  for (const auto& [p, _] : c.conductor_factors)
    if (p != 2) ps.push_back(p);
  return ps;
}

}  // namespace

Certificate certify_manin(const CurveRecord& c, const ComputedInputs& computed) {
  if (!c.is_optimal.value_or(false))
    throw NotOptimal(c.display_label() + " is not designated optimal" +
                     (c.optimality_provenance.empty() ? "" : " by " + c.optimality_provenance) +
                     "; the criteria require a new elliptic optimal quotient of J0(n)");
  Certificate cert;
  cert.kind = "manin";
  cert.subject = c.display_label();
  cert.conductor = c.conductor;
  cert.criteria = evaluate_criteria(c, computed);
  cert.notes.push_back("optimality: " + (c.optimality_provenance.empty() ? std::string("asserted") : c.optimality_provenance));
  cert.notes.push_back("odd primes p not dividing n: ord_p(c) = 0 by MK1 (c is an integer)");
  for (std::int64_t p : primes_to_cover(c)) {
    PrimeCertificate pc{p, Status::Unknown, "", ""};
    const int e = c.ord(p);
    if (p != 2 && e <= 1) {
      pc = {p, Status::CertifiedZero, "MK1", "p odd and ord_p(n) = " + std::to_string(e) + " <= 1"};
    } else if (p == 2 && e <= 1) {
      for (const char* id : {"MK2", "MK3", "MK4", "MM1", "MM15", "MM2", "SHIM"}) {
        const CriterionResult* r = find(cert.criteria, id, 2);
        if (r && r->verdict == Verdict::Applicable) {
          pc = {2, Status::CertifiedZero, id, r->evidence};
          break;
        }
      }
      if (pc.status == Status::Unknown)
        pc = {2, Status::BoundedByOne, "MR", "ord_2(n) = " + std::to_string(e) +
                                                 " <= 1 bounds ord_2(c) <= 1; no 2-adic vanishing criterion applies"};
    } else {
      const CriterionResult* r = p == 2 ? nullptr : find(cert.criteria, "EDIX", p);
      if (r && r->verdict == Verdict::Applicable)
        pc = {p, Status::CertifiedZero, "EDIX", r->evidence};
      else
        pc = {p, Status::Unknown, "", "ord_p(n) = " + std::to_string(e) + " >= 2" + (r ? "; EDIX: " + r->evidence : "")};
    }
    cert.per_prime.push_back(pc);
  }
  cert.conclusion = aggregate(cert.per_prime);
  return cert;
}

Certificate certify_stevens(std::int64_t n, const std::vector<CurveRecord>& class_curves, const std::optional<Certificate>& manin) {
  if (class_curves.empty()) throw std::invalid_argument("certify_stevens: empty isogeny class");
  std::set<std::string> classes;
  for (const auto& c : class_curves) {
    if (c.conductor != n) throw std::invalid_argument("certify_stevens: curve of conductor " + std::to_string(c.conductor) + " in a level " + std::to_string(n) + " class");
    if (c.label) {
      const CurveLabel l = parse_label(*c.label);
      classes.insert(std::to_string(l.conductor) + "." + l.isogeny_class);
    }
  }
  if (classes.size() > 1) throw std::invalid_argument("certify_stevens: curves from more than one isogeny class");
  Certificate cert;
  cert.kind = "stevens";
  cert.subject = classes.empty() ? class_curves.front().display_label() : *classes.begin();
  cert.conductor = n;
  const CurveRecord& any = class_curves.front();
  const bool manin_holds = manin && manin->conclusion == Conclusion::ManinHolds;
  for (std::int64_t p : primes_to_cover(any)) {
    const int e = any.ord(p);
    if (e <= 1)
      cert.per_prime.push_back({p, Status::CertifiedZero, "ST1", "ord_p(n) = " + std::to_string(e) + " <= 1"});
    else if (manin_holds)
      cert.per_prime.push_back({p, Status::CertifiedZero, "TRANSFER",
                                "c(Gamma0) = c(Gamma1) * #Coker with c(Gamma1) integral, and c(Gamma0) = +-1 is certified"});
    else
      cert.per_prime.push_back({p, Status::Unknown, "", "ord_p(n) = " + std::to_string(e) + " >= 2"});
  }
  if (manin)
    cert.notes.push_back(std::string("Gamma0 certificate for ") + manin->subject + ": " + to_string(manin->conclusion) +
                         (manin_holds ? "; Manin for the Gamma0-optimal curve implies Stevens for the Gamma1-optimal curve"
                                      : "") +
                         " (the cokernel order in c(Gamma0) = c(Gamma1) * #Coker is not computed)");
  cert.conclusion = aggregate(cert.per_prime);
  return cert;
}

CensusReport census(std::int64_t max_conductor, const std::vector<CatalogEntry>& data, std::int64_t covered_through,
                    const std::string& snapshot, unsigned workers) {
  if (covered_through < max_conductor)
    throw CoverageError("census up to " + std::to_string(max_conductor) + " needs complete data, which stops at " +
                        std::to_string(covered_through));
  std::map<std::string, std::vector<const CatalogEntry*>> classes;
  for (const auto& e : data) {
    if (e.conductor > max_conductor) continue;
    const CurveLabel l = parse_label(e.label);
    classes[std::to_string(l.conductor) + "." + l.isogeny_class].push_back(&e);
  }
  std::vector<std::string> keys;
  for (const auto& [k, v] : classes) {
    if (static_cast<int>(v.size()) != v.front()->class_size)
      throw CoverageError("isogeny class " + k + " is incomplete in the census data");
    keys.push_back(k);
  }
  std::sort(keys.begin(), keys.end(), [](const std::string& a, const std::string& b) { return label_less(a + "1", b + "1"); });

  auto rows = parallel_map<std::vector<CensusRow>>(keys.size(), workers, [&](std::size_t i) {
    std::vector<CensusRow> out;
    for (const CatalogEntry* e : classes.at(keys[i])) {
      if (!e->optimal) continue;
      const CurveRecord rec = CurveRecord::from_entry(*e, snapshot);
      if (rec.ord(2) != 1) continue;
      ComputedInputs in;
      in.two_torsion_rank = two_torsion_rank(rec.model);
      if (rec.torsion_order && ((*in.two_torsion_rank == 0) != (*rec.torsion_order % 2 == 1)))
        throw ConsistencyError(e->label + ": E(Q)[2] rank disagrees with the ingested torsion order");
      const auto crit = evaluate_criteria(rec, in);
      auto verdict = [&](const char* id) { return find(crit, id, 2)->verdict; };
      if (verdict("MK2") == Verdict::Applicable || verdict("MK3") == Verdict::Applicable ||
          verdict("MK4") == Verdict::Applicable)
        continue;
      CensusRow row;
      row.label = e->label;
      row.conductor = e->conductor;
      row.ord2_delta = valuation(rec.model.delta, 2);
      row.degree = rec.degree ? rec.degree->get_str() : "?";
      row.two_torsion_rank = *in.two_torsion_rank;
      row.mm1 = verdict("MM1") == Verdict::Applicable;
      row.mm15 = verdict("MM15") == Verdict::Applicable;
      row.mm2 = verdict("MM2");
      out.push_back(row);
    }
    return out;
  });

  CensusReport r;
  r.max_conductor = max_conductor;
  r.snapshot = snapshot;
  r.degree_provenance = "ingested catalog modular degrees";
  for (auto& v : rows)
    for (auto& row : v) r.selected.push_back(std::move(row));
  for (const auto& row : r.selected) {
    if (row.mm1) {
      r.settled_mm1.push_back(row.label);
      continue;
    }
    r.remaining_after_mm1.push_back(row.label);
    if (row.mm15)
      r.settled_mm15.push_back(row.label);
    else
      r.remaining.push_back(row.label);
  }
  return r;
}

ordered_json to_json(const Certificate& c) {
  ordered_json j;
  j["kind"] = c.kind;
  j["curve_label"] = c.subject;
  j["conductor"] = c.conductor;
  j["conclusion"] = to_string(c.conclusion);
  ordered_json primes = ordered_json::array();
  for (const auto& pc : c.per_prime)
    primes.push_back({{"curve_label", c.subject}, {"prime", pc.p}, {"status", to_string(pc.status)}, {"rule", pc.rule}, {"detail", pc.detail}});
  j["primes"] = primes;
  ordered_json crit = ordered_json::array();
  for (const auto& r : c.criteria)
    crit.push_back({{"rule", r.rule}, {"prime", r.prime}, {"verdict", to_string(r.verdict)}, {"detail", r.evidence}});
  j["criteria"] = crit;
  j["notes"] = c.notes;
  return j;
}

ordered_json to_json(const CensusReport& r) {
  ordered_json j;
  j["max_conductor"] = r.max_conductor;
  j["snapshot"] = r.snapshot;
  j["degree_provenance"] = r.degree_provenance;
  j["counts"] = {{"selected", r.selected.size()},
                 {"settled_mm1", r.settled_mm1.size()},
                 {"remaining_after_mm1", r.remaining_after_mm1.size()},
                 {"settled_mm15", r.settled_mm15.size()},
                 {"remaining", r.remaining.size()}};
  ordered_json sel = ordered_json::array();
  for (const auto& row : r.selected)
    sel.push_back({{"curve_label", row.label},
                   {"conductor", row.conductor},
                   {"ord2_delta", row.ord2_delta},
                   {"modular_degree", row.degree},
                   {"two_torsion_rank", row.two_torsion_rank},
                   {"MM1", row.mm1},
                   {"MM15", row.mm15},
                   {"MM2", to_string(row.mm2)}});
  j["selected"] = sel;
  j["settled_mm1"] = r.settled_mm1;
  j["remaining_after_mm1"] = r.remaining_after_mm1;
  j["settled_mm15"] = r.settled_mm15;
  ordered_json rem = ordered_json::array();
  for (const auto& row : r.selected)
    if (!row.mm1 && !row.mm15)
      rem.push_back({{"curve_label", row.label}, {"two_torsion_rank", row.two_torsion_rank}, {"MM2", to_string(row.mm2)}});
  j["remaining"] = rem;
  return j;
}

namespace {

std::string table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> w;
  for (const auto& r : rows)
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (w.size() <= i) w.push_back(0);
      w[i] = std::max(w[i], r[i].size());
    }
  std::ostringstream os;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << r[i];
      if (i + 1 < r.size()) os << std::string(w[i] - r[i].size() + 2, ' ');
    }
    os << "\n";
  }
  return os.str();
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ", ") + x;
  return s.empty() ? "-" : s;
}

}  // namespace

std::string to_table(const Certificate& c) {
  std::ostringstream os;
  os << c.kind << " certificate for " << c.subject << " (n = " << c.conductor << "): " << to_string(c.conclusion) << "\n\n";
  std::vector<std::vector<std::string>> rows{{"prime", "status", "rule", "detail"}};
  for (const auto& pc : c.per_prime) rows.push_back({std::to_string(pc.p), to_string(pc.status), pc.rule.empty() ? "-" : pc.rule, pc.detail});
  os << table(rows);
  if (!c.criteria.empty()) {
    os << "\n";
    std::vector<std::vector<std::string>> cr{{"criterion", "prime", "verdict", "evidence"}};
    for (const auto& r : c.criteria) cr.push_back({r.rule, std::to_string(r.prime), to_string(r.verdict), r.evidence});
    os << table(cr);
  }
  for (const auto& n : c.notes) os << "note: " << n << "\n";
  return os.str();
}

std::string to_table(const CensusReport& r) {
  std::ostringstream os;
  os << "census, conductor <= " << r.max_conductor << (r.snapshot.empty() ? "" : ", snapshot " + r.snapshot) << "\n";
  os << "selected (optimal, ord_2(n) = 1, MK2-MK4 fail): " << r.selected.size() << "\n";
  os << "settled by MM1: " << r.settled_mm1.size() << "\n";
  os << "remaining: " << r.remaining_after_mm1.size() << "  " << join(r.remaining_after_mm1) << "\n";
  os << "settled by MM15: " << r.settled_mm15.size() << "\n";
  os << "remaining: " << r.remaining.size() << "  " << join(r.remaining) << "\n\n";
  std::vector<std::vector<std::string>> rows{{"label", "ord2(Delta)", "degree", "E(Q)[2] rank", "MM1", "MM15", "MM2"}};
  for (const auto& row : r.selected)
    rows.push_back({row.label, std::to_string(row.ord2_delta), row.degree, std::to_string(row.two_torsion_rank),
                    row.mm1 ? "yes" : "no", row.mm15 ? "yes" : "no", to_string(row.mm2)});
  os << table(rows);
  return os.str();
}

}  // namespace manin
