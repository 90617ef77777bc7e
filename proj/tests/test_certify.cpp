#include "doctest.h"
#include "manin/certify.hpp"
#include "manin/invariants.hpp"

#include <algorithm>

using namespace manin;

namespace {

Catalog& catalog() {
  static Catalog cat = [] {
    CatalogConfig cfg = CatalogConfig::defaults();
    cfg.offline = true;
    return Catalog(cfg);
  }();
  return cat;
}

CurveRecord record(const std::string& label) { return CurveRecord::from_entry(catalog().fetch_curve(label)); }

ComputedInputs inputs(const CurveRecord& c) {
  ComputedInputs in;
  in.degree = c.degree;
  in.two_torsion_rank = two_torsion_rank(c.model);
  return in;
}

std::vector<CurveRecord> class_of(const std::string& cls) {
  std::vector<CurveRecord> out;
  const CurveLabel l = parse_label(cls + "1");
  for (const auto& e : catalog().fetch_range(l.conductor))
    if (e.label.rfind(cls, 0) == 0 && parse_label(e.label).isogeny_class == l.isogeny_class)
      out.push_back(CurveRecord::from_entry(e));
  return out;
}

const CurveRecord& optimal_in(const std::vector<CurveRecord>& cs) {
  return *std::find_if(cs.begin(), cs.end(), [](const CurveRecord& c) { return c.is_optimal.value_or(false); });
}

bool contains(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }

}  // namespace

TEST_CASE("certify_manin examples") {
  const auto c530 = record("530.a1");
  const auto cert = certify_manin(c530, inputs(c530));
  CHECK(cert.conclusion == Conclusion::ManinHolds);
  CHECK(cert.at(2).rule == "MM2");
  CHECK(cert.at(5).rule == "MK1");
  CHECK(cert.at(53).rule == "MK1");

  const auto c11 = record("11.a2");
  const auto odd = certify_manin(c11, inputs(c11));
  CHECK(odd.conclusion == Conclusion::ManinHolds);
  CHECK(odd.at(11).status == Status::CertifiedZero);
  CHECK(odd.at(2).rule == "MK2");

  // 34 = 2 * 17: settled at 2 by MM15 once MK2-MK4 and MM1 fail.
  const auto c34 = optimal_in(class_of("34.a"));
  const auto c = certify_manin(c34, inputs(c34));
  CHECK(c.conclusion == Conclusion::ManinHolds);
  CHECK(c.at(2).rule == "MM15");

  const auto c130 = record("130.a2");
  const auto b = certify_manin(c130, inputs(c130));
  CHECK(b.conclusion == Conclusion::Bounded);
  CHECK(b.at(2).status == Status::BoundedByOne);
  CHECK(b.at(2).rule == "MR");
}

TEST_CASE("ord_p(n) >= 2 at odd p leaves the prime open unless EDIX applies") {
  const auto c99 = optimal_in(class_of("99.a"));
  const auto cert = certify_manin(c99, inputs(c99));
  CHECK(cert.at(3).status == Status::Unknown);
  CHECK(cert.conclusion == Conclusion::Partial);
}

TEST_CASE("non-optimal curves are refused") {
  const auto c = record("11.a1");
  CHECK_THROWS_AS(certify_manin(c, inputs(c)), NotOptimal);
  auto unknown = CurveRecord::from_model(c.model, 11);
  CHECK_THROWS_AS(certify_manin(unknown, {}), NotOptimal);
}

TEST_CASE("inconsistent degree inputs are rejected") {
  const auto c = record("37.a1");
  ComputedInputs in = inputs(c);
  in.degree = 3;
  CHECK_THROWS_AS(certify_manin(c, in), ConsistencyError);
}

TEST_CASE("certify_stevens") {
  const auto cls = class_of("130.a");
  const auto st = certify_stevens(130, cls);
  for (const auto& pc : st.per_prime) CHECK(pc.rule == "ST1");
  CHECK(st.conclusion == Conclusion::ManinHolds);
  CHECK(st.subject == "130.a");

  const auto c99 = class_of("99.a");
  const auto open = certify_stevens(99, c99);
  CHECK(open.at(3).status == Status::Unknown);
  CHECK(open.at(11).rule == "ST1");

  // Certified Manin for the Gamma0-optimal curve transfers to every prime.
  const auto c50 = class_of("50.a");
  const auto& opt = optimal_in(c50);
  Certificate fake = certify_manin(opt, inputs(opt));
  fake.conclusion = Conclusion::ManinHolds;
  const auto t = certify_stevens(50, c50, fake);
  CHECK(t.at(5).rule == "TRANSFER");
  CHECK_THROWS_AS(certify_stevens(51, c50), std::invalid_argument);
  CHECK_THROWS_AS(certify_stevens(50, {}), std::invalid_argument);
}

TEST_CASE("audit replay and monotonicity over optimal curves, N <= 300") {
  for (const auto& e : catalog().fetch_range(300)) {
    if (!e.optimal) continue;
    const auto c = CurveRecord::from_entry(e);
    const auto full = certify_manin(c, inputs(c));
    const auto bare = certify_manin(c, ComputedInputs{});
    INFO(e.label);
    for (const auto& pc : full.per_prime) {
      if (pc.status != Status::CertifiedZero) continue;
      const auto it = std::find_if(full.criteria.begin(), full.criteria.end(),
                                   [&](const CriterionResult& r) { return r.rule == pc.rule && r.prime == pc.p; });
      REQUIRE(it != full.criteria.end());
      CHECK(it->verdict == Verdict::Applicable);
    }
    // More inputs never lose a certified prime.
    for (const auto& pc : bare.per_prime)
      if (pc.status == Status::CertifiedZero) CHECK(full.at(pc.p).status == Status::CertifiedZero);
    CHECK(static_cast<int>(full.conclusion) <= static_cast<int>(bare.conclusion));
  }
}

TEST_CASE("census") {
  const auto data = catalog().fetch_range(600);
  const auto snap = catalog().snapshot();
  CHECK(census(10, data, 600, snap).selected.empty());
  const auto r40 = census(40, data, 600, snap);
  std::vector<std::string> labels;
  for (const auto& row : r40.selected) labels.push_back(row.label);
  CHECK(contains(labels, "30.a8"));
  CHECK(contains(labels, "34.a4"));
  CHECK(contains(r40.settled_mm1, "30.a8"));
  CHECK(contains(r40.settled_mm15, "34.a4"));

  const auto full = census(200, data, 600, snap, 4);
  CHECK(full.selected.size() == 62);
  CHECK(full.settled_mm1.size() == 47);
  CHECK(full.remaining_after_mm1.size() == 15);
  CHECK(full.settled_mm15.size() == 10);
  CHECK(full.remaining.size() == 5);
  CHECK(to_json(census(200, data, 600, snap, 1)).dump() == to_json(full).dump());
  CHECK_THROWS_AS(census(700, data, 600, snap), CoverageError);
}

TEST_CASE("certificate JSON carries the per-prime fields") {
  const auto c = record("530.a1");
  const auto j = to_json(certify_manin(c, inputs(c)));
  CHECK(j["conclusion"] == "ManinHolds");
  REQUIRE(j["primes"].size() == 3);
  for (const auto& p : j["primes"]) {
    CHECK(p.contains("curve_label"));
    CHECK(p.contains("prime"));
    CHECK(p.contains("status"));
    CHECK(p.contains("rule"));
    CHECK(p.contains("detail"));
    CHECK(p["curve_label"] == "530.a1");
  }
  CHECK(!to_table(certify_manin(c, inputs(c))).empty());
}
