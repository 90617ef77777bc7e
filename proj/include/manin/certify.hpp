#pragma once

#include "manin/catalog.hpp"
#include "manin/elliptic.hpp"

#include "json.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace manin {

enum class Status { CertifiedZero, BoundedByOne, Unknown };
enum class Conclusion { ManinHolds, Bounded, Partial };
enum class Verdict { Applicable, NotApplicable, Indeterminate };

std::string to_string(Status s);
std::string to_string(Conclusion c);
std::string to_string(Verdict v);

struct CurveRecord {
  std::optional<std::string> label;
  MinimalModel model;
  std::int64_t conductor = 0;
  Factorization conductor_factors;
  std::optional<bool> is_optimal;
  std::string optimality_provenance;
  std::optional<Integer> degree;  ///< ingested
  std::optional<int> torsion_order;
  std::map<std::int64_t, std::string> kodaira;

  int ord(std::int64_t p) const;
  std::string display_label() const;

  static CurveRecord from_entry(const CatalogEntry& e, const std::string& snapshot = "");
  /// A curve given by its a-invariants; conductor and optimality are supplied by the caller.
  static CurveRecord from_model(const MinimalModel& m, std::int64_t conductor);
};

struct ComputedInputs {
  std::optional<Integer> degree;
  std::optional<Integer> r_f;
  std::optional<int> two_torsion_rank;
};

struct CriterionResult {
  std::string rule;
  std::int64_t prime = 2;
  Verdict verdict = Verdict::Indeterminate;
  std::string evidence;
};

/// MK1 (per odd prime of n), MK2, MK3, MK4, MM1, MM15, MM2, SHIM, EDIX (per odd p with ord_p(n) >= 2).
std::vector<CriterionResult> evaluate_criteria(const CurveRecord& c, const ComputedInputs& computed);

struct PrimeCertificate {
  std::int64_t p = 2;
  Status status = Status::Unknown;
  std::string rule;  ///< empty for Unknown
  std::string detail;
};

struct Certificate {
  std::string kind;     ///< "manin" or "stevens"
  std::string subject;  ///< curve or isogeny-class label
  std::int64_t conductor = 0;
  std::vector<PrimeCertificate> per_prime;
  Conclusion conclusion = Conclusion::Partial;
  std::vector<CriterionResult> criteria;
  std::vector<std::string> notes;

  const PrimeCertificate& at(std::int64_t p) const;
};

class NotOptimal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

Certificate certify_manin(const CurveRecord& c, const ComputedInputs& computed);
/// `manin` is the Gamma0 certificate of the optimal member, when available.
Certificate certify_stevens(std::int64_t n, const std::vector<CurveRecord>& class_curves,
                            const std::optional<Certificate>& manin = std::nullopt);

struct CensusRow {
  std::string label;
  std::int64_t conductor = 0;
  int ord2_delta = 0;
  std::string degree;          ///< as ingested
  int two_torsion_rank = 0;
  bool mm1 = false, mm15 = false;
  Verdict mm2 = Verdict::Indeterminate;
};

struct CensusReport {
  std::int64_t max_conductor = 0;
  std::string snapshot;
  std::string degree_provenance;
  std::vector<CensusRow> selected;
  std::vector<std::string> settled_mm1, remaining_after_mm1, settled_mm15, remaining;
};

/// The staged count over optimal curves with ord2(n) = 1 for which MK2-MK4 fail.
/// `covered_through` is the conductor up to which `data` is known complete.
CensusReport census(std::int64_t max_conductor, const std::vector<CatalogEntry>& data, std::int64_t covered_through,
                    const std::string& snapshot = "", unsigned workers = 1);

nlohmann::ordered_json to_json(const Certificate& c);
nlohmann::ordered_json to_json(const CensusReport& r);
std::string to_table(const Certificate& c);
std::string to_table(const CensusReport& r);

}  // namespace manin
