#pragma once

// Report data model and its serialisations (JSON report, plot CSV).

#include "ddm/rational.hpp"

#include "json.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ddm::report {

using Json = nlohmann::ordered_json;

enum class Status { Certified, Diagnostic, Violated };
std::string to_string(Status s);

/// A numeric value as written to reports: "p/q" when exact, else a double.
Json value_json(const Scalar& v, bool exact_mode);

struct Claim {
  std::string id;
  std::string anchor;  // what the inequality says, in words
  Json inputs = Json::object();
  Scalar lhs;
  std::string relation;  // "<=", ">=" or "=="
  Scalar rhs;
  bool rhs_infinite = false;
  double residual = 0.0;  // >= 0 when the relation holds
  Status status = Status::Diagnostic;
};

struct BracketSide {
  Scalar value;
  std::string kind;  // KStarRoute, CoverWitness, EndpointIdentity, GridCheck
  Json certificate = Json::object();
};

struct Bracket {
  std::string quantity;
  std::string query;
  BracketSide lower;
  BracketSide upper;
  bool certified = true;  // both sides certified
  bool valid = true;      // lower <= upper
};

struct Entry {
  std::string construction;
  std::string query;
  int D = 0;
  int L = 1;
  std::string epsilon;  // "limit" or a rational
  Scalar value;
  std::string witness;
  Json certificate = Json::object();
};

struct ScanRow {
  double alpha = 0.0;
  Scalar h_value;
  double psi2 = 0.0;
  std::optional<double> fwd_diff;
  std::optional<double> eql_bound_residual;
};

struct Scan {
  std::string query;
  std::vector<ScanRow> rows;
};

struct Report {
  std::string mode;
  bool exact_mode = true;
  Json run = Json::object();
  std::vector<Entry> entries;
  std::vector<Claim> claims;
  std::vector<Bracket> brackets;
  std::vector<Scan> scans;
  Json extras = Json::object();
  std::vector<std::string> warnings;

  /// Appends everything from `other` after the current contents.
  void merge(Report&& other);
  std::size_t count(Status s) const;
  bool any_violated() const;
};

Json to_json(const Report& r);
/// Pretty-printed JSON with a trailing newline.
std::string to_json_text(const Report& r);

/// RFC 4180 CSV (CRLF line ends) with header alpha,h_value,psi2,fwd_diff,eql_bound_residual
/// and, in exact mode, h_value_exact. Doubles are written with 15 significant digits.
std::string scan_csv(const Scan& s, bool exact_mode);
/// Parses a file written by scan_csv back into rows (used by round-trip tests).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// "%.15g".
std::string format15(double x);

/// Writes through a temporary file in the same directory, then renames.
void write_atomic(const std::string& path, const std::string& content);

}  // namespace ddm::report
