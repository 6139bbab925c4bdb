#include "ddm/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace ddm::report {

std::string to_string(Status s) {
  switch (s) {
    case Status::Certified: return "certified";
    case Status::Diagnostic: return "diagnostic";
    default: return "violated";
  }
}

namespace {

Json double_json(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace

Json value_json(const Scalar& v, bool exact_mode) {
  if (exact_mode && v.is_exact()) return ddm::to_string(*v.exact);
  return double_json(v.approx);
}

void Report::merge(Report&& o) {
  for (auto& e : o.entries) entries.push_back(std::move(e));
  for (auto& c : o.claims) claims.push_back(std::move(c));
  for (auto& b : o.brackets) brackets.push_back(std::move(b));
  for (auto& s : o.scans) scans.push_back(std::move(s));
  for (auto& w : o.warnings) warnings.push_back(std::move(w));
  for (auto& [k, v] : o.extras.items()) {
    if (extras.contains(k) && extras[k].is_array() && v.is_array())
      for (auto& x : v) extras[k].push_back(std::move(x));
    else
      extras[k] = std::move(v);
  }
}

std::size_t Report::count(Status s) const {
  std::size_t n = 0;
  for (const auto& c : claims) n += c.status == s;
  return n;
}

bool Report::any_violated() const {
  if (count(Status::Violated) > 0) return true;
  for (const auto& b : brackets)
    if (b.certified && !b.valid) return true;
  return false;
}

Json to_json(const Report& r) {
  const bool ex = r.exact_mode;
  Json j;
  j["mode"] = r.mode;
  j["run"] = r.run;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json x;
    x["construction"] = e.construction;
    x["Q"] = e.query;
    x["horizon"] = {{"D", e.D}, {"L", e.L}};
    x["epsilon"] = e.epsilon;
    x["value"] = value_json(e.value, ex);
    x["witness"] = e.witness;
    x["certificate"] = e.certificate;
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  Json claims = Json::array();
  for (const auto& c : r.claims) {
    Json x;
    x["id"] = c.id;
    x["anchor"] = c.anchor;
    x["inputs"] = c.inputs;
    x["lhs"] = value_json(c.lhs, ex);
    x["relation"] = c.relation;
    x["rhs"] = c.rhs_infinite ? Json("inf") : value_json(c.rhs, ex);
    x["residual"] = double_json(c.residual);
    x["status"] = to_string(c.status);
    claims.push_back(std::move(x));
  }
  j["claims"] = std::move(claims);
  Json brackets = Json::array();
  for (const auto& b : r.brackets) {
    auto side = [&](const BracketSide& s) {
      Json x;
      x["value"] = value_json(s.value, ex);
      x["kind"] = s.kind;
      x["certificate"] = s.certificate;
      return x;
    };
    Json x;
    x["quantity"] = b.quantity;
    x["Q"] = b.query;
    x["lower"] = side(b.lower);
    x["upper"] = side(b.upper);
    x["certified"] = b.certified;
    x["valid"] = b.valid;
    brackets.push_back(std::move(x));
  }
  j["brackets"] = std::move(brackets);
  if (!r.extras.empty()) j["details"] = r.extras;
  j["summary"] = {{"certified", r.count(Status::Certified)},
                  {"diagnostic", r.count(Status::Diagnostic)},
                  {"violated", r.count(Status::Violated)},
                  {"brackets", r.brackets.size()},
                  {"entries", r.entries.size()},
                  {"pass", !r.any_violated()}};
  j["warnings"] = r.warnings;
  return j;
}

std::string to_json_text(const Report& r) { return to_json(r).dump(2) + "\n"; }

std::string format15(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string scan_csv(const Scan& s, bool exact_mode) {
  std::string out = "alpha,h_value,psi2,fwd_diff,eql_bound_residual";
  if (exact_mode) out += ",h_value_exact";
  out += "\r\n";
  for (const auto& r : s.rows) {
    out += format15(r.alpha) + "," + format15(r.h_value.approx) + "," + format15(r.psi2) + ",";
    out += r.fwd_diff ? format15(*r.fwd_diff) : "";
    out += ",";
    out += r.eql_bound_residual ? format15(*r.eql_bound_residual) : "";
    if (exact_mode) out += "," + csv_field(r.h_value.is_exact() ? ddm::to_string(*r.h_value.exact) : "");
    out += "\r\n";
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      any = true;
    } else if (c == '\r' || c == '\n') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
      any = true;
    }
  }
  if (any) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot rename " + tmp.string() + " to " + target.string() + ": " + ec.message());
  }
}

}  // namespace ddm::report
