#include "doctest.h"

#include "ddm/config.hpp"
#include "ddm/report.hpp"

#include <string>

using namespace ddm;

namespace {

const char* kGood = R"({
  "model": {"P": [["1/2","1/2"],["1/2","1/2"]], "pi": ["3/4","1/4"], "pi_star": ["1/2","1/2"]},
  "queries": ["X", "0[2]"],
  "horizon": {"D": 1, "L": 2},
  "seed": 9
})";

std::string field_of(const std::string& text, bool unsafe = false) {
  try {
    (void)config::parse_text(text, unsafe);
  } catch (const config::ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::string with_model(const std::string& model_body, const std::string& rest = "") {
  return R"({"model": {)" + model_body + "}" + rest + "}";
}

const std::string kP = R"("P": [["1/2","1/2"],["1/2","1/2"]])";

}  // namespace

TEST_CASE("valid config") {
  const auto c = config::parse_text(kGood);
  CHECK(c.model.N == 2);
  CHECK(c.queries.size() == 2);
  CHECK(c.horizon == engine::Horizon{1, 2});
  CHECK(c.seed == 9);
  CHECK(c.alpha_grid.size() == 11);
}

TEST_CASE("config errors name the offending field") {
  CHECK(field_of("[1]") == "");
  CHECK(field_of("{not json") == "");
  CHECK(field_of(with_model(R"("P": [["1/2","1/2"],["1/2","49/100"]], "pi": ["1/2","1/2"])")) == "model.P[1]");
  CHECK(field_of(with_model(kP + R"(, "pi": [0.5, 0.5])")) == "model.pi[0]");
  CHECK(field_of(with_model(kP + R"(, "pi": ["1/2","1/2"], "colour": 1)")) == "model.colour");
  CHECK(field_of(with_model(kP + R"(, "pi": ["1/2","1/2"])", R"(, "queries": ["0[3]"])")) == "queries[0]");
  CHECK(field_of(with_model(kP + R"(, "pi": ["1/2","1/2"])", R"(, "horizon": {"D": 5})")) == "horizon.D");
  CHECK(field_of(with_model(kP + R"(, "pi": ["1/2","1/2"])", R"(, "horizon": {"D": 5})"), true) == "<accepted>");
  CHECK(field_of(with_model(kP + R"(, "pi": ["1/2","1/2"])", R"(, "eps_ladder": ["1/4","1/2"])")) ==
        "eps_ladder[1]");
  CHECK(field_of(with_model(kP + R"(, "pi": ["1/2","1/2"])", R"(, "alpha_grid": [0, 1.5])")) == "alpha_grid[1]");
  CHECK(field_of(with_model(kP + R"(, "pi": ["1/2","1/2"])", R"(, "seed": -1)")) == "seed");
}

TEST_CASE("float64 precision accepts numbers") {
  const auto c = config::parse_text(with_model(kP + R"(, "pi": [0.75, 0.25], "precision": "float64")"));
  CHECK(c.model.precision == Precision::Float64);
  CHECK(c.model.pi[0] == Rational(3, 4));
}

TEST_CASE("CSV output round-trips") {
  report::Scan s;
  s.query = "X";
  for (int k = 0; k <= 10; ++k) {
    report::ScanRow row;
    row.alpha = k / 10.0;
    row.h_value = Scalar::from_exact(1);
    row.psi2 = 0.0;
    if (k < 10) row.fwd_diff = 0.0;
    s.rows.push_back(row);
  }
  const auto text = report::scan_csv(s, true);
  CHECK(text.find("\r\n") != std::string::npos);
  const auto rows = report::parse_csv(text);
  REQUIRE(rows.size() == 12);
  CHECK(rows[0] == std::vector<std::string>{"alpha", "h_value", "psi2", "fwd_diff", "eql_bound_residual",
                                            "h_value_exact"});
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i][1] == "1");
    CHECK(rows[i][5] == "1");
  }
  CHECK(rows[11][3] == "");
  CHECK(rows[2][0] == "0.1");
  std::string again;
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) again += (i ? "," : "") + r[i];
    again += "\r\n";
  }
  CHECK(again == text);
}

TEST_CASE("number formatting") {
  CHECK(report::format15(0.1) == "0.1");
  CHECK(report::format15(1.0 / 3) == "0.333333333333333");
  CHECK(report::value_json(Scalar::from_exact(Rational(1, 3)), true) == "1/3");
  CHECK(report::value_json(Scalar::from_exact(Rational(1, 2)), false).is_number());
}

TEST_CASE("report merge keeps order") {
  report::Report a, b;
  a.claims.push_back({"first"});
  b.claims.push_back({"second"});
  b.claims.back().status = report::Status::Violated;
  a.merge(std::move(b));
  REQUIRE(a.claims.size() == 2);
  CHECK(a.claims[1].id == "second");
  CHECK(a.any_violated());
  CHECK(a.count(report::Status::Diagnostic) == 1);
}
