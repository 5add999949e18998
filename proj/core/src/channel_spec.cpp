/**
 * This code is part of cekit.
 *
 * This code is licensed under the Apache License, Version 2.0. You may obtain
 * a copy of this license in the LICENSE file in the root directory of this
 * source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "cekit/channel_spec.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <vector>

namespace cekit {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw spec_parse_error(what); }

// Fail-closed field validation: a typo in a physics parameter must not be
// silently ignored.
void expect_keys(const json& j, const std::string& kind,
                 const std::set<std::string>& required,
                 const std::set<std::string>& optional) {
  if (!j.is_object()) fail(kind + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!required.count(it.key()) && !optional.count(it.key()))
      fail(kind + ": unknown field '" + it.key() + "'");
  }
  for (const std::string& k : required)
    if (!j.contains(k)) fail(kind + ": missing field '" + k + "'");
}

int parse_positive_int(const json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 1)
    fail(field + ": expected a positive integer");
  return j.get<int>();
}

double parse_real(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field + ": expected a number");
  return j.get<double>();
}

Complex parse_complex(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(field + ": complex numbers are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

CMatrix parse_cmatrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field + ": expected a non-empty matrix");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty()) fail(field + ": matrix rows must be arrays");
  const int cols = static_cast<int>(j[0].size());
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      fail(field + ": ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(r, c) = parse_complex(j[r][c], field);
  }
  return m;
}

CVector parse_cvector(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field + ": expected a non-empty vector");
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = parse_complex(j[i], field);
  return v;
}

RMatrix parse_rmatrix(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) fail(field + ": expected a non-empty matrix");
  const int rows = static_cast<int>(j.size());
  if (!j[0].is_array() || j[0].empty()) fail(field + ": matrix rows must be arrays");
  const int cols = static_cast<int>(j[0].size());
  RMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols)
      fail(field + ": ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(r, c) = parse_real(j[r][c], field);
  }
  return m;
}

DensityMatrix parse_density(const json& j, const std::string& field) {
  return DensityMatrix(parse_cmatrix(j, field));
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json cmatrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ChannelSpecDoc parse_node(const json& j);

ChannelSpecDoc parse_kraus(const json& j) {
  expect_keys(j, "kraus", {"kind", "dim_in", "dim_out", "kraus"}, {"version"});
  int din = parse_positive_int(j["dim_in"], "dim_in");
  int dout = parse_positive_int(j["dim_out"], "dim_out");
  if (!j["kraus"].is_array() || j["kraus"].empty())
    fail("kraus: expected a non-empty operator list");
  std::vector<CMatrix> ops;
  for (const auto& op : j["kraus"]) {
    CMatrix k = parse_cmatrix(op, "kraus");
    if (k.rows() != dout || k.cols() != din)
      fail("kraus: operator shape does not match dim_out x dim_in");
    ops.push_back(std::move(k));
  }
  return {KrausChannel(din, dout, std::move(ops)), std::nullopt};
}

ChannelSpecDoc parse_classical(const json& j) {
  expect_keys(j, "classical", {"kind", "q"}, {"version"});
  RMatrix q = parse_rmatrix(j["q"], "q");
  StochasticChannel sc(static_cast<int>(q.cols()), static_cast<int>(q.rows()), q);
  return {embed_classical(sc), sc};
}

ChannelSpecDoc parse_c2q(const json& j) {
  expect_keys(j, "classical_to_quantum", {"kind", "states"}, {"version"});
  if (!j["states"].is_array() || j["states"].empty())
    fail("classical_to_quantum: expected a non-empty state list");
  std::vector<DensityMatrix> states;
  for (const auto& s : j["states"]) states.push_back(parse_density(s, "states"));
  return {classical_to_quantum(states), std::nullopt};
}

ChannelSpecDoc parse_partial_swap(const json& j) {
  expect_keys(j, "partial_swap", {"kind", "d", "theta"},
              {"version", "p", "phi", "sigma"});
  int d = parse_positive_int(j["d"], "d");
  double theta = parse_angle(j["theta"]);
  if (j.contains("sigma")) {
    if (j.contains("p") || j.contains("phi"))
      fail("partial_swap: give either sigma or p/phi, not both");
    return {partial_swap_channel(d, theta, parse_density(j["sigma"], "sigma")),
            std::nullopt};
  }
  if (!j.contains("p")) fail("partial_swap: missing field 'p' (or 'sigma')");
  double p = parse_real(j["p"], "p");
  CVector phi = j.contains("phi") ? parse_cvector(j["phi"], "phi") : basis_state(d, 0);
  if (phi.size() != d) fail("partial_swap: phi length must equal d");
  CMatrix sigma = (1.0 - p) * CMatrix::Identity(d, d) / double(d) +
                  p * CMatrix(PureState::normalized(phi).projector());
  return {partial_swap_channel(d, theta, DensityMatrix(sigma)), std::nullopt};
}

ChannelSpecDoc parse_superposed(const json& j) {
  expect_keys(j, "superposed_paths", {"kind", "base", "gammas", "k", "sigma"},
              {"version"});
  ChannelSpecDoc base = parse_node(j["base"]);
  CVector gammas = parse_cvector(j["gammas"], "gammas");
  int k = parse_positive_int(j["k"], "k");
  PathChannelSpec spec(base.channel, gammas, k, parse_density(j["sigma"], "sigma"));
  return {superposed_paths(spec), std::nullopt};
}

ChannelSpecDoc parse_depolarizing(const json& j) {
  expect_keys(j, "depolarizing", {"kind", "d", "lambda"}, {"version"});
  return {depolarizing_channel(parse_positive_int(j["d"], "d"),
                               parse_real(j["lambda"], "lambda")),
          std::nullopt};
}

ChannelSpecDoc parse_discard(const json& j) {
  expect_keys(j, "discard_reprepare", {"kind", "dim_in", "sigma"}, {"version"});
  return {discard_reprepare(parse_positive_int(j["dim_in"], "dim_in"),
                            parse_density(j["sigma"], "sigma")),
          std::nullopt};
}

ChannelSpecDoc parse_compose(const json& j) {
  expect_keys(j, "compose", {"kind", "first", "then"}, {"version"});
  ChannelSpecDoc first = parse_node(j["first"]);
  ChannelSpecDoc then = parse_node(j["then"]);
  return {compose(then.channel, first.channel), std::nullopt};
}

ChannelSpecDoc parse_tensor(const json& j) {
  expect_keys(j, "tensor", {"kind", "a", "b"}, {"version"});
  ChannelSpecDoc a = parse_node(j["a"]);
  ChannelSpecDoc b = parse_node(j["b"]);
  return {tensor(a.channel, b.channel), std::nullopt};
}

ChannelSpecDoc parse_node(const json& j) {
  if (!j.is_object()) fail("channel spec: expected an object");
  if (!j.contains("kind") || !j["kind"].is_string())
    fail("channel spec: missing 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "kraus") return parse_kraus(j);
  if (kind == "classical") return parse_classical(j);
  if (kind == "classical_to_quantum") return parse_c2q(j);
  if (kind == "partial_swap") return parse_partial_swap(j);
  if (kind == "superposed_paths") return parse_superposed(j);
  if (kind == "depolarizing") return parse_depolarizing(j);
  if (kind == "discard_reprepare") return parse_discard(j);
  if (kind == "compose") return parse_compose(j);
  if (kind == "tensor") return parse_tensor(j);
  fail("channel spec: unknown kind '" + kind + "'");
}

}  // namespace

double parse_angle(const json& value) {
  if (value.is_number()) return value.get<double>();
  if (!value.is_string()) fail("theta: expected a number or a pi-literal string");
  std::string s = value.get<std::string>();
  std::string t;
  for (char c : s)
    if (c != ' ') t.push_back(c);
  double sign = 1.0;
  size_t pos = 0;
  if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
    if (t[pos] == '-') sign = -1.0;
    ++pos;
  }
  double coeff = 1.0;
  size_t digits_end = pos;
  while (digits_end < t.size() &&
         (std::isdigit(static_cast<unsigned char>(t[digits_end])) || t[digits_end] == '.'))
    ++digits_end;
  if (digits_end > pos) {
    coeff = std::stod(t.substr(pos, digits_end - pos));
    pos = digits_end;
    if (pos < t.size() && t[pos] == '*') ++pos;
  }
  if (t.compare(pos, 2, "pi") != 0) fail("theta: cannot parse angle literal '" + s + "'");
  pos += 2;
  double denom = 1.0;
  if (pos < t.size()) {
    if (t[pos] != '/') fail("theta: cannot parse angle literal '" + s + "'");
    denom = std::stod(t.substr(pos + 1));
    pos = t.size();
  }
  if (denom == 0.0) fail("theta: zero denominator in angle literal");
  return sign * coeff * M_PI / denom;
}

ChannelSpecDoc parse_channel_document(const json& doc) {
  if (!doc.is_object()) fail("channel spec: expected a JSON object");
  if (!doc.contains("version") || doc["version"] != "v1")
    fail("channel spec: missing or unsupported 'version' (expected \"v1\")");
  return parse_node(doc);
}

ChannelSpecDoc parse_channel_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open spec file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  return parse_channel_document(doc);
}

json channel_to_spec(const KrausChannel& ch) {
  json ops = json::array();
  for (const CMatrix& k : ch.kraus) ops.push_back(cmatrix_to_json(k));
  return json{{"version", "v1"},
              {"kind", "kraus"},
              {"dim_in", ch.dim_in},
              {"dim_out", ch.dim_out},
              {"kraus", std::move(ops)}};
}

}  // namespace cekit
