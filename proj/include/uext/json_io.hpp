#pragma once

// JSON encodings. Integers travel as decimal strings; the only native JSON
// numbers are group ranks. Decoders accept native integers too.

#include <string>
#include <vector>

#include "json.hpp"
#include "uext/hom_ext.hpp"
#include "uext/snf.hpp"
#include "uext/torsion.hpp"
#include "uext/universal.hpp"

namespace uext::json_io {

using json = nlohmann::json;

inline json integer(const Integer& x) { return to_decimal(x); }

inline Integer read_integer(const json& j) {
  if (j.is_string()) {
    const std::string& s = j.get_ref<const std::string&>();
    std::string_view digits = s;
    if (!digits.empty() && digits[0] == '-') digits.remove_prefix(1);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
      throw InvalidArgument("'" + s + "' is not a decimal integer");
    return Integer(s);
  }
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  throw InvalidArgument("expected an integer, got " + j.dump());
}

inline json vector(const std::vector<Integer>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(integer(x));
  return a;
}

inline std::vector<Integer> read_vector(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected an array of integers");
  std::vector<Integer> v;
  for (const auto& x : j) v.push_back(read_integer(x));
  return v;
}

inline json matrix(const IntMatrix& m) {
  json a = json::array();
  for (const auto& row : m.to_dense()) a.push_back(vector(row));
  return a;
}

/// Row count is taken from the array; `cols` fixes the width of an empty
/// matrix.
inline IntMatrix read_matrix(const json& j, std::size_t cols = 0) {
  if (!j.is_array()) throw InvalidArgument("expected a matrix (array of rows)");
  std::vector<std::vector<Integer>> rows;
  for (const auto& r : j) {
    rows.push_back(read_vector(r));
    if (rows.back().size() != rows.front().size()) throw DimensionMismatch("matrix rows have different lengths");
  }
  if (!rows.empty()) cols = rows.front().size();
  return IntMatrix::from_dense(rows, cols);
}

inline json group(const FinGenAb& g) {
  return {{"rank", g.rank()}, {"factors", vector(g.factors())}};
}

inline FinGenAb read_group(const json& j) {
  if (!j.is_object() || !j.contains("rank") || !j.contains("factors"))
    throw InvalidArgument("group must be an object with \"rank\" and \"factors\"");
  return FinGenAb(to_size(read_integer(j.at("rank"))), read_vector(j.at("factors")));
}

inline json map(const AbMap& f) {
  return {{"source", group(f.source())}, {"target", group(f.target())}, {"matrix", matrix(f.matrix())}};
}

inline AbMap read_map(const json& j) {
  if (!j.is_object() || !j.contains("source") || !j.contains("target") || !j.contains("matrix"))
    throw InvalidArgument("map must be an object with \"source\", \"target\" and \"matrix\"");
  FinGenAb s = read_group(j.at("source")), t = read_group(j.at("target"));
  IntMatrix m = read_matrix(j.at("matrix"), s.generator_count());
  if (m.rows() == 0 && t.generator_count() == 0) m = IntMatrix(0, s.generator_count());
  return AbMap(s, t, m);
}

/// Ext^1(A, B): A is the quotient end, B the sub end.
inline json ext_class(const ExtClass& c) {
  return {{"A", group(c.quotient())}, {"B", group(c.sub())}, {"coords", vector(c.coords())}};
}

inline ExtClass read_ext_class(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("B") || !j.contains("coords"))
    throw InvalidArgument("class must be an object with \"A\", \"B\" and \"coords\"");
  return ExtClass(read_group(j.at("A")), read_group(j.at("B")), read_vector(j.at("coords")));
}

inline json sequence(const ShortExactSeq& s) { return {{"f", map(s.f())}, {"g", map(s.g())}}; }

inline ShortExactSeq read_sequence(const json& j) {
  if (!j.is_object() || !j.contains("f") || !j.contains("g"))
    throw InvalidArgument("sequence must be an object with \"f\" and \"g\"");
  return ShortExactSeq(read_map(j.at("f")), read_map(j.at("g")));
}

inline json condition(const ConditionResult& c) { return {{"pass", c.pass}, {"detail", c.detail}}; }

inline json certificate(const UniversalCertificate& c, bool full) {
  json j = {
      {"direction", c.direction == UniversalCertificate::Direction::extension ? "extension" : "coextension"},
      {"B", group(c.b)},
      {"A", group(c.a)},
      {"x_size", integer(c.x.size())},
      {"degenerate", c.degenerate},
      {"middle", group(c.sequence.middle())},
      {"conditions", {{"a", condition(c.condition_a)}, {"b", condition(c.condition_b)}, {"c", condition(c.condition_c)}}},
      {"verdicts_agree", c.verdicts_agree()},
      {"components_match", c.components_match},
      {"universal", c.universal()},
  };
  if (full) {
    j["sequence"] = sequence(c.sequence);
    json xs = json::array();
    for (const auto& x : c.x) xs.push_back(ext_class(x));
    j["x"] = xs;
    json ws = json::array();
    for (const auto& w : c.delta_witnesses) ws.push_back(map(w));
    j["delta_witnesses"] = ws;
  }
  return j;
}

inline json torsion_terms(const TorsionExpr& e) {
  json a = json::array();
  for (const auto& [atom, m] : e.terms()) a.push_back({{"atom", atom.to_string()}, {"multiplicity", m.to_string()}});
  return a;
}

inline json torsion_report(const ClassificationReport& r) {
  json primes = json::array();
  for (const auto& e : r.primes) {
    json entry = {{"p", integer(e.p)},
                  {"bounded", e.reduced_bounded},
                  {"bound", e.bound ? integer(*e.bound) : json(nullptr)},
                  {"divisible", e.divisible.to_string()},
                  {"reduced", e.reduced.to_string()}};
    primes.push_back(entry);
  }
  json j = {{"primes", primes},
            {"all_primes_cyclic", r.all_primes_cyclic},
            {"universal_TZ", r.verdict_tz},
            {"cotorsion", r.cotorsion}};
  if (r.witness_prime) j["witness_prime"] = integer(*r.witness_prime);
  return j;
}

inline json witness(const WitnessResult& w) {
  return {{"order", integer(w.order)}, {"method", w.method}, {"search_space", integer(w.search_space)}};
}

}  // namespace uext::json_io
