#pragma once

// JSON forms of fields, elements and series.
//
//   field     {"p": int, "n": int, "modulus": [m_0, ..., m_n]}   (constant term first)
//   element   [c_0, ..., c_{n-1}]                                (coefficient of t^i at i)
//   dense     {"field": field, "prec": N, "coeffs": [element; N+1]}
//   additive  {"field": field, "q": int, "prec": N, "terms": {"i": element}}
//
// Serialization followed by parsing is the identity, and parsing followed
// by serialization reproduces canonical input byte for byte.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcrit/digits.hpp"
#include "qcrit/field.hpp"
#include "qcrit/series.hpp"

namespace qcrit {

using json = nlohmann::json;

inline json field_to_json(const FieldSpec& f) {
  return json{{"p", f.p()}, {"n", f.n()}, {"modulus", std::vector<std::uint32_t>(f.modulus().begin(), f.modulus().end())}};
}

inline const FieldSpec& field_from_json(const json& j) {
  return field_make(j.at("p").get<std::uint32_t>(), j.at("n").get<int>(),
                    j.contains("modulus") ? std::optional(j.at("modulus").get<std::vector<std::uint32_t>>())
                                          : std::nullopt);
}

inline json element_to_json(const FieldElement& a) { return a.coords(); }

inline FieldElement element_from_json(const FieldSpec& f, const json& j) {
  return f.element(j.get<std::vector<std::uint32_t>>());
}

inline json series_to_json(const TruncSeries& s) {
  json coeffs = json::array();
  for (const auto& c : s.coeffs()) coeffs.push_back(element_to_json(c));
  return json{{"field", field_to_json(s.field())}, {"prec", s.prec()}, {"coeffs", std::move(coeffs)}};
}

inline TruncSeries series_from_json(const json& j) {
  const FieldSpec& f = field_from_json(j.at("field"));
  const int prec = j.at("prec").get<int>();
  const auto& coeffs = j.at("coeffs");
  if (coeffs.size() != static_cast<std::size_t>(prec) + 1)
    throw std::invalid_argument("dense series: expected prec+1 coefficients");
  TruncSeries s(f, prec);
  for (int i = 0; i <= prec; ++i) s.set(i, element_from_json(f, coeffs[i]));
  return s;
}

inline json additive_to_json(const AdditiveSeries& a) {
  json terms = json::object();
  for (const auto& [i, c] : a.terms()) terms[std::to_string(i)] = element_to_json(c);
  return json{{"field", field_to_json(a.field())}, {"q", a.prime_power().q}, {"prec", a.prec()}, {"terms", terms}};
}

inline AdditiveSeries additive_from_json(const json& j) {
  const FieldSpec& f = field_from_json(j.at("field"));
  const auto q = j.at("q").get<std::uint64_t>();
  std::uint32_t lambda = 0;
  std::uint64_t x = q;
  while (x > 1 && x % f.p() == 0) {
    x /= f.p();
    ++lambda;
  }
  if (x != 1 || lambda == 0) throw std::invalid_argument("q is not a positive power of the characteristic");
  AdditiveSeries a(f, PrimePower::make(f.p(), lambda), j.at("prec").get<int>());
  for (const auto& [key, val] : j.at("terms").items()) {
    std::size_t used = 0;
    const unsigned long idx = std::stoul(key, &used);
    if (used != key.size()) throw std::invalid_argument("additive series: bad term index '" + key + "'");
    a.set(static_cast<std::uint32_t>(idx), element_from_json(f, val));
  }
  return a;
}

inline json witness_to_json(const AdmissibleQuadruple& a, const DigitGamesWitness& w) {
  return json{{"quad", {a.j, a.k, a.ell, a.m}}, {"witness", {{"e", w.e}, {"f", w.f}, {"g", w.g}, {"r", w.r}}}};
}

}  // namespace qcrit
