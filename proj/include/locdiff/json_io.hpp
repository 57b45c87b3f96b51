#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "locdiff/circle_diffeo.hpp"
#include "locdiff/config.hpp"
#include "locdiff/errors.hpp"
#include "locdiff/interval.hpp"
#include "locdiff/localization.hpp"
#include "locdiff/moebius.hpp"
#include "locdiff/trig_poly.hpp"

namespace locdiff {

using json = nlohmann::json;

inline json config_to_json(const Config& c) {
  return {{"default_modes", c.default_modes},
          {"mode_cap", c.mode_cap},
          {"fit_tail_tol", c.fit_tail_tol},
          {"chop_tol", c.chop_tol},
          {"min_derivative_tol", c.min_derivative_tol},
          {"newton_tol", c.newton_tol},
          {"newton_max_iter", c.newton_max_iter},
          {"invert_check_tol", c.invert_check_tol},
          {"margin_fraction", c.margin_fraction},
          {"safety", c.safety},
          {"slice_cap", c.slice_cap},
          {"word_factor_cap", c.word_factor_cap},
          {"bott_points", c.bott_points},
          {"scan_points", c.scan_points}};
}

// Applies the fields present in `j` on top of `base`; unknown keys are an error.
inline Config config_from_json(const json& j, Config base = default_config()) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "default_modes") base.default_modes = value.get<std::size_t>();
    else if (key == "mode_cap") base.mode_cap = value.get<std::size_t>();
    else if (key == "fit_tail_tol") base.fit_tail_tol = value.get<double>();
    else if (key == "chop_tol") base.chop_tol = value.get<double>();
    else if (key == "min_derivative_tol") base.min_derivative_tol = value.get<double>();
    else if (key == "newton_tol") base.newton_tol = value.get<double>();
    else if (key == "newton_max_iter") base.newton_max_iter = value.get<int>();
    else if (key == "invert_check_tol") base.invert_check_tol = value.get<double>();
    else if (key == "margin_fraction") base.margin_fraction = value.get<double>();
    else if (key == "safety") base.safety = value.get<double>();
    else if (key == "slice_cap") base.slice_cap = value.get<std::size_t>();
    else if (key == "word_factor_cap") base.word_factor_cap = value.get<std::size_t>();
    else if (key == "bott_points") base.bott_points = value.get<std::size_t>();
    else if (key == "scan_points") base.scan_points = value.get<std::size_t>();
    else throw ValidationError("unknown config key: " + key);
  }
  return base;
}

// displacement u(x) = mean + sum_k (cos[k] cos((k+1)x) + sin[k] sin((k+1)x))
inline json diffeo_to_json(const CircleDiffeo& d) {
  return {{"mean", d.displacement().mean()},
          {"cos", d.displacement().cos_coeffs()},
          {"sin", d.displacement().sin_coeffs()}};
}

inline CircleDiffeo diffeo_from_json(const json& j,
                                     const Config& cfg = default_config()) {
  return make_diffeo(j.at("cos").get<std::vector<double>>(),
                     j.at("sin").get<std::vector<double>>(),
                     j.at("mean").get<double>(), cfg);
}

inline json interval_to_json(const IntervalS1& iv) {
  return {{"a", iv.a}, {"b", iv.b}};
}

inline IntervalS1 interval_from_json(const json& j) {
  return IntervalS1::make(j.at("a").get<double>(), j.at("b").get<double>());
}

inline json covering_to_json(const Covering& c) {
  json arr = json::array();
  for (const IntervalS1& iv : c.intervals()) arr.push_back(interval_to_json(iv));
  return {{"intervals", arr}};
}

inline Covering covering_from_json(const json& j) {
  std::vector<IntervalS1> ivs;
  for (const json& e : j.at("intervals")) ivs.push_back(interval_from_json(e));
  return Covering::of_circle(std::move(ivs));
}

inline json word_to_json(const LocalizedWord& w) {
  json arr = json::array();
  for (const LocalizedFactor& f : w.factors)
    arr.push_back({{"interval", interval_to_json(f.interval)},
                   {"diffeo", diffeo_to_json(f.diffeo)}});
  return {{"factors", arr}};
}

inline LocalizedWord word_from_json(const json& j,
                                    const Config& cfg = default_config()) {
  LocalizedWord w;
  for (const json& e : j.at("factors"))
    w.factors.push_back({interval_from_json(e.at("interval")),
                         diffeo_from_json(e.at("diffeo"), cfg)});
  return w;
}

inline json mat_to_json(const Mat2& m) {
  return json::array({json::array({m.a, m.b}), json::array({m.c, m.d})});
}

inline json moebius_to_json(const MoebiusElement& g) {
  return {{"m", mat_to_json(g.matrix())}};
}

inline MoebiusElement moebius_from_json(const json& j) {
  const json& m = j.at("m");
  if (!m.is_array() || m.size() != 2 || !m[0].is_array() || m[0].size() != 2 ||
      !m[1].is_array() || m[1].size() != 2)
    throw ValidationError("matrix must be a 2x2 array");
  Mat2 mat{m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(),
           m[1][1].get<double>()};
  return MoebiusElement::from_matrix(mat);
}

inline json iwasawa_to_json(const IwasawaCoords& ic) {
  return {{"p", ic.p}, {"tau", ic.tau}, {"t", ic.t}};
}

inline json ts_word_to_json(const std::vector<TSFactor>& w) {
  json arr = json::array();
  for (const TSFactor& f : w)
    arr.push_back(
        {{"kind", f.kind == TSFactor::Kind::Translation ? "T" : "S"},
         {"param", f.param}});
  return arr;
}

inline std::vector<TSFactor> ts_word_from_json(const json& j) {
  std::vector<TSFactor> w;
  for (const json& e : j) {
    const std::string kind = e.at("kind").get<std::string>();
    if (kind != "T" && kind != "S")
      throw ValidationError("factor kind must be T or S");
    w.push_back({kind == "T" ? TSFactor::Kind::Translation
                             : TSFactor::Kind::SpecialConformal,
                 e.at("param").get<double>()});
  }
  return w;
}

inline json cover_to_json(const CoverElement& a) {
  return {{"m", mat_to_json(a.base.matrix())}, {"lift0", a.lift_at_zero}};
}

inline CoverElement cover_from_json(const json& j) {
  return {moebius_from_json(j), j.at("lift0").get<double>()};
}

}  // namespace locdiff
