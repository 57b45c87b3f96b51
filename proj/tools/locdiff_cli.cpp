// JSON-in/JSON-out front end for the locdiff library: factorization, slicing,
// Moebius decompositions, cover lifts, cocycles, a deterministic property
// suite (`check`), and CSV grid dumps for external plotting.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "locdiff/json_io.hpp"
#include "locdiff/locdiff.hpp"

namespace {

using locdiff::json;

struct Opts {
  std::string input;
  std::string output;
  std::string covering;
  std::string config_path;
  std::string suite = "all";
  std::optional<double> tol;
  std::optional<double> margin;
  std::optional<double> safety;
  std::optional<double> step;
  std::optional<std::size_t> modes;
  double alpha = 0.0;
  double tau = 0.0;
  long branch = 0;
  std::uint64_t seed = 0;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw locdiff::ValidationError("cannot open input file: " + path);
  try {
    json j;
    in >> j;
    return j;
  } catch (const json::exception& e) {
    throw locdiff::ValidationError("bad JSON in " + path + ": " + e.what());
  }
}

void emit_text(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw locdiff::ValidationError("cannot open output file: " + path);
  out << text;
}

void emit(const json& j, const std::string& path) {
  emit_text(j.dump(2) + "\n", path);
}

locdiff::Config make_config(const Opts& o) {
  locdiff::Config cfg = locdiff::default_config();
  if (!o.config_path.empty())
    cfg = locdiff::config_from_json(read_json_file(o.config_path), cfg);
  if (o.tol) cfg.fit_tail_tol = *o.tol;
  if (o.modes) cfg.default_modes = *o.modes;
  if (o.margin) cfg.margin_fraction = *o.margin;
  if (o.safety) cfg.safety = *o.safety;
  return cfg;
}

// Three arcs of length pi+1 with pairwise overlap 0.5+pi/3 each; at margin
// fraction 0.1 this gives epsilon_max close to 0.4.
locdiff::Covering default_covering() {
  using locdiff::IntervalS1;
  const double third = locdiff::kTwoPi / 3.0;
  return locdiff::Covering::of_circle(
      {IntervalS1::make(-0.5, locdiff::kPi + 0.5),
       IntervalS1::make(third - 0.5, third + locdiff::kPi + 0.5),
       IntervalS1::make(2.0 * third - 0.5, 2.0 * third + locdiff::kPi + 0.5)});
}

locdiff::Covering load_covering(const Opts& o) {
  if (o.covering.empty()) return default_covering();
  return locdiff::covering_from_json(read_json_file(o.covering));
}

json report_head(const char* command, const locdiff::Config& cfg) {
  return {{"schema_version", 1},
          {"command", command},
          {"config", locdiff::config_to_json(cfg)}};
}

int run_localize(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const locdiff::CircleDiffeo phi =
      locdiff::diffeo_from_json(read_json_file(o.input), cfg);
  const locdiff::PartitionOfUnity part =
      locdiff::build_partition(load_covering(o), cfg.margin_fraction, cfg);
  const locdiff::LocalizedWord w = locdiff::localize(phi, part, cfg);
  const double residual =
      locdiff::sup_lift_distance(locdiff::word_product(w, cfg), phi);
  json out = report_head("localize", cfg);
  out["epsilon_max"] = locdiff::epsilon_max(part, 1.0);
  out["epsilon_safe"] = locdiff::epsilon_max(part, cfg.safety);
  out["factor_count"] = w.factors.size();
  double max_disp = 0.0;
  for (const auto& f : w.factors)
    max_disp = std::max(max_disp, locdiff::metrics(f.diffeo).sup_displacement);
  out["max_factor_displacement"] = max_disp;
  out["residual"] = residual;
  out["word"] = locdiff::word_to_json(w);
  emit(out, o.output);
  return 0;
}

int run_slice(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const locdiff::CircleDiffeo phi =
      locdiff::diffeo_from_json(read_json_file(o.input), cfg);
  const locdiff::Covering cov = load_covering(o);
  const locdiff::PartitionOfUnity part =
      locdiff::build_partition(cov, cfg.margin_fraction, cfg);
  const std::vector<locdiff::CircleDiffeo> slices =
      locdiff::slice_factorize(phi, part, cfg);
  locdiff::LocalizedWord as_word;
  for (const auto& s : slices) as_word.factors.push_back({cov[0], s});
  const double residual =
      locdiff::sup_lift_distance(locdiff::word_product(as_word, cfg), phi);
  json out = report_head("slice", cfg);
  out["count"] = slices.size();
  out["epsilon_max"] = locdiff::epsilon_max(part, 1.0);
  out["epsilon_safe"] = locdiff::epsilon_max(part, cfg.safety);
  out["residual"] = residual;
  json arr = json::array();
  for (const auto& s : slices) arr.push_back(locdiff::diffeo_to_json(s));
  out["slices"] = std::move(arr);
  emit(out, o.output);
  return 0;
}

int run_iwasawa(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const locdiff::MoebiusElement g =
      locdiff::moebius_from_json(read_json_file(o.input));
  const locdiff::IwasawaCoords ic = locdiff::iwasawa(g);
  json out = report_head("iwasawa", cfg);
  out["coords"] = locdiff::iwasawa_to_json(ic);
  out["residual"] = locdiff::psl_distance(locdiff::iwasawa_reconstruct(ic), g);
  emit(out, o.output);
  return 0;
}

int run_ts_word(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const locdiff::MoebiusElement g =
      locdiff::moebius_from_json(read_json_file(o.input));
  const std::vector<locdiff::TSFactor> w = locdiff::ts_word(g);
  json out = report_head("ts-word", cfg);
  out["residual"] = locdiff::psl_distance(locdiff::ts_product(w), g);
  out["word"] = locdiff::ts_word_to_json(w);
  emit(out, o.output);
  return 0;
}

int run_dilation_word(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const std::vector<locdiff::TSFactor> w = locdiff::dilation_word(o.tau);
  json out = report_head("dilation-word", cfg);
  out["tau"] = o.tau;
  out["residual"] = locdiff::psl_distance(
      locdiff::ts_product(w), locdiff::generator(locdiff::GenKind::D, o.tau));
  out["word"] = locdiff::ts_word_to_json(w);
  emit(out, o.output);
  return 0;
}

int run_rotation_word(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const std::vector<locdiff::TSFactor> w = locdiff::rotation_word(o.alpha);
  json out = report_head("rotation-word", cfg);
  out["alpha"] = o.alpha;
  out["residual"] = locdiff::psl_distance(
      locdiff::ts_product(w), locdiff::generator(locdiff::GenKind::R, o.alpha));
  out["word"] = locdiff::ts_word_to_json(w);
  emit(out, o.output);
  return 0;
}

int run_moebius_word(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const locdiff::MoebiusElement g =
      locdiff::moebius_from_json(read_json_file(o.input));
  const locdiff::PartitionOfUnity part =
      locdiff::build_partition(load_covering(o), cfg.margin_fraction, cfg);
  locdiff::LocalizedWord w;
  if (o.step) {
    // explicit step for both generator kinds; mirrors moebius_word's expansion
    const std::vector<locdiff::TSFactor> ts = locdiff::ts_word(g);
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
      const locdiff::LocalizedWord block =
          it->kind == locdiff::TSFactor::Kind::Translation
              ? locdiff::translation_word(it->param, part, *o.step, cfg)
              : locdiff::special_conformal_word(it->param, part, *o.step, cfg);
      w.factors.insert(w.factors.end(), block.factors.begin(),
                       block.factors.end());
    }
  } else {
    w = locdiff::moebius_word(g, part, cfg);
  }
  const double residual = locdiff::sup_lift_distance(
      locdiff::word_product(w, cfg), locdiff::to_diffeo(g, cfg));
  json out = report_head("moebius-word", cfg);
  out["factor_count"] = w.factors.size();
  double max_disp = 0.0;
  for (const auto& f : w.factors)
    max_disp = std::max(max_disp, locdiff::metrics(f.diffeo).sup_displacement);
  out["max_factor_displacement"] = max_disp;
  out["residual"] = residual;
  out["word"] = locdiff::word_to_json(w);
  emit(out, o.output);
  return 0;
}

int run_cover(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const locdiff::MoebiusElement g =
      locdiff::moebius_from_json(read_json_file(o.input));
  const locdiff::CoverElement a = locdiff::cover_make(g, o.branch);
  json out = report_head("cover", cfg);
  out["branch"] = o.branch;
  out["cover"] = locdiff::cover_to_json(a);
  out["trivialized"] = locdiff::mat_to_json(locdiff::cover_trivialize(a));
  emit(out, o.output);
  return 0;
}

int run_cocycle(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const json j = read_json_file(o.input);
  if (!j.contains("g") || !j.contains("h"))
    throw locdiff::ValidationError("cocycle input needs fields g and h");
  const locdiff::MoebiusElement g = locdiff::moebius_from_json(j.at("g"));
  const locdiff::MoebiusElement h = locdiff::moebius_from_json(j.at("h"));
  const locdiff::SignSection section;
  json out = report_head("cocycle", cfg);
  out["sign"] = locdiff::sign_cocycle(section, g, h);
  if (j.contains("k")) {
    const locdiff::MoebiusElement k = locdiff::moebius_from_json(j.at("k"));
    out["identity_defect"] = locdiff::cocycle_identity_defect(
        [&section](const locdiff::MoebiusElement& x,
                   const locdiff::MoebiusElement& y) {
          return double(locdiff::sign_cocycle(section, x, y));
        },
        g, h, k);
  }
  emit(out, o.output);
  return 0;
}

int run_bott(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const json j = read_json_file(o.input);
  if (!j.contains("phi") || !j.contains("psi"))
    throw locdiff::ValidationError("bott input needs fields phi and psi");
  const locdiff::CircleDiffeo phi = locdiff::diffeo_from_json(j.at("phi"), cfg);
  const locdiff::CircleDiffeo psi = locdiff::diffeo_from_json(j.at("psi"), cfg);
  json out = report_head("bott", cfg);
  out["value"] = locdiff::bott_cocycle(phi, psi, cfg);
  emit(out, o.output);
  return 0;
}

int run_grid_dump(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  const locdiff::CircleDiffeo phi =
      locdiff::diffeo_from_json(read_json_file(o.input), cfg);
  std::string text = "x,lift,derivative\n";
  char line[128];
  for (int j = 0; j < 1024; ++j) {
    const double x = locdiff::kTwoPi * double(j) / 1024.0;
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", x, phi.lift(x),
                  phi.lift_derivative(x));
    text += line;
  }
  emit_text(text, o.output);
  return 0;
}

// --- deterministic property suite -----------------------------------------

struct SuiteRng {
  std::uint64_t s;
  explicit SuiteRng(std::uint64_t seed) : s(seed) {}
  std::uint64_t next() {
    s += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (double(next() >> 11) * 0x1.0p-53);
  }
};

locdiff::MoebiusElement random_moebius(SuiteRng& rng, double tau_max,
                                       double p_max) {
  using locdiff::GenKind;
  return locdiff::generator(GenKind::T, rng.uniform(-p_max, p_max)) *
         locdiff::generator(GenKind::D, rng.uniform(-tau_max, tau_max)) *
         locdiff::generator(GenKind::R, rng.uniform(0.0, locdiff::kTwoPi));
}

locdiff::CircleDiffeo random_suite_diffeo(SuiteRng& rng, std::size_t modes,
                                          double target_sup,
                                          const locdiff::Config& cfg) {
  std::vector<double> c(modes), s(modes);
  for (std::size_t k = 0; k < modes; ++k) {
    const double a = std::exp(-double(k) / 24.0) / double(k + 1);
    c[k] = a * rng.uniform(-1.0, 1.0);
    s[k] = a * rng.uniform(-1.0, 1.0);
  }
  const double mean = rng.uniform(-1.0, 1.0);
  auto val = [&](double x, bool deriv) {
    double v = deriv ? 0.0 : mean;
    for (std::size_t k = 0; k < modes; ++k) {
      const double w = double(k + 1) * x;
      if (deriv)
        v += double(k + 1) * (s[k] * std::cos(w) - c[k] * std::sin(w));
      else
        v += c[k] * std::cos(w) + s[k] * std::sin(w);
    }
    return v;
  };
  double sup = 0.0, dsup = 0.0;
  for (int j = 0; j < 4096; ++j) {
    const double x = locdiff::kTwoPi * double(j) / 4096.0;
    sup = std::max(sup, std::fabs(val(x, false)));
    dsup = std::max(dsup, std::fabs(val(x, true)));
  }
  // cap sup|u'| at 0.35 so inf(1+u') >= 0.65 and the neighborhood test
  // sup|u| < eps * inf is guaranteed whenever target_sup <= 0.6 * eps
  const double scale = std::min(target_sup / sup, 0.35 / dsup);
  for (auto& v : c) v *= scale;
  for (auto& v : s) v *= scale;
  return locdiff::make_diffeo(c, s, mean * scale, cfg);
}

class SuiteRunner {
public:
  void add(const std::string& name, double residual, double tolerance) {
    results_.push_back({{"name", name},
                        {"residual", residual},
                        {"tolerance", tolerance},
                        {"pass", residual <= tolerance}});
    if (residual <= tolerance) ++passed_;
  }
  json results() const { return results_; }
  std::size_t passed() const { return passed_; }
  std::size_t total() const { return results_.size(); }

private:
  json results_ = json::array();
  std::size_t passed_ = 0;
};

void suite_moebius(SuiteRunner& r, SuiteRng& rng) {
  using namespace locdiff;
  double assoc = 0.0, inv = 0.0;
  for (int i = 0; i < 50; ++i) {
    const MoebiusElement g = random_moebius(rng, 2.0, 3.0);
    const MoebiusElement h = random_moebius(rng, 2.0, 3.0);
    const MoebiusElement k = random_moebius(rng, 2.0, 3.0);
    assoc = std::max(assoc, psl_distance((g * h) * k, g * (h * k)));
    inv = std::max(inv, psl_distance(g * g.inverse(), MoebiusElement::identity()));
  }
  r.add("moebius/associativity", assoc, 1e-11);
  r.add("moebius/inverse", inv, 1e-12);

  double recon = 0.0;
  for (int i = 0; i < 200; ++i) {
    const MoebiusElement g = random_moebius(rng, 3.0, 5.0);
    recon = std::max(recon, psl_distance(iwasawa_reconstruct(iwasawa(g)), g));
  }
  r.add("moebius/iwasawa_reconstruct", recon, 1e-12);

  const IwasawaCoords s1 = iwasawa(generator(GenKind::S, 1.0));
  r.add("moebius/iwasawa_s1",
        std::max(std::fabs(s1.p - 0.5), std::fabs(s1.tau + std::log(2.0))),
        1e-12);

  double dil = 0.0;
  for (int j = -30; j <= 30; ++j) {
    const double tau = 0.1 * double(j);
    dil = std::max(dil, psl_distance(ts_product(dilation_word(tau)),
                                     generator(GenKind::D, tau)));
  }
  r.add("moebius/dilation_word", dil, 1e-12);

  double rot_direct = 0.0, rot_all = 0.0;
  for (int j = 0; j < 400; ++j) {
    const double alpha = 2.0 * kTwoPi * double(j) / 400.0;
    const double err = psl_distance(ts_product(rotation_word(alpha)),
                                    generator(GenKind::R, alpha));
    rot_all = std::max(rot_all, err);
    if (std::fabs(std::sin(0.5 * alpha)) >= 0.1)
      rot_direct = std::max(rot_direct, err);
  }
  r.add("moebius/rotation_word_direct", rot_direct, 1e-12);
  r.add("moebius/rotation_word_all", rot_all, 1e-11);

  double tsw = 0.0;
  for (int i = 0; i < 25; ++i) {
    const MoebiusElement g = random_moebius(rng, 3.0, 5.0);
    tsw = std::max(tsw, psl_distance(ts_product(ts_word(g)), g));
  }
  r.add("moebius/ts_word", tsw, 1e-10);
}

void suite_diffeo(SuiteRunner& r, SuiteRng& rng, const locdiff::Config& cfg) {
  using namespace locdiff;
  double assoc = 0.0;
  for (int i = 0; i < 5; ++i) {
    const CircleDiffeo a = random_suite_diffeo(rng, 8, 0.3, cfg);
    const CircleDiffeo b = random_suite_diffeo(rng, 8, 0.3, cfg);
    const CircleDiffeo c = random_suite_diffeo(rng, 8, 0.3, cfg);
    assoc = std::max(assoc, sup_lift_distance(compose(compose(a, b, cfg), c, cfg),
                                              compose(a, compose(b, c, cfg), cfg)));
  }
  r.add("diffeo/compose_associativity", assoc, 1e-9);

  double inv = 0.0;
  for (int i = 0; i < 10; ++i) {
    const CircleDiffeo phi = random_suite_diffeo(rng, 12, 0.4, cfg);
    inv = std::max(inv, sup_lift_distance(compose(invert(phi, cfg), phi, cfg),
                                          CircleDiffeo::identity()));
  }
  r.add("diffeo/invert_round_trip", inv, 1e-8);

  const CircleDiffeo rot_sum = compose(CircleDiffeo::rotation(1.1),
                                       CircleDiffeo::rotation(2.3), cfg);
  r.add("diffeo/rotation_compose",
        sup_lift_distance(rot_sum, CircleDiffeo::rotation(3.4)), 1e-12);

  double proj = 0.0;
  for (int i = 0; i < 5; ++i) {
    const MoebiusElement g = random_moebius(rng, 2.0, 3.0);
    const CircleDiffeo d = to_diffeo(g, cfg);
    for (int j = 0; j < 64; ++j) {
      const double x = kTwoPi * double(j) / 64.0;
      proj = std::max(proj, std::fabs(wrap_signed(d.lift(x) - act_on_circle(g, x))));
    }
  }
  r.add("diffeo/to_diffeo_action", proj, 1e-9);
}

void suite_cover(SuiteRunner& r, SuiteRng& rng) {
  using namespace locdiff;
  double winding = 0.0, base_err = 0.0;
  for (int n : {2, 3, 8}) {
    const CoverElement a = cover_make(generator(GenKind::R, kTwoPi / double(n)), 0);
    CoverElement acc = a;
    for (int i = 1; i < n; ++i) acc = cover_compose(acc, a);
    winding = std::max(winding, std::fabs(acc.lift_at_zero - kTwoPi));
    base_err = std::max(base_err, psl_distance(acc.base, MoebiusElement::identity()));
  }
  r.add("cover/winding_lift", winding, 1e-9);
  r.add("cover/winding_base", base_err, 1e-12);

  const CoverElement full = cover_make(MoebiusElement::identity(), 1);
  const Mat2 minus_id = {-1.0, 0.0, 0.0, -1.0};
  r.add("cover/trivialize_full_turn",
        mat_max_abs_diff(cover_trivialize(full), minus_id), 1e-10);

  double hom = 0.0;
  for (int i = 0; i < 25; ++i) {
    const CoverElement x = cover_make(random_moebius(rng, 2.0, 3.0),
                                      long(rng.next() % 3) - 1);
    const CoverElement y = cover_make(random_moebius(rng, 2.0, 3.0),
                                      long(rng.next() % 3) - 1);
    hom = std::max(hom, mat_max_abs_diff(
                            cover_trivialize(cover_compose(x, y)),
                            mat_mul(cover_trivialize(x), cover_trivialize(y))));
  }
  r.add("cover/trivialize_homomorphism", hom, 1e-10);
}

void suite_cocycle(SuiteRunner& r, SuiteRng& rng, const locdiff::Config& cfg) {
  using namespace locdiff;
  const SignSection section;
  auto omega = [&section](const MoebiusElement& x, const MoebiusElement& y) {
    return double(sign_cocycle(section, x, y));
  };
  double sign_defect = 0.0;
  for (int i = 0; i < 200; ++i) {
    const MoebiusElement g = random_moebius(rng, 2.0, 3.0);
    const MoebiusElement h = random_moebius(rng, 2.0, 3.0);
    const MoebiusElement k = random_moebius(rng, 2.0, 3.0);
    sign_defect = std::max(sign_defect, cocycle_identity_defect(omega, g, h, k));
  }
  r.add("cocycle/sign_identity_defect", sign_defect, 0.0);

  auto bott = [&cfg](const CircleDiffeo& a, const CircleDiffeo& b) {
    return bott_cocycle(a, b, cfg);
  };
  double bott_defect = 0.0;
  for (int i = 0; i < 3; ++i) {
    const CircleDiffeo a = random_suite_diffeo(rng, 6, 0.35, cfg);
    const CircleDiffeo b = random_suite_diffeo(rng, 6, 0.35, cfg);
    const CircleDiffeo c = random_suite_diffeo(rng, 6, 0.35, cfg);
    // scalar cocycle identity B(a,b) + B(ab,c) = B(b,c) + B(a,bc),
    // composing in the same order the values are paired
    const double lhs = bott(a, b) + bott(compose(a, b, cfg), c);
    const double rhs = bott(b, c) + bott(a, compose(b, c, cfg));
    bott_defect = std::max(bott_defect, std::fabs(lhs - rhs));
  }
  r.add("cocycle/bott_identity_defect", bott_defect, 1e-8);

  double bott_rot = 0.0;
  for (int i = 0; i < 5; ++i) {
    const CircleDiffeo a = CircleDiffeo::rotation(rng.uniform(0.0, kTwoPi));
    const CircleDiffeo b = CircleDiffeo::rotation(rng.uniform(0.0, kTwoPi));
    bott_rot = std::max(bott_rot, std::fabs(bott_cocycle(a, b, cfg)));
  }
  r.add("cocycle/bott_on_rotations", bott_rot, 0.0);
}

void suite_localize(SuiteRunner& r, SuiteRng& rng,
                    const locdiff::PartitionOfUnity& part,
                    const locdiff::Config& cfg) {
  using namespace locdiff;
  const double eps = epsilon_max(part, 1.0);

  double round_trip = 0.0, support_slack = 0.0, bound_slack = 0.0;
  for (int i = 0; i < 3; ++i) {
    const CircleDiffeo phi = random_suite_diffeo(rng, 16, 0.6 * eps, cfg);
    const LocalizedWord w = localize(phi, part, cfg);
    round_trip = std::max(round_trip,
                          sup_lift_distance(word_product(w, cfg), phi));
    for (std::size_t k = 0; k < w.factors.size(); ++k) {
      const SupportResult sup = support(w.factors[k].diffeo, 1e-8);
      if (sup.kind == SupportResult::Kind::Full) {
        support_slack = std::max(support_slack, kTwoPi);
      } else if (sup.kind == SupportResult::Kind::Arc &&
                 !w.factors[k].interval.contains_arc(sup.arc, 1e-8)) {
        support_slack = std::max(support_slack, 1.0);
      }
    }
    const DiffeoMetrics& m = metrics(phi);
    const double lower = std::min(1.0, m.inf_derivative) -
                         part.derivative_sum_sup() * m.sup_displacement - 1e-8;
    for (std::size_t k = 0; k <= part.size(); ++k) {
      const CircleDiffeo pk = psi(phi, part, k, cfg);
      bound_slack = std::max(bound_slack, lower - metrics(pk).inf_derivative);
    }
  }
  r.add("localize/round_trip", round_trip, 1e-8);
  r.add("localize/factor_supports", support_slack, 1e-8);
  r.add("localize/derivative_bound", bound_slack, 0.0);

  const LocalizedWord wid = localize(CircleDiffeo::identity(), part, cfg);
  double id_err = 0.0;
  for (const auto& f : wid.factors)
    if (!f.diffeo.is_identity()) id_err = 1.0;
  r.add("localize/identity_factors", id_err, 0.0);

  const CircleDiffeo rot3 = CircleDiffeo::rotation(3.0);
  const std::vector<CircleDiffeo> slices = slice_factorize(rot3, part, cfg);
  double nb_err = 0.0;
  for (const auto& s : slices)
    if (!in_neighborhood(s, eps)) nb_err = 1.0;
  LocalizedWord sw;
  for (const auto& s : slices) sw.factors.push_back({part.covering()[0], s});
  r.add("localize/slice_neighborhood", nb_err, 0.0);
  r.add("localize/slice_product",
        sup_lift_distance(word_product(sw, cfg), rot3), 1e-7);
}

void suite_words(SuiteRunner& r, SuiteRng& rng,
                 const locdiff::PartitionOfUnity& part,
                 const locdiff::Config& cfg) {
  using namespace locdiff;
  const double t_step = default_step(TSFactor::Kind::Translation, part, cfg);
  const LocalizedWord tw = translation_word(1.5, part, t_step, cfg);
  r.add("words/translation_word",
        sup_lift_distance(word_product(tw, cfg),
                          to_diffeo(generator(GenKind::T, 1.5), cfg)),
        1e-7);

  const LocalizedWord tw_neg = translation_word(-1.5, part, t_step, cfg);
  LocalizedWord cancel = tw;
  cancel.factors.insert(cancel.factors.end(), tw_neg.factors.begin(),
                        tw_neg.factors.end());
  r.add("words/translation_cancel",
        sup_lift_distance(word_product(cancel, cfg), CircleDiffeo::identity()),
        1e-7);

  const LocalizedWord mw = moebius_word(random_moebius(rng, 1.5, 1.5), part, cfg);
  LocalizedWord round = mw;
  const LocalizedWord inv = inverse_word(mw, cfg);
  round.factors.insert(round.factors.end(), inv.factors.begin(),
                       inv.factors.end());
  r.add("words/word_inverse_cancel",
        sup_lift_distance(word_product(round, cfg), CircleDiffeo::identity()),
        1e-8);

  double near_hom = 0.0;
  for (int i = 0; i < 2; ++i) {
    const MoebiusElement g = random_moebius(rng, 1.2, 1.2);
    const MoebiusElement h = random_moebius(rng, 1.2, 1.2);
    LocalizedWord cat = moebius_word(g, part, cfg);
    const LocalizedWord wh = moebius_word(h, part, cfg);
    cat.factors.insert(cat.factors.end(), wh.factors.begin(), wh.factors.end());
    near_hom = std::max(near_hom,
                        sup_lift_distance(word_product(cat, cfg),
                                          to_diffeo(h * g, cfg)));
  }
  r.add("words/near_homomorphism", near_hom, 2e-6);
}

int run_check(const Opts& o) {
  const locdiff::Config cfg = make_config(o);
  SuiteRunner r;
  const bool all = o.suite == "all";
  bool known = all;
  // each suite draws from its own seed stream so selection does not shift
  // the randomness of the others
  auto sub = [&](std::uint64_t salt) {
    return SuiteRng(o.seed * 0x2545f4914f6cdd1dull + salt);
  };
  if (all || o.suite == "moebius") {
    SuiteRng rng = sub(1);
    suite_moebius(r, rng);
    known = true;
  }
  if (all || o.suite == "diffeo") {
    SuiteRng rng = sub(2);
    suite_diffeo(r, rng, cfg);
    known = true;
  }
  if (all || o.suite == "cover") {
    SuiteRng rng = sub(3);
    suite_cover(r, rng);
    known = true;
  }
  if (all || o.suite == "cocycle") {
    SuiteRng rng = sub(4);
    suite_cocycle(r, rng, cfg);
    known = true;
  }
  if (all || o.suite == "localize" || o.suite == "words") {
    const locdiff::PartitionOfUnity part =
        locdiff::build_partition(load_covering(o), cfg.margin_fraction, cfg);
    if (all || o.suite == "localize") {
      SuiteRng rng = sub(5);
      suite_localize(r, rng, part, cfg);
    }
    if (all || o.suite == "words") {
      SuiteRng rng = sub(6);
      suite_words(r, rng, part, cfg);
    }
    known = true;
  }
  if (!known)
    throw locdiff::ValidationError(
        "unknown suite: " + o.suite +
        " (expected all, moebius, diffeo, cover, cocycle, localize, words)");
  json out = report_head("check", cfg);
  out["suite"] = o.suite;
  out["seed"] = o.seed;
  out["results"] = r.results();
  out["counts"] = {{"total", r.total()}, {"passed", r.passed()}};
  out["all_pass"] = r.passed() == r.total();
  emit(out, o.output);
  return r.passed() == r.total() ? 0 : 2;
}

int exit_code_for(const std::string& code) {
  for (const char* validation :
       {"validation_error", "not_applicable", "outside_neighborhood",
        "step_too_large", "infeasible", "not_a_diffeomorphism", "coverage_gap"})
    if (code == validation) return 1;
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interval-localized factorization of circle diffeomorphisms"};
  app.require_subcommand(1);
  Opts o;

  auto add_common = [&o](CLI::App* cmd) {
    cmd->add_option("--output", o.output, "output file (default: stdout)");
    cmd->add_option("--config", o.config_path, "JSON config override file");
    cmd->add_option("--tol", o.tol, "spectral fit tail tolerance");
    cmd->add_option("--modes", o.modes, "default mode count");
  };
  auto add_geometry = [&o](CLI::App* cmd) {
    cmd->add_option("--covering", o.covering,
                    "covering JSON (default: built-in three arcs)");
    cmd->add_option("--margin", o.margin, "partition margin fraction");
    cmd->add_option("--safety", o.safety, "neighborhood safety factor");
  };

  CLI::App* localize = app.add_subcommand(
      "localize", "factor a diffeomorphism into interval-supported pieces");
  localize->add_option("--input", o.input, "diffeomorphism JSON")->required();
  add_common(localize);
  add_geometry(localize);

  CLI::App* slice = app.add_subcommand(
      "slice", "interpolation-slice a diffeomorphism into small pieces");
  slice->add_option("--input", o.input, "diffeomorphism JSON")->required();
  add_common(slice);
  add_geometry(slice);

  CLI::App* iwa = app.add_subcommand("iwasawa", "Iwasawa coordinates (p, tau, t)");
  iwa->add_option("--input", o.input, "Moebius element JSON")->required();
  add_common(iwa);

  CLI::App* tsw = app.add_subcommand("ts-word", "T/S generator word");
  tsw->add_option("--input", o.input, "Moebius element JSON")->required();
  add_common(tsw);

  CLI::App* dil = app.add_subcommand("dilation-word", "four-letter word for D(tau)");
  dil->add_option("--tau", o.tau, "dilation parameter")->required();
  add_common(dil);

  CLI::App* rot = app.add_subcommand("rotation-word", "three-letter word for R(alpha)");
  rot->add_option("--alpha", o.alpha, "rotation angle")->required();
  add_common(rot);

  CLI::App* mw = app.add_subcommand(
      "moebius-word", "localized word realizing a Moebius circle action");
  mw->add_option("--input", o.input, "Moebius element JSON")->required();
  mw->add_option("--step", o.step, "generator step (default: adaptive)");
  add_common(mw);
  add_geometry(mw);

  CLI::App* cover = app.add_subcommand(
      "cover", "universal-cover lift and its matrix trivialization");
  cover->add_option("--input", o.input, "Moebius element JSON")->required();
  cover->add_option("--branch", o.branch, "deck branch of the lift at 0");
  add_common(cover);

  CLI::App* coc = app.add_subcommand(
      "cocycle", "sign cocycle of a pair (and identity defect of a triple)");
  coc->add_option("--input", o.input, "JSON with fields g, h (optionally k)")
      ->required();
  add_common(coc);

  CLI::App* bott = app.add_subcommand("bott", "Bott 2-cocycle of two diffeomorphisms");
  bott->add_option("--input", o.input, "JSON with fields phi, psi")->required();
  add_common(bott);

  CLI::App* check = app.add_subcommand("check", "deterministic property suite");
  check->add_option("--suite", o.suite,
                    "all|moebius|diffeo|cover|cocycle|localize|words");
  check->add_option("--seed", o.seed, "random seed");
  add_common(check);
  add_geometry(check);

  CLI::App* dump = app.add_subcommand(
      "grid-dump", "CSV of (x, lift, derivative) at 1024 points");
  dump->add_option("--input", o.input, "diffeomorphism JSON")->required();
  add_common(dump);

  CLI11_PARSE(app, argc, argv);

  try {
    if (localize->parsed()) return run_localize(o);
    if (slice->parsed()) return run_slice(o);
    if (iwa->parsed()) return run_iwasawa(o);
    if (tsw->parsed()) return run_ts_word(o);
    if (dil->parsed()) return run_dilation_word(o);
    if (rot->parsed()) return run_rotation_word(o);
    if (mw->parsed()) return run_moebius_word(o);
    if (cover->parsed()) return run_cover(o);
    if (coc->parsed()) return run_cocycle(o);
    if (bott->parsed()) return run_bott(o);
    if (check->parsed()) return run_check(o);
    if (dump->parsed()) return run_grid_dump(o);
    return 1;
  } catch (const locdiff::Error& e) {
    const json err = {{"error", {{"code", e.code()}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump(2).c_str());
    return exit_code_for(e.code());
  } catch (const json::exception& e) {
    // missing or mistyped fields in otherwise well-formed JSON input
    const json err = {
        {"error", {{"code", "validation_error"}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump(2).c_str());
    return 1;
  } catch (const std::exception& e) {
    const json err = {{"error", {{"code", "internal"}, {"message", e.what()}}}};
    std::fprintf(stderr, "%s\n", err.dump(2).c_str());
    return 2;
  }
}
