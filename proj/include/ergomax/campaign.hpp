#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "ergomax/core.hpp"
#include "ergomax/cz.hpp"
#include "ergomax/ergodic.hpp"
#include "ergomax/generators.hpp"
#include "ergomax/io.hpp"
#include "ergomax/maximal.hpp"
#include "ergomax/report.hpp"
#include "ergomax/weights.hpp"

namespace ergomax {

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string digest_hex(std::string_view s) {
  static const char* hex = "0123456789abcdef";
  std::uint64_t h = fnv1a64(s);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> checks = {
      "lemma1_pointwise", "lemma2_covering", "lemma3_sharp",  "cz_structure",
      "thm1_weak11",      "thm2_interval_a", "thm2_interval_b", "thm3_weakpp",
      "thm4_strongpp",    "transference",    "ergodic_weak11", "ergodic_strongpp",
      "converse_trend"};
  return checks;
}

/// Seeds fully determine corpora; reports are byte-identical for equal
/// (seed, config), independent of the worker count.
struct CampaignConfig {
  std::uint64_t seed = 1;
  std::string mode = "float";  // "float" | "exact"
  std::vector<std::string> checks;  // empty = all
  int sequence_count = 6;
  std::vector<std::int64_t> window_sizes = {8, 16, 32};
  std::vector<double> p_grid = {1.5, 2.0, 3.0};
  int lambda_points = 4;
  std::vector<int> system_sizes = {5, 8, 16};
  std::vector<std::int64_t> strongpp_windows = {32, 64};
  int transference_cases = 12;
  std::vector<int> converse_sizes = {8, 16, 32};
  std::int64_t converse_j = 1;
  int converse_trials = 8;
  std::map<std::string, double> constant_overrides;

  bool exact() const { return mode == "exact"; }

  bool enabled(std::string_view check) const {
    if (checks.empty()) return true;
    return std::find(checks.begin(), checks.end(), check) != checks.end();
  }

  /// Exact arithmetic admits only integer p with a rational dual power.
  std::vector<double> effective_p_grid() const {
    if (!exact()) return p_grid;
    std::vector<double> out;
    for (const double p : p_grid)
      if (p == 1.0 || p == 2.0) out.push_back(p);
    return out;
  }
};

inline CampaignConfig campaign_config_from_json(const nlohmann::json& doc) {
  CampaignConfig c;
  c.seed = doc.value("seed", c.seed);
  c.mode = doc.value("mode", c.mode);
  if (c.mode != "float" && c.mode != "exact")
    throw std::runtime_error("campaign config: mode must be float or exact");
  c.checks = doc.value("checks", c.checks);
  for (const auto& name : c.checks)
    if (std::find(all_checks().begin(), all_checks().end(), name) == all_checks().end())
      throw std::runtime_error("campaign config: unknown check " + name);
  c.sequence_count = doc.value("sequence_count", c.sequence_count);
  c.window_sizes = doc.value("window_sizes", c.window_sizes);
  c.p_grid = doc.value("p_grid", c.p_grid);
  c.lambda_points = doc.value("lambda_points", c.lambda_points);
  c.system_sizes = doc.value("system_sizes", c.system_sizes);
  c.strongpp_windows = doc.value("strongpp_windows", c.strongpp_windows);
  c.transference_cases = doc.value("transference_cases", c.transference_cases);
  c.converse_sizes = doc.value("converse_sizes", c.converse_sizes);
  c.converse_j = doc.value("converse_j", c.converse_j);
  c.converse_trials = doc.value("converse_trials", c.converse_trials);
  if (doc.contains("constant_overrides"))
    c.constant_overrides = doc["constant_overrides"].get<std::map<std::string, double>>();
  return c;
}

inline nlohmann::json campaign_config_to_json(const CampaignConfig& c) {
  nlohmann::json doc;
  doc["seed"] = c.seed;
  doc["mode"] = c.mode;
  doc["checks"] = c.checks;
  doc["sequence_count"] = c.sequence_count;
  doc["window_sizes"] = c.window_sizes;
  doc["p_grid"] = c.p_grid;
  doc["lambda_points"] = c.lambda_points;
  doc["system_sizes"] = c.system_sizes;
  doc["strongpp_windows"] = c.strongpp_windows;
  doc["transference_cases"] = c.transference_cases;
  doc["converse_sizes"] = c.converse_sizes;
  doc["converse_j"] = c.converse_j;
  doc["converse_trials"] = c.converse_trials;
  doc["constant_overrides"] = c.constant_overrides;
  return doc;
}

struct CampaignReport {
  std::uint64_t seed = 1;
  std::string mode = "float";
  std::vector<InequalityReport> reports;

  int failures() const {
    int n = 0;
    for (const auto& r : reports)
      if (!r.pass) ++n;
    return n;
  }

  nlohmann::json to_json() const {
    nlohmann::json checks = nlohmann::json::object();
    std::map<std::string, std::tuple<int, int, double>> by_check;
    for (const auto& r : reports) {
      auto& [count, fails, max_ratio] = by_check[r.checker];
      ++count;
      if (!r.pass) ++fails;
      max_ratio = std::max(max_ratio, r.ratio);
    }
    for (const auto& [name, stats] : by_check) {
      checks[name] = {{"count", std::get<0>(stats)},
                      {"failures", std::get<1>(stats)},
                      {"max_ratio", std::get<2>(stats)}};
    }
    nlohmann::json doc;
    doc["summary"] = {{"seed", seed},
                      {"mode", mode},
                      {"total", reports.size()},
                      {"failures", failures()},
                      {"checks", checks}};
    nlohmann::json body = nlohmann::json::array();
    for (const auto& r : reports) body.push_back(report_to_json(r));
    doc["reports"] = body;
    return doc;
  }
};

namespace detail {

struct SeqInstance {
  std::string label;
  WindowedSequence<double> seq;
};

inline SequenceKind sequence_kind_rotation(int i) {
  static const SequenceKind kinds[] = {SequenceKind::random_sparse, SequenceKind::random_dense,
                                       SequenceKind::adversarial_dyadic, SequenceKind::step,
                                       SequenceKind::delta};
  return kinds[i % 5];
}

inline const char* sequence_kind_name(SequenceKind k) {
  switch (k) {
    case SequenceKind::delta: return "delta";
    case SequenceKind::constant: return "constant";
    case SequenceKind::step: return "step";
    case SequenceKind::random_sparse: return "sparse";
    case SequenceKind::random_dense: return "dense";
    case SequenceKind::adversarial_dyadic: return "advdyadic";
  }
  return "?";
}

inline WeightKind weight_kind_rotation(int i) {
  static const WeightKind kinds[] = {WeightKind::constant, WeightKind::alternating,
                                     WeightKind::random_bounded_ratio, WeightKind::power};
  return kinds[i % 4];
}

inline const char* weight_kind_name(WeightKind k) {
  switch (k) {
    case WeightKind::constant: return "constant";
    case WeightKind::alternating: return "alternating";
    case WeightKind::power: return "power";
    case WeightKind::random_bounded_ratio: return "boundedratio";
  }
  return "?";
}

inline std::vector<SeqInstance> sequence_corpus(const CampaignConfig& config, std::string_view check,
                                                bool signed_values) {
  std::vector<SeqInstance> out;
  for (const std::int64_t size : config.window_sizes) {
    for (int i = 0; i < config.sequence_count; ++i) {
      SequenceSpec spec;
      spec.kind = sequence_kind_rotation(i);
      spec.window = {-size / 2, size - 1 - size / 2};
      spec.position = spec.kind == SequenceKind::delta ? 0 : spec.window.lo + size / 3;
      spec.signed_values = signed_values && (spec.kind == SequenceKind::random_sparse ||
                                             spec.kind == SequenceKind::random_dense);
      std::string label = std::string(check) + "|w" + std::to_string(size) + "|i" +
                          std::to_string(i) + "|" + sequence_kind_name(spec.kind);
      const std::uint64_t seed = fnv1a64(label + "|s" + std::to_string(config.seed));
      out.push_back({std::move(label), generate_sequence(spec, seed)});
    }
  }
  return out;
}

inline WeightSequence<double> paired_weight(const CampaignConfig& config, const std::string& label,
                                            int index, const IntegerInterval& window) {
  WeightSpec spec;
  spec.kind = weight_kind_rotation(index);
  spec.window = window;
  spec.alpha = 0.4;
  spec.center = (window.lo + window.hi) / 2;
  spec.ratio_bound = 4.0;
  return generate_weight(spec, fnv1a64(label + "|weight|s" + std::to_string(config.seed)));
}

template <typename T>
WindowedSequence<T> to_mode(const WindowedSequence<double>& a) {
  if constexpr (is_exact_scalar_v<T>) {
    return to_rational(a);
  } else {
    return a;
  }
}

template <typename T>
WeightSequence<T> to_mode_weight(const WeightSequence<double>& w) {
  if constexpr (is_exact_scalar_v<T>) {
    return to_rational(w);
  } else {
    return w;
  }
}

template <typename T>
T to_scalar(double x) {
  if constexpr (is_exact_scalar_v<T>) {
    return rational_from_double(x);
  } else {
    return x;
  }
}

// Lemma 1 pointwise comparison M' <= M <= 3 M' on a padded window.
template <typename T>
InequalityReport lemma1_instance(const WindowedSequence<T>& a, const std::string& digest) {
  const auto w = a.window();
  const IntegerInterval eval{w.lo - 8, w.hi + 8};
  const auto centered = centered_maximal(a, eval);
  const auto uncentered = uncentered_maximal(a, eval);
  const double tol = scalar_tolerance_v<T>;
  bool ok = true;
  double worst = 0.0;
  std::string witness;
  for (std::int64_t m = eval.lo; m <= eval.hi && ok; ++m) {
    const T mc = centered.at(m);
    const T mu = uncentered.at(m);
    const double mcd = num::as_double(mc);
    const double mud = num::as_double(mu);
    if (mud > 0.0) worst = std::max(worst, mud / (3.0 * std::max(mcd, 1e-300)));
    const bool lower_ok = num::as_double(mc) <= mud * (1.0 + tol) || mc <= mu;
    const bool upper_ok = mud <= 3.0 * mcd * (1.0 + tol) || mu <= T(3) * mc;
    if (!lower_ok || !upper_ok) {
      ok = false;
      witness = "m " + std::to_string(m);
    }
  }
  InequalityReport report;
  report.checker = "lemma1_pointwise";
  report.digest = digest;
  report.pass = ok;
  report.ratio = worst;
  report.constant = 3.0;
  report.witness = witness;
  return report;
}

template <typename T>
InequalityReport lemma3_instance(const WindowedSequence<T>& a, const std::string& digest) {
  const auto bmo = bmo_norm(a);
  const T bco = best_constant_oscillation(a);
  const double tol = scalar_tolerance_v<T>;
  const double bmo_d = num::as_double(bmo.norm);
  const double bco_d = num::as_double(bco);
  bool ok = bco_d <= bmo_d * (1.0 + tol) && bmo_d <= 2.0 * bco_d * (1.0 + tol);
  std::string witness = ok ? "" : "two-sided bound failed";
  // part 2: pointwise M#(|a|) <= M#(a) over the sequence window
  const auto sharp_signed = sharp_maximal(a, a.window());
  const auto sharp_abs = sharp_maximal(a.abs(), a.window());
  for (std::int64_t m = a.window().lo; m <= a.window().hi && ok; ++m) {
    const double lhs = num::as_double(sharp_abs.at(m));
    const double rhs = num::as_double(sharp_signed.at(m));
    if (!(lhs <= rhs * (1.0 + tol)) && !(sharp_abs.at(m) <= sharp_signed.at(m))) {
      ok = false;
      witness = "sharp comparison at m " + std::to_string(m);
    }
  }
  InequalityReport report;
  report.checker = "lemma3_sharp";
  report.digest = digest;
  report.pass = ok;
  report.ratio = bmo_d > 0.0 ? bco_d / bmo_d : 0.0;  // must land in [1/2, 1]
  report.witness = witness;
  report.aux["bmo"] = bmo_d;
  report.aux["best_constant"] = bco_d;
  return report;
}

// CZ structural invariants, always in exact arithmetic: disjointness,
// lambda < avg <= 2 lambda, quiet parents, union = dyadic superlevel set.
inline InequalityReport cz_structure_instance(const WindowedSequence<Rational>& a,
                                              const Rational& lambda, const std::string& digest) {
  InequalityReport report;
  report.checker = "cz_structure";
  report.digest = digest;
  report.pass = true;
  report.aux["lambda"] = num::as_double(lambda);
  const auto cz = cz_decompose(a, lambda);
  const PrefixTable<Rational> prefix(a, true);
  double max_avg_ratio = 0.0;
  for (std::size_t i = 0; i < cz.intervals.size(); ++i) {
    const DyadicInterval& d = cz.intervals[i];
    if (i + 1 < cz.intervals.size() && d.hi() >= cz.intervals[i + 1].lo()) {
      report.pass = false;
      report.witness = "overlap after interval " + d.interval().to_string();
      break;
    }
    const Rational avg = prefix.average(d.interval());
    if (!(avg > lambda && avg <= Rational(2) * lambda)) {
      report.pass = false;
      report.witness = "average outside (lambda, 2 lambda] on " + d.interval().to_string();
      break;
    }
    const Rational parent_avg = prefix.average(d.parent().interval());
    if (parent_avg > lambda) {
      report.pass = false;
      report.witness = "parent not quiet above " + d.interval().to_string();
      break;
    }
    max_avg_ratio = std::max(max_avg_ratio, num::as_double(avg / (Rational(2) * lambda)));
  }
  if (report.pass) {
    std::vector<std::int64_t> member_union;
    for (const DyadicInterval& d : cz.intervals)
      for (std::int64_t m = d.lo(); m <= d.hi(); ++m) member_union.push_back(m);
    const auto level_set = superlevel_set(a, MaximalOperator::dyadic, lambda);
    if (member_union != level_set) {
      report.pass = false;
      report.witness = "union differs from dyadic superlevel set";
    }
  }
  report.ratio = max_avg_ratio;
  return report;
}

}  // namespace detail

/// Runs every enabled checker over the seeded corpora and returns the sorted,
/// deterministic report list.
inline CampaignReport run_campaign(const CampaignConfig& config, int jobs = 1) {
  using detail::SeqInstance;
  std::vector<std::function<std::vector<InequalityReport>()>> tasks;

  const bool exact = config.exact();
  const std::vector<double> p_grid = config.effective_p_grid();

  auto dispatch = [&](auto&& fn) {
    // wraps a task so an exception becomes a failed report instead of a crash
    tasks.push_back([fn = std::forward<decltype(fn)>(fn)]() -> std::vector<InequalityReport> {
      try {
        return fn();
      } catch (const std::exception& e) {
        InequalityReport r;
        r.checker = "task_error";
        r.pass = false;
        r.witness = e.what();
        return {r};
      }
    });
  };

  // ---- sequence-based checks ----
  if (config.enabled("lemma1_pointwise")) {
    for (const SeqInstance& inst : detail::sequence_corpus(config, "lemma1_pointwise", true)) {
      dispatch([inst, exact]() -> std::vector<InequalityReport> {
        if (exact)
          return {detail::lemma1_instance(to_rational(inst.seq), digest_hex(inst.label))};
        return {detail::lemma1_instance(inst.seq, digest_hex(inst.label))};
      });
    }
  }

  if (config.enabled("lemma3_sharp")) {
    for (const SeqInstance& inst : detail::sequence_corpus(config, "lemma3_sharp", true)) {
      dispatch([inst, exact]() -> std::vector<InequalityReport> {
        if (exact)
          return {detail::lemma3_instance(to_rational(inst.seq), digest_hex(inst.label))};
        return {detail::lemma3_instance(inst.seq, digest_hex(inst.label))};
      });
    }
  }

  if (config.enabled("lemma2_covering") || config.enabled("cz_structure")) {
    for (const SeqInstance& inst : detail::sequence_corpus(config, "lemma2_cz", false)) {
      const auto grid = lambda_grid(inst.seq, config.lambda_points);
      for (std::size_t gi = 0; gi < grid.size(); ++gi) {
        const double lambda = grid[gi];
        const std::string label = inst.label + "|lam" + std::to_string(gi);
        if (config.enabled("lemma2_covering")) {
          dispatch([inst, lambda, label]() -> std::vector<InequalityReport> {
            // covering and CZ structure are exact set statements; run them in
            // rational arithmetic in both modes
            InequalityReport r =
                verify_covering_lemma(to_rational(inst.seq), rational_from_double(lambda));
            r.digest = digest_hex(label + "|covering");
            r.aux["lambda"] = lambda;
            return {r};
          });
        }
        if (config.enabled("cz_structure")) {
          dispatch([inst, lambda, label]() -> std::vector<InequalityReport> {
            return {detail::cz_structure_instance(to_rational(inst.seq),
                                                  rational_from_double(lambda),
                                                  digest_hex(label + "|struct"))};
          });
        }
      }
    }
  }

  // ---- weighted checks ----
  if (config.enabled("thm1_weak11") || config.enabled("thm3_weakpp")) {
    const auto corpus = detail::sequence_corpus(config, "weak_weighted", false);
    for (int wi = 0; wi < static_cast<int>(corpus.size()); ++wi) {
      const SeqInstance& inst = corpus[static_cast<std::size_t>(wi)];
      const auto grid = lambda_grid(inst.seq, config.lambda_points);
      if (grid.empty()) continue;
      const double l1 = inst.seq.l1_norm();
      const double lambda_min = grid.back();
      const auto reach = static_cast<std::int64_t>(std::ceil(l1 / lambda_min)) + 1;
      const IntegerInterval w_window{inst.seq.window().lo - reach, inst.seq.window().hi + reach};
      const WeightSequence<double> weight = detail::paired_weight(config, inst.label, wi, w_window);

      if (config.enabled("thm1_weak11")) {
        const auto it = config.constant_overrides.find("thm1_weak11");
        const double constant = it == config.constant_overrides.end() ? 36.0 : it->second;
        for (std::size_t gi = 0; gi < grid.size(); ++gi) {
          const double lambda = grid[gi];
          const std::string label = inst.label + "|weak11|lam" + std::to_string(gi);
          dispatch([inst, weight, lambda, label, constant, exact]() -> std::vector<InequalityReport> {
            InequalityReport r;
            if (exact) {
              r = weak11_with_Mw(to_rational(inst.seq), to_rational(weight),
                                 rational_from_double(lambda), rational_from_double(constant));
            } else {
              r = weak11_with_Mw(inst.seq, weight, lambda, constant);
            }
            r.digest = digest_hex(label);
            return {r};
          });
        }
      }

      if (config.enabled("thm3_weakpp")) {
        for (const double p : p_grid) {
          if (p <= 1.0) continue;
          for (std::size_t gi = 0; gi < grid.size(); ++gi) {
            const double lambda = grid[gi];
            const std::string label =
                inst.label + "|weakpp|p" + std::to_string(p) + "|lam" + std::to_string(gi);
            dispatch([inst, weight, p, lambda, label, exact]() -> std::vector<InequalityReport> {
              InequalityReport r;
              if (exact) {
                r = weighted_weak_pp(to_rational(inst.seq), to_rational(weight), p,
                                     rational_from_double(lambda));
              } else {
                r = weighted_weak_pp(inst.seq, weight, p, lambda);
              }
              r.digest = digest_hex(label);
              return {r};
            });
          }
        }
      }
    }
  }

  if (config.enabled("thm2_interval_a") || config.enabled("thm2_interval_b")) {
    for (const std::int64_t size : config.window_sizes) {
      for (int i = 0; i < config.sequence_count; ++i) {
        WeightSpec spec;
        spec.kind = detail::weight_kind_rotation(i);
        spec.window = {-size / 2, size - 1 - size / 2};
        spec.alpha = 0.4;
        spec.center = 0;
        spec.ratio_bound = 4.0;
        const std::string label = "thm2|w" + std::to_string(size) + "|i" + std::to_string(i) + "|" +
                                  detail::weight_kind_name(spec.kind);
        const std::uint64_t seed = fnv1a64(label + "|s" + std::to_string(config.seed));
        const WeightSequence<double> weight = generate_weight(spec, seed);
        for (const double p : p_grid) {
          const std::string plabel = label + "|p" + std::to_string(p);
          dispatch([weight, p, plabel, seed, &config]() -> std::vector<InequalityReport> {
            std::vector<InequalityReport> out;
            SequenceSpec aspec;
            aspec.kind = SequenceKind::random_dense;
            aspec.window = weight.window();
            const WindowedSequence<double> dense =
                generate_sequence(aspec, fnv1a64(plabel + "|a"));
            std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
            auto run = [&](auto mode_tag) {
              using T = typename decltype(mode_tag)::type;
              const auto w_t = detail::to_mode_weight<T>(weight);
              const auto a_t = detail::to_mode<T>(dense);
              const ApReport<T> ap = ap_constant(w_t, p);
              InequalityReport worst_a, worst_b;
              worst_a.checker = "thm2_interval_a";
              worst_b.checker = "thm2_interval_b";
              bool a_all_pass = true, b_all_pass = true;
              std::string a_witness, b_witness;
              const auto window = w_t.window();
              for (std::int64_t lo = window.lo; lo <= window.hi; ++lo) {
                for (std::int64_t hi = lo; hi <= window.hi; ++hi) {
                  const IntegerInterval interval{lo, hi};
                  if (config.enabled("thm2_interval_a")) {
                    InequalityReport r =
                        check_interval_inequality_A(w_t, p, a_t, interval, ap.constant);
                    if (!r.pass && a_all_pass) {
                      a_all_pass = false;
                      a_witness = r.witness;
                    }
                    if (r.ratio >= worst_a.ratio) worst_a = r;
                  }
                  if (config.enabled("thm2_interval_b")) {
                    std::vector<std::int64_t> subset;
                    for (std::int64_t m = lo; m <= hi; ++m)
                      if (rng() & 1) subset.push_back(m);
                    if (subset.empty()) subset.push_back(lo);
                    InequalityReport r =
                        check_interval_inequality_B(w_t, p, subset, interval, ap.constant);
                    if (!r.pass && b_all_pass) {
                      b_all_pass = false;
                      b_witness = r.witness;
                    }
                    if (r.ratio >= worst_b.ratio) worst_b = r;
                  }
                }
              }
              if (config.enabled("thm2_interval_a")) {
                worst_a.checker = "thm2_interval_a";
                worst_a.pass = a_all_pass;
                worst_a.witness = a_witness;
                worst_a.digest = digest_hex(plabel + "|a");
                out.push_back(worst_a);
              }
              if (config.enabled("thm2_interval_b")) {
                worst_b.checker = "thm2_interval_b";
                worst_b.pass = b_all_pass;
                worst_b.witness = b_witness;
                worst_b.digest = digest_hex(plabel + "|b");
                out.push_back(worst_b);
              }
            };
            if (config.exact())
              run(std::type_identity<Rational>{});
            else
              run(std::type_identity<double>{});
            return out;
          });
        }
      }
    }
  }

  if (config.enabled("thm4_strongpp")) {
    for (const std::int64_t size : config.strongpp_windows) {
      for (int i = 0; i < config.sequence_count; ++i) {
        SequenceSpec aspec;
        aspec.kind = detail::sequence_kind_rotation(i);
        aspec.window = {-size / 2, size - 1 - size / 2};
        aspec.position = aspec.kind == SequenceKind::delta ? 0 : aspec.window.lo + size / 3;
        const std::string label = "thm4|w" + std::to_string(size) + "|i" + std::to_string(i) + "|" +
                                  detail::sequence_kind_name(aspec.kind);
        const WindowedSequence<double> a =
            generate_sequence(aspec, fnv1a64(label + "|s" + std::to_string(config.seed)));
        WeightSpec wspec;
        wspec.kind = detail::weight_kind_rotation(i % 3);  // skip the power kind: A_2 must stay small
        wspec.window = {aspec.window.lo - size / 2, aspec.window.hi + size / 2};
        wspec.ratio_bound = 2.0;
        const WeightSequence<double> weight =
            generate_weight(wspec, fnv1a64(label + "|weight|s" + std::to_string(config.seed)));
        dispatch([a, weight, label, exact]() -> std::vector<InequalityReport> {
          InequalityReport r = exact
                                   ? strong_pp_check(to_rational(a), to_rational(weight), 2.0)
                                   : strong_pp_check(a, weight, 2.0);
          r.digest = digest_hex(label);
          return {r};
        });
      }
    }
  }

  // ---- ergodic checks ----
  if (config.enabled("transference")) {
    for (int i = 0; i < config.transference_cases; ++i) {
      const std::string label = "transfer|i" + std::to_string(i);
      dispatch([label, i, &config]() -> std::vector<InequalityReport> {
        std::mt19937_64 rng(fnv1a64(label + "|s" + std::to_string(config.seed)));
        SystemSpec spec;
        spec.kind = (i % 3 == 2) ? SystemKind::cycle_with_null_atoms : SystemKind::cycle;
        spec.n = 5 + static_cast<int>(rng() % 60);
        spec.extra = 2;
        const auto sys = generate_system_exact(spec);
        AtomFunction<double> f =
            generate_atom_function(AtomFunctionKind::random_dense, sys.atom_count(), rng());
        if (rng() & 1)
          for (auto& v : f)
            if (rng() & 1) v = -v;
        const int x = static_cast<int>(rng() % static_cast<std::uint64_t>(sys.atom_count()));
        const std::int64_t L = 1 + static_cast<std::int64_t>(rng() % 6);
        const std::int64_t J = 1 + static_cast<std::int64_t>(rng() % 6);
        const auto check =
            verify_transference_identity(sys, atom_function_to_rational(f), x, L, J);
        InequalityReport r;
        r.checker = "transference";
        r.digest = digest_hex(label);
        r.pass = check.ok;
        r.aux["L"] = static_cast<double>(L);
        r.aux["J"] = static_cast<double>(J);
        r.aux["n"] = static_cast<double>(sys.atom_count());
        if (!check.ok)
          r.witness = "mismatch at m " + std::to_string(check.mismatch_m) + ": " +
                      std::to_string(num::as_double(check.ergodic_value)) + " vs " +
                      std::to_string(num::as_double(check.sequence_value));
        return {r};
      });
    }
  }

  if (config.enabled("ergodic_weak11") || config.enabled("ergodic_strongpp")) {
    static const AtomWeightKind wkinds[] = {AtomWeightKind::constant,
                                            AtomWeightKind::alternating_cycle,
                                            AtomWeightKind::random_bounded_ratio};
    static const AtomFunctionKind fkinds[] = {AtomFunctionKind::delta, AtomFunctionKind::random_dense,
                                              AtomFunctionKind::random_sparse,
                                              AtomFunctionKind::constant};
    for (const int n : config.system_sizes) {
      for (int wk = 0; wk < 3; ++wk) {
        for (int fk = 0; fk < 4; ++fk) {
          const std::string label = "ergodic|n" + std::to_string(n) + "|w" + std::to_string(wk) +
                                    "|f" + std::to_string(fk);
          const std::uint64_t seed = fnv1a64(label + "|s" + std::to_string(config.seed));
          dispatch([label, seed, n, wk, fk, exact, &config]() -> std::vector<InequalityReport> {
            std::vector<InequalityReport> out;
            SystemSpec spec;
            spec.kind = SystemKind::cycle;
            spec.n = n;
            const auto sys_d = generate_system(spec);
            const auto w_d = generate_atom_weight(sys_d, wkinds[wk], 0.4, 2.0, seed);
            const auto f_d = generate_atom_function(fkinds[fk], n, seed ^ 0x5bf03635ull);
            double fmax = 0.0;
            for (const double v : f_d) fmax = std::max(fmax, std::abs(v));
            auto run = [&](auto mode_tag) {
              using T = typename decltype(mode_tag)::type;
              const auto sys = [&] {
                if constexpr (is_exact_scalar_v<T>)
                  return generate_system_exact(spec);
                else
                  return sys_d;
              }();
              AtomFunction<T> w, f;
              if constexpr (is_exact_scalar_v<T>) {
                w = atom_function_to_rational(w_d);
                f = atom_function_to_rational(f_d);
              } else {
                w = w_d;
                f = f_d;
              }
              if (config.enabled("ergodic_weak11")) {
                for (int gi = 0; gi < config.lambda_points; ++gi) {
                  const double lambda = fmax / static_cast<double>(std::int64_t{1} << gi);
                  InequalityReport r =
                      ergodic_weak_pp(sys, f, w, 1.0, detail::to_scalar<T>(lambda));
                  r.digest = digest_hex(label + "|weak11|lam" + std::to_string(gi));
                  out.push_back(r);
                }
              }
              if (config.enabled("ergodic_strongpp")) {
                InequalityReport r = ergodic_weak_pp(sys, f, w, 2.0, detail::to_scalar<T>(1.0));
                r.digest = digest_hex(label + "|strongpp");
                out.push_back(r);
              }
            };
            if (exact)
              run(std::type_identity<Rational>{});
            else
              run(std::type_identity<double>{});
            return out;
          });
        }
      }
    }
  }

  if (config.enabled("converse_trend")) {
    static const AtomWeightKind trend_kinds[] = {AtomWeightKind::constant, AtomWeightKind::power_cycle};
    for (int tk = 0; tk < 2; ++tk) {
      const std::string label = std::string("converse|") + (tk == 0 ? "constant" : "power");
      dispatch([label, tk, &config]() -> std::vector<InequalityReport> {
        std::vector<double> a_values, b_values;
        for (const int n : config.converse_sizes) {
          SystemSpec spec;
          spec.kind = SystemKind::cycle;
          spec.n = n;
          const auto sys = generate_system(spec);
          const auto w = generate_atom_weight(sys, trend_kinds[tk], 1.5, 2.0,
                                              fnv1a64(label + "|n" + std::to_string(n)));
          const auto probe = converse_probe(sys, w, 2.0, config.converse_j, config.converse_trials,
                                            fnv1a64(label + "|probe|n" + std::to_string(n) + "|s" +
                                                    std::to_string(config.seed)));
          a_values.push_back(probe.ap_constant);
          b_values.push_back(probe.best_ratio);
        }
        InequalityReport r;
        r.checker = "converse_trend";
        r.digest = digest_hex(label);
        r.pass = true;
        for (std::size_t i = 0; i < a_values.size(); ++i) {
          r.aux["A" + std::to_string(i)] = a_values[i];
          r.aux["B" + std::to_string(i)] = b_values[i];
        }
        if (tk == 0) {
          // constant weight: A pinned at 1, B bounded across sizes
          for (const double a : a_values)
            if (std::abs(a - 1.0) > 1e-9) r.pass = false;
          const auto [mn, mx] = std::minmax_element(b_values.begin(), b_values.end());
          if (*mn <= 0.0 || *mx / *mn > 1.25) r.pass = false;
          if (!r.pass) r.witness = "constant weight trend not flat";
        } else {
          // power weight above the A_p boundary: both grow with the system
          // (B gets 2% slack against sampling noise in the probe)
          for (std::size_t i = 1; i < a_values.size(); ++i)
            if (!(a_values[i] > a_values[i - 1]) || !(b_values[i] > 0.98 * b_values[i - 1]))
              r.pass = false;
          if (!r.pass) r.witness = "power weight trend not monotone";
        }
        r.ratio = b_values.empty() ? 0.0 : b_values.back();
        return {r};
      });
    }
  }

  // ---- execute ----
  std::vector<std::vector<InequalityReport>> results(tasks.size());
  if (jobs <= 1) {
    for (std::size_t i = 0; i < tasks.size(); ++i) results[i] = tasks[i]();
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= tasks.size()) break;
        results[i] = tasks[i]();
      }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(jobs, static_cast<int>(tasks.size()));
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CampaignReport report;
  report.seed = config.seed;
  report.mode = config.mode;
  for (auto& batch : results)
    for (auto& r : batch) report.reports.push_back(std::move(r));
  std::sort(report.reports.begin(), report.reports.end(),
            [](const InequalityReport& a, const InequalityReport& b) {
              if (a.digest != b.digest) return a.digest < b.digest;
              return a.checker < b.checker;
            });
  return report;
}

}  // namespace ergomax
