#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ergomax/ergomax.hpp>

namespace {

using namespace ergomax;

int run_maximal(const std::string& input, const std::string& op_name,
                std::optional<std::int64_t> truncate, bool exact, std::int64_t eval_lo,
                std::int64_t eval_hi, const std::string& output) {
  const WindowedSequence<double> seq = read_sequence(input);
  if (eval_lo > eval_hi) throw std::runtime_error("--eval-lo must be <= --eval-hi");
  const IntegerInterval eval{eval_lo, eval_hi};

  MaximalOperator op;
  if (op_name == "centered")
    op = MaximalOperator::centered;
  else if (op_name == "uncentered")
    op = MaximalOperator::uncentered;
  else if (op_name == "dyadic")
    op = MaximalOperator::dyadic;
  else if (op_name == "sharp")
    op = MaximalOperator::sharp;
  else
    throw std::runtime_error("unknown operator " + op_name);

  std::ostringstream csv;
  csv << "m,value,witness_lo,witness_hi\n";
  auto emit = [&csv](auto&& result, auto&& value_to_string) {
    const auto window = result.values.window();
    for (std::int64_t m = window.lo; m <= window.hi; ++m) {
      const auto& witness = result.witness(m);
      csv << m << "," << value_to_string(result.at(m)) << "," << witness.lo << "," << witness.hi
          << "\n";
    }
  };
  auto compute = [&](auto&& a) {
    switch (op) {
      case MaximalOperator::centered: return centered_maximal(a, eval, truncate);
      case MaximalOperator::uncentered: return uncentered_maximal(a, eval, truncate);
      case MaximalOperator::dyadic: return dyadic_maximal(a, eval);
      case MaximalOperator::sharp: return sharp_maximal(a, eval, default_sharp_range(a));
    }
    throw std::runtime_error("unknown operator");
  };
  if (exact) {
    const auto result = compute(to_rational(seq));
    emit(result, [](const Rational& v) {
      std::ostringstream s;
      s << v;
      return s.str();
    });
  } else {
    const auto result = compute(seq);
    emit(result, [](double v) { return nlohmann::json(v).dump(); });
  }

  if (output == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    out << csv.str();
  }
  return 0;
}

int run_apconst(const std::string& weight_path, double p, bool exact,
                std::optional<double> threshold) {
  const WeightSequence<double> w = read_weight(weight_path);
  if (threshold) {
    const bool exceeds = exact
                             ? ap_constant_exceeds(to_rational(w), p, rational_from_double(*threshold))
                             : ap_constant_exceeds(w, p, *threshold);
    std::cout << "threshold " << *threshold << "\nexceeds " << (exceeds ? "yes" : "no") << "\n";
    return 0;
  }
  if (exact) {
    const auto report = ap_constant(to_rational(w), p);
    std::cout << "constant " << report.constant << " (" << num::as_double(report.constant)
              << ")\nwitness " << report.witness.lo << " " << report.witness.hi << "\n";
  } else {
    const auto report = ap_constant(w, p);
    std::cout << "constant " << report.constant << "\nwitness " << report.witness.lo << " "
              << report.witness.hi << "\n";
  }
  return 0;
}

int run_wnorm(const std::string& input, const std::string& weight_path, double p) {
  const WindowedSequence<double> a = read_sequence(input);
  const WeightSequence<double> w = read_weight(weight_path);
  std::cout << weighted_norm(a, w, p) << "\n";
  return 0;
}

int run_cz(const std::string& input, const std::string& lambda_text, bool exact) {
  const WindowedSequence<double> seq = read_sequence(input);
  auto print = [](const auto& cz, const auto& prefix) {
    for (const DyadicInterval& d : cz.intervals) {
      std::cout << d.level << " " << d.index << " " << d.lo() << " " << d.hi() << " "
                << prefix.average(d.interval()) << "\n";
    }
  };
  if (exact) {
    const auto a = to_rational(seq);
    const Rational lambda = rational_from_string(lambda_text);
    const auto cz = cz_decompose(a, lambda);
    print(cz, PrefixTable<Rational>(a, true));
  } else {
    const double lambda = std::stod(lambda_text);
    const auto cz = cz_decompose(seq, lambda);
    print(cz, PrefixTable<double>(seq, true));
  }
  return 0;
}

std::vector<double> parse_lambda_grid(const std::string& spec) {
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    // geometric: "hi:lo:count" halving-style interpolation
    double hi = 0, lo = 0;
    int count = 0;
    std::istringstream s(spec);
    char c1 = 0, c2 = 0;
    if (!(s >> hi >> c1 >> lo >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1 || hi <= 0 ||
        lo <= 0)
      throw std::runtime_error("bad --lambda-grid spec (want hi:lo:count)");
    if (count == 1) return {hi};
    const double q = std::pow(lo / hi, 1.0 / (count - 1));
    double v = hi;
    for (int i = 0; i < count; ++i) {
      grid.push_back(v);
      v *= q;
    }
    return grid;
  }
  std::istringstream s(spec);
  std::string item;
  while (std::getline(s, item, ',')) grid.push_back(std::stod(item));
  if (grid.empty()) throw std::runtime_error("empty --lambda-grid");
  return grid;
}

int run_verify(const std::string& kind, const std::string& input, const std::string& weight_path,
               double p, const std::string& grid_spec) {
  const WindowedSequence<double> a = read_sequence(input);
  const WeightSequence<double> w = read_weight(weight_path);
  const std::vector<double> grid = parse_lambda_grid(grid_spec);
  bool all_pass = true;
  std::optional<ApReport<double>> ap;
  if (kind == "weakpp") ap = ap_constant(w, p);
  for (const double lambda : grid) {
    InequalityReport report;
    if (kind == "weak11") {
      report = weak11_with_Mw(a, w, lambda);
    } else if (kind == "weakpp") {
      report = weighted_weak_pp(a, w, p, lambda, ap);
    } else if (kind == "strongpp") {
      report = strong_pp_check(a, w, p);
    } else {
      throw std::runtime_error("unknown verify kind " + kind);
    }
    std::cout << report.checker << " lambda " << lambda << " lhs " << report.lhs << " rhs "
              << report.rhs << " constant " << report.constant << " ratio " << report.ratio << " "
              << (report.pass ? "pass" : "FAIL") << "\n";
    if (!report.pass) {
      all_pass = false;
      std::cout << "  witness: " << report.witness << "\n";
    }
    if (kind == "strongpp") break;  // ratio probe does not depend on lambda
  }
  return all_pass ? 0 : 1;
}

int run_ergodic_maximal(const std::string& system_path, const std::string& f_path,
                        std::optional<std::int64_t> truncate, const std::string& output) {
  const auto sys = read_system(system_path);
  const auto f = read_atom_function(f_path, sys.atom_count());
  const auto result = ergodic_maximal(sys, f, truncate);
  std::ostringstream csv;
  csv << "atom,value\n";
  for (int x = 0; x < sys.atom_count(); ++x)
    csv << x << "," << nlohmann::json(result[static_cast<std::size_t>(x)]).dump() << "\n";
  if (output == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream out(output);
    if (!out) throw std::runtime_error("cannot write " + output);
    out << csv.str();
  }
  return 0;
}

int run_ergodic_apconst(const std::string& system_path, const std::string& weight_path, double p,
                        std::int64_t n_max) {
  const auto sys = read_system(system_path);
  const auto w = read_atom_function(weight_path, sys.atom_count());
  const auto report = ergodic_ap_constant(sys, w, p, n_max);
  const auto unrolled = ergodic_ap_constant_unrolled(sys, w, p);
  std::cout << "constant " << report.constant << "\natom " << report.atom << "\nradius "
            << report.radius << "\nunrolled " << unrolled.constant << "\n";
  return 0;
}

int run_ergodic_transfer(const std::string& system_path, const std::string& f_path, std::int64_t L,
                         std::int64_t J, int x_opt) {
  const auto sys_double = read_system(system_path);
  const auto f_double = read_atom_function(f_path, sys_double.atom_count());
  // The identity is mass-independent, so it is checked exactly on a
  // uniform-mass rational twin of the permutation.
  const int n = sys_double.atom_count();
  std::vector<Rational> masses(static_cast<std::size_t>(n), Rational(1, n));
  const FinitePermutationSystem<Rational> sys(std::move(masses), sys_double.perm());
  const AtomFunction<Rational> f = atom_function_to_rational(f_double);
  std::vector<int> atoms;
  if (x_opt >= 0) {
    atoms.push_back(x_opt);
  } else {
    for (int x = 0; x < n; ++x) atoms.push_back(x);
  }
  for (const int x : atoms) {
    const auto check = verify_transference_identity(sys, f, x, L, J);
    if (!check.ok) {
      std::cout << "MISMATCH x " << x << " m " << check.mismatch_m << " ergodic "
                << check.ergodic_value << " sequence " << check.sequence_value << "\n";
      return 1;
    }
  }
  std::cout << "identity holds exactly for " << atoms.size() << " base point(s), L " << L << " J "
            << J << "\n";
  return 0;
}

int run_ergodic_rectangle(const std::string& system_path, int k, const std::string& f_spec,
                          bool cover) {
  const auto sys = read_system(system_path);
  if (cover) {
    const auto bases = cover_by_rectangle_bases(sys, k);
    for (std::size_t i = 0; i < bases.size(); ++i) {
      std::cout << "base " << i << ":";
      for (const int x : bases[i]) std::cout << " " << x;
      std::cout << "\n";
    }
    return 0;
  }
  std::vector<int> candidates;
  if (f_spec.empty()) {
    for (int x = 0; x < sys.atom_count(); ++x) candidates.push_back(x);
  } else {
    std::istringstream s(f_spec);
    std::string item;
    while (std::getline(s, item, ',')) candidates.push_back(std::stoi(item));
  }
  const auto rect = find_rectangle_base(sys, k, candidates);
  std::cout << "base:";
  for (const int x : rect.base) std::cout << " " << x;
  std::cout << "\nlength " << rect.length() << "\ndisjoint "
            << (validate_rectangle(sys, rect) ? "yes" : "no") << "\nmeasure "
            << rectangle_measure(sys, rect) << "\n";
  return 0;
}

int run_ergodic_converse(const std::string& system_path, const std::string& weight_path, double p,
                         std::int64_t j, int trials, std::uint64_t seed) {
  const auto sys = read_system(system_path);
  const auto w = read_atom_function(weight_path, sys.atom_count());
  const auto probe = converse_probe(sys, w, p, j, trials, seed);
  std::cout << "ap_constant " << probe.ap_constant << "\nap_unrolled " << probe.ap_constant_unrolled
            << "\noperator_ratio " << probe.best_ratio << "\ntrials " << probe.trial_ratios.size()
            << "\n";
  return 0;
}

int run_campaign_cmd(const std::string& config_path, const std::string& report_path, int jobs) {
  CampaignConfig config;
  if (!config_path.empty()) config = campaign_config_from_json(detail::load_json(config_path));
  if (const char* env_seed = std::getenv("ERGOMAX_SEED")) config.seed = std::stoull(env_seed);
  const CampaignReport report = run_campaign(config, jobs);
  const nlohmann::json doc = report.to_json();
  if (report_path == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream out(report_path);
    if (!out) throw std::runtime_error("cannot write " + report_path);
    out << doc.dump(2) << "\n";
  }
  std::cerr << "campaign: " << report.reports.size() << " reports, " << report.failures()
            << " failures\n";
  return report.failures() == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ergomax: discrete maximal operators, Muckenhoupt weights, Calderon-Zygmund "
               "decomposition, and maximal ergodic transference checks"};
  app.require_subcommand(1);

  // maximal
  auto* maximal = app.add_subcommand("maximal", "evaluate a maximal operator on a window");
  std::string m_input, m_op = "uncentered", m_output = "-";
  std::int64_t m_lo = 0, m_hi = 0, m_trunc = 0;
  bool m_exact = false;
  maximal->add_option("--input", m_input, "sequence file")->required();
  maximal->add_option("--op", m_op, "centered|uncentered|dyadic|sharp")->required();
  maximal->add_option("--truncate", m_trunc, "truncation J");
  maximal->add_flag("--exact", m_exact, "exact rational arithmetic");
  maximal->add_option("--eval-lo", m_lo, "evaluation window start")->required();
  maximal->add_option("--eval-hi", m_hi, "evaluation window end")->required();
  maximal->add_option("--output", m_output, "CSV path or - for stdout");

  // apconst
  auto* apconst = app.add_subcommand("apconst", "windowed A_p constant of a weight");
  std::string ap_weight;
  double ap_p = 2.0;
  bool ap_exact = false;
  double ap_threshold = 0.0;
  apconst->add_option("--weight", ap_weight, "weight file")->required();
  apconst->add_option("--p", ap_p, "exponent p >= 1")->required();
  apconst->add_flag("--exact", ap_exact, "exact rational arithmetic (p in {1,2})");
  auto* ap_threshold_opt =
      apconst->add_option("--threshold", ap_threshold, "early-exit: is the constant <= T");

  // wnorm
  auto* wnorm = app.add_subcommand("wnorm", "weighted l^p norm of a sequence");
  std::string wn_input, wn_weight;
  double wn_p = 2.0;
  wnorm->add_option("--input", wn_input, "sequence file")->required();
  wnorm->add_option("--weight", wn_weight, "weight file")->required();
  wnorm->add_option("--p", wn_p, "exponent p >= 1")->required();

  // cz
  auto* cz = app.add_subcommand("cz", "Calderon-Zygmund decomposition at a height");
  std::string cz_input, cz_lambda;
  bool cz_exact = false;
  cz->add_option("--input", cz_input, "sequence file")->required();
  cz->add_option("--lambda", cz_lambda, "height (rational literal allowed with --exact)")->required();
  cz->add_flag("--exact", cz_exact, "exact rational arithmetic");

  // verify
  auto* verify = app.add_subcommand("verify", "weighted inequality checks over a lambda grid");
  std::string v_kind, v_input, v_weight, v_grid = "1.0";
  double v_p = 2.0;
  verify->add_option("kind", v_kind, "weak11|weakpp|strongpp")->required();
  verify->add_option("--input", v_input, "sequence file")->required();
  verify->add_option("--weight", v_weight, "weight file")->required();
  verify->add_option("--p", v_p, "exponent p");
  verify->add_option("--lambda-grid", v_grid, "hi:lo:count or comma list");

  // ergodic
  auto* ergodic = app.add_subcommand("ergodic", "finite measure-preserving system operations");
  ergodic->require_subcommand(1);
  std::string e_system;
  ergodic->add_option("--system", e_system, "system file")->required();

  auto* e_maximal = ergodic->add_subcommand("maximal", "maximal ergodic operator");
  std::string em_f, em_output = "-";
  std::int64_t em_trunc = 0;
  e_maximal->add_option("--f", em_f, "atom function file")->required();
  e_maximal->add_option("--truncate", em_trunc, "truncation J");
  e_maximal->add_option("--output", em_output, "CSV path or - for stdout");

  auto* e_apconst = ergodic->add_subcommand("apconst", "ergodic A_p constant");
  std::string ea_weight;
  double ea_p = 2.0;
  std::int64_t ea_nmax = 0;
  e_apconst->add_option("--weight", ea_weight, "atom weight file")->required();
  e_apconst->add_option("--p", ea_p, "exponent p >= 1")->required();
  e_apconst->add_option("--nmax", ea_nmax, "orbit radius cap (default: cycle length)");

  auto* e_transfer = ergodic->add_subcommand("transfer", "exact transference identity check");
  std::string et_f;
  std::int64_t et_l = 2, et_j = 2;
  int et_x = -1;
  e_transfer->add_option("--f", et_f, "atom function file")->required();
  e_transfer->add_option("--L", et_l, "identity range |m| <= L")->required();
  e_transfer->add_option("--J", et_j, "truncation radius")->required();
  e_transfer->add_option("--x", et_x, "base atom (default: all)");

  auto* e_rect = ergodic->add_subcommand("rectangle", "ergodic rectangle bases");
  int er_k = 1;
  std::string er_f;
  bool er_cover = false;
  e_rect->add_option("--K", er_k, "rectangle half-length")->required();
  e_rect->add_option("--F", er_f, "candidate atoms, comma separated (default: all)");
  e_rect->add_flag("--cover", er_cover, "print a covering family of bases");

  auto* e_conv = ergodic->add_subcommand("converse", "operator-norm probe vs the A_p constant");
  std::string ec_weight;
  double ec_p = 2.0;
  std::int64_t ec_j = 2;
  int ec_trials = 20;
  std::uint64_t ec_seed = 1;
  e_conv->add_option("--weight", ec_weight, "atom weight file")->required();
  e_conv->add_option("--p", ec_p, "exponent p > 1")->required();
  e_conv->add_option("--J", ec_j, "test-function radius (rectangle length 4J+1)");
  e_conv->add_option("--trials", ec_trials, "random trials");
  e_conv->add_option("--seed", ec_seed, "probe seed");

  // campaign
  auto* campaign = app.add_subcommand("campaign", "run the verification campaign");
  std::string c_config, c_report;
  int c_jobs = 1;
  campaign->add_option("--config", c_config, "campaign config JSON (defaults when omitted)");
  campaign->add_option("--report", c_report, "report path or - for stdout")->required();
  campaign->add_option("--jobs", c_jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (maximal->parsed())
      return run_maximal(m_input, m_op, m_trunc > 0 ? std::optional(m_trunc) : std::nullopt,
                         m_exact, m_lo, m_hi, m_output);
    if (apconst->parsed())
      return run_apconst(ap_weight, ap_p, ap_exact,
                         ap_threshold_opt->count() > 0 ? std::optional(ap_threshold) : std::nullopt);
    if (wnorm->parsed()) return run_wnorm(wn_input, wn_weight, wn_p);
    if (cz->parsed()) return run_cz(cz_input, cz_lambda, cz_exact);
    if (verify->parsed()) return run_verify(v_kind, v_input, v_weight, v_p, v_grid);
    if (ergodic->parsed()) {
      if (e_maximal->parsed())
        return run_ergodic_maximal(e_system, em_f,
                                   em_trunc > 0 ? std::optional(em_trunc) : std::nullopt, em_output);
      if (e_apconst->parsed()) return run_ergodic_apconst(e_system, ea_weight, ea_p, ea_nmax);
      if (e_transfer->parsed()) return run_ergodic_transfer(e_system, et_f, et_l, et_j, et_x);
      if (e_rect->parsed()) return run_ergodic_rectangle(e_system, er_k, er_f, er_cover);
      if (e_conv->parsed())
        return run_ergodic_converse(e_system, ec_weight, ec_p, ec_j, ec_trials, ec_seed);
    }
    if (campaign->parsed()) return run_campaign_cmd(c_config, c_report, c_jobs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
