// rgas: command-line front end for the random prime gas library.
//
// exit codes: 0 ok, 1 validation failure, 2 usage error, 3 numerical failure

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rgas/rgas.hpp"

namespace {

using json = nlohmann::ordered_json;
using rgas::Complex;

enum Exit { kOk = 0, kValidationFailed = 1, kUsage = 2, kNumerical = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  double tolerance = 1e-8;
  int zeros_count = 100;
  std::string zeros_file;
  std::string format = "csv";
  std::string out_path;
  double volume = 1.0;
  double lambda = 1.0;
  std::string discrete_file;
  double beta_min = 0.5, beta_max = 4.0;
  int steps = 8;

  void validate() const {
    if (!(tolerance >= 1e-12 && tolerance <= 1e-3)) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "tolerance %g is outside [1e-12, 1e-3]; tighter than 1e-12 is beyond what "
                    "double precision can certify",
                    tolerance);
      throw UsageError(buf);
    }
    if (zeros_count < 10 || zeros_count > rgas::kMaxZeros) {
      throw UsageError("zeros count must be in [10, 10000]");
    }
    if (steps < 1) throw UsageError("steps must be >= 1");
    if (!(beta_min > 0.0) || !(beta_max >= beta_min)) {
      throw UsageError("need 0 < beta-min <= beta-max");
    }
    if (!(volume > 0.0)) throw UsageError("volume must be positive");
    if (!(lambda > 0.0)) throw UsageError("lambda must be positive");
  }

  std::vector<double> beta_grid() const {
    std::vector<double> g;
    for (int i = 0; i < steps; ++i) {
      g.push_back(steps == 1 ? beta_min : beta_min + (beta_max - beta_min) * i / (steps - 1));
    }
    return g;
  }
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// JSON carries the value CSV prints, parsed back, so both show the same decimal
json jnum(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(num(x));
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw rgas::IoError("cannot open " + path + " for writing");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// ---- inputs -----------------------------------------------------------------

rgas::EnsembleSpec read_discrete(const std::string& path, double volume) {
  std::ifstream in(path);
  if (!in) throw rgas::IoError("cannot open ensemble file " + path);
  std::vector<double> omegas, masses;
  std::string line;
  std::size_t lineno = 0;
  bool seen_row = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::string a, b;
    std::stringstream ss(line);
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw rgas::ParseError(lineno, "expected 'omega,probability'");
    }
    auto trim = [](std::string s) {
      const auto lo = s.find_first_not_of(" \t\r");
      const auto hi = s.find_last_not_of(" \t\r");
      return lo == std::string::npos ? std::string{} : s.substr(lo, hi - lo + 1);
    };
    a = trim(a);
    b = trim(b);
    if (!seen_row && a == "omega" && b == "probability") {
      seen_row = true;
      continue;
    }
    seen_row = true;
    double w = 0.0, p = 0.0;
    std::size_t ua = 0, ub = 0;
    try {
      w = std::stod(a, &ua);
      p = std::stod(b, &ub);
    } catch (const std::exception&) {
      throw rgas::ParseError(lineno, "not a number pair: '" + line + "'");
    }
    if (ua != a.size() || ub != b.size()) throw rgas::ParseError(lineno, "trailing characters");
    if (!(w > 0.0)) throw rgas::ParseError(lineno, "omega must be positive");
    if (!(p >= 0.0)) throw rgas::ParseError(lineno, "probability must be non-negative");
    if (!omegas.empty() && !(w > omegas.back())) {
      throw rgas::ParseError(lineno, "omegas must be strictly ascending");
    }
    omegas.push_back(w);
    masses.push_back(p);
  }
  if (omegas.empty()) throw rgas::ParseError(lineno, "no rows in ensemble file");
  double total = 0.0;
  for (double p : masses) total += p;
  if (std::abs(total - 1.0) > 1e-9) {
    throw UsageError("ensemble masses sum to " + num(total) + "; must be within 1e-9 of 1");
  }
  for (double& p : masses) p /= total;
  return rgas::EnsembleSpec::discrete(std::move(omegas), std::move(masses), volume);
}

rgas::ZeroTable obtain_zeros(const RunConfig& cfg) {
  if (!cfg.zeros_file.empty()) return rgas::load_table(cfg.zeros_file);
  return rgas::find_zeros(cfg.zeros_count);
}

rgas::EnsembleSpec ensemble(const RunConfig& cfg) {
  if (!cfg.discrete_file.empty()) return read_discrete(cfg.discrete_file, cfg.volume);
  return rgas::EnsembleSpec::continuum(cfg.lambda, cfg.volume);
}

// ---- commands ---------------------------------------------------------------

int cmd_zeros(const RunConfig& cfg, int count, const std::string& in_path) {
  if (count < 1 || count > rgas::kMaxZeros) throw UsageError("--count must be in [1, 10000]");
  rgas::ZeroTable table;
  bool reused = false;
  if (!in_path.empty()) {
    table = rgas::load_table(in_path);
    if (table.count() >= static_cast<std::size_t>(count)) {
      table.gammas.resize(count);
      reused = true;
    } else {
      std::cerr << "rgas: " << in_path << " holds " << table.count() << " zeros, recomputing "
                << count << "\n";
    }
  }
  if (!reused) table = rgas::find_zeros(count);
  if (cfg.out_path.empty()) {
    rgas::write_table(table, std::cout);
  } else {
    rgas::save_table(table, cfg.out_path);
  }
  std::cerr << "rgas: " << table.count() << " zeros " << (reused ? "reused from file" : "computed")
            << ", abs_error " << num(table.abs_error) << "\n";
  return kOk;
}

int cmd_eval(const RunConfig& cfg, const std::string& fn, double re, double im, double q) {
  const Complex s{re, im};
  Complex v;
  if (fn == "zeta") v = rgas::zeta(s);
  else if (fn == "zeta_derivative") v = rgas::zeta_derivative(s);
  else if (fn == "zeta_log_derivative") v = rgas::zeta_log_derivative(s);
  else if (fn == "log_zeta") v = rgas::log_zeta_principal(s);
  else if (fn == "log_gamma") v = rgas::log_gamma(s);
  else if (fn == "digamma") v = rgas::digamma(s);
  else if (fn == "hurwitz") v = rgas::hurwitz_zeta(s, q);
  else if (fn == "ei") {
    if (im != 0.0) throw UsageError("ei takes a real argument");
    v = rgas::exp_integral_ei(re);
  } else {
    throw UsageError("unknown function '" + fn + "'");
  }
  Output out(cfg.out_path);
  auto& os = out.stream();
  if (cfg.format == "json") {
    json j{{"function", fn}, {"re", jnum(re)}, {"im", jnum(im)}};
    if (fn == "hurwitz") j["q"] = jnum(q);
    j["value_re"] = jnum(v.real());
    j["value_im"] = jnum(v.imag());
    os << j.dump(2) << "\n";
  } else {
    os << "function,re,im,value_re,value_im\n"
       << fn << "," << num(re) << "," << num(im) << "," << num(v.real()) << "," << num(v.imag())
       << "\n";
  }
  return kOk;
}

std::string flag_string(const rgas::ThermoFlags& f) {
  std::string s;
  if (f.hagedorn_divergent) s = "hagedorn_divergent";
  if (f.complex_branch_active) s += (s.empty() ? "" : ";") + std::string("complex_branch_active");
  return s;
}

int cmd_thermo(const RunConfig& cfg) {
  const auto spec = ensemble(cfg);
  std::vector<rgas::ThermoPoint> rows;
  for (double b : cfg.beta_grid()) rows.push_back(rgas::thermo_point(spec, b, cfg.tolerance));
  Output out(cfg.out_path);
  auto& os = out.stream();
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& p : rows) {
      json flags = json::array();
      if (p.flags.hagedorn_divergent) flags.push_back("hagedorn_divergent");
      if (p.flags.complex_branch_active) flags.push_back("complex_branch_active");
      arr.push_back({{"beta", jnum(p.beta)},
                     {"f_re", jnum(p.f.real())},
                     {"f_im", jnum(p.f.imag())},
                     {"eps", jnum(p.eps)},
                     {"entropy", jnum(p.entropy)},
                     {"flags", flags}});
    }
    os << arr.dump(2) << "\n";
  } else {
    os << "beta,f_re,f_im,eps,entropy,flags\n";
    for (const auto& p : rows) {
      os << num(p.beta) << "," << num(p.f.real()) << "," << num(p.f.imag()) << "," << num(p.eps)
         << "," << num(p.entropy) << "," << flag_string(p.flags) << "\n";
    }
  }
  return kOk;
}

int cmd_breakdown(const RunConfig& cfg, double beta) {
  if (!cfg.discrete_file.empty()) throw UsageError("breakdown needs a continuum ensemble (--lambda)");
  if (!(beta > 0.0)) throw UsageError("--beta must be positive");
  const auto spec = rgas::EnsembleSpec::continuum(cfg.lambda, cfg.volume);
  const auto zeros = obtain_zeros(cfg);
  rgas::BreakdownOptions opts;
  opts.tol = cfg.tolerance;
  const auto b = rgas::energy_breakdown(spec, beta, zeros, opts);
  json j;
  j["beta"] = jnum(b.beta);
  j["lambda"] = jnum(b.lambda);
  j["volume"] = jnum(b.volume);
  j["zeros_used"] = b.zeros_used;
  j["eps1"] = jnum(b.eps1);
  j["eps2"] = jnum(b.eps2);
  j["eps3"] = jnum(b.eps3);
  j["eps4"] = jnum(b.eps4);
  j["eps5"] = jnum(b.eps5);
  j["eps6"] = jnum(b.eps6);
  j["eps_A"] = jnum(b.eps_A);
  j["eps_B"] = jnum(b.eps_B);
  j["total"] = jnum(b.total);
  j["oracle"] = jnum(b.oracle);
  j["deviation"] = jnum(b.deviation);
  j["relative_deviation"] = jnum(b.deviation / std::abs(b.oracle));
  j["error_bound"] = jnum(b.error_bound);
  j["eps3_tail_bound"] = jnum(b.eps3_tail_bound);
  j["eps4_tail_bound"] = jnum(b.eps4_tail_bound);
  j["eps1_printed_constant"] = jnum(b.eps1_printed_constant);
  j["paper_mode_eps3"] = jnum(b.paper_mode_eps3);
  j["paper_mode_eps5"] = jnum(b.paper_mode_eps5);
  j["paper_series_value"] = jnum(b.paper_series.value);
  j["paper_series_error"] = jnum(b.paper_series.error);
  j["paper_series_smallest_index"] = b.paper_series.smallest_index;
  j["thermal_part_paper"] = jnum(b.thermal_part_paper);
  j["thermal_part_deviation"] = jnum(b.thermal_part_deviation);
  j["divergence_policy"] = b.divergence_policy;
  Output out(cfg.out_path);
  auto& os = out.stream();
  if (cfg.format == "json") {
    os << j.dump(2) << "\n";
  } else {
    os << "field,value\n";
    for (const auto& [k, v] : j.items()) {
      if (v.is_string()) os << k << ",\"" << v.get<std::string>() << "\"\n";
      else if (v.is_number_float()) os << k << "," << num(v.get<double>()) << "\n";
      else if (v.is_null()) os << k << ",nan\n";
      else os << k << "," << v.dump() << "\n";
    }
  }
  return kOk;
}

int cmd_hagedorn(const RunConfig& cfg) {
  if (cfg.discrete_file.empty()) throw UsageError("hagedorn needs --discrete <file>");
  const auto spec = ensemble(cfg);
  const auto rows = rgas::hagedorn_scan(spec, cfg.beta_grid());
  Output out(cfg.out_path);
  auto& os = out.stream();
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"beta", jnum(r.beta)}, {"divergent", r.divergent}, {"f", jnum(r.f)}});
    }
    os << arr.dump(2) << "\n";
  } else {
    os << "beta,divergent,f\n";
    for (const auto& r : rows) os << num(r.beta) << "," << (r.divergent ? 1 : 0) << "," << num(r.f) << "\n";
  }
  return kOk;
}

// ---- validate ---------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string note;
};

Check check_functional_equation() {
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    for (int k = 0; k < 10; ++k) {
      const Complex s{0.1 + 0.2 * i, -30.0 + 60.0 * k / 9.0};
      const Complex w = 1.0 - s;
      const Complex lhs = std::exp(-0.5 * s * std::log(rgas::kPi) + rgas::log_gamma(0.5 * s)) * rgas::zeta(s);
      const Complex rhs = std::exp(-0.5 * w * std::log(rgas::kPi) + rgas::log_gamma(0.5 * w)) * rgas::zeta(w);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return {"functional_equation", worst <= 1e-10, worst, 1e-10, "xi(s) - xi(1-s), 50 strip points"};
}

Check check_mixture() {
  const double r = rgas::mixture_identity_residual(2.0, 100000);
  return {"mixture_identity", r <= 1e-4, r, 1e-4, "Z_F(2) Z_B(4) - Z_B(2), Mobius series N=1e5"};
}

std::vector<Check> check_superzeta(const rgas::ZeroTable& zeros) {
  rgas::SuperzetaParams p;
  p.zeros = &zeros;
  std::vector<Check> out;
  const auto inv = rgas::sum_inverse_rho(p);
  const double d1 = std::abs(inv.value - rgas::sum_inverse_rho_closed_form());
  const double t1 = inv.bound() + 1e-12;
  out.push_back({"superzeta_sum_inverse_rho", d1 <= t1, d1, t1,
                 "zero sum vs 1 + gamma/2 - ln(4 pi)/2, " + std::to_string(zeros.count()) + " zeros"});
  const auto g1 = rgas::g1_zero_sum(Complex{1.0, 0.0}, 1.5, p);
  const double d2 = std::abs(g1.value.real() - rgas::g1_via_identity(1.5));
  const double t2 = g1.bound() + inv.bound() + 1e-10;
  out.push_back({"superzeta_two_routes", d2 <= t2, d2, t2, "G1(1, 3/2): zero sum vs zeta'/zeta identity"});
  const Complex s{2.5, 3.0};
  const auto ex = rgas::zeta_log_derivative_expansion(s, p);
  const double d3 = std::abs(ex.value - rgas::zeta_log_derivative(s));
  const double t3 = ex.bound() + 1e-10;
  out.push_back({"expansion_vs_direct", d3 <= t3, d3, t3, "zeta'/zeta(2.5+3i) from the zeros"});
  return out;
}

Check check_im_free_energy(double tol) {
  double worst = 0.0;
  for (auto [beta, lambda] : {std::pair{1.0, 1.0}, {0.6, 2.2}, {3.1, 0.7}}) {
    const Complex f = rgas::free_energy_continuum(rgas::EnsembleSpec::continuum(lambda), beta, 0.1 * tol);
    worst = std::max(worst, std::abs(f.imag() + (rgas::kPi / beta) * (1.0 - std::exp(-lambda / beta))));
  }
  return {"im_free_energy", worst <= tol, worst, tol, "Im f vs -(pi/beta)(1 - e^{-lambda/beta})"};
}

Check check_entropy() {
  const auto spec = rgas::EnsembleSpec::continuum(1.0);
  auto re_f = [&](double b) { return rgas::free_energy_continuum(spec, b, 1e-12).real(); };
  double worst = 0.0;
  for (double beta : {0.7, 1.5, 3.0}) {
    const auto p = rgas::thermo_point(spec, beta, 1e-11);
    const double h = 1e-3 * beta;
    const double df = (-re_f(beta + 2 * h) + 8 * re_f(beta + h) - 8 * re_f(beta - h) + re_f(beta - 2 * h)) / (12 * h);
    worst = std::max(worst, std::abs(p.entropy - beta * beta * df));
  }
  return {"entropy_identity", worst <= 1e-6, worst, 1e-6, "beta(eps - Re f) vs beta^2 dRe f/dbeta"};
}

Check check_zero_audit(const rgas::ZeroTable& given) {
  rgas::ZeroTable local;
  const rgas::ZeroTable* t = &given;
  if (given.gammas.empty() || given.gammas.back() < 200.0) {
    local = rgas::find_zeros(100);
    t = &local;
  }
  double worst = 0.0;
  for (double T : {50.0, 100.0, 200.0}) {
    const double est = std::round(rgas::zero_count_estimate(T));
    worst = std::max(worst, std::abs(static_cast<double>(t->count_below(T)) - est));
  }
  const bool ok = worst <= 1.0 && t->count_below(100.0) == 29;
  return {"zero_count_audit", ok, worst, 1.0, "N(T) vs smooth count at T = 50, 100, 200; N(100) = 29"};
}

int cmd_validate(const RunConfig& cfg) {
  std::vector<Check> checks;
  auto guarded = [&](const std::string& name, const std::function<void()>& run) {
    try {
      run();
    } catch (const std::exception& e) {
      checks.push_back({name, false, std::nan(""), 0.0, std::string("error: ") + e.what()});
    }
  };
  guarded("functional_equation", [&] { checks.push_back(check_functional_equation()); });
  guarded("mixture_identity", [&] { checks.push_back(check_mixture()); });
  std::optional<rgas::ZeroTable> zeros;
  guarded("zero_table", [&] { zeros = obtain_zeros(cfg); });
  if (zeros) {
    guarded("superzeta", [&] {
      for (auto& c : check_superzeta(*zeros)) checks.push_back(c);
    });
  }
  guarded("im_free_energy", [&] { checks.push_back(check_im_free_energy(cfg.tolerance)); });
  guarded("entropy_identity", [&] { checks.push_back(check_entropy()); });
  guarded("zero_count_audit", [&] { checks.push_back(check_zero_audit(zeros ? *zeros : rgas::ZeroTable{})); });

  bool all = true;
  for (const auto& c : checks) all = all && c.pass;
  Output out(cfg.out_path);
  auto& os = out.stream();
  if (cfg.format == "json") {
    json arr = json::array();
    for (const auto& c : checks) {
      arr.push_back({{"check", c.name}, {"pass", c.pass}, {"value", jnum(c.value)},
                     {"threshold", jnum(c.threshold)}, {"note", c.note}});
    }
    os << json{{"all_pass", all}, {"checks", arr}}.dump(2) << "\n";
  } else {
    for (const auto& c : checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%-26s %-4s %-18s <= %-18s %s\n", c.name.c_str(),
                    c.pass ? "PASS" : "FAIL", num(c.value).c_str(), num(c.threshold).c_str(),
                    c.note.c_str());
      os << line;
    }
    os << (all ? "all checks passed\n" : "some checks FAILED\n");
  }
  return all ? kOk : kValidationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rgas: thermodynamics of the random bosonic prime gas"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--tolerance,--tol", cfg.tolerance, "absolute tolerance, in [1e-12, 1e-3]")
      ->envname("RGAS_TOL");
  app.add_option("--zeros-count,--zeros", cfg.zeros_count, "number of zeta zeros to compute")
      ->envname("RGAS_ZEROS");
  app.add_option("--zeros-file", cfg.zeros_file, "load zeros from a table written by 'zeros'");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out,-o", cfg.out_path, "output path (default stdout)");
  app.add_option("--volume,-V", cfg.volume, "volume V");

  auto* zeros = app.add_subcommand("zeros", "compute a table of zero ordinates");
  int count = 0;
  std::string in_path;
  zeros->add_option("--count,-n", count, "how many zeros")->required();
  zeros->add_option("--in", in_path, "reuse an existing table when it is long enough");

  auto* eval = app.add_subcommand("eval", "evaluate a kernel function");
  std::string fn = "zeta";
  double re = 2.0, im = 0.0, q = 1.0;
  eval->add_option("--function,-f", fn,
                   "zeta, zeta_derivative, zeta_log_derivative, log_zeta, log_gamma, digamma, "
                   "hurwitz, ei");
  eval->add_option("--re", re, "real part of the argument");
  eval->add_option("--im", im, "imaginary part of the argument");
  eval->add_option("--q", q, "Hurwitz shift");

  auto add_ensemble = [&](CLI::App* sub, bool grid) {
    sub->add_option("--lambda", cfg.lambda, "exponential ensemble rate");
    sub->add_option("--discrete", cfg.discrete_file, "discrete ensemble file 'omega,probability'");
    if (grid) {
      sub->add_option("--beta-min", cfg.beta_min, "first beta");
      sub->add_option("--beta-max", cfg.beta_max, "last beta");
      sub->add_option("--steps", cfg.steps, "grid points");
    }
  };
  auto* thermo = app.add_subcommand("thermo", "scan f, eps, entropy over a beta grid");
  add_ensemble(thermo, true);
  auto* breakdown = app.add_subcommand("breakdown", "six-term energy decomposition at one beta");
  double beta = 1.0;
  add_ensemble(breakdown, false);
  breakdown->add_option("--beta", beta, "inverse temperature");
  auto* hagedorn = app.add_subcommand("hagedorn", "flag beta values at or past the Hagedorn point");
  add_ensemble(hagedorn, true);
  auto* validate = app.add_subcommand("validate", "run the identity suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    cfg.validate();
    if (zeros->parsed()) return cmd_zeros(cfg, count, in_path);
    if (eval->parsed()) return cmd_eval(cfg, fn, re, im, q);
    if (thermo->parsed()) return cmd_thermo(cfg);
    if (breakdown->parsed()) return cmd_breakdown(cfg, beta);
    if (hagedorn->parsed()) return cmd_hagedorn(cfg);
    if (validate->parsed()) return cmd_validate(cfg);
  } catch (const UsageError& e) {
    std::cerr << "rgas: " << e.what() << "\n";
    return kUsage;
  } catch (const rgas::ParseError& e) {
    std::cerr << "rgas: parse error, " << e.what() << "\n";
    return kUsage;
  } catch (const rgas::IoError& e) {
    std::cerr << "rgas: " << e.what() << "\n";
    return kUsage;
  } catch (const rgas::DomainError& e) {
    std::cerr << "rgas: " << e.what() << "\n";
    return kUsage;
  } catch (const rgas::PoleError& e) {
    std::cerr << "rgas: " << e.what() << "\n";
    return kUsage;
  } catch (const rgas::Error& e) {
    std::cerr << "rgas: numerical failure: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}
