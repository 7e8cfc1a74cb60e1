#include "tensorpow/cli.hpp"

// Command surface.  Every numeric cell is printed with %.17g so runs are
// byte-stable; counts are exact decimal strings.  Exit codes: 0 success,
// 2 rejected input, 3 violated internal invariant (including a failed
// bound check), 64 usage error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "tensorpow/bounds.hpp"
#include "tensorpow/hypercount.hpp"
#include "tensorpow/numeric.hpp"
#include "tensorpow/rearrange.hpp"
#include "tensorpow/spectrum.hpp"
#include "tensorpow/tractability.hpp"
#include "tensorpow/verification.hpp"
#include "tensorpow/version.hpp"

namespace tensorpow {

namespace {

using nlohmann::json;

std::string g17(double v) {
  if (v == 0.0) v = 0.0;  // strip the sign of a negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_log(const xreal& v) {
  return v == neg_inf() ? "-inf" : g17(to_double(v));
}

// Linear value of a log cell; exact zero for a log of -inf.
std::string fmt_lin(const xreal& logv) {
  return logv == neg_inf() ? "0" : g17(to_double(exp(logv)));
}

double lin(const xreal& logv) {
  return logv == neg_inf() ? 0.0 : to_double(exp(logv));
}

void print_header(std::ostream& out, const char* command,
                  const std::optional<std::string>& family,
                  std::optional<unsigned> d) {
  out << "# tensorpow " << kVersion << "\n";
  out << "# command: " << command << "\n";
  if (family) out << "# family: " << *family << "\n";
  if (d) out << "# d: " << *d << "\n";
  out << "# precision: " << precision_name(active_precision()) << "\n";
}

json header_json(const char* command,
                 const std::optional<std::string>& family,
                 std::optional<unsigned> d) {
  json j;
  j["version"] = kVersion;
  j["command"] = command;
  if (family) j["family"] = *family;
  if (d) j["d"] = *d;
  j["precision"] = precision_name(active_precision());
  return j;
}

// --- family flags ---------------------------------------------------------

struct FamilyOpts {
  std::string family;
  std::string norm = "hash";
  double smoothness = 1.0;
  double gamma = 1.0;
  double lo = 0.0, hi = 1.0;
  double alpha = 0.0, beta = 0.0;
  std::string prefix;
  double tail_c = 0.0, tail_s = 0.0;
  bool finite_rank = false;
};

void add_family_options(CLI::App* cmd, FamilyOpts& f, bool required = true) {
  auto* family = cmd->add_option(
      "--family", f.family, "torus, jacobi, cube-h1, cube-h2, dyadic, custom");
  if (required) family->required();
  cmd->add_option("--norm", f.norm, "torus norm: circ, star, plus, hash");
  cmd->add_option("--smoothness", f.smoothness, "torus / jacobi smoothness s");
  cmd->add_option("--gamma", f.gamma, "torus frequency scaling");
  cmd->add_option("--lo", f.lo, "interval left endpoint");
  cmd->add_option("--hi", f.hi, "interval right endpoint");
  cmd->add_option("--alpha", f.alpha, "jacobi weight exponent alpha");
  cmd->add_option("--beta", f.beta, "jacobi weight exponent beta");
  cmd->add_option("--prefix", f.prefix,
                  "custom spectrum: comma-separated nonincreasing values");
  cmd->add_option("--tail-c", f.tail_c, "custom tail constant C");
  cmd->add_option("--tail-s", f.tail_s, "custom tail decay s");
  cmd->add_flag("--finite-rank", f.finite_rank,
                "custom spectrum is zero beyond the prefix");
}

std::vector<double> parse_prefix(const std::string& csv) {
  std::vector<double> out;
  std::istringstream is(csv);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(cell, &used);
      if (used != cell.size()) throw std::invalid_argument(cell);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::domain_error("--prefix: '" + cell + "' is not a number");
    }
  }
  return out;
}

FamilyDescriptor descriptor_from(const FamilyOpts& f) {
  FamilyDescriptor fam;
  if (f.family.empty())
    throw std::domain_error("--family: a family name is required");
  if (f.family == "torus") {
    fam.kind = FamilyKind::torus;
  } else if (f.family == "jacobi") {
    fam.kind = FamilyKind::jacobi;
  } else if (f.family == "cube-h1") {
    fam.kind = FamilyKind::cube_h1;
  } else if (f.family == "cube-h2") {
    fam.kind = FamilyKind::cube_h2;
  } else if (f.family == "dyadic") {
    fam.kind = FamilyKind::dyadic;
  } else if (f.family == "custom") {
    fam.kind = FamilyKind::custom;
  } else {
    throw std::domain_error("--family: unknown family '" + f.family + "'");
  }

  if (f.norm == "circ") {
    fam.norm = TorusNorm::circ;
  } else if (f.norm == "star") {
    fam.norm = TorusNorm::star;
  } else if (f.norm == "plus") {
    fam.norm = TorusNorm::plus;
  } else if (f.norm == "hash") {
    fam.norm = TorusNorm::hash;
  } else {
    throw std::domain_error("--norm: unknown norm '" + f.norm + "'");
  }

  fam.smoothness = f.smoothness;
  fam.gamma = f.gamma;
  fam.lo = f.lo;
  fam.hi = f.hi;
  fam.alpha = f.alpha;
  fam.beta = f.beta;
  if (fam.kind == FamilyKind::custom) {
    fam.prefix = parse_prefix(f.prefix);
    if (f.tail_c != 0.0 || f.tail_s != 0.0)
      fam.tail = TailRule{f.tail_c, f.tail_s};
    fam.finite_rank = f.finite_rank;
  }
  return fam;
}

void require_out_mode(const std::string& out_mode) {
  if (out_mode != "csv" && out_mode != "json")
    throw std::domain_error("--out: expected csv or json, got '" + out_mode +
                            "'");
}

// --- subcommand handlers ----------------------------------------------------

struct SpectrumArgs {
  FamilyOpts fam;
  std::uint64_t n_max = 0;
  std::string out_mode = "csv";
};

int run_spectrum(const SpectrumArgs& a, std::ostream& out) {
  require_out_mode(a.out_mode);
  if (a.n_max < 1) throw std::domain_error("--n-max must be >= 1");
  const FamilyDescriptor fam = descriptor_from(a.fam);
  const UnivariateSpectrum sp = make_spectrum(fam);

  if (a.out_mode == "csv") {
    print_header(out, "spectrum", fam.name(), std::nullopt);
    out << "n,sigma,log_sigma\n";
    for (std::uint64_t n = 1; n <= a.n_max; ++n) {
      const xreal lv = sp.log_value(n);
      out << n << ',' << fmt_lin(lv) << ',' << fmt_log(lv) << '\n';
    }
  } else {
    json j = header_json("spectrum", fam.name(), std::nullopt);
    j["rows"] = json::array();
    for (std::uint64_t n = 1; n <= a.n_max; ++n) {
      const xreal lv = sp.log_value(n);
      j["rows"].push_back({{"n", n},
                           {"sigma", lin(lv)},
                           {"log_sigma",
                            lv == neg_inf() ? json() : json(to_double(lv))}});
    }
    out << j.dump(2) << '\n';
  }
  return 0;
}

struct CountArgs {
  std::string mode = "tensor";
  // aN mode
  std::uint64_t N = 2;
  double r = 0.0;
  unsigned l = 1;
  // tensor mode
  FamilyOpts fam;
  unsigned d = 1;
  double threshold = 0.0;
  double log_threshold = 0.0;
  bool has_threshold = false, has_log_threshold = false;
  std::string cmp = "ge";
  std::string out_mode = "csv";
};

int run_count(const CountArgs& a, std::ostream& out) {
  require_out_mode(a.out_mode);
  if (a.mode == "aN") {
    const BigCount count = a_count(a.N, a.r, a.l);
    std::vector<std::pair<std::string, std::string>> rows{
        {"N", std::to_string(a.N)},
        {"r", g17(a.r)},
        {"l", std::to_string(a.l)},
        {"count", to_string(count)}};
    if (a.N == 2) {
      if (a.l >= 2 && std::log(a.r) >= a.l * std::log(4.0)) {
        const Sandwich s = a2_sandwich(a.r, a.l);
        rows.emplace_back("sharp_lower", g17(s.lower));
        rows.emplace_back("sharp_upper", g17(s.upper));
      }
      const Sandwich coarse = a2_coarse_bounds(a.r, a.l, 1.0);
      rows.emplace_back("coarse_lower", g17(coarse.lower));
      rows.emplace_back("coarse_upper", g17(coarse.upper));
    }
    if (a.out_mode == "csv") {
      print_header(out, "count", std::nullopt, std::nullopt);
      out << "key,value\n";
      for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
    } else {
      json j = header_json("count", std::nullopt, std::nullopt);
      for (const auto& [k, v] : rows) j[k] = v;
      out << j.dump(2) << '\n';
    }
    return 0;
  }
  if (a.mode != "tensor")
    throw std::domain_error("--mode: expected aN or tensor, got '" + a.mode +
                            "'");

  if (a.has_threshold == a.has_log_threshold)
    throw std::domain_error(
        "count --mode tensor needs exactly one of --threshold and "
        "--log-threshold");
  xreal t;
  if (a.has_threshold) {
    if (!(a.threshold > 0.0))
      throw std::domain_error("--threshold must be positive");
    t = log(xreal(a.threshold));
  } else {
    t = xreal(a.log_threshold);
  }
  if (a.cmp != "ge" && a.cmp != "gt")
    throw std::domain_error("--cmp: expected ge or gt, got '" + a.cmp + "'");

  const FamilyDescriptor fam = descriptor_from(a.fam);
  const UnivariateSpectrum sp = make_spectrum(fam);
  const auto pair = tensor_count_pair(
      CountQuery::power(sp, a.d, t, a.cmp == "ge" ? Cmp::ge : Cmp::gt));
  const BigCount& selected = a.cmp == "ge" ? pair.ge : pair.gt;

  if (a.out_mode == "csv") {
    print_header(out, "count", fam.name(), a.d);
    out << "key,value\n";
    out << "log_threshold," << fmt_log(t) << '\n';
    out << "cmp," << a.cmp << '\n';
    out << "count," << to_string(selected) << '\n';
    out << "count_ge," << to_string(pair.ge) << '\n';
    out << "count_gt," << to_string(pair.gt) << '\n';
    out << "tie_class," << to_string(pair.tie_class()) << '\n';
  } else {
    json j = header_json("count", fam.name(), a.d);
    j["log_threshold"] = to_double(t);
    j["cmp"] = a.cmp;
    j["count"] = to_string(selected);
    j["count_ge"] = to_string(pair.ge);
    j["count_gt"] = to_string(pair.gt);
    j["tie_class"] = to_string(pair.tie_class());
    out << j.dump(2) << '\n';
  }
  return 0;
}

struct TauArgs {
  FamilyOpts fam;
  unsigned d = 1;
  std::uint64_t n = 0;
  std::uint64_t top = 0;
  std::string out_mode = "csv";
};

int run_tau(const TauArgs& a, std::ostream& out) {
  require_out_mode(a.out_mode);
  if ((a.n == 0) == (a.top == 0))
    throw std::domain_error("tau needs exactly one of --n and --top");
  const FamilyDescriptor fam = descriptor_from(a.fam);
  const UnivariateSpectrum sp = make_spectrum(fam);

  if (a.n > 0) {
    const TauQueryResult res = tau_at(sp, a.d, a.n);
    if (a.out_mode == "csv") {
      print_header(out, "tau", fam.name(), a.d);
      out << "n,tau,log_tau,count_ge,count_gt,tie_class\n";
      out << a.n << ',' << fmt_lin(res.log_tau) << ',' << fmt_log(res.log_tau)
          << ',' << to_string(res.count_ge) << ',' << to_string(res.count_gt)
          << ',' << to_string(res.tie_class()) << '\n';
    } else {
      json j = header_json("tau", fam.name(), a.d);
      j["n"] = a.n;
      j["tau"] = lin(res.log_tau);
      j["log_tau"] = to_double(res.log_tau);
      j["count_ge"] = to_string(res.count_ge);
      j["count_gt"] = to_string(res.count_gt);
      j["tie_class"] = to_string(res.tie_class());
      out << j.dump(2) << '\n';
    }
    return 0;
  }

  const auto values = tau_topk(sp, a.d, a.top);
  if (a.out_mode == "csv") {
    print_header(out, "tau", fam.name(), a.d);
    out << "n,tau,log_tau\n";
    for (std::size_t i = 0; i < values.size(); ++i)
      out << i + 1 << ',' << fmt_lin(values[i]) << ',' << fmt_log(values[i])
          << '\n';
  } else {
    json j = header_json("tau", fam.name(), a.d);
    j["rows"] = json::array();
    for (std::size_t i = 0; i < values.size(); ++i)
      j["rows"].push_back({{"n", i + 1},
                           {"tau", lin(values[i])},
                           {"log_tau", to_double(values[i])}});
    out << j.dump(2) << '\n';
  }
  return 0;
}

struct BoundsArgs {
  FamilyOpts fam;
  unsigned d = 1;
  std::string n_range;
  std::vector<double> deltas;
  unsigned threads = 1;
  std::string out_mode = "csv";
};

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      std::size_t used = 0;
      const std::uint64_t hi = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {1, hi};
    }
    std::size_t used = 0;
    const std::uint64_t lo = std::stoull(text.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument(text);
    const std::string rest = text.substr(dots + 2);
    const std::uint64_t hi = std::stoull(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw std::domain_error("--n-range: expected A..B or B, got '" + text +
                            "'");
  }
}

int run_bounds(const BoundsArgs& a, std::ostream& out) {
  require_out_mode(a.out_mode);
  const auto [n_lo, n_hi] = parse_range(a.n_range);
  const FamilyDescriptor fam = descriptor_from(a.fam);
  const UnivariateSpectrum sp = make_spectrum(fam);
  const std::vector<double>& grid =
      a.deltas.empty() ? default_delta_grid() : a.deltas;

  std::optional<FamilyDescriptor> asym_fam;
  if (fam.kind != FamilyKind::custom || fam.tail) asym_fam = fam;
  const BoundReport report =
      verify_bounds(sp, a.d, n_lo, n_hi, grid, asym_fam, a.threads);

  std::uint64_t passed = 0;
  for (const auto& row : report.rows) passed += row.pass;

  if (a.out_mode == "csv") {
    print_header(out, "bounds", fam.name(), a.d);
    out << "n,tau,lower,upper,best_delta,asym,pass\n";
    for (const auto& row : report.rows) {
      out << row.n << ',' << fmt_lin(row.log_tau) << ','
          << (row.log_lower ? fmt_lin(*row.log_lower) : std::string()) << ','
          << fmt_lin(row.log_upper) << ',' << g17(row.best_delta) << ','
          << (row.log_asym ? fmt_lin(*row.log_asym) : std::string()) << ','
          << (row.pass ? "1" : "0") << '\n';
    }
    out << "# pass: " << passed << "/" << report.rows.size() << '\n';
  } else {
    json j = header_json("bounds", fam.name(), a.d);
    j["rows"] = json::array();
    for (const auto& row : report.rows) {
      json r;
      r["n"] = row.n;
      r["tau"] = lin(row.log_tau);
      r["lower"] = row.log_lower ? json(lin(*row.log_lower)) : json();
      r["upper"] = lin(row.log_upper);
      r["best_delta"] = row.best_delta;
      r["asym"] = row.log_asym ? json(lin(*row.log_asym)) : json();
      r["pass"] = row.pass;
      j["rows"].push_back(std::move(r));
    }
    j["all_pass"] = report.all_pass;
    out << j.dump(2) << '\n';
  }
  return report.all_pass ? 0 : 3;
}

struct TractArgs {
  std::string spec;
  std::string spec_file;
};

SmoothnessRule smoothness_from(const json& j) {
  SmoothnessRule rule;
  if (j.is_number()) {
    rule.kind = SmoothnessRule::Kind::constant;
    rule.value = j.get<double>();
    return rule;
  }
  const std::string kind = j.value("kind", "constant");
  if (kind == "constant") {
    rule.kind = SmoothnessRule::Kind::constant;
    rule.value = j.value("value", 1.0);
  } else if (kind == "log2ceil") {
    rule.kind = SmoothnessRule::Kind::log2ceil;
  } else if (kind == "power") {
    rule.kind = SmoothnessRule::Kind::power;
    rule.value = j.value("value", 1.0);
  } else {
    throw std::domain_error("smoothness kind '" + kind + "' is unknown");
  }
  return rule;
}

int run_tract(const TractArgs& a, std::ostream& out) {
  if ((a.spec.empty()) == (a.spec_file.empty()))
    throw std::domain_error("tract needs exactly one of --spec and --spec-file");
  std::string text = a.spec;
  if (!a.spec_file.empty()) {
    std::ifstream in(a.spec_file);
    if (!in) throw std::domain_error("--spec-file: cannot open " + a.spec_file);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }

  json spec;
  try {
    spec = json::parse(text);
  } catch (const json::exception& e) {
    throw std::domain_error(std::string("--spec: invalid JSON: ") + e.what());
  }

  ProblemFamily family;
  try {
    const std::string kind = spec.at("family").get<std::string>();
    if (kind == "torus") {
      TorusNorm norm = TorusNorm::hash;
      const std::string n = spec.value("norm", "hash");
      if (n == "circ") norm = TorusNorm::circ;
      else if (n == "star") norm = TorusNorm::star;
      else if (n == "plus") norm = TorusNorm::plus;
      else if (n != "hash") throw std::domain_error("norm '" + n + "' is unknown");
      family = torus_family(norm, spec.value("gamma", 1.0),
                            spec.value("lo", 0.0), spec.value("hi", 1.0),
                            smoothness_from(spec.value("smoothness", json(1.0))));
    } else if (kind == "cube") {
      family = cube_family(spec.value("lo", 0.0), spec.value("hi", 1.0),
                           smoothness_from(spec.value("smoothness", json(1.0))));
    } else if (kind == "jacobi") {
      family = jacobi_family(spec.value("alpha", 0.0), spec.value("beta", 0.0),
                             smoothness_from(spec.value("smoothness", json(1.0))));
    } else if (kind == "dyadic") {
      family = {"dyadic", [](unsigned) { return dyadic_spectrum(); }};
    } else {
      throw std::domain_error("family '" + kind + "' is unknown");
    }

    FitPolicy policy;
    if (spec.contains("d_grid"))
      policy.d_grid = spec["d_grid"].get<std::vector<unsigned>>();
    if (spec.contains("eps_grid"))
      policy.eps_grid = spec["eps_grid"].get<std::vector<double>>();
    if (spec.contains("evidence_d"))
      policy.evidence_d = spec["evidence_d"].get<std::vector<unsigned>>();
    if (spec.contains("slope_threshold"))
      policy.slope_threshold = spec["slope_threshold"].get<double>();
    if (spec.contains("r2_threshold"))
      policy.r2_threshold = spec["r2_threshold"].get<double>();
    if (spec.contains("bounded_ratio"))
      policy.bounded_ratio = spec["bounded_ratio"].get<double>();

    const TractabilityVerdict verdict = classify(family, policy);

    json j = header_json("tract", family.name, std::nullopt);
    j["verdict"] = verdict_name(verdict.verdict);
    j["slope"] = verdict.slope;
    j["r2"] = verdict.r2;
    j["a2_min_over_max"] = verdict.a2_min_over_max;
    j["d_range"] = verdict.d_range;
    j["a2_log"] = verdict.a2_log;
    j["evidence"] = json::array();
    for (const auto& row : verdict.evidence)
      j["evidence"].push_back({{"eps", row.eps},
                               {"d", row.d},
                               {"n_eps_d", to_string(row.n_eps_d)}});
    if (!verdict.diagnostic.empty()) j["diagnostic"] = verdict.diagnostic;
    j["summary"] = verdict.summary();
    out << j.dump(2) << '\n';
  } catch (const json::exception& e) {
    throw std::domain_error(std::string("--spec: ") + e.what());
  }
  return 0;
}

struct VerifyArgs {
  std::uint64_t seed = 12345;
  bool quick = false;
};

int run_verify(const VerifyArgs& a, std::ostream& out) {
  const VerificationReport report = run_verification(a.seed, a.quick);
  return print_verification(report, out) ? 0 : 3;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact spectral tails of tensor product operators", "tensorpow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::string precision;
  app.add_option("--precision", precision,
                 "float backend: dd (default) or double")
      ->envname("TENSORPOW_PRECISION");

  SpectrumArgs spectrum_args;
  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "print sigma(1..n_max) of one family");
  add_family_options(spectrum_cmd, spectrum_args.fam);
  spectrum_cmd->add_option("--n-max", spectrum_args.n_max, "rows to print")
      ->required();
  spectrum_cmd->add_option("--out", spectrum_args.out_mode, "csv or json");

  CountArgs count_args;
  CLI::App* count_cmd = app.add_subcommand(
      "count", "exact lattice / tensor threshold counts with bounds");
  count_cmd->add_option("--mode", count_args.mode, "aN or tensor");
  count_cmd->add_option("--N", count_args.N, "aN: base index");
  count_cmd->add_option("--r", count_args.r, "aN: product bound");
  count_cmd->add_option("--l", count_args.l, "aN: number of factors");
  add_family_options(count_cmd, count_args.fam, false);
  count_cmd->add_option("--d", count_args.d, "tensor power");
  count_cmd->add_option("--threshold", count_args.threshold, "linear threshold");
  count_cmd->add_option("--log-threshold", count_args.log_threshold,
                        "natural-log threshold");
  count_cmd->add_option("--cmp", count_args.cmp, "ge or gt");
  count_cmd->add_option("--out", count_args.out_mode, "csv or json");

  TauArgs tau_args;
  CLI::App* tau_cmd = app.add_subcommand(
      "tau", "exact nonincreasing rearrangement of a tensor power");
  add_family_options(tau_cmd, tau_args.fam);
  tau_cmd->add_option("--d", tau_args.d, "tensor power")->required();
  tau_cmd->add_option("--n", tau_args.n, "query tau(n) with its certificate");
  tau_cmd->add_option("--top", tau_args.top, "emit tau(1..k)");
  tau_cmd->add_option("--out", tau_args.out_mode, "csv or json");

  BoundsArgs bounds_args;
  CLI::App* bounds_cmd = app.add_subcommand(
      "bounds", "check the two-sided estimate against exact tau");
  add_family_options(bounds_cmd, bounds_args.fam);
  bounds_cmd->add_option("--d", bounds_args.d, "tensor power")->required();
  bounds_cmd->add_option("--n-range", bounds_args.n_range, "A..B or B")
      ->required();
  bounds_cmd->add_option("--delta", bounds_args.deltas,
                         "delta grid point in (0,1], repeatable");
  bounds_cmd->add_option("--threads", bounds_args.threads, "worker threads");
  bounds_cmd->add_option("--out", bounds_args.out_mode, "csv or json");

  TractArgs tract_args;
  CLI::App* tract_cmd = app.add_subcommand(
      "tract", "classify polynomial tractability of a problem scale");
  tract_cmd->add_option("--spec", tract_args.spec, "inline JSON family spec");
  tract_cmd->add_option("--spec-file", tract_args.spec_file,
                        "path to a JSON family spec");

  VerifyArgs verify_args;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "run the internal cross-check suite");
  verify_cmd->add_option("--seed", verify_args.seed, "random seed");
  verify_cmd->add_flag("--quick", verify_args.quick, "sub-second subset");

  std::vector<const char*> cargv;
  cargv.reserve(argv.size() + 1);
  cargv.push_back("tensorpow");
  for (const auto& s : argv) cargv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(cargv.size()), cargv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "tensorpow: " << e.what() << '\n';
    return 64;
  }

  try {
    // Each invocation starts from the environment default, so in-process
    // callers see the same behavior as a fresh process.
    if (precision.empty()) {
      set_active_precision(precision_from_env());
    } else if (precision == "dd") {
      set_active_precision(Precision::extended);
    } else if (precision == "double") {
      set_active_precision(Precision::dbl);
    } else {
      throw std::domain_error("--precision: expected dd or double, got '" +
                              precision + "'");
    }
    count_args.has_threshold = count_cmd->count("--threshold") > 0;
    count_args.has_log_threshold = count_cmd->count("--log-threshold") > 0;

    if (spectrum_cmd->parsed()) return run_spectrum(spectrum_args, out);
    if (count_cmd->parsed()) return run_count(count_args, out);
    if (tau_cmd->parsed()) return run_tau(tau_args, out);
    if (bounds_cmd->parsed()) return run_bounds(bounds_args, out);
    if (tract_cmd->parsed()) return run_tract(tract_args, out);
    if (verify_cmd->parsed()) return run_verify(verify_args, out);
    err << "tensorpow: no subcommand given\n";
    return 64;
  } catch (const std::domain_error& e) {
    err << "tensorpow: error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "tensorpow: error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "tensorpow: error: " << e.what() << '\n';
    return 2;
  } catch (const std::overflow_error& e) {
    err << "tensorpow: error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "tensorpow: internal error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace tensorpow
