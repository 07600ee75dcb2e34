#pragma once

// Command-line front end. Exit codes: 0 success, 1 validation failure,
// 2 usage error. Diagnostics go to the error stream.

#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "weier4/canonize.hpp"
#include "weier4/correspond.hpp"
#include "weier4/export.hpp"
#include "weier4/expr.hpp"
#include "weier4/family.hpp"

namespace weier4 {

namespace cli {

inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string g1, g2, f, h1, h2, w1, w2;
  std::string g1b, g2b;
  std::string kind = "canonical-g";
  std::string grid = "-0.2:0.2:0.02";
  std::string grid_v;
  std::string at = "0,0";
  int order = TaylorSeries::kDefaultOrder;
  std::string out;
  std::string project = "xyz";
  bool verbose = false;
  std::string config;
  // canonize
  std::string target = "first";
  // natural-check
  std::string nu_file, k_file, kappa_file;
  double tol_r3 = 1e-3;
  double tol_r4 = 5e-3;
  bool convergence = false;
  // family
  double k1 = 1.0, k2 = 2.0, alpha = 0.0;
  bool compare = false;
  std::vector<double> alphas;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

inline double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError("invalid number '" + s + "' in " + what);
  }
}

inline std::pair<double, double> parse_range(const std::string& s, double& h) {
  const auto parts = split(s, ':');
  if (parts.size() != 3) throw UsageError("grid must be lo:hi:h, got '" + s + "'");
  const double lo = to_double(parts[0], "--grid"), hi = to_double(parts[1], "--grid");
  h = to_double(parts[2], "--grid");
  if (!(h > 0.0) || !(hi > lo)) throw UsageError("grid needs lo < hi and h > 0");
  return {lo, hi};
}

inline GridSpec parse_grid(const std::string& u, const std::string& v) {
  double hu = 0.0, hv = 0.0;
  const auto [u0, u1] = parse_range(u, hu);
  const auto [v0, v1] = parse_range(v.empty() ? u : v, hv);
  if (hu != hv) throw UsageError("--grid and --grid-v must share the spacing h");
  return {u0, u1, v0, v1, hu};
}

inline Complex parse_point(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 2) throw UsageError("--at must be u,v, got '" + s + "'");
  return {to_double(parts[0], "--at"), to_double(parts[1], "--at")};
}

inline std::string num(double v) { return fmt17(v); }

/// Flat key=value lines; '#' starts a comment. Keys mirror long flag names.
inline std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& given) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot open config '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(is, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    if (trim(line).empty()) continue;
    if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
    const std::string key = "--" + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    bool present = false;
    for (const auto& g : given)
      if (g == key || g.rfind(key + "=", 0) == 0) present = true;
    if (present) continue;
    if (value == "true" || value == "false") {
      if (value == "true") extra.push_back(key);
    } else {
      extra.push_back(key);
      extra.push_back(value);
    }
  }
  return extra;
}

struct Context {
  Options opt;
  std::ostream& out;
  std::ostream& err;

  TaylorSeries expr(const std::string& src, const char* flag) const {
    if (src.empty()) throw UsageError(std::string("missing ") + flag);
    try {
      return parse_holo(src, Complex{}, opt.order);
    } catch (const Error& e) {
      if (e.code() == Errc::SyntaxError || e.code() == Errc::UnknownIdentifier)
        throw UsageError(std::string(flag) + ": " + e.what());
      throw;
    }
  }

  bool canonical_kind() const { return opt.kind.rfind("canonical-", 0) == 0; }

  HoloPair pair() const {
    const std::string& k = opt.kind;
    if (k == "canonical-g" || k == "w6") return {expr(opt.g1, "--g1"), expr(opt.g2, "--g2"), PairFlavor::g};
    if (k == "canonical-w" || k == "w5") return {expr(opt.w1, "--w1"), expr(opt.w2, "--w2"), PairFlavor::w};
    if (k == "canonical-h" || k == "w1" || k == "w2") return {expr(opt.h1, "--h1"), expr(opt.h2, "--h2"), PairFlavor::h};
    throw UsageError("unknown --kind '" + k + "'");
  }

  PhiCurve phi() const {
    const HoloPair p = pair();
    const std::string& k = opt.kind;
    if (canonical_kind()) {
      if (!opt.f.empty()) err << "note: --f is ignored for canonical kinds\n";
      return build_canonical(p);
    }
    const TaylorSeries f = expr(opt.f, "--f");
    const Representation rep = k == "w1"   ? Representation::W1
                               : k == "w2" ? Representation::W2
                               : k == "w5" ? Representation::W5
                                           : Representation::W6;
    return build_representation(rep, f, p);
  }

  void report_isothermal(const PhiCurve& p) const {
    if (opt.verbose) err << "max |Phi^2| coefficient: " << num(p.isothermal_violation()) << '\n';
  }

  GridSpec grid() const { return parse_grid(opt.grid, opt.grid_v); }

  void write_patch(const SurfacePatch& patch) const {
    if (opt.out.empty()) return;
    export_patch(opt.out, patch, format_from_path(opt.out), parse_projection(opt.project));
    out << "wrote " << opt.out << '\n';
  }
};

/// Attaches curvature when every node is of general type; returns false otherwise.
inline bool try_attach_curvature(SurfacePatch& patch, const PhiCurve& p) {
  try {
    attach_curvature(patch, p);
    return true;
  } catch (const Error& e) {
    if (e.code() != Errc::NotGeneralType) throw;
    patch.curvature.clear();
    return false;
  }
}

inline int cmd_build(const Context& cx) {
  const PhiCurve p = cx.phi();
  cx.report_isothermal(p);
  SurfacePatch patch = eval_patch(integrate_phi(p), cx.grid());
  if (!try_attach_curvature(patch, p)) cx.err << "note: superconformal nodes present, curvature not attached\n";
  cx.out << "nodes " << patch.rows << " x " << patch.cols << '\n';
  if (patch.rows >= 5 && patch.cols >= 5) cx.out << "harmonic residual " << num(harmonic_residual(patch)) << '\n';
  cx.write_patch(patch);
  return kOk;
}

inline int cmd_curvature(const Context& cx) {
  const Complex t = parse_point(cx.opt.at);
  const PhiCurve p = cx.phi();
  cx.report_isothermal(p);
  CurvatureSample s;
  if (cx.opt.kind == "canonical-g" || cx.opt.kind == "canonical-w") {
    const ClosedFormKind kind = cx.opt.kind == "canonical-g" ? ClosedFormKind::canonical_g : ClosedFormKind::canonical_w;
    s = sample_closed_form(kind, cx.pair(), t);
    if (cx.opt.verbose) {
      const auto c = curvatures_from_phi(p, t);
      cx.err << "Phi route: K=" << num(c.K) << " kappa=" << num(c.kappa) << '\n';
    }
  } else {
    s = sample_from_phi(p, t);
  }
  cx.out << "K=" << num(s.K) << " kappa=" << num(s.kappa) << " nu=" << num(s.nu) << " mu=" << num(s.mu)
         << " E=" << num(s.E) << '\n';
  return kOk;
}

inline int cmd_canonize(const Context& cx) {
  const PhiCurve p = cx.phi();
  cx.report_isothermal(p);
  CanonicalType target;
  if (cx.opt.target == "first") target = CanonicalType::first;
  else if (cx.opt.target == "second") target = CanonicalType::second;
  else throw UsageError("--target must be first or second");
  const CanonicalPatch cp = to_canonical(p, target);
  const double sign = target == CanonicalType::first ? 1.0 : -1.0;
  cx.out << "canonical deviation " << num(canonical_deviation(cp.phi, sign)) << '\n';
  const auto c = cp.reparam.forward.coeffs();
  const std::size_t shown = std::min<std::size_t>(c.size(), cx.opt.verbose ? c.size() : 6);
  for (std::size_t k = 0; k < shown; ++k)
    cx.out << "forward[" << k << "] = " << num(c[k].real()) << ' ' << num(c[k].imag()) << '\n';
  if (!cx.opt.out.empty()) {
    SurfacePatch patch = eval_patch(integrate_phi(cp.phi), cx.grid());
    try_attach_curvature(patch, cp.phi);
    cx.write_patch(patch);
  }
  return kOk;
}

inline int cmd_natural(const Context& cx) {
  const Options& o = cx.opt;
  bool ok = true;
  auto check = [&](const std::string& label, double r, double tol) {
    const bool pass = r < tol;
    ok = ok && pass;
    cx.out << label << " residual " << num(r) << (pass ? " pass" : " FAIL") << '\n';
  };

  if (!o.nu_file.empty()) {
    check("r3 (" + o.nu_file + ")", natural_residual_r3(read_field(o.nu_file)), o.tol_r3);
    return ok ? kOk : kValidation;
  }
  if (!o.k_file.empty() || !o.kappa_file.empty()) {
    if (o.k_file.empty() || o.kappa_file.empty()) throw UsageError("--K and --kappa must be given together");
    const auto [a, b] = natural_residual_r4(read_field(o.k_file), read_field(o.kappa_file));
    check("r4 first", a, o.tol_r4);
    check("r4 second", b, o.tol_r4);
    return ok ? kOk : kValidation;
  }

  if (o.g1.empty()) throw UsageError("natural-check needs --g1 (and optionally --g2) or field files");
  const GridSpec grid = cx.grid();
  GridSpec half = grid;
  half.h = grid.h / 2;
  const TaylorSeries g1 = cx.expr(o.g1, "--g1");
  std::vector<std::pair<std::string, TaylorSeries>> gs{{"g1", g1}};
  if (!o.g2.empty()) gs.emplace_back("g2", cx.expr(o.g2, "--g2"));
  for (const auto& [name, g] : gs) {
    const ScalarField nu = nu_field(g, grid);
    const double r = natural_residual_r3(nu);
    check("r3 " + name, r, o.tol_r3);
    if (o.convergence) cx.out << "r3 " << name << " ratio " << num(r / natural_residual_r3(nu_field(g, half))) << '\n';
    if (!o.out.empty()) write_field(o.out + "_nu_" + name + ".txt", nu);
  }
  if (gs.size() == 2) {
    const HoloPair pair{gs[0].second, gs[1].second, PairFlavor::g};
    const auto [K, kappa] = curvature_fields(pair, grid);
    const auto [a, b] = natural_residual_r4(K, kappa);
    check("r4 first", a, o.tol_r4);
    check("r4 second", b, o.tol_r4);
    if (o.convergence) {
      const auto [Kh, kh] = curvature_fields(pair, half);
      const auto [ah, bh] = natural_residual_r4(Kh, kh);
      cx.out << "r4 ratio " << num(a / ah) << ' ' << num(b / bh) << '\n';
    }
    if (!o.out.empty()) {
      write_field(o.out + "_K.txt", K);
      write_field(o.out + "_kappa.txt", kappa);
    }
  }
  return ok ? kOk : kValidation;
}

inline FamilyParams family_params(const Context& cx, double alpha) {
  FamilyParams p{cx.opt.k1, cx.opt.k2, alpha, cx.grid()};
  try {
    p.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return p;
}

inline int cmd_family(const Context& cx) {
  const FamilyParams prm = family_params(cx, cx.opt.alpha);
  const SurfacePatch patch = family_m(prm);
  cx.out << "family k1=" << num(prm.k1) << " k2=" << num(prm.k2) << " alpha=" << num(prm.alpha) << " nodes "
         << patch.rows << " x " << patch.cols << '\n';
  if (cx.opt.compare) {
    const PhiCurve phi = build_canonical(family_pair(prm, cx.opt.order));
    cx.report_isothermal(phi);
    SurfacePatch pipe = eval_patch(integrate_phi(phi), prm.grid);
    const PatchComparison cmp = compare_modulo_translation_sign(patch, pipe);
    const bool pass = cmp.max_deviation < kFamilyTol;
    cx.out << "pipeline comparison (modulo translation and sign): max deviation " << num(cmp.max_deviation)
           << " sign " << num(cmp.sign) << " translation " << num(cmp.translation[0]) << ' '
           << num(cmp.translation[1]) << ' ' << num(cmp.translation[2]) << ' ' << num(cmp.translation[3])
           << (pass ? " pass" : " FAIL") << '\n';
    cx.write_patch(patch);
    return pass ? kOk : kValidation;
  }
  cx.write_patch(patch);
  return kOk;
}

inline int cmd_verify_family(const Context& cx) {
  std::vector<double> alphas = cx.opt.alphas;
  if (alphas.empty()) alphas = {0.0, std::numbers::pi / 8, std::numbers::pi / 4};
  std::vector<FamilyParams> runs;
  for (double a : alphas) runs.push_back(family_params(cx, a));
  if (runs.size() == 1) runs.push_back(runs.front());
  const FamilyReport rep = verify_family(runs);
  cx.out << "max |K(alpha) - K(0)| " << num(rep.max_dK) << '\n'
         << "max |kappa(alpha) - kappa(0)| " << num(rep.max_dkappa) << '\n'
         << "(corresponding points (p, q) = a (u, v); at equal (u, v): " << num(rep.fixed_point_dK) << ' '
         << num(rep.fixed_point_dkappa) << ")\n"
         << (rep.pass ? "pass" : "FAIL") << '\n';
  return rep.pass ? kOk : kValidation;
}

inline int cmd_equiv(const Context& cx) {
  const HoloPair p{cx.expr(cx.opt.g1, "--g1"), cx.expr(cx.opt.g2, "--g2"), PairFlavor::g};
  const HoloPair q{cx.expr(cx.opt.g1b, "--g1b"), cx.expr(cx.opt.g2b, "--g2b"), PairFlavor::g};
  const bool eq = equivalent_pairs(p, q, cx.grid());
  cx.out << (eq ? "equivalent" : "not equivalent") << '\n';
  return kOk;
}

inline int cmd_r3(const Context& cx) {
  const TaylorSeries g = cx.expr(cx.opt.g1, "--g1");
  const Phi3Curve p = build_r3(g);
  const Complex t = parse_point(cx.opt.at);
  cx.out << "nu=" << num(nu_r3(g, t)) << '\n';
  const GridSpec grid = cx.grid();
  const ScalarField nu = nu_field(g, grid);
  if (nu.rows >= 5 && nu.cols >= 5) cx.out << "natural residual " << num(natural_residual_r3(nu)) << '\n';
  SurfacePatch patch = eval_patch(integrate_phi3(p), grid);
  if (patch.rows >= 5 && patch.cols >= 5) cx.out << "harmonic residual " << num(harmonic_residual(patch)) << '\n';
  cx.write_patch(patch);
  return kOk;
}

}  // namespace cli

/// Runs the command line `args` (args[0] is the program name).
inline int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace cli;
  CLI::App app{"Minimal surfaces in R^4 from holomorphic data", "weier4"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* s) {
    s->add_option("--g1", opt.g1, "expression for g1 (r3: the single g)");
    s->add_option("--g2", opt.g2, "expression for g2");
    s->add_option("--f", opt.f, "expression for f (non-canonical kinds)");
    s->add_option("--h1", opt.h1, "expression for h1");
    s->add_option("--h2", opt.h2, "expression for h2");
    s->add_option("--w1", opt.w1, "expression for w1");
    s->add_option("--w2", opt.w2, "expression for w2");
    s->add_option("--kind", opt.kind, "w1|w2|w5|w6|canonical-g|canonical-w|canonical-h")
        ->check(CLI::IsMember({"w1", "w2", "w5", "w6", "canonical-g", "canonical-w", "canonical-h"}));
    s->add_option("--grid", opt.grid, "lo:hi:h");
    s->add_option("--grid-v", opt.grid_v, "lo:hi:h for v");
    s->add_option("--at", opt.at, "u,v");
    s->add_option("--order", opt.order, "truncation order")->check(CLI::Range(2, 200));
    s->add_option("--out", opt.out, "output path");
    s->add_option("--project", opt.project, "xyz|xyw|xzw|yzw|none")
        ->check(CLI::IsMember({"xyz", "xyw", "xzw", "yzw", "none"}));
    s->add_flag("--verbose", opt.verbose, "print diagnostics");
    s->add_option("--config", opt.config, "key=value config file");
  };

  auto* build = app.add_subcommand("build", "build a surface patch and export it");
  auto* curv = app.add_subcommand("curvature", "K, kappa, nu, mu, E at a point");
  auto* canon = app.add_subcommand("canonize", "transform to canonical coordinates");
  auto* natural = app.add_subcommand("natural-check", "finite-difference residuals of the natural equations");
  auto* family = app.add_subcommand("family", "the family M(k1, k2; alpha)");
  auto* vfam = app.add_subcommand("verify-family", "K and kappa agree across alphas");
  auto* equiv = app.add_subcommand("equiv-check", "curvature-field equivalence of two g-pairs");
  auto* r3 = app.add_subcommand("r3", "minimal surface in R^3 from one g");
  for (auto* s : {build, curv, canon, natural, family, vfam, equiv, r3}) common(s);

  canon->add_option("--target", opt.target, "first|second");
  natural->add_option("--nu", opt.nu_file, "nu field file");
  natural->add_option("--K", opt.k_file, "K field file");
  natural->add_option("--kappa", opt.kappa_file, "kappa field file");
  natural->add_option("--tol-r3", opt.tol_r3, "R^3 residual bound");
  natural->add_option("--tol-r4", opt.tol_r4, "R^4 residual bound");
  natural->add_flag("--convergence", opt.convergence, "also report the residual ratio at h/2");
  for (auto* s : {family, vfam}) {
    s->add_option("--k1", opt.k1, "k1 > 0");
    s->add_option("--k2", opt.k2, "k2 > 0, k2 != k1");
  }
  family->add_option("--alpha", opt.alpha, "alpha in [0, pi/4]");
  family->add_flag("--compare", opt.compare, "compare with the canonical pipeline");
  vfam->add_option("--alphas", opt.alphas, "alpha values")->delimiter(',');
  equiv->add_option("--g1b", opt.g1b, "g1 of the second pair");
  equiv->add_option("--g2b", opt.g2b, "g2 of the second pair");

  std::vector<std::string> argv_s = args.empty() ? std::vector<std::string>{"weier4"} : args;
  try {
    // Config values are appended only for flags absent from the command line.
    for (std::size_t i = 1; i + 1 < argv_s.size(); ++i) {
      if (argv_s[i] == "--config") {
        const auto extra = config_args(argv_s[i + 1], argv_s);
        argv_s.insert(argv_s.end(), extra.begin(), extra.end());
        break;
      }
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  std::vector<char*> argv;
  for (auto& s : argv_s) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  if (opt.order < 2) opt.order = 2;
  Context cx{opt, out, err};
  try {
    if (*build) return cmd_build(cx);
    if (*curv) return cmd_curvature(cx);
    if (*canon) return cmd_canonize(cx);
    if (*natural) return cmd_natural(cx);
    if (*family) return cmd_family(cx);
    if (*vfam) return cmd_verify_family(cx);
    if (*equiv) return cmd_equiv(cx);
    if (*r3) return cmd_r3(cx);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return kValidation;
  }
  return kUsage;
}

}  // namespace weier4
