#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "weier4/cli.hpp"

using namespace weier4;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("weier4_test_" + name);
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "weier4");
  std::ostringstream out, err;
  const int code = cli_run(args, out, err);
  return {code, out.str(), err.str()};
}

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key + "=");
  if (pos == std::string::npos) return NAN;
  return std::strtod(text.c_str() + pos + key.size() + 1, nullptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// Expressions

TEST(Expr, ExpSeries) {
  const TaylorSeries s = parse_holo("exp(-z)", 0.0, 4);
  const double ref[] = {1, -1, 0.5, -1.0 / 6, 1.0 / 24};
  for (int k = 0; k <= 4; ++k) EXPECT_NEAR(std::abs(s[k] - ref[k]), 0.0, 1e-15);
}

TEST(Expr, RationalFunction) {
  const TaylorSeries s = parse_holo("(z^2+1)/(z-2)", 0.0, 8);
  EXPECT_NEAR(std::abs(s[0] + 0.5), 0.0, 1e-15);
  const TaylorSeries z = TaylorSeries::variable(8);
  EXPECT_LT(max_coeff_diff(s * (z - 2.0), z * z + 1.0), 1e-14);
}

TEST(Expr, ComplexLiteralsAndPrecedence) {
  EXPECT_NEAR(std::abs(parse_holo("2i", 0.0, 2)[0] - Complex(0, 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_holo("1 + 2 i", 0.0, 2)[0] - Complex(1, 2)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_holo("-2^2", 0.0, 2)[0] + 4.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_holo("2*3+4", 0.0, 2)[0] - 10.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(parse_holo("z^-1", 1.0, 2)[1] + 1.0), 0.0, 1e-15);
  const TaylorSeries c = parse_holo("cosh(z)^2 - sinh(z)^2", 0.0, 10);
  EXPECT_LT(max_coeff_diff(c, TaylorSeries::constant(1.0, 10)), 1e-14);
  EXPECT_NEAR(std::abs(parse_holo("log(exp(2*z)+1)", 0.0, 3)[0] - std::log(2.0)), 0.0, 1e-15);
}

TEST(Expr, Errors) {
  try {
    (void)parse_holo("exp(");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SyntaxError);
    EXPECT_EQ(e.offset(), 4u);
  }
  try {
    (void)parse_holo("foo(z)");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownIdentifier);
    EXPECT_EQ(e.offset(), 0u);
  }
  try {
    (void)parse_holo("z^17");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::SyntaxError);
  }
  try {
    (void)parse_holo("1/z");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::DivisionByZeroConstantTerm);
  }
  EXPECT_THROW((void)parse_holo("(z+1"), Error);
  EXPECT_THROW((void)parse_holo("z z"), Error);
}

// ---------------------------------------------------------------------------
// Family

TEST(Family, OriginValue) {
  const Vec4 x = family_point(FamilyParams{1.0, 2.0, 0.0}, 0.0, 0.0);
  EXPECT_NEAR(x[0], 0.0, 1e-15);
  EXPECT_NEAR(x[1], -std::sqrt(2.0) / 3.0, 1e-15);
  EXPECT_NEAR(x[2], 0.0, 1e-15);
  EXPECT_NEAR(x[3], 0.0, 1e-15);
}

TEST(Family, ParamsValidation) {
  EXPECT_THROW(FamilyParams({1.0, 1.0, 0.0}).validate(), Error);
  EXPECT_THROW(FamilyParams({-1.0, 1.0, 0.0}).validate(), Error);
  EXPECT_THROW(FamilyParams({1.0, 2.0, 1.0}).validate(), Error);
}

TEST(Family, ClosedFormIsHarmonic) {
  for (double alpha : {0.0, std::numbers::pi / 8, std::numbers::pi / 4}) {
    FamilyParams prm{1.0, 2.0, alpha, GridSpec::square(-0.1, 0.1, 0.01)};
    EXPECT_LT(harmonic_residual(family_m(prm)), 1e-3);
  }
}

TEST(Family, MatchesPipeline) {
  for (double alpha : {0.0, std::numbers::pi / 8, std::numbers::pi / 4}) {
    const FamilyParams prm{1.0, 2.0, alpha};
    const auto cmp = compare_modulo_translation_sign(family_m(prm), family_pipeline(prm));
    EXPECT_LT(cmp.max_deviation, 1e-8) << alpha;
  }
}

TEST(Family, VerifyFamily) {
  const GridSpec grid = GridSpec::square(-0.3, 0.3, 0.05);
  const auto rep = verify_family(1.0, 2.0, grid, {0.0, std::numbers::pi / 8, std::numbers::pi / 4});
  EXPECT_TRUE(rep.pass);
  EXPECT_LT(rep.max_dK, 1e-8);
  EXPECT_LT(rep.max_dkappa, 1e-8);

  const auto self = verify_family(1.0, 2.0, grid, {0.0});
  EXPECT_EQ(self.max_dK, 0.0);
  EXPECT_EQ(self.max_dkappa, 0.0);

  std::vector<FamilyParams> runs{{1.0, 2.0, 0.0, grid}, {1.0, 2.1, std::numbers::pi / 8, grid}};
  EXPECT_FALSE(verify_family(runs).pass);

  const auto again = verify_family(1.0, 2.0, grid, {0.0, std::numbers::pi / 8, std::numbers::pi / 4});
  EXPECT_EQ(again.max_dK, rep.max_dK);
  EXPECT_EQ(again.max_dkappa, rep.max_dkappa);
}

// ---------------------------------------------------------------------------
// Export

TEST(Export, PlyCounts) {
  const FamilyParams prm{1.0, 2.0, 0.0, GridSpec::square(-0.1, 0.1, 0.1)};
  const SurfacePatch patch = family_m(prm);
  std::stringstream ss;
  write_ply(ss, patch, Projection::xyz);
  const std::string text = ss.str();
  EXPECT_NE(text.find("element vertex 9\n"), std::string::npos);
  EXPECT_NE(text.find("element face 8\n"), std::string::npos);
  EXPECT_EQ(text.rfind("ply\nformat ascii 1.0\nelement vertex 9\nproperty float x\n", 0), 0u);
  EXPECT_EQ(grid_triangles(3, 3).size(), 8u);
}

TEST(Export, PlyRoundTrip) {
  const FamilyParams prm{1.0, 2.0, std::numbers::pi / 8, GridSpec::square(-0.2, 0.2, 0.05)};
  const SurfacePatch patch = family_pipeline(prm);
  for (Projection p : {Projection::xyz, Projection::yzw}) {
    std::stringstream ss;
    write_ply(ss, patch, p);
    const auto verts = read_ply_vertices(ss);
    const auto ax = projection_axes(p);
    ASSERT_EQ(verts.size(), patch.points.size());
    for (std::size_t i = 0; i < verts.size(); ++i) {
      ASSERT_EQ(verts[i].size(), 6u);
      for (int k = 0; k < 4; ++k) EXPECT_EQ(verts[i][k], patch.points[i][ax[k]]);
      EXPECT_EQ(verts[i][4], patch.curvature[i].K);
      EXPECT_EQ(verts[i][5], patch.curvature[i].kappa);
    }
  }
}

TEST(Export, CsvRoundTrip) {
  const FamilyParams prm{1.0, 3.0, 0.3, GridSpec::square(-0.2, 0.2, 0.05)};
  const SurfacePatch patch = family_pipeline(prm);
  std::stringstream ss;
  write_csv(ss, patch);
  const auto rows = read_csv_rows(ss);
  ASSERT_EQ(rows.size(), patch.points.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 11u);
    for (int k = 0; k < 4; ++k) EXPECT_EQ(rows[i][2 + k], patch.points[i][k]);
    EXPECT_EQ(rows[i][6], patch.E[i]);
    EXPECT_EQ(rows[i][7], patch.curvature[i].K);
    EXPECT_EQ(rows[i][10], patch.curvature[i].mu);
  }
}

TEST(Export, CurvatureJson) {
  const FamilyParams prm{1.0, 2.0, 0.0, GridSpec::square(-0.1, 0.1, 0.1)};
  const nlohmann::json doc = curvature_json(family_pipeline(prm));
  EXPECT_EQ(doc["grid"]["rows"], 3);
  EXPECT_EQ(doc["grid"]["cols"], 3);
  EXPECT_DOUBLE_EQ(doc["grid"]["h"].get<double>(), 0.1);
  ASSERT_EQ(doc["nodes"].size(), 9u);
  for (const auto& n : doc["nodes"]) {
    EXPECT_EQ(n["x"].size(), 4u);
    for (const char* k : {"K", "kappa", "nu", "mu", "E"}) EXPECT_TRUE(n.contains(k)) << k;
  }
  EXPECT_NEAR(doc["nodes"][4]["K"].get<double>(), -5.0, 1e-12);
}

TEST(Export, Errors) {
  const SurfacePatch patch = family_m(FamilyParams{1.0, 2.0, 0.0, GridSpec::square(-0.1, 0.1, 0.1)});
  try {
    export_patch(temp_path("x.ply").string(), patch, ExportFormat::ply, Projection::none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnsupportedProjection);
  }
  try {
    export_patch("/nonexistent-dir/x.csv", patch, ExportFormat::csv, Projection::none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::IoError);
  }
  EXPECT_NO_THROW(export_patch(temp_path("x.csv").string(), patch, ExportFormat::csv, Projection::none));
}

// ---------------------------------------------------------------------------
// CLI

TEST(Cli, CurvatureGolden) {
  const CliResult r = run({"curvature", "--g1", "exp(-z)", "--g2", "exp(-2*z)", "--at", "0,0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "K"), -5.0, 1e-10);
  EXPECT_NEAR(field(r.out, "kappa"), -3.0, 1e-10);
  EXPECT_NEAR(field(r.out, "nu"), 3 * std::sqrt(2.0) / 2, 1e-10);
  EXPECT_NEAR(field(r.out, "mu"), -std::sqrt(2.0) / 2, 1e-10);
  EXPECT_NEAR(field(r.out, "E"), 0.5, 1e-10);
}

TEST(Cli, CurvatureGeneralKind) {
  const CliResult r = run({"curvature", "--kind", "w6", "--f", "1", "--g1", "exp(-z)", "--g2", "exp(-2*z)"});
  EXPECT_EQ(r.code, 0) << r.err;
  const double K = field(r.out, "K"), kappa = field(r.out, "kappa");
  EXPECT_LT(K, 0.0);
  EXPECT_GT(-K, std::abs(kappa));
  EXPECT_NEAR(field(r.out, "E"), 4.0, 1e-12);
}

TEST(Cli, BuildWritesPly) {
  const auto path = temp_path("surf.ply");
  std::filesystem::remove(path);
  const CliResult r = run({"build", "--g1", "exp(-z)", "--g2", "exp(-2*z)", "--grid", "-0.2:0.2:0.02", "--out",
                     path.string(), "--project", "xyz", "--verbose"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_NE(r.err.find("max |Phi^2|"), std::string::npos);
  std::ifstream is(path);
  EXPECT_EQ(read_ply_vertices(is).size(), 441u);
}

TEST(Cli, SuperconformalInput) {
  const CliResult r = run({"build", "--g1", "5", "--g2", "exp(-z)"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("superconformal: g1' = 0"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"bogus"}).code, 2);
  EXPECT_EQ(run({"curvature", "--g1", "exp(", "--g2", "z"}).code, 2);
  EXPECT_EQ(run({"curvature", "--g1", "exp(-z)"}).code, 2);
  EXPECT_EQ(run({"build", "--g1", "exp(-z)", "--g2", "exp(-2*z)", "--grid", "1:0"}).code, 2);
  EXPECT_EQ(run({"build", "--kind", "nope"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, NaturalCheck) {
  const CliResult r = run({"natural-check", "--g1", "exp(-z)", "--g2", "exp(-2*z)", "--grid", "-0.1:0.1:0.01",
                     "--convergence"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);

  const auto prefix = temp_path("fields").string();
  EXPECT_EQ(run({"natural-check", "--g1", "exp(-z)", "--g2", "exp(-2*z)", "--grid", "-0.1:0.1:0.01", "--out",
                 prefix})
                .code,
            0);
  EXPECT_EQ(run({"natural-check", "--nu", prefix + "_nu_g1.txt"}).code, 0);
  EXPECT_EQ(run({"natural-check", "--K", prefix + "_K.txt", "--kappa", prefix + "_kappa.txt"}).code, 0);
  EXPECT_EQ(run({"natural-check", "--nu", prefix + "_nu_g1.txt", "--tol-r3", "1e-9"}).code, 1);
}

TEST(Cli, FamilyAndVerify) {
  const CliResult f = run({"family", "--compare", "--grid", "-0.3:0.3:0.05"});
  EXPECT_EQ(f.code, 0) << f.err;
  EXPECT_NE(f.out.find("modulo translation and sign"), std::string::npos);
  EXPECT_EQ(run({"verify-family", "--alphas", "0,0.39269908169872414,0.78539816339744828"}).code, 0);
  EXPECT_EQ(run({"family", "--k1", "1", "--k2", "1"}).code, 2);
}

TEST(Cli, EquivCheck) {
  const CliResult a = run({"equiv-check", "--g1", "exp(-z)", "--g2", "exp(-2*z)", "--g1b", "exp(-z)", "--g2b", "exp(-3*z)"});
  EXPECT_EQ(a.code, 0);
  EXPECT_NE(a.out.find("not equivalent"), std::string::npos);
  const CliResult b = run({"equiv-check", "--g1", "exp(-z)", "--g2", "exp(-2*z)", "--g1b", "-1/exp(-z)", "--g2b",
                     "exp(-2*z)"});
  EXPECT_EQ(b.out, "equivalent\n");
}

TEST(Cli, CanonizeAndR3) {
  const CliResult c = run({"canonize", "--kind", "w6", "--f", "1", "--g1", "exp(-z)", "--g2", "exp(-2*z)"});
  EXPECT_EQ(c.code, 0) << c.err;
  EXPECT_NE(c.out.find("forward[1] = 1.68179283050742"), std::string::npos) << c.out;
  const CliResult r = run({"r3", "--g1", "exp(-z)", "--grid", "-0.1:0.1:0.01"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "nu"), 1.0, 1e-15);
}

TEST(Cli, ConfigFile) {
  const auto cfg = temp_path("cfg.txt");
  {
    std::ofstream os(cfg);
    os << "# golden pair\ng1 = exp(-z)\ng2 = exp(-3*z)\nat = 0,0\n";
  }
  const CliResult r = run({"curvature", "--config", cfg.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(field(r.out, "K"), -15.0, 1e-10);
  const CliResult w = run({"curvature", "--config", cfg.string(), "--g2", "exp(-2*z)"});
  EXPECT_NEAR(field(w.out, "K"), -5.0, 1e-10);
}
