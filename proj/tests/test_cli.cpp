#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chipencil_cli/commands.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out, err;
  std::map<std::string, std::string> kv;
};

Result cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = chipencil::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  std::istringstream lines(r.out);
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos && !r.kv.count(line.substr(0, eq))) r.kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return r;
}

fs::path temp_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / ("chipencil_test_" + name);
  std::ofstream(p) << content;
  return p;
}

std::string val(const Result& r, const std::string& key) {
  const auto it = r.kv.find(key);
  return it == r.kv.end() ? "<missing>" : it->second;
}

double num(const Result& r, const std::string& key) {
  EXPECT_TRUE(r.kv.count(key)) << key << " missing in\n" << r.out;
  return r.kv.count(key) ? std::stod(r.kv.at(key)) : NAN;
}

const std::vector<std::string> kApex = {"--ax", "0.3", "--ay", "0.8"};

std::vector<std::string> with_apex(std::vector<std::string> args) {
  args.insert(args.begin() + 1, kApex.begin(), kApex.end());
  return args;
}

}  // namespace

TEST(Cli, SequenceRows) {
  const Result r = cli(with_apex({"sequence", "--exponents", "0,1,2"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("row exponent=0 x=0.5 user=0.5,0\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("row exponent=2 x=0.39247311828"), std::string::npos) << r.out;
  const Result range = cli(with_apex({"sequence", "--exp-range", "0:2:1"}));
  ASSERT_EQ(range.code, 0);
  EXPECT_EQ(range.out, r.out);
}

TEST(Cli, SequenceErrors) {
  Result r = cli(with_apex({"sequence", "--family", "mprime", "--exponents", "0"}));
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error=ZeroExponent message=", 0), 0u) << r.err;
  r = cli({"sequence", "--ax", "2", "--ay", "0", "--exponents", "1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error=DegenerateTriangle", 0), 0u) << r.err;
  r = cli(with_apex({"sequence", "--exponents", "1", "--exp-range", "0:1:1"}));
  EXPECT_EQ(r.code, 2);
  r = cli(with_apex({"sequence", "--family", "q", "--exponents", "1"}));
  EXPECT_EQ(r.code, 2);
}

TEST(Cli, ConicCoefficients) {
  Result r = cli(with_apex({"conic", "--t", "0"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "coefficients"), "-0.625,0,0,0.375,1,-0.45625");
  EXPECT_EQ(val(r, "class"), "Parabola");
  r = cli(with_apex({"conic", "--t", "2"}));
  EXPECT_EQ(val(r, "class"), "Hyperbola");
  r = cli(with_apex({"conic", "--t", "0", "--family", "mixed"}));
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error=ZeroSpanMixed", 0), 0u) << r.err;
}

TEST(Cli, Classify) {
  Result r = cli(with_apex({"classify", "--point", "0.5,-3"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "region"), "R3_Opposite");
  EXPECT_EQ(val(r, "member"), "Hyperbola");
  EXPECT_TRUE(r.kv.count("lambda"));
  r = cli(with_apex({"classify", "--point", "0.5,0.58125"}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "region"), "OnCriticalLine");
  EXPECT_EQ(val(r, "member"), "unspecified (on critical line)");
  EXPECT_FALSE(r.kv.count("lambda"));
}

TEST(Cli, SpanRoundTrip) {
  const auto f = chipencil::frame_from_apex({0.3, 0.8});
  const chipencil::Point o = chipencil::circumcenter(f.A, chipencil::m_point(f, 0.0).location,
                                                     chipencil::m_point(f, 1.5).location);
  char pt[64];
  std::snprintf(pt, sizeof pt, "%.17g,%.17g", o.x, o.y);
  const Result r = cli(with_apex({"span", "--point", pt}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(num(r, "span"), 1.5, 1e-7);
  EXPECT_EQ(val(r, "family"), "SameSide");
}

TEST(Cli, SpanSpecialRegions) {
  // Point above the parabola vertex, inside it.
  Result r = cli(with_apex({"span", "--point", "0.5,1"}));
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("error=InsideParabola", 0), 0u) << r.err;
  // Tangent-circle center over M(0) = (0.5, 0) sits on the parabola.
  const double y = (0.2 * 0.2 + 0.8 * 0.8) / 1.6;
  r = cli(with_apex({"span", "--point", "0.5," + std::to_string(y)}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "region"), "OnParabola");
  EXPECT_EQ(val(r, "span"), "0");
  EXPECT_NEAR(num(r, "k1"), 0.0, 1e-9);
}

TEST(Cli, SameConic) {
  const auto f = chipencil::frame_from_apex({0.3, 0.8});
  const auto cc = [&](double k, double t) {
    const chipencil::Point o = chipencil::circumcenter(f.A, chipencil::m_point(f, k).location,
                                                       chipencil::m_point(f, k + t).location);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", o.x, o.y);
    return std::string(buf);
  };
  Result r = cli(with_apex({"same-conic", "--point", cc(0, 1), "--point", cc(2, 1)}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "decision"), "Same");
  EXPECT_EQ(val(r, "oracle"), "agree");
  r = cli(with_apex({"same-conic", "--point", cc(0, 1), "--point", cc(0, 2)}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "decision"), "Different");
  EXPECT_EQ(val(r, "oracle"), "agree");
  r = cli(with_apex({"same-conic", "--point", "0.5,0.58125", "--point", cc(0, 1)}));
  EXPECT_EQ(r.code, 3) << r.out;
  r = cli(with_apex({"same-conic", "--point", cc(0, 1)}));
  EXPECT_EQ(r.code, 2);
}

// Answers do not depend on where the user puts the triangle.
TEST(Cli, SimilarityInvariance) {
  const Result base = cli(with_apex({"classify", "--point", "0.5,-3"}));
  // Scale 2, rotate 90 degrees, translate (5, 1): (x, y) -> (5 - 2y, 1 + 2x).
  const Result moved = cli({"classify", "--ax", "3.4", "--ay", "1.6", "--bx", "5", "--by", "1", "--cx", "5",
                            "--cy", "3", "--point", "11,2"});
  ASSERT_EQ(moved.code, 0) << moved.err;
  EXPECT_EQ(val(moved, "region"), val(base, "region"));
  EXPECT_EQ(val(moved, "member"), val(base, "member"));
  EXPECT_NEAR(num(moved, "lambda"), num(base, "lambda"), 1e-9);
}

TEST(Cli, TriangleFile) {
  const fs::path p = temp_file("tri.json", R"({"A": [0.3, 0.8], "B": [0, 0], "C": [1, 0]})");
  Result r = cli({"conic", "--triangle", p.string(), "--t", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "coefficients"), "-0.625,0,0,0.375,1,-0.45625");
  r = cli({"conic", "--triangle", p.string(), "--ax", "1", "--t", "0"});
  EXPECT_EQ(r.code, 2);
  const fs::path bad = temp_file("tri_bad.json", R"({"A": [0.3], "B": [0, 0], "C": [1, 0]})");
  r = cli({"conic", "--triangle", bad.string(), "--t", "0"});
  EXPECT_EQ(r.code, 2);
  fs::remove(p);
  fs::remove(bad);
}

TEST(Cli, VerifyConfigErrors) {
  Result r = cli({"verify", "--config", "/nonexistent/cfg.json"});
  EXPECT_EQ(r.code, 2);
  const fs::path unknown = temp_file("unknown.json", R"({"n_frame": 3})");
  r = cli({"verify", "--config", unknown.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("n_frame"), std::string::npos);
  const fs::path zero = temp_file("zero.json", R"({"n_frames": 0})");
  r = cli({"verify", "--config", zero.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error=InvalidConfig", 0), 0u) << r.err;
  fs::remove(unknown);
  fs::remove(zero);
}

TEST(Cli, VerifyFailureExitCode) {
  const fs::path cfg = temp_file(
      "strict.json", R"({"n_frames": 5, "n_samples_per_check": 5, "tolerance_overrides": {"remarks": 1e-30}})");
  const fs::path out = fs::temp_directory_path() / "chipencil_test_report.txt";
  const Result r = cli({"verify", "--config", cfg.string(), "--out", out.string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(val(r, "overall"), "fail");
  EXPECT_NE(r.out.find("check=remarks status=fail"), std::string::npos) << r.out;
  std::ifstream in(out);
  const std::string report((std::istreambuf_iterator<char>(in)), {});
  EXPECT_NE(report.find("witness="), std::string::npos);
  fs::remove(cfg);
  fs::remove(out);
}

TEST(Cli, VerifyToStdout) {
  const fs::path cfg = temp_file("small.json", R"({"n_frames": 4, "n_samples_per_check": 4, "seed": 9})");
  const Result a = cli({"verify", "--config", cfg.string()});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(val(a, "seed"), "9");
  EXPECT_EQ(cli({"verify", "--config", cfg.string()}).out, a.out);
  const Result b = cli({"verify", "--config", cfg.string(), "--seed", "10"});
  EXPECT_EQ(val(b, "seed"), "10");
  fs::remove(cfg);
}

TEST(Cli, Render) {
  const fs::path out = fs::temp_directory_path() / "chipencil_test.svg";
  Result r = cli(with_apex({"render", "--spans", "1,2", "--out", out.string()}));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(val(r, "paths"), "2");
  EXPECT_TRUE(fs::exists(out));
  r = cli(with_apex({"render", "--canvas", "0", "--out", out.string()}));
  EXPECT_EQ(r.code, 2);
  r = cli(with_apex({"render", "--families", "none", "--out", out.string()}));
  EXPECT_EQ(r.code, 2);
  r = cli(with_apex({"render", "--hide", "everything", "--out", out.string()}));
  EXPECT_EQ(r.code, 2);
  r = cli(with_apex({"render", "--spans", "1"}));
  EXPECT_EQ(r.code, 2);
  fs::remove(out);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"bogus"}).code, 2);
  EXPECT_EQ(cli({"conic", "--ax", "0.3", "--ay", "0.8"}).code, 2);
  EXPECT_EQ(cli({"conic", "--t", "1"}).code, 2);
  const Result r = cli(with_apex({"conic", "--t", "abc"}));
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("error=Usage", 0), 0u) << r.err;
  EXPECT_EQ(cli({"--help"}).code, 0);
}

// The installed binary maps errors to the same exit codes.
TEST(Cli, BinaryExitCodes) {
  const std::string bin = CHIPENCIL_CLI_PATH;
  const auto status = [&](const std::string& args) {
    const int s = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status("conic --ax 0.3 --ay 0.8 --t 0"), 0);
  EXPECT_EQ(status("bogus"), 2);
  EXPECT_EQ(status("sequence --ax 0.3 --ay 0.8 --family mprime --exponents 0"), 3);
}
