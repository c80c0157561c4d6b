#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "corona/cli.hpp"
#include "corona/io.hpp"

using namespace corona;
namespace fs = std::filesystem;

namespace {

const char* kLaplacian = R"({"group": {"lattice": 1},
  "kernel": [{"coeff": 1, "profile": [{"element": 1, "re": 1}, {"element": -1, "re": 1}]}]})";

fs::path scratch(const std::string& name) {
  const auto dir = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Outcome {
  int code;
  std::string out, err;
  fs::path dir;
};

Outcome run_task(const std::string& name, const std::string& task, const std::string& config) {
  const auto dir = scratch(name);
  std::ofstream(dir / "config.json") << config;
  cli::RunRequest req;
  req.task = task;
  req.config_path = (dir / "config.json").string();
  req.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  const int code = cli::run(req, out, err);
  return {code, out.str(), err.str(), dir / "out"};
}

std::size_t count(const std::string& hay, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = hay.find(needle); p != std::string::npos; p = hay.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Cli, EssSpectrumArtifacts) {
  const auto r = run_task("ess", "ess-spectrum", kLaplacian);
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"spectrum.csv", "spectrum.svg", "provenance.json", "report.txt", "manifest.json"})
    EXPECT_TRUE(fs::exists(r.dir / f)) << f;
  const auto csv = slurp(r.dir / "spectrum.csv");
  EXPECT_NE(csv.find("re,im,tag,resolution\n-2,0,segment_a,"), std::string::npos);
  EXPECT_NE(r.out.find("[-2, 2]"), std::string::npos);
  const auto manifest = json::parse(slurp(r.dir / "manifest.json"));
  EXPECT_EQ(manifest["artifacts"].size(), 5u);  // includes formula.csv
  EXPECT_EQ(manifest["config_sha256"].get<std::string>().size(), 64u);
}

TEST(Cli, ArtifactsAreDeterministic) {
  const auto a = run_task("det_a", "ess-spectrum", kLaplacian);
  const auto b = run_task("det_b", "ess-spectrum", kLaplacian);
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  for (const char* f : {"spectrum.csv", "spectrum.svg", "provenance.json", "report.txt", "manifest.json"})
    EXPECT_EQ(slurp(a.dir / f), slurp(b.dir / f)) << f;
}

TEST(Cli, EmptyKernelIsAnError) {
  const auto r = run_task("empty", "ess-spectrum", R"({"group": {"lattice": 1}, "kernel": []})");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("kernel has no terms"), std::string::npos);
}

TEST(Cli, MalformedConfigReportsPointer) {
  auto r = run_task("bad_so", "ess-spectrum",
                    R"({"group": {"lattice": 1}, "kernel": [{"coeff": {"so": "sinus"}, "profile": []}]})");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("/kernel/0/coeff"), std::string::npos) << r.err;
  r = run_task("no_group", "ess-spectrum", R"({"kernel": []})");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("/group"), std::string::npos);
  r = run_task("bad_eps", "crosscheck", std::string(kLaplacian).insert(1, R"("options": {"epsilon": -1}, )"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("/options/epsilon"), std::string::npos);
  r = run_task("bad_elem", "ess-spectrum",
               R"({"group": {"lattice": 1}, "kernel": [{"coeff": 1, "profile": [{"element": [1, 2], "re": 1}]}]})");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("/kernel/0/profile/0/element"), std::string::npos) << r.err;
  r = run_task("syntax", "ess-spectrum", "{");
  EXPECT_EQ(r.code, 3);
}

TEST(Cli, FredholmExitCodes) {
  EXPECT_EQ(run_task("fred_lap", "fredholm", kLaplacian).code, 0);
  const auto r = run_task("fred_inc", "fredholm", R"({"group": {"lattice": 1},
    "kernel": [{"coeff": 1, "profile": [{"element": 1, "re": 1}, {"element": -1, "re": 1}, {"element": 0, "re": 2.001}]}]})");
  EXPECT_EQ(r.code, 2);
  const auto cert = json::parse(slurp(r.dir / "certificate.json"));
  EXPECT_EQ(cert["verdict"], "Inconclusive");
}

TEST(Cli, Crosscheck) {
  const auto r = run_task("cross", "crosscheck", std::string(kLaplacian).insert(1, R"("options": {"window": 200, "epsilon": 0.01}, )"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(r.dir / "crosscheck.json"));
  EXPECT_TRUE(j["decisive"].get<bool>());
  EXPECT_TRUE(j["contained"].get<bool>());
  EXPECT_EQ(j["eigenvalue_count"], 401);
  EXPECT_NE(r.out.find("finite sections"), std::string::npos);
}

TEST(Cli, VerifyFourierOnS3) {
  const auto r = run_task("vf", "verify-fourier", R"({"group": {"finite": "S3"}, "options": {"trials": 50}})");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(r.dir / "fourier.json"));
  EXPECT_LT(j["plancherel_residual"].get<double>(), 1e-10);
  EXPECT_TRUE(j["passed"].get<bool>());
}

TEST(Cli, VerifyFourierWithKernelOnProduct) {
  const auto r = run_task("vf2", "verify-fourier", R"({"group": {"product": [{"lattice": 1}, {"finite": "Q8"}]},
    "kernel": [{"coeff": {"so": "sin_sqrt", "factor": 0},
                "profile": [{"element": {"coords": [1], "indices": [3]}, "re": 1, "im": 2}]},
               {"coeff": {"periodic": {"period": [2], "values": [1,2,3,4,5,6,7,8,9,10,11,12,13,14,15,16]}},
                "profile": [{"element": {"coords": [-2], "indices": [5]}, "re": -1}]}]})");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(r.dir / "fourier.json"));
  EXPECT_LT(j["diagram_residual"].get<double>(), 1e-10);
}

TEST(Cli, VerifyAlgebra) {
  const auto r = run_task("va", "verify-algebra", R"({"group": {"finite": "D4"},
    "kernel": [{"coeff": {"periodic": {"period": [], "values": [1,2,3,4,5,6,7,8]}},
                "profile": [{"element": {"indices": [3]}, "re": 1, "im": 2}]}],
    "kernel2": [{"coeff": {"vanishing": [{"element": {"indices": [1]}, "re": 2}]},
                 "profile": [{"element": {"indices": [5]}, "re": -1}]}]})");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(r.dir / "algebra.json"));
  EXPECT_LT(j["product_residual"].get<double>(), 1e-10);
  EXPECT_LT(j["involution_residual"].get<double>(), 1e-10);
}

TEST(Cli, CustomFiniteGroup) {
  // Z/2 supplied by table and generator images.
  const auto r = run_task("custom", "verify-fourier", R"({"group": {"finite": {"order": 2, "table": [0, 1, 1, 0],
    "generators": [1], "irreps": [{"dim": 1, "matrices": [[[1]]]}, {"dim": 1, "matrices": [[[-1]]]}]}}})");
  EXPECT_EQ(r.code, 0) << r.err;
  const auto bad = run_task("custom_bad", "verify-fourier", R"({"group": {"finite": {"order": 2, "table": [0, 1, 1, 0],
    "generators": [1], "irreps": [{"dim": 1, "matrices": [[[1]]]}]}}})");
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.err.find("/group/finite/irreps"), std::string::npos) << bad.err;
}

TEST(Cli, PlotPrimitives) {
  const auto one = cli::render_svg(SpectralSet::point(1.0));
  EXPECT_EQ(count(one, "<circle"), 1u);
  EXPECT_EQ(count(one, "fill=\"#1f77b4\""), 0u);
  const auto bar = cli::render_svg(SpectralSet::interval(-2, 2));
  EXPECT_EQ(count(bar, "<rect"), 2u);  // background and bar
  EXPECT_EQ(count(bar, "<circle"), 0u);
  const auto two = cli::render_svg(set_union(SpectralSet::interval(-3, -1), SpectralSet::interval(1, 3)));
  EXPECT_EQ(count(two, "fill=\"#1f77b4\""), 2u);
  EXPECT_NE(two.find("gap (-1, 1)"), std::string::npos);
  EXPECT_NE(two.find("resolution 0"), std::string::npos);
  EXPECT_EQ(two, cli::render_svg(set_union(SpectralSet::interval(-3, -1), SpectralSet::interval(1, 3))));
  EXPECT_EQ(cli::render_svg(SpectralSet::empty()).find("<!--"), std::string::npos);
}

TEST(Cli, Sha256) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, CommandLine) {
  const auto dir = scratch("argv");
  std::ofstream(dir / "lap.json") << kLaplacian;
  auto sh = [&](const std::string& args) {
    const int status = std::system((std::string(CORONA_CLI_PATH) + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
  };
  const auto cfg = (dir / "lap.json").string();
  const auto out = (dir / "out").string();
  EXPECT_EQ(sh("ess-spectrum --config " + cfg + " --out " + out + " --dual-grid 512"), 0);
  EXPECT_NE(slurp(fs::path(out) / "manifest.json").find("\"dual_grid\": 512"), std::string::npos);
  EXPECT_EQ(sh("no-such-task --config " + cfg), 3);
  EXPECT_EQ(sh("fredholm"), 3);
  EXPECT_EQ(sh("crosscheck --config " + cfg + " --out " + out + " --epsilon 0"), 3);
}
