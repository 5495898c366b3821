#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string dir = (fs::temp_directory_path() / "cwave_cli_out.txt").string();
  const std::string cmd = std::string(CWAVE_CLI_PATH) + " " + args + " > " + dir + " 2>&1";
  const int rc = std::system(cmd.c_str());
  std::ifstream f(dir);
  std::stringstream ss;
  ss << f.rdbuf();
  return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const char* name) {
  const auto dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("analyze prints the published KdV relation") {
  const auto r = run_cli("analyze \"u_t + 6*u*u_x + u_xxx = 0\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("L = 1/sqrt(|±V ± 6*A|)") != std::string::npos);
}

TEST_CASE("analyze handles the degenerate equation") {
  const auto r = run_cli("analyze \"u_t = 0\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("±V*A/L = 0") != std::string::npos);
}

TEST_CASE("analyze with a bound parameter reports rest amplitudes") {
  const auto r = run_cli("analyze \"u_t + (u^2)_x + u_xxx + eps*(u^2)_xxx = 0\" --param eps=0.1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("rest amplitudes") != std::string::npos);
}

TEST_CASE("parse errors exit with code 2 and an offset") {
  const auto r = run_cli("analyze \"u_t + v*v_x = 0\" --param eps=1");
  CHECK(r.exit_code == 2);
  CHECK(r.out.find("offset") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
  const auto r = run_cli("sweep --eq K22 --A nonsense --V 0:1:2 --emit /tmp/x.csv");
  CHECK(r.exit_code == 1);
}

TEST_CASE("exact emits a profile plus a manifest, reproducibly") {
  const auto dir = fresh_dir("cwave_exact");
  const std::string profile = (dir / "profile.csv").string();
  const auto r = run_cli("exact --family k22-compacton --V 0.75 --emit " + profile);
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(profile));
  REQUIRE(fs::exists(dir / "manifest.json"));

  const std::string first = slurp(profile);
  CHECK(first.rfind("x,u", 0) == 0);
  // byte-identical on re-run
  const auto r2 = run_cli("exact --family k22-compacton --V 0.75 --emit " + profile);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(profile) == first);
  // exactly one manifest in the output directory
  int manifests = 0;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() == "manifest.json") ++manifests;
  CHECK(manifests == 1);
}

TEST_CASE("sweep writes the curve table and honors --jobs determinism") {
  const auto dir = fresh_dir("cwave_sweep");
  const std::string a = (dir / "a.csv").string();
  const std::string b = (dir / "b.csv").string();
  const auto r1 = run_cli("sweep --eq K22 --A 0.1:0.8:4 --V 0:5:21 --emit " + a);
  CHECK(r1.exit_code == 0);
  const auto r2 = run_cli("sweep --eq K22 --A 0.1:0.8:4 --V 0:5:21 --jobs 3 --emit " + b);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("A,V,branch", 0) == 0);
}

TEST_CASE("residual subcommand reports interior and full maxima") {
  const auto r = run_cli("residual --family k22-compacton --eq K22 --V 0.75 --dx 0.01");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("interior_max_abs") != std::string::npos);
}

TEST_CASE("simulate rejects non-conservation-form equations with exit 3") {
  const auto dir = fresh_dir("cwave_simbad");
  const auto r = run_cli("simulate --eq SG --tend 0.1 --emit " + dir.string());
  CHECK(r.exit_code == 3);
}

TEST_CASE("simulate blow-up exits with code 4 and a failed manifest") {
  const auto dir = fresh_dir("cwave_simblow");
  const auto r = run_cli("simulate --eq K22 --init stretched:0.5 --tend 5 --N 1024 "
                         "--domain 128 --emit " + dir.string());
  CHECK(r.exit_code == 4);
  const std::string manifest = slurp(dir / "manifest.json");
  CHECK(manifest.find("\"failed\": true") != std::string::npos);
}

TEST_CASE("frame subcommands: children and two-scale defect") {
  const auto r = run_cli("frame children --k 0 --j 0 --jprime 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0 1 2 3\n");
  const auto d = run_cli("frame two-scale --j 1 --k 2");
  CHECK(d.exit_code == 0);
  CHECK(std::stod(d.out) < 1e-12);
}

TEST_CASE("frame expand round-trips a sampled basis element") {
  const auto dir = fresh_dir("cwave_frame");
  const std::string data = (dir / "data.csv").string();
  {
    std::ofstream f(data);
    f << "x,u\n";
    for (int i = 0; i <= 2000; ++i) {
      const double x = -0.5 + 2.0 * i / 2000.0;
      const double s = std::sin(3.14159265358979323846 * x);
      f << x << "," << (x > 0 && x < 1 ? s * s : 0.0) << "\n";
    }
  }
  const std::string expansion = (dir / "expansion.json").string();
  const auto r = run_cli("frame expand --input " + data + " --jmin 0 --jmax 2 --emit " +
                         expansion);
  CHECK(r.exit_code == 0);
  const std::string j = slurp(expansion);
  CHECK(j.find("\"k\"") != std::string::npos);

  const std::string sq = (dir / "square.csv").string();
  const auto r2 = run_cli("frame square --input " + expansion + " --emit " + sq);
  CHECK(r2.exit_code == 0);
  CHECK(slurp(sq).rfind("x,u", 0) == 0);
}

TEST_CASE("numbers are printed with 17 significant digits") {
  const auto dir = fresh_dir("cwave_digits");
  const std::string profile = (dir / "p.csv").string();
  const auto r = run_cli("exact --family k22-compacton --V 0.7500001 --x0 -1 --x1 1 --dx 0.5 "
                         "--emit " + profile);
  CHECK(r.exit_code == 0);
  // the crest value is the amplitude 4V/3; expect its full 17-digit form
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", 4.0 * 0.7500001 / 3.0);
  CHECK(slurp(profile).find(buf) != std::string::npos);
}
