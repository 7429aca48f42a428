#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "superconv_cli_tests";

int run(const std::string& args) {
  const std::string cmd = std::string(SUPERCONV_BIN) + " " + args + " > " +
                          (kWork / "stdout.txt").string() + " 2> " +
                          (kWork / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string capture(const char* name) {
  std::ifstream f(kWork / name);
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

void write_config(const fs::path& path, const std::string& body) {
  std::ofstream f(path);
  f << body;
}

const char* kTinyEig = R"([problem]
kind = eig
potential = trig:r=2.5,K=64,vmin=1
[space]
basis = fourier
[sweep]
cases = [2, 4, 8, 16]
reference = 128
)";

const char* kDegenerateEig = R"([problem]
kind = eig
potential = const:10
[space]
basis = fourier
[sweep]
cases = [2, 4, 8, 16]
reference = 64
)";

} // namespace

TEST_CASE("cli exit codes and artifacts") {
  fs::create_directories(kWork);

  SUBCASE("a healthy study exits zero and writes its artifacts") {
    write_config(kWork / "ok.cfg", kTinyEig);
    const int code =
        run("study --config " + (kWork / "ok.cfg").string() + " --out " +
            (kWork / "out_ok").string() + " --plot");
    CHECK(code == 0);
    CHECK(fs::exists(kWork / "out_ok" / "results.csv"));
    CHECK(fs::exists(kWork / "out_ok" / "manifest.json"));
    CHECK(fs::exists(kWork / "out_ok" / "rates.svg"));
  }

  SUBCASE("a degenerate study still succeeds, skipping the plot with a note") {
    write_config(kWork / "flat.cfg", kDegenerateEig);
    const int code = run("study --config " + (kWork / "flat.cfg").string() + " --out " +
                         (kWork / "out_flat").string() + " --plot");
    CHECK(code == 0);
    CHECK(capture("stdout.txt").find("plot skipped") != std::string::npos);
  }

  SUBCASE("config errors exit 1 and name the line") {
    write_config(kWork / "bad.cfg", std::string(kTinyEig) + "basys = fourier\n");
    const int code = run("study --config " + (kWork / "bad.cfg").string());
    CHECK(code == 1);
    CHECK(capture("stderr.txt").find("unknown key") != std::string::npos);
  }

  SUBCASE("solver non-convergence exits 2") {
    write_config(kWork / "stall.cfg", std::string(R"([problem]
kind = src
potential = const:1
source = trig:r=1.5,K=64,vmin=1,scale=20
[space]
basis = fourier
[sweep]
cases = [4, 8, 16, 32]
reference = 256
[solver]
tol = 1e-15
max_iter = 1
)"));
    const int code = run("solve --config " + (kWork / "stall.cfg").string() + " --out " +
                         (kWork / "out_stall").string());
    CHECK(code == 2);
  }

  SUBCASE("verdict failures exit 3") {
    // A deliberately under-resolved extension cross-check misses the 1e-10
    // agreement target.
    const int code = run("extend --resolution 8 --legendre 8 --out " +
                         (kWork / "out_ext_bad").string());
    CHECK(code == 3);
  }

  SUBCASE("an unstable reference exits 4") {
    write_config(kWork / "shallow.cfg", R"([problem]
kind = src
potential = poly:1,0,1
source = poly:20,10
[space]
basis = fem
degree = 1
[sweep]
cases = [16, 32, 64, 128]
reference = 512
[solver]
tol = 1e-11
)");
    const int code = run("study --config " + (kWork / "shallow.cfg").string() + " --out " +
                         (kWork / "out_shallow").string());
    CHECK(code == 4);
  }

  SUBCASE("solve writes coefficients") {
    write_config(kWork / "ok.cfg", kTinyEig);
    const int code = run("solve --config " + (kWork / "ok.cfg").string() + " --size 8 --out " +
                         (kWork / "out_solve").string());
    CHECK(code == 0);
    CHECK(fs::exists(kWork / "out_solve" / "solution.txt"));
    CHECK(capture("stdout.txt").find("lambda") != std::string::npos);
  }

  SUBCASE("check prints the assumption report") {
    write_config(kWork / "ok.cfg", kTinyEig);
    const int code = run("check --config " + (kWork / "ok.cfg").string());
    CHECK(code == 0);
    CHECK(capture("stdout.txt").find("assumptions:") != std::string::npos);
  }

  SUBCASE("theory prints the requested row") {
    const int code = run("theory --family fourier --problem eig");
    CHECK(code == 0);
    const std::string out = capture("stdout.txt");
    CHECK(out.find("superconv gain (L2)") != std::string::npos);
    CHECK(out.find("3.000") != std::string::npos);
  }

  SUBCASE("a healthy extension cross-check exits zero") {
    const int code =
        run("extend --resolution 2048 --out " + (kWork / "out_ext").string());
    CHECK(code == 0);
    CHECK(fs::exists(kWork / "out_ext" / "extension_report.txt"));
  }
}
