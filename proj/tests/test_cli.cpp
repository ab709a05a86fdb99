#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace {

std::string mission_path() {
    return std::string(CEXPLAIN_DATA_DIR) + "/mission3x3.model";
}

int run_cli(const std::string& args) {
    const std::string cmd =
        std::string(CEXPLAIN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    REQUIRE(rc != -1);
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("help exits zero") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("explain --help") == 0);
}

TEST_CASE("check maps the verdict onto the exit code") {
    const std::string m = mission_path();
    CHECK(run_cli("check " + m + " --target in-human-zone --lambda 0.3") == 2);
    CHECK(run_cli("check " + m + " --target in-human-zone --lambda 0.5") == 0);
}

TEST_CASE("explain reports are byte-identical across runs") {
    const std::string m = mission_path();
    const std::string out1 = "/tmp/cexplain_cli_run1.txt";
    const std::string out2 = "/tmp/cexplain_cli_run2.txt";
    CHECK(run_cli("explain " + m +
                  " --target in-human-zone --lambda 0.3 --out " + out1) == 2);
    CHECK(run_cli("explain " + m +
                  " --target in-human-zone --lambda 0.3 --out " + out2) == 2);
    const std::string a = slurp(out1);
    CHECK(a == slurp(out2));
    CHECK(a.find("explanation") != std::string::npos);
    CHECK(a.find("The robot moves south when north of pick-up area.") !=
          std::string::npos);
    std::remove(out1.c_str());
    std::remove(out2.c_str());
}

TEST_CASE("machine format reports carry key=value lines") {
    const std::string out = "/tmp/cexplain_cli_machine.txt";
    CHECK(run_cli("check " + mission_path() +
                  " --target in-human-zone --lambda 0.3 --format machine "
                  "--out " + out) == 2);
    const std::string r = slurp(out);
    CHECK(r.find("report=check\n") == 0);
    CHECK(r.find("violated=1\n") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("export-lp writes the encoding to a file") {
    const std::string out = "/tmp/cexplain_cli_encoding.lp";
    CHECK(run_cli("export-lp " + mission_path() +
                  " --target in-human-zone --lambda 0.3 --out " + out) == 0);
    const std::string lp = slurp(out);
    CHECK(lp.rfind("Minimize", 0) == 0);
    CHECK(lp.find("Binaries") != std::string::npos);
    std::remove(out.c_str());
}

TEST_CASE("warehouse emits a model the other commands accept") {
    const std::string out = "/tmp/cexplain_cli_wh5.model";
    CHECK(run_cli("warehouse --n 5 --out " + out) == 0);
    CHECK(slurp(out).rfind("[states]", 0) == 0);
    CHECK(run_cli("check " + out + " --target in-human-zone --lambda 0") == 2);
    std::remove(out.c_str());
}

TEST_CASE("series renders a table") {
    const std::string out = "/tmp/cexplain_cli_series.tsv";
    CHECK(run_cli("series --n-list 4 --lambda 1.0 --out " + out) == 0);
    CHECK(slurp(out).rfind("n\tstates", 0) == 0);
    std::remove(out.c_str());
}

TEST_CASE("usage and input errors exit one") {
    CHECK(run_cli("check /nonexistent.model --target x --lambda 0.3") == 1);
    CHECK(run_cli("check " + mission_path() + " --target in-human-zone") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("explain " + mission_path() + " --bogus-flag") == 1);
    CHECK(run_cli("check " + mission_path() +
                  " --target no-such-prop --lambda 0.3") == 1);
}
