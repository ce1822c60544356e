#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string cli_path() {
    const char* p = std::getenv("BLINDSIM_CLI");
    REQUIRE_MESSAGE(p != nullptr, "BLINDSIM_CLI must point at the binary");
    return p;
}

int run_cmd(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    REQUIRE_MESSAGE(f.good(), "missing output file: ", path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("identical seeds give byte-identical transcripts") {
    const std::string a = "/tmp/blindsim_t1.jsonl", b = "/tmp/blindsim_t2.jsonl";
    CHECK(run_cmd("run --variant verify --N 6 --bob honest --seed 7 --out " + a) == 0);
    CHECK(run_cmd("run --variant verify --N 6 --bob honest --seed 7 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("config_hash") != std::string::npos);

    const std::string c = "/tmp/blindsim_t3.jsonl";
    CHECK(run_cmd("run --variant verify --N 6 --bob honest --seed 8 --out " + c) == 0);
    CHECK(slurp(a) != slurp(c));
}

TEST_CASE("config errors exit with code 2") {
    CHECK(run_cmd("run --variant verify --N 5 --seed 7") == 2);
    CHECK(run_cmd("run --variant bogus --N 6") == 2);
    CHECK(run_cmd("certify bogus-suite") == 2);
}

TEST_CASE("bound-sweep CSVs are deterministic and worker-count independent") {
    const std::string a = "/tmp/blindsim_s1.csv", b = "/tmp/blindsim_s2.csv", c = "/tmp/blindsim_s3.csv";
    const std::string base = "bound-sweep --N 3 --N 6 --d 1 --sites single --trials 2000 --seed 12 --out ";
    CHECK(run_cmd(base + a) == 0);
    CHECK(run_cmd(base + b) == 0);
    CHECK(run_cmd(base + c + " --workers 3") == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == slurp(c));
    const std::string csv = slurp(a);
    CHECK(csv.find("N,d,strategy,brute_force_p,mc_estimate,mc_stderr,bound") != std::string::npos);
    CHECK(csv.find("# blindsim") != std::string::npos);
}

TEST_CASE("empty sweep emits a header-only CSV and exits zero") {
    const std::string a = "/tmp/blindsim_s_empty.csv";
    CHECK(run_cmd("bound-sweep --N 3 --d 1 --sites none --seed 5 --out " + a) == 0);
    const std::string csv = slurp(a);
    int lines = 0;
    for (char ch : csv) lines += ch == '\n';
    CHECK(lines == 2); // comment + header
}

TEST_CASE("certification reports are deterministic across runs and workers") {
    const std::string a = "/tmp/blindsim_r1.json", b = "/tmp/blindsim_r2.json";
    CHECK(run_cmd("certify composition --trials 30 --seed 9 --out " + a) == 0);
    CHECK(run_cmd("certify composition --trials 30 --seed 9 --workers 4 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a).find("\"version\"") != std::string::npos);
    CHECK(slurp(a).find("\"config_hash\"") != std::string::npos);
}

TEST_CASE("planted signaling control fails certification") {
    CHECK(run_cmd("certify nosignaling --inject-signaling --seed 3") == 1);
}

TEST_CASE("correctness suite certifies clean") {
    CHECK(run_cmd("certify correctness --seed 21") == 0);
}

TEST_CASE("environment seed is the fallback") {
    const std::string a = "/tmp/blindsim_env1.jsonl", b = "/tmp/blindsim_env2.jsonl";
    const std::string env_cmd = "BLINDSIM_SEED=321 " + cli_path() +
                                " run --variant noverify --N 3 --out " + a + " >/dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
    CHECK(run_cmd("run --variant noverify --N 3 --seed 321 --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
}
