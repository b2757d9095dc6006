#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

using json = nlohmann::ordered_json;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = std::string(GRIDFACTOR_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int status = ::pclose(p);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data_file(const char* name) {
    return std::string(GRIDFACTOR_TEST_DATA_DIR) + "/" + name;
}

const std::string kCacheArgs = "--cache-dir /tmp/gridfactor-cli-test-cache ";

}  // namespace

TEST_CASE("count command") {
    CHECK(run(kCacheArgs + "count rg 3 4").out == "3\n");
    CHECK(run(kCacheArgs + "count ms 2 5").out == "13\n");
    auto r = run(kCacheArgs + "count tkc 9 100");
    CHECK(r.exit_code == 0);
    json spots;
    std::ifstream(data_file("spot_values.json")) >> spots;
    CHECK(r.out == spots.at("tkc_9_100").get<std::string>() + "\n");
}

TEST_CASE("count split and csv") {
    auto r = run(kCacheArgs + "count tkc 2 3 --split");
    CHECK(r.out == "total 4\nf0 4\nf1 0\n");
    auto c = run(kCacheArgs + "count tkc 2 3 --split --format csv");
    CHECK(c.out == "family,m,n,value,f0,f1\ntkc,2,3,4,4,0\n");
    auto plain = run(kCacheArgs + "count ms 4 2 --format csv");
    CHECK(plain.out == "family,m,n,value\nms,4,2,17\n");
}

TEST_CASE("series command") {
    CHECK(run(kCacheArgs + "series rg 2 6").out == "0\n1\n1\n2\n3\n5\n");
    CHECK(run(kCacheArgs + "series ms 4 4").out == "9\n17\n93\n197\n");
}

TEST_CASE("gfun command") {
    auto r5 = run(kCacheArgs + "gfun rg 5");
    CHECK(r5.out.find("den 1 0 -24 0 57 0 -26") != std::string::npos);
    CHECK(r5.out.find("num 0 0 3 0 -18 0 15") != std::string::npos);
    auto t2 = run(kCacheArgs + "gfun tkc 2");
    CHECK(t2.out.find("order 4") != std::string::npos);
    auto r3 = run(kCacheArgs + "gfun rg 3");
    CHECK(r3.out.find("order 2") != std::string::npos);
    CHECK(r3.out.find("den 1 0 -3") != std::string::npos);
}

namespace {
double grab(const std::string& out, const std::string& key) {
    std::string anchored = "\n" + key + " ";
    auto pos = ("\n" + out).find(anchored);
    REQUIRE(pos != std::string::npos);
    return std::stod(out.substr(pos + anchored.size() - 1));
}
}  // namespace

TEST_CASE("eig command") {
    auto r = run(kCacheArgs + "eig tkc 5");
    CHECK(grab(r.out, "theta") == Catch::Approx(5.6532020378824433).margin(1e-8));
    auto rg7 = run(kCacheArgs + "eig rg 7");
    CHECK(grab(rg7.out, "theta") == Catch::Approx(11.5193830042298614).margin(1e-6));
    auto rg2 = run(kCacheArgs + "eig rg 2");
    CHECK(grab(rg2.out, "a") == Catch::Approx(0.4472135954999579).margin(1e-6));
    CHECK(r.out.find("converged yes") != std::string::npos);
}

TEST_CASE("json output round-trips byte for byte") {
    for (const char* cmd : {"count tkc 3 4 --split --format json",
                            "series rg 4 6 --format json",
                            "gfun rg 4 --format json",
                            "eig ms 3 --format json",
                            "verify tables 2..3 --format json"}) {
        auto r = run(kCacheArgs + cmd);
        REQUIRE(r.exit_code == 0);
        auto parsed = json::parse(r.out);
        CHECK(parsed.dump(2) + "\n" == r.out);
        // counts stay strings
        if (parsed["results"].contains("value"))
            CHECK(parsed["results"]["value"].is_string());
    }
}

TEST_CASE("verify command") {
    CHECK(run(kCacheArgs + "verify structure 2..5").exit_code == 0);
    CHECK(run(kCacheArgs + "verify conjectures 4").exit_code == 0);
    CHECK(run(kCacheArgs + "verify oracle 2..3").exit_code == 0);
    auto t = run(kCacheArgs + "verify tables 2..6");
    CHECK(t.exit_code == 0);
    CHECK(t.out.find("all checks passed") != std::string::npos);
    CHECK(t.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run(kCacheArgs + "count zz 2 2").exit_code == 2);
    CHECK(run(kCacheArgs + "count rg 99 5").exit_code == 3);
    CHECK(run(kCacheArgs + "count rg 2").exit_code == 2);       // missing n
    CHECK(run(kCacheArgs + "count rg 2 0").exit_code == 2);     // n >= 1
    CHECK(run(kCacheArgs + "verify tables 1..9").exit_code == 2);
    CHECK(run(kCacheArgs + "--max-m 7 count tkc 8 3").exit_code == 3);
    CHECK(run("--help count").exit_code == 0);
}

TEST_CASE("parameter edge cases") {
    CHECK(run(kCacheArgs + "count rg 4 3 --split").exit_code == 2);  // rect has no split
    CHECK(run(kCacheArgs + "eig tkc 2 --nmax 8").exit_code == 4);    // too short to converge
    CHECK(run(kCacheArgs + "gfun ms 2").out.find("order 4") != std::string::npos);
    auto forced = run(kCacheArgs + "gfun rg 2 --terms 16");
    CHECK(forced.out.find("order 2") != std::string::npos);
    CHECK(forced.out.find("terms_used 16") != std::string::npos);
}

TEST_CASE("cache directory from the environment") {
    namespace fs = std::filesystem;
    std::string dir = "/tmp/gridfactor-cli-env-cache";
    fs::remove_all(dir);
    std::string cmd = std::string("GRIDFACTOR_CACHE_DIR=") + dir + " " +
                      GRIDFACTOR_CLI_PATH + " count tkc 5 2 2>/dev/null";
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[256];
    std::string out;
    while (std::fgets(buf, sizeof buf, p)) out += buf;
    ::pclose(p);
    CHECK(out == "121\n");
    CHECK(fs::exists(dir + "/dstar-m5.bin"));
    fs::remove_all(dir);
}

TEST_CASE("cache behaviour") {
    namespace fs = std::filesystem;
    std::string dir = "/tmp/gridfactor-cli-cache-probe";
    fs::remove_all(dir);
    auto first = run("--cache-dir " + dir + " count tkc 4 3 --format json");
    CHECK(json::parse(first.out)["notes"]["cache"] == "miss");
    CHECK(fs::exists(dir + "/dstar-m4.bin"));
    auto second = run("--cache-dir " + dir + " count tkc 4 3 --format json");
    CHECK(json::parse(second.out)["notes"]["cache"] == "hit");
    CHECK(json::parse(first.out)["results"] == json::parse(second.out)["results"]);
    auto off = run("--no-cache --cache-dir " + dir + " count tkc 4 3 --format json");
    CHECK(json::parse(off.out)["notes"]["cache"] == "disabled");
    fs::remove_all(dir);
}
