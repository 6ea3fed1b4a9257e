#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "hypertrace/tensor_io.hpp"

#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CliRun {
    int status = -1;
    std::string out;
    std::string err;
};

CliRun run(const std::string& args) {
    fs::path dir = fs::temp_directory_path() / "hypertrace_cli_tests";
    fs::create_directories(dir);
    fs::path err_file = dir / "stderr.txt";
    std::string cmd = std::string(HYPERTRACE_CLI_PATH) + " " + args + " 2>" + err_file.string();
    CliRun result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) result.out.append(buf, got);
    int rc = pclose(pipe);
    result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    std::ifstream err_in(err_file);
    result.err.assign(std::istreambuf_iterator<char>(err_in), std::istreambuf_iterator<char>());
    return result;
}

fs::path write_file(const std::string& name, const std::string& content) {
    fs::path dir = fs::temp_directory_path() / "hypertrace_cli_tests";
    fs::create_directories(dir);
    fs::path p = dir / name;
    std::ofstream(p) << content;
    return p;
}

fs::path all_ones_32() {
    return write_file("ones32.json",
                      hypertrace::tensor_to_json(testutil::all_ones_tensor(3, 2)).dump());
}

fs::path single_edge_hypergraph() {
    return write_file("edge3.json", R"({"n":3,"k":3,"edges":[[1,2,3]]})");
}

} // namespace

TEST_CASE("cli trace matches the worked example") {
    CliRun r = run("trace --d 2 " + all_ones_32().string());
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["trace"] == "16");
    CHECK(j["d"] == 2);
    CHECK(j["method"] == "general");
    CHECK(j["format_version"] == 1);
}

TEST_CASE("cli trace methods agree") {
    std::string file = all_ones_32().string();
    CliRun general = run("trace --d 3 --method general " + file);
    CliRun oracle = run("trace --d 3 --method oracle " + file);
    CliRun closed = run("trace --d 3 --method closed " + file);
    REQUIRE(general.status == 0);
    REQUIRE(oracle.status == 0);
    REQUIRE(closed.status == 0);
    CHECK(json::parse(general.out)["trace"] == json::parse(oracle.out)["trace"]);
    CHECK(json::parse(general.out)["trace"] == json::parse(closed.out)["trace"]);
}

TEST_CASE("cli dump-terms lists the census") {
    CliRun r = run("trace --d 2 --dump-terms " + all_ones_32().string());
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    REQUIRE(j.contains("terms"));
    CHECK(j["terms"].size() == 5);
    for (const auto& term : j["terms"]) {
        CHECK(term.contains("arcs"));
        CHECK(term.contains("b"));
        CHECK(term.contains("c"));
        CHECK(term.contains("walks"));
        CHECK(term.contains("pi"));
    }
}

TEST_CASE("cli closed method outside d=2,3 is a domain error") {
    CliRun r = run("trace --d 4 --method closed " + all_ones_32().string());
    CHECK(r.status == 1);
    CHECK(r.err.find("closed") != std::string::npos);
}

TEST_CASE("cli exit 1 on bad input") {
    CHECK(run("trace --d 2 /nonexistent/file.json").status == 1);

    fs::path bad_json = write_file("bad.json", "{not json");
    CHECK(run("trace --d 2 " + bad_json.string()).status == 1);

    fs::path dup = write_file("dup.json",
                              R"({"order":2,"dim":2,"entries":[{"idx":[1,1],"val":"1"},{"idx":[1,1],"val":"1"}]})");
    CHECK(run("trace --d 2 " + dup.string()).status == 1);

    fs::path nonuniform = write_file("nonuniform.json", R"({"n":3,"k":3,"edges":[[1,2]]})");
    CHECK(run("symmetry --bound 2 " + nonuniform.string()).status == 1);

    fs::path dup_edge = write_file("dupedge.json", R"({"n":3,"k":3,"edges":[[1,2,3],[3,2,1]]})");
    CHECK(run("lapcompare " + dup_edge.string()).status == 1);

    // d = 0 rejected
    CHECK(run("trace --d 0 " + all_ones_32().string()).status == 1);
}

TEST_CASE("cli exit 2 on resource refusals, naming the cap") {
    CliRun census = run("--max-census 1 trace --d 2 " + all_ones_32().string());
    CHECK(census.status == 2);
    CHECK(census.err.find("max-census") != std::string::npos);
    CHECK(census.err.find("predicted") != std::string::npos);

    CliRun oracle = run("--max-oracle-terms 1 trace --d 2 --method oracle " + all_ones_32().string());
    CHECK(oracle.status == 2);
    CHECK(oracle.err.find("max-oracle-terms") != std::string::npos);

    CliRun phm = run("--max-phm-n 2 phm --p 1 " + single_edge_hypergraph().string());
    CHECK(phm.status == 2);
    CHECK(phm.err.find("max-phm-n") != std::string::npos);

    CliRun charpoly = run("--max-charpoly-upto 2 charpoly --upto 4 " + all_ones_32().string());
    CHECK(charpoly.status == 2);
    CHECK(charpoly.err.find("max-charpoly-upto") != std::string::npos);
}

TEST_CASE("cli walks subcommand") {
    CliRun r = run("walks 1,2 2,1 1,1 2,2");
    REQUIRE(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["walks"] == "4");
    CHECK(j["b"] == "1");
    CHECK(j["c"] == "4");

    CliRun multi = run("walks 1,1:4");
    REQUIRE(multi.status == 0);
    json jm = json::parse(multi.out);
    CHECK(jm["walks"] == "1");
    CHECK(jm["b"] == "24");
    CHECK(jm["c"] == "24");

    CHECK(run("walks nonsense").status == 1);
}

TEST_CASE("cli symmetry and phm and charpoly") {
    std::string hyp = single_edge_hypergraph().string();
    CliRun sym = run("symmetry --bound 4 " + hyp);
    REQUIRE(sym.status == 0);
    json js = json::parse(sym.out);
    CHECK(js["verdict"] == "consistent-with-k-symmetric");
    CHECK(js["complete"] == false);
    CHECK(js["witnesses"].empty());

    CliRun phm = run("phm --p 1 " + hyp);
    REQUIRE(phm.status == 0);
    json jp = json::parse(phm.out);
    CHECK(jp["found"] == true);
    CHECK(jp["v1"].size() == 1);

    CliRun cp = run("charpoly --upto 2 " + all_ones_32().string());
    REQUIRE(cp.status == 0);
    json jc = json::parse(cp.out);
    CHECK(jc["coeffs"].size() == 3);
    CHECK(jc["coeffs"][0] == "1");
    CHECK(jc["complete"] == false);
    CHECK(jc["full_degree"] == "4");
}

TEST_CASE("cli table output mode") {
    CliRun r = run("--output table trace --d 2 " + all_ones_32().string());
    REQUIRE(r.status == 0);
    CHECK(r.out.find("trace: 16") != std::string::npos);
    CHECK(r.out.find("format_version: 1") != std::string::npos);
}

TEST_CASE("cli version flag") {
    CliRun r = run("--version");
    CHECK(r.status == 0);
    CHECK(r.out.find("hypertrace") != std::string::npos);
    CHECK(r.out.find("format") != std::string::npos);
}
