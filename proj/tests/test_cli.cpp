#include "test_specs.hpp"

#include "qtilde/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qtest;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = qtilde::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

// Temp spec files shared by the CLI tests.
struct SpecFiles {
    std::string dir;
    SpecFiles() {
        dir = "cli_specs_tmp";
        std::filesystem::create_directories(dir);
        write("id2.json", R"({"block": [{"q": ["1/2","1/2"], "p": ["1/2","1/2"]}]})");
        write("nega2.json", R"({"block": [{"q": ["1/2","1/2"], "p": ["3/10","7/10"]}]})");
        write("s3neg.json",
              R"({"block": [{"q": ["1/3","1/3","1/3"], "p": ["3/5","-1/5","3/5"]}]})");
        write("bad.json", R"({"block": [{"q": ["1/2","1/2"], "p": ["-1/2","3/2"]}]})");
        write("warn4.json",
              R"({"block": [{"q": ["1/3","1/3","1/3"], "p": ["-1/10","1/5","9/10"]}]})");
        write("broken.json", "{ not json");
    }
    void write(const std::string& name, const std::string& text) {
        std::ofstream f(dir + "/" + name);
        f << text;
    }
    std::string path(const std::string& name) const { return dir + "/" + name; }
};

SpecFiles& files() {
    static SpecFiles f;
    return f;
}

} // namespace

TEST_CASE("cli validate") {
    CHECK(run_cli({"validate", "--spec", files().path("nega2.json")}).code == 0);
    Outcome bad = run_cli({"validate", "--spec", files().path("bad.json")});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("p1") != std::string::npos);
    CHECK(run_cli({"validate", "--spec", files().path("broken.json")}).code == 1);
    CHECK(run_cli({"validate", "--spec", "no_such_file.json"}).code == 1);
}

TEST_CASE("cli integral prints exact and decimal") {
    Outcome r = run_cli({"integral", "--spec", files().path("id2.json")});
    CHECK(r.code == 0);
    CHECK(r.out == "integral=1/2 (0.5)\n");

    Outcome n = run_cli({"integral", "--spec", files().path("nega2.json"), "--oracle-depth", "8"});
    CHECK(n.code == 0);
    CHECK(n.out.find("integral=3/10 (0.3)") != std::string::npos);
    CHECK(n.out.find("oracle_low=") != std::string::npos);
    CHECK(n.out.find("oracle_high=") != std::string::npos);
}

TEST_CASE("cli eval at a point") {
    Outcome r = run_cli({"eval", "--spec", files().path("nega2.json"), "--x", "0", "--tol",
                         "1e-9"});
    CHECK(r.code == 0);
    CHECK(r.out == "value=0 (0)\n");
}

TEST_CASE("cli classify output line") {
    Outcome r = run_cli({"classify", "--spec", files().path("s3neg.json")});
    CHECK(r.code == 0);
    CHECK(r.out ==
          "NowhereMonotone; nowhere-differentiable: true; singularity: NotApplicable\n");

    Outcome w = run_cli({"classify", "--spec", files().path("warn4.json")});
    CHECK(w.code == 0);
    CHECK(w.err.find("condition 4") != std::string::npos);
}

TEST_CASE("cli encode/decode round trip") {
    Outcome e = run_cli({"encode", "--spec", files().path("nega2.json"), "--rep", "nega", "--x",
                         "1/2", "--depth", "1"});
    CHECK(e.code == 0);
    CHECK(e.out.find("digits=nega:0:altzeromax") != std::string::npos);
    CHECK(e.out.find("exact=true") != std::string::npos);

    Outcome d = run_cli({"decode", "--spec", files().path("nega2.json"), "--digits",
                         "nega:0:altzeromax"});
    CHECK(d.code == 0);
    CHECK(d.out == "value=1/2 (0.5)\n");

    Outcome t = run_cli({"decode", "--spec", files().path("nega2.json"), "--digits",
                         "nega:0,1:truncated"});
    CHECK(t.code == 0);
    CHECK(t.out.find("error_bound=") != std::string::npos);
}

TEST_CASE("cli shift and increment") {
    Outcome s = run_cli({"shift", "--spec", files().path("id2.json"), "--digits",
                         "plus:1,1:zeros", "--k", "1"});
    CHECK(s.code == 0);
    CHECK(s.out.find("value=1/2") != std::string::npos);

    Outcome i = run_cli({"increment", "--spec", files().path("s3neg.json"), "--base", "1"});
    CHECK(i.code == 0);
    CHECK(i.out == "increment=-1/5 (-0.2)\n");
}

TEST_CASE("cli sample determinism and precondition exit") {
    std::vector<std::string> args{"sample", "--spec", files().path("nega2.json"),
                                  "--seed", "42",  "--count", "3", "--depth", "30"};
    Outcome a = run_cli(args);
    Outcome b = run_cli(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("# generator=splitmix64-counter-v1") != std::string::npos);
    CHECK(a.out.find("index,value_num/den,value_decimal") != std::string::npos);

    Outcome bad = run_cli({"sample", "--spec", files().path("s3neg.json"), "--seed", "1",
                           "--count", "10"});
    CHECK(bad.code == 3);
}

TEST_CASE("cli graph writes CSV and honors the point cap") {
    std::string out_csv = files().path("graph.csv");
    Outcome g = run_cli({"graph", "--spec", files().path("id2.json"), "--depth", "4", "--out",
                         out_csv});
    CHECK(g.code == 0);
    std::ifstream f(out_csv);
    std::string header;
    std::getline(f, header);
    CHECK(header == "x_num/x_den,y_num/y_den,x_decimal,y_decimal");
    long rows = 0;
    for (std::string line; std::getline(f, line);) ++rows;
    CHECK(rows == 17);

    setenv("QTILDE_MAX_POINTS", "4", 1);
    Outcome capped = run_cli({"graph", "--spec", files().path("id2.json"), "--depth", "4",
                              "--out", out_csv});
    unsetenv("QTILDE_MAX_POINTS");
    CHECK(capped.code == 3);
}

TEST_CASE("cli ifs lines") {
    Outcome r = run_cli({"ifs", "--spec", files().path("nega2.json"), "--n", "2"});
    CHECK(r.code == 0);
    CHECK(r.out == "2,0,1/2,1/2,3/10,7/10\n2,1,0,1/2,0,3/10\n");
}

TEST_CASE("cli cdf-test runs at small scale") {
    Outcome r = run_cli({"cdf-test", "--spec", files().path("id2.json"), "--seed", "9",
                         "--count", "500", "--grid", "64", "--depth", "20"});
    CHECK(r.code == 0);
    CHECK(r.out.find("sup_distance=") != std::string::npos);
}

TEST_CASE("cli digit errors exit with the precondition code") {
    Outcome r = run_cli({"decode", "--spec", files().path("nega2.json"), "--digits",
                         "nega:7:altmaxzero"});
    CHECK(r.code == 3);
    Outcome p = run_cli({"decode", "--spec", files().path("nega2.json"), "--digits",
                         "garbage"});
    CHECK(p.code == 1);
}
