#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include <json.hpp>

#ifndef KF_CLI_PATH
#error "KF_CLI_PATH must point at the command-line binary"
#endif

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(KF_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got;
    while ((got = ::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    const int status = ::pclose(pipe);
    return {WEXITSTATUS(status), out};
}

struct Workspace {
    fs::path dir;
    Workspace() {
        dir = fs::temp_directory_path() / ("kf_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = dir / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

nlohmann::json report_of(const RunResult& r) { return nlohmann::json::parse(r.out); }

} // namespace

TEST_CASE("gram command on the two-point gaussian instance") {
    Workspace ws;
    const auto kernel = ws.file("k.json", R"({"family":"gaussian","sigma":1.0})");
    const auto points = ws.file("p.csv", "x0\n0\n1\n");
    const auto out = ws.path("gram.csv");

    const auto r = run_cli("gram --kernel " + kernel + " --points " + points +
                           " --check pd --out " + out);
    CHECK(r.exit_code == 0);
    const auto rep = report_of(r);
    CHECK(rep["verdicts"][0]["class"] == "PD");
    CHECK(rep["numbers"]["n"] == 2);

    // written matrix matches the hand values
    std::ifstream m(out);
    double a, b;
    char comma;
    m >> a >> comma >> b;
    CHECK(a == 1.0);
    CHECK(b == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("gram --check pd fails on duplicated points with a witness pair") {
    Workspace ws;
    const auto kernel = ws.file("k.json", R"({"family":"gaussian","sigma":1.0})");
    const auto points = ws.file("p.csv", "x0\n0\n0\n1\n");
    const auto r = run_cli("gram --kernel " + kernel + " --points " + points + " --check pd");
    CHECK(r.exit_code == 1);
    const auto rep = report_of(r);
    CHECK(rep["verdicts"][1]["verdict"] == false);
    CHECK(rep["verdicts"][1]["witness_pair"][0] == 0);
    CHECK(rep["verdicts"][1]["witness_pair"][1] == 1);
}

TEST_CASE("gram --format json writes the matrix as JSON") {
    Workspace ws;
    const auto kernel = ws.file("k.json", R"({"family":"gaussian","sigma":1.0})");
    const auto points = ws.file("p.csv", "x0\n0\n1\n");
    const auto out = ws.path("gram.json");
    const auto r =
        run_cli("gram --kernel " + kernel + " --points " + points + " --format json --out " + out);
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    nlohmann::json m;
    in >> m;
    CHECK(m["matrix"][0][0] == 1.0);
    CHECK(m["matrix"][0][1].get<double>() == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("gram on an empty points file is an input error") {
    Workspace ws;
    const auto kernel = ws.file("k.json", R"({"family":"gaussian","sigma":1.0})");
    const auto points = ws.file("p.csv", "");
    CHECK(run_cli("gram --kernel " + kernel + " --points " + points).exit_code == 2);
}

TEST_CASE("unknown options are usage errors") {
    CHECK(run_cli("gram --frobnicate 1").exit_code == 2);
    CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("check cnd on a squared-distance matrix") {
    Workspace ws;
    const auto gamma = ws.file("g.csv", "0,1,4\n1,0,1\n4,1,0\n");
    const auto r = run_cli("check cnd --gamma " + gamma);
    CHECK(r.exit_code == 0);
    CHECK(report_of(r)["verdicts"][0]["verdict"] == true);
}

TEST_CASE("check metrizable fails on a constant matrix with a pair witness") {
    Workspace ws;
    const auto gamma = ws.file("g.csv", "2,2\n2,2\n");
    const auto r = run_cli("check metrizable --gamma " + gamma);
    CHECK(r.exit_code == 1);
    const auto rep = report_of(r);
    CHECK(rep["verdicts"][0]["verdict"] == false);
    CHECK(rep["verdicts"][0]["witness_pair"][0] == 0);
}

TEST_CASE("check metrizable over a site kernel rejects duplicate points") {
    Workspace ws;
    const auto desc = ws.file("c.json", R"({"cnd":"sq_dist","offset":0,"scale":1})");
    const auto pts = ws.file("p.csv", "x0\n0\n1\n1\n");
    CHECK(run_cli("check metrizable --kernel " + desc + " --points " + pts).exit_code == 2);

    const auto distinct = ws.file("q.csv", "x0\n0\n1\n3\n");
    CHECK(run_cli("check metrizable --kernel " + desc + " --points " + distinct).exit_code == 0);
}

TEST_CASE("check cm rejects an oscillating table with a located violation") {
    Workspace ws;
    std::ostringstream desc;
    desc << R"({"fn":"table","t":[)";
    std::ostringstream vals;
    for (int i = 0; i < 40; ++i) {
        const double t = 0.25 * (i + 1);
        desc << (i ? "," : "") << t;
        vals << (i ? "," : "") << std::sin(t);
    }
    desc << R"(],"v":[)" << vals.str() << "]}";
    const auto fn = ws.file("f.json", desc.str());
    const auto r = run_cli("check cm --kernel " + fn + " --order 3");
    CHECK(r.exit_code == 1);
    const auto rep = report_of(r);
    CHECK(rep["verdicts"][0]["verdict"] == false);
    CHECK(!rep["verdicts"][0]["violations"].empty());
}

TEST_CASE("check hyperbolic accepts a pairing gram built from points") {
    Workspace ws;
    const auto pts = ws.file("h.csv", "x0,x1\n0,0\n0.5,0\n0,1\n-0.5,0.25\n");
    const auto r = run_cli("check hyperbolic --points " + pts + " --lift");
    CHECK(r.exit_code == 0);
}

TEST_CASE("embed writes coordinates for the quadratic kernel") {
    Workspace ws;
    const auto gamma = ws.file("g.csv", "0,1,4\n1,0,1\n4,1,0\n");
    const auto out = ws.path("coords.csv");
    const auto r = run_cli("embed --gamma " + gamma + " --out " + out);
    CHECK(r.exit_code == 0);
    const auto rep = report_of(r);
    CHECK(rep["numbers"]["rank"] == 1);
    CHECK(rep["numbers"]["max_reconstruction_error"].get<double>() < 1e-9);

    std::ifstream coords(out);
    std::string header;
    std::getline(coords, header);
    CHECK(header == "h0,f");
}

TEST_CASE("embed handles a single point") {
    Workspace ws;
    const auto gamma = ws.file("g1.csv", "5\n");
    const auto r = run_cli("embed --gamma " + gamma);
    CHECK(r.exit_code == 0);
    const auto rep = report_of(r);
    CHECK(rep["numbers"]["rank"] == 0);
}

TEST_CASE("embed refuses a non-CND input with exit 1") {
    Workspace ws;
    const auto gamma = ws.file("g.csv", "1,0\n0,1\n");
    const auto r = run_cli("embed --gamma " + gamma);
    CHECK(r.exit_code == 1);
    const auto rep = report_of(r);
    CHECK(rep["verdicts"][0]["verdict"] == false);
    CHECK(rep["verdicts"][0].contains("lambda_max_projected"));
}

TEST_CASE("matern command values") {
    const auto r0 = run_cli("matern --r 0 --alpha 2 --nu 1.5");
    CHECK(r0.exit_code == 0);
    CHECK(report_of(r0)["numbers"]["value"] == 1.0);

    const auto rexp = run_cli("matern --r 1.25 --alpha 0.8 --nu 0.5");
    CHECK(report_of(rexp)["numbers"]["value"].get<double>() ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    const auto roracle = run_cli("matern --r 0.7 --alpha 1.5 --nu 2.5 --oracle");
    CHECK(report_of(roracle)["numbers"]["relative_gap"].get<double>() <= 1e-6);

    CHECK(run_cli("matern --r -1 --alpha 1 --nu 0.5").exit_code == 2);
}

TEST_CASE("mmd command") {
    Workspace ws;
    const auto kernel = ws.file("k.json", R"({"family":"gaussian","sigma":1.0})");
    const auto a = ws.file("a.csv", "x0\n0\n");
    const auto b = ws.file("b.csv", "x0\n1\n");

    const auto same = run_cli("mmd --kernel " + kernel + " " + a + " " + a);
    CHECK(same.exit_code == 0);
    CHECK(report_of(same)["numbers"]["mmd"] == 0.0);

    const auto ab = run_cli("mmd --kernel " + kernel + " " + a + " " + b);
    CHECK(report_of(ab)["numbers"]["mmd"].get<double>() ==
          doctest::Approx(std::sqrt(2.0 - 2.0 * std::exp(-1.0))).epsilon(1e-12));

    const auto ba = run_cli("mmd --kernel " + kernel + " " + b + " " + a);
    CHECK(report_of(ab)["numbers"]["mmd"] == report_of(ba)["numbers"]["mmd"]);
}

TEST_CASE("mmd runs on sheet samples with a sheet kernel") {
    Workspace ws;
    const auto kernel = ws.file("k.json", R"({"family":"sech_power","r":1.0})");
    const auto a = ws.file("a.csv", "x0,x1\n0,0\n0.5,0\n");
    const auto b = ws.file("b.csv", "x0,x1\n0.25,0.25\n-0.5,0.5\n");
    const auto r = run_cli("mmd --kernel " + kernel + " --lift " + a + " " + b);
    CHECK(r.exit_code == 0);
    CHECK(report_of(r)["numbers"]["mmd"].get<double>() > 0.0);
}

TEST_CASE("classify-matrix-gaussian on the reference instances") {
    Workspace ws;
    const auto gamma_flat = ws.file("gf.csv", "3,3\n3,3\n");

    const auto ones = ws.file("a1.csv", "1,1\n1,1\n");
    const auto r1 = run_cli("classify-matrix-gaussian --a " + ones + " --gamma " + gamma_flat +
                            " --m 2");
    CHECK(r1.exit_code == 0);
    auto rep1 = report_of(r1);
    CHECK(rep1["verdicts"][0]["spd"] == false);
    CHECK(rep1["verdicts"][0]["c0_universal"] == false);
    CHECK(rep1["verdicts"][0]["classes"][0] == nlohmann::json::parse("[1,2]"));

    const auto pd = ws.file("a2.csv", "2,1\n1,2\n");
    const auto r2 = run_cli("classify-matrix-gaussian --a " + pd + " --gamma " + gamma_flat +
                            " --m 2");
    auto rep2 = report_of(r2);
    CHECK(rep2["verdicts"][0]["spd"] == true);
    CHECK(rep2["verdicts"][0]["c0_universal"] == true);

    const auto gamma_split = ws.file("gs.csv", "2,5\n5,2\n");
    const auto a3 = ws.file("a3.csv", "2,0.2\n0.2,2\n");
    const auto r3 = run_cli("classify-matrix-gaussian --a " + a3 + " --gamma " + gamma_split +
                            " --m 2");
    auto rep3 = report_of(r3);
    CHECK(rep3["verdicts"][0]["classes"].size() == 2);
    CHECK(rep3["verdicts"][0]["c0_universal"] == true);

    // hypothesis violations are input errors
    const auto bad = ws.file("ab.csv", "1,10\n10,1\n");
    CHECK(run_cli("classify-matrix-gaussian --a " + bad + " --gamma " + gamma_flat + " --m 2")
              .exit_code == 2);
}

TEST_CASE("reports are byte-identical across reruns") {
    Workspace ws;
    const auto kernel = ws.file("k.json", R"({"family":"gaussian","sigma":1.0})");
    const auto points = ws.file("p.csv", "x0,x1\n0,0\n1,0\n0.25,-1\n");
    const std::string cmd = "gram --kernel " + kernel + " --points " + points + " --seed 7";
    const auto first = run_cli(cmd);
    const auto second = run_cli(cmd);
    CHECK(first.exit_code == second.exit_code);
    CHECK(first.out == second.out);
}
