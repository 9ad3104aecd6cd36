#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "fheight/cli.hpp"
#include "fheight/elliptic.hpp"
#include "fheight/expr.hpp"

using namespace fheight;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
    json j() const { return json::parse(out); }
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "fheight");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    std::stringstream s;
    s << f.rdbuf();
    return s.str();
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "fheight_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("cli: documented examples") {
    Run r = run({"drinfeld-height", "--q", "3", "--phi", "T+tau", "--alpha", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.j()["hhat"] == "1/3");
    CHECK(r.j()["status"] == "Exact");

    r = run({"ec-profile", "--q", "5", "--B", "t", "--C", "1"});
    REQUIRE(r.code == 0);
    json j = r.j();
    CHECK(j["d_EK"] == 12);
    CHECK(j["deg_j"] == 3);
    CHECK(j["f_EK"] == 5);
    CHECK(j["semistable"] == false);
}

TEST_CASE("cli: input errors exit 1 with usage") {
    Run r = run({"ec-profile", "--q", "5", "--bogus", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);

    r = run({"no-such-command", "--q", "5"});
    CHECK(r.code == 1);

    r = run({"ec-profile", "--q", "6", "--B", "t", "--C", "1"});
    CHECK(r.code == 1);

    r = run({"ec-profile", "--q", "5", "--B", "t+*2", "--C", "1"});
    CHECK(r.code == 1);
    CHECK(r.err.find("1:3") != std::string::npos);

    r = run({"drinfeld-height", "--q", "3", "--phi", "T^2+tau", "--alpha", "1"});
    CHECK(r.code == 1);

    r = run({"ec-height", "--q", "5", "--B", "t", "--C", "t", "--x", "0", "--y", "1"});
    CHECK(r.code == 1);

    r = run({"ec-profile", "--q", "5", "--B", "1", "--C", "1"});  // isotrivial
    CHECK(r.code == 1);
    CHECK(r.out.empty());
}

TEST_CASE("cli: exit 2 when a cap leaves the answer open") {
    Run r = run({"ec-height", "--q", "5", "--B", "t", "--C", "t", "--x", "-1", "--y", "2", "--cap", "2"});
    CHECK(r.code == 2);
    CHECK(r.j()["status"] == "WidthNotReached");

    r = run({"ec-height", "--q", "5", "--B", "t", "--C", "t", "--x", "-1", "--y", "2"});
    CHECK(r.code == 0);
    CHECK(r.j()["exact"] == "1/4");
}

TEST_CASE("cli: deterministic output, files written whole") {
    std::vector<std::string> args = {"drinfeld-sweep", "--q", "3", "--max-degree", "1", "--minpoly", "x^2-T"};
    Run a = run(args), b = run(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);

    auto js = scratch("sweep.json"), csv = scratch("sweep.csv");
    std::filesystem::remove(js);
    std::filesystem::remove(csv);
    args.insert(args.end(), {"--out", js.string(), "--csv", csv.string()});
    Run c = run(args);
    REQUIRE(c.code == 0);
    CHECK(c.out.empty());
    CHECK(slurp(js) == a.out);
    CHECK_FALSE(std::filesystem::exists(js.string() + ".tmp"));
    std::string text = slurp(csv);
    CHECK(text.rfind("alpha,minpoly,d,torsion,hhat_num,hhat_den,d_times_hhat,pole_case,status,violation\n", 0) == 0);
    CHECK(text.find("1,,1,false,1,3,1/3,false,Exact,true") != std::string::npos);

    Run g1 = run({"ec-report", "--q", "5", "--generate", "general", "--seed", "7"});
    Run g2 = run({"ec-report", "--q", "5", "--generate", "general", "--seed", "7"});
    CHECK(g1.code == g2.code);
    CHECK(g1.out == g2.out);
}

TEST_CASE("cli: config file matches flags") {
    auto cfg = scratch("job.ini");
    std::ofstream(cfg) << "command = ec-census\nq = 5\nB = \"t\"\nC = \"t\"\nwidth = \"1/1000\"\n";
    Run a = run({"--config", cfg.string()});
    Run b = run({"ec-census", "--q", "5", "--B", "t", "--C", "t", "--width", "1/1000"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.j()["census"]["threshold"] == "1/96");
}

TEST_CASE("cli: emitted expressions re-parse to the same values") {
    const GF& F = GF::make(5, 1);
    Run r = run({"ec-integral", "--q", "5", "--B", "t", "--C", "t", "--S", "inf,t+1"});
    CHECK(r.code == 2);  // search radius capped below what completeness needs
    json j = r.j()["integral"];
    CHECK(j["complete"] == false);
    ECurve E(parse_ratfunc(F, j["model"]["B"].get<std::string>()), parse_ratfunc(F, j["model"]["C"].get<std::string>()));
    REQUIRE(j["points"].size() > 0);
    for (const auto& p : j["points"]) {
        ECPoint P = ECPoint::affine(parse_ratfunc(F, p["x"].get<std::string>()), parse_ratfunc(F, p["y"].get<std::string>()));
        CHECK(E.contains(P));
        CHECK(P.x.to_string("t") == p["x"].get<std::string>());
    }

    r = run({"drinfeld-torsion", "--q", "3", "--minpoly", "x^2+T", "--alpha", "x"});
    CHECK(r.code == 0);
    CHECK(r.j()["status"] == "Torsion");
    r = run({"drinfeld-height", "--q", "3", "--phi", "T + (T^2+1)*tau^2", "--alpha", "1/T"});
    CHECK(r.code == 0);
    std::string h = r.j()["hhat"];
    CHECK(to_fraction_string(parse_rational(h)) == h);
}
