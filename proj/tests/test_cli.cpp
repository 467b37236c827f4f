#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <unistd.h>

#include "fbstab/cli.hpp"
#include "fbstab/json_io.hpp"

using namespace fbstab;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "fbstab");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("fbstab_cli_" + std::to_string(::getpid()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

const std::string kHaar = R"({"offset": 0, "coeffs": [0.70710678118654752, 0.70710678118654752]})";

}  // namespace

TEST_CASE("number formatting") {
  CHECK(cli::format_number(0.1) == "0.10000000000000001");
  CHECK(cli::format_number(2.0) == "2");
  CHECK(std::stod(cli::format_number(std::numbers::pi)) == std::numbers::pi);
}

TEST_CASE("certify a stable Burt-Adelson filter") {
  const Result r = run({"certify", "--family", "burt-adelson", "--a", "0.70", "--highpass",
                        "orthogonal", "--grid", "2048", "--order", "3"});
  CHECK(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["expand"]["verdict"] == true);
  CHECK(j["bessel"][0]["verdict"] == true);
  CHECK(j["bessel"].size() == 3);
  CHECK(j["gramian"].size() == 3);
  CHECK(j["stable"] == true);
  CHECK(j["expand"]["grid"] == 2048);
  CHECK(j["expand"].contains("tolerances"));
  CHECK(j["filter"]["factored"]["n"] == 2);
}

TEST_CASE("certify reports a failed expanding test with exit code 2") {
  const Result r = run({"certify", "--family", "burt-adelson", "--a", "0.60", "--grid", "2048",
                        "--order", "2"});
  CHECK(r.code == cli::kExitCertificateFailed);
  const json j = json::parse(r.out);
  CHECK(j["expand"]["verdict"] == false);
  CHECK(j["stable"] == false);
}

TEST_CASE("certify the Haar filter from a file") {
  TempDir dir;
  const std::string haar = dir.write("haar.json", kHaar);
  const Result r = run({"certify", "--filter", haar, "--highpass", "orthogonal", "--grid", "1024"});
  CHECK(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  for (const auto& g : j["gramian"]) {
    CHECK(std::abs(g["lower"].get<double>() - 1.0) < 1e-9);
    CHECK(std::abs(g["upper"].get<double>() - 1.0) < 1e-9);
  }
  CHECK(j["gramian"].size() == 4);
  CHECK(std::abs(j["span"]["det_min"].get<double>() - 2.0) < 1e-12);

  // The same filter in factored form, with an explicit high-pass file.
  const std::string fac = dir.write("haar_factored.json", R"({"n": 1, "p": {"offset": 0, "coeffs": [1]}})");
  const std::string g = dir.write("g.json", R"({"offset": 0, "coeffs": [-0.70710678118654752, 0.70710678118654752]})");
  const Result r2 = run({"certify", "--filter", fac, "--highpass", g, "--grid", "1024", "--order", "2"});
  CHECK(r2.code == cli::kExitOk);
}

TEST_CASE("certify writes to --out") {
  TempDir dir;
  const std::string out = dir.path("report.json");
  const Result r = run({"certify", "--family", "higher-order", "--a", "0.8", "--grid", "1024",
                        "--order", "2", "--out", out});
  CHECK(r.out.empty());
  std::ifstream in(out);
  const json j = json::parse(in);
  CHECK(j["filter"]["factored"]["n"] == 3);
  CHECK(r.code == (j["stable"] == true ? cli::kExitOk : cli::kExitCertificateFailed));
}

TEST_CASE("input errors exit with code 1") {
  TempDir dir;
  CHECK(run({}).code == cli::kExitInputError);
  CHECK(run({"bogus"}).code == cli::kExitInputError);
  CHECK(run({"certify"}).code == cli::kExitInputError);
  CHECK(run({"certify", "--family", "nope", "--a", "1"}).code == cli::kExitInputError);
  CHECK(run({"certify", "--family", "burt-adelson"}).code == cli::kExitInputError);
  CHECK(run({"certify", "--filter", dir.path("missing.json")}).code == cli::kExitInputError);
  const std::string bad = dir.write("bad.json", "[1, 2,");
  CHECK(run({"certify", "--filter", bad}).code == cli::kExitInputError);
  const std::string bare = dir.write("bare.json", "[0.5, 0.5]");
  CHECK(run({"certify", "--filter", bare}).code == cli::kExitInputError);
  const std::string notlow = dir.write("notlow.json", R"({"offset": 0, "coeffs": [1, 1]})");
  const Result r = run({"certify", "--filter", notlow});
  CHECK(r.code == cli::kExitInputError);
  CHECK(r.err.find("axiom") != std::string::npos);
  CHECK(run({"certify", "--family", "burt-adelson", "--a", "0.7", "--grid", "1"}).code ==
        cli::kExitInputError);
  CHECK(run({"certify", "--family", "burt-adelson", "--a", "0.7", "--order", "11"}).code ==
        cli::kExitInputError);
  CHECK(run({"sweep", "--family", "burt-adelson", "--a-min", "0.7", "--a-max", "0.6", "--steps",
             "3"})
            .code == cli::kExitInputError);
  CHECK(run({"sweep", "--family", "x", "--a-min", "0.5", "--a-max", "0.6", "--steps", "3"}).code ==
        cli::kExitInputError);
  CHECK(run({"profile", "--which", "nope"}).code == cli::kExitInputError);
  CHECK(run({"--help"}).code == cli::kExitOk);
}

TEST_CASE("sweep over the Burt-Adelson family") {
  const Result r = run({"sweep", "--family", "burt-adelson", "--a-min", "0.5", "--a-max", "0.78",
                        "--steps", "15", "--grid", "1024"});
  REQUIRE(r.code == cli::kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 16);
  CHECK(rows[0] == std::vector<std::string>{"a", "bessel_s1", "bessel_s2", "expand_min",
                                            "expand_ok", "gramian_lower_j4", "gramian_upper_j4"});
  int flips = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    REQUIRE(rows[i].size() == 7);
    const double a = std::stod(rows[i][0]);
    const bool ok = rows[i][4] == "1";
    CHECK(ok == (std::stod(rows[i][3]) >= 2.0 - 1e-12));
    if (a >= 0.63) CHECK(ok);
    if (a <= 0.62) CHECK_FALSE(ok);
    if (i > 1 && ok != (rows[i - 1][4] == "1")) ++flips;
  }
  CHECK(flips == 1);
  CHECK(rows.back()[0] == "0.78000000000000003");

  // identical invocations are byte-identical
  CHECK(run({"sweep", "--family", "burt-adelson", "--a-min", "0.5", "--a-max", "0.78", "--steps",
             "15", "--grid", "1024"})
            .out == r.out);
}

TEST_CASE("sweep over the higher-order family") {
  const Result r = run({"sweep", "--family", "higher-order", "--a-min", "0.0", "--a-max", "1.5",
                        "--steps", "16", "--grid", "1024"});
  REQUIRE(r.code == cli::kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 17);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = std::stod(rows[i][0]);
    if (a <= 0.4) CHECK(rows[i][4] == "0");
    if (a >= 0.6) CHECK(rows[i][4] == "1");
  }
  const Result two = run({"sweep", "--family", "higher-order", "--a-min", "0.2", "--a-max", "0.9",
                          "--steps", "2", "--grid", "512"});
  const auto r2 = csv_rows(two.out);
  REQUIRE(r2.size() == 3);
  CHECK(r2[1][0] == "0.20000000000000001");
  CHECK(r2[2][0] == "0.90000000000000002");
}

TEST_CASE("apply the analysis operator") {
  TempDir dir;
  const std::string sig = dir.write("x.json", R"({"offset": -3, "coeffs": [1, -2, [0.5, 1.5], 3, 0.25]})");
  const std::string haar = dir.write("haar.json", kHaar);
  const Result r = run({"apply", "--signal", sig, "--filter", haar, "--order", "3"});
  REQUIRE(r.code == cli::kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["order"] == 3);
  CHECK(j["channels"].size() == 3);
  CHECK(j.contains("residual"));
  double total = 0.0;
  for (const auto& e : j["energies"]) total += e.get<double>();
  CHECK(total == doctest::Approx(j["input_energy"].get<double>()).epsilon(1e-12));
  CHECK(j["total_energy"].get<double>() == doctest::Approx(total).epsilon(1e-14));
  CHECK(run({"apply", "--signal", sig, "--filter", haar, "--order", "3"}).out == r.out);

  const std::string zero = dir.write("zero.json", R"({"offset": 0, "coeffs": []})");
  const json z = json::parse(run({"apply", "--signal", zero, "--family", "burt-adelson", "--a",
                                  "0.6", "--order", "2"})
                                 .out);
  for (const auto& e : z["energies"]) CHECK(e.get<double>() == 0.0);
  CHECK(run({"apply", "--signal", dir.path("none.json"), "--filter", haar}).code ==
        cli::kExitInputError);
}

TEST_CASE("frequency profiles") {
  TempDir dir;
  const std::string haar = dir.write("haar.json", kHaar);
  const auto std_rows = csv_rows(run({"profile", "--which", "std-expand", "--filter", haar, "--grid", "64"}).out);
  REQUIRE(std_rows.size() == 65);
  CHECK(std_rows[0] == std::vector<std::string>{"xi", "value"});
  CHECK(std_rows[17][0] == "0.25");
  for (std::size_t i = 1; i < std_rows.size(); ++i) CHECK(std::abs(std::stod(std_rows[i][1]) - 2.0) < 1e-14);

  const auto eig = csv_rows(run({"profile", "--which", "eigenfunctions", "--family", "burt-adelson",
                                 "--a", "0.6", "--grid", "256"})
                                .out);
  REQUIRE(eig.size() == 257);
  CHECK(eig[0] == std::vector<std::string>{"xi", "lambda_min", "lambda_max"});
  bool dips = false;
  for (std::size_t i = 1; i < eig.size(); ++i) dips = dips || std::stod(eig[i][1]) < 1.0;
  CHECK(dips);

  const Result sp = run({"profile", "--which", "sine-product", "--order", "4", "--grid", "512"});
  REQUIRE(sp.code == cli::kExitOk);
  const auto sine = csv_rows(sp.out);
  REQUIRE(sine.size() == 513);
  CHECK(sine[0] == std::vector<std::string>{"xi", "product", "bound"});
  for (std::size_t i = 1; i < sine.size(); ++i) {
    CHECK(std::stod(sine[i][1]) <= std::stod(sine[i][2]) + 1e-12);
  }
}
