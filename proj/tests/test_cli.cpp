// End-to-end tests of the command-line tool: pinned values, exit codes,
// output determinism, and the emitted JSON artifacts.  Each test writes its
// own fixtures into a scratch directory and spawns the real binary.

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "toricqs/basespace.hpp"
#include "toricqs/jsonio.hpp"
#include "toricqs/measure.hpp"
#include "toricqs/quasistate.hpp"

namespace {

namespace fsys = std::filesystem;

const std::string& scratch_dir() {
  static std::string dir = [] {
    std::string d = (fsys::temp_directory_path() /
                     ("toricqs_cli_test_" + std::to_string(::getpid())))
                        .string();
    fsys::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_fixture(const std::string& name, const std::string& content) {
  std::string path = scratch_dir() + "/" + name;
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << content;
  REQUIRE(f.good());
  return path;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  std::string tag = std::to_string(counter++);
  std::string out_path = scratch_dir() + "/stdout_" + tag;
  std::string err_path = scratch_dir() + "/stderr_" + tag;
  std::string cmd = std::string(TORICQS_CLI_PATH) + " " + args + " >" + out_path +
                    " 2>" + err_path;
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) lines.push_back(line);
  return lines;
}

// Finds the unique row starting with `prefix,` and returns the remainder.
std::string row_rest(const std::string& text, const std::string& prefix) {
  std::string found;
  int hits = 0;
  for (const auto& line : lines_of(text)) {
    if (line.rfind(prefix + ",", 0) == 0) {
      found = line.substr(prefix.size() + 1);
      ++hits;
    }
  }
  REQUIRE_MESSAGE(hits == 1, "expected exactly one '", prefix, "' row, got ", hits);
  return found;
}

int count_rows(const std::string& text, const std::string& prefix) {
  int hits = 0;
  for (const auto& line : lines_of(text))
    if (line.rfind(prefix + ",", 0) == 0) ++hits;
  return hits;
}

std::vector<std::string> split_csv(const std::string& row) {
  std::vector<std::string> cells;
  std::size_t pos = 0;
  while (pos <= row.size()) {
    std::size_t comma = row.find(',', pos);
    cells.push_back(row.substr(pos, comma == std::string::npos ? std::string::npos
                                                               : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return cells;
}

double as_number(const std::string& cell) {
  std::size_t consumed = 0;
  double v = std::stod(cell, &consumed);
  REQUIRE(consumed == cell.size());
  return v;
}

std::string simplex_json(int n, double scale = 1.0) {
  nlohmann::json j{{"kind", "simplex"}, {"n", n}, {"scale", scale}};
  return j.dump();
}

const char* kStarTree = R"({"kind":"tree","edges":[
  {"u":"a","v":"c","len":0.5,"density":{"kind":"const","value":1.0}},
  {"u":"b","v":"c","len":0.3,"density":{"kind":"const","value":1.0}},
  {"u":"d","v":"c","len":0.2,"density":{"kind":"const","value":1.0}}]})";

}  // namespace

TEST_CASE("eval reproduces the pinned projective-line values") {
  std::string space = write_fixture("cp1.json", simplex_json(1));
  std::string fun =
      write_fixture("psq.json", R"({"kind":"monomial","exps":[2],"coef":1.0})");
  RunResult r = run_cli("eval --space " + space + " --function " + fun);
  REQUIRE(r.exit_code == 0);
  CHECK(r.err.empty());

  // Machine output pins the classical values to full precision.
  CHECK(r.out.find("zeta,0.0833333") != std::string::npos);
  CHECK(r.out.find("calabi,0.3333333") != std::string::npos);
  CHECK(as_number(row_rest(r.out, "zeta")) == doctest::Approx(1.0 / 12).epsilon(1e-14));
  CHECK(as_number(row_rest(r.out, "calabi")) ==
        doctest::Approx(1.0 / 3).epsilon(1e-14));
  CHECK(as_number(row_rest(r.out, "sigma_term")) ==
        doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("eval is byte-deterministic and --out matches stdout") {
  std::string space = write_fixture("cp2.json", simplex_json(2));
  std::string fun = write_fixture(
      "mixed.json",
      R"({"kind":"sum","terms":[{"kind":"monomial","exps":[2,1],"coef":1.5},
                                {"kind":"monomial","exps":[0,3],"coef":-0.25}]})");
  std::string base = "eval --space " + space + " --function " + fun;
  RunResult a = run_cli(base);
  RunResult b = run_cli(base);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);

  std::string out_file = scratch_dir() + "/eval_out.csv";
  RunResult c = run_cli(base + " --out " + out_file);
  REQUIRE(c.exit_code == 0);
  CHECK(c.out.empty());
  CHECK(slurp(out_file) == a.out);
}

TEST_CASE("eval with the Monte Carlo engine reports a standard error") {
  std::string space = write_fixture("cp1_mc.json", simplex_json(1));
  std::string fun =
      write_fixture("psq_mc.json", R"({"kind":"monomial","exps":[2],"coef":1.0})");
  std::string cmd = "eval --space " + space + " --function " + fun +
                    " --engine mc --samples 20000 --seed 7";
  RunResult r = run_cli(cmd);
  REQUIRE(r.exit_code == 0);
  double se = as_number(row_rest(r.out, "standard_error"));
  CHECK(se > 0.0);
  CHECK(std::abs(as_number(row_rest(r.out, "zeta")) - 1.0 / 12) < 0.05);

  RunResult again = run_cli(cmd);
  CHECK(again.out == r.out);  // seeded runs are reproducible byte for byte
}

TEST_CASE("eval --human renders an aligned table") {
  std::string space = write_fixture("cp1_h.json", simplex_json(1));
  std::string fun =
      write_fixture("psq_h.json", R"({"kind":"monomial","exps":[2],"coef":1.0})");
  RunResult r = run_cli("eval --space " + space + " --function " + fun + " --human");
  REQUIRE(r.exit_code == 0);
  auto lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0].rfind("zeta", 0) == 0);
  CHECK(lines[0].find(',') == std::string::npos);
  CHECK(lines[0].find("0.0833333") != std::string::npos);
}

TEST_CASE("median reports the pinned star-tree answer") {
  std::string tree = write_fixture("star.json", kStarTree);
  RunResult r = run_cli("median --tree " + tree);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == "median,vertex:c,unique:true\n");
}

TEST_CASE("independence certifies the pinned rank-2 family") {
  RunResult r = run_cli("independence --n 1 --deltas 1.0,0.9");
  REQUIRE(r.exit_code == 0);
  CHECK(row_rest(r.out, "rank") == "2");
  CHECK(count_rows(r.out, "matrix") == 4);
  double min_sv = as_number(row_rest(r.out, "min_singular_value"));
  double tol = as_number(row_rest(r.out, "rank_tolerance"));
  CHECK(min_sv > tol);
}

TEST_CASE("mu-delta cross-checks the two routes and surfaces the convention gap") {
  std::string prof =
      write_fixture("prof_t2.json", R"({"kind":"monomial","exps":[2],"coef":1.0})");

  RunResult derived =
      run_cli("mu-delta --n 1 --deltas 1.0,0.9 --profile " + prof);
  REQUIRE(derived.exit_code == 0);
  CHECK(count_rows(derived.out, "mu") == 2);
  CHECK(count_rows(derived.out, "pullback") == 2);
  CHECK(count_rows(derived.out, "convention_gap") == 1);  // only delta != 1

  RunResult printed =
      run_cli("mu-delta --n 1 --deltas 1.0,0.9 --profile " + prof +
              " --convention paper");
  REQUIRE(printed.exit_code == 0);
  CHECK(count_rows(printed.out, "pullback") == 0);

  // The conventions agree at delta = 1 and the reported gap accounts exactly
  // for the difference at delta = 0.9.
  auto mu_at = [](const std::string& text, const std::string& delta) {
    for (const auto& line : lines_of(text)) {
      auto cells = split_csv(line);
      if (cells.size() == 3 && cells[0] == "mu" && cells[1] == delta)
        return as_number(cells[2]);
    }
    REQUIRE(false);
    return 0.0;
  };
  CHECK(mu_at(printed.out, "1") ==
        doctest::Approx(mu_at(derived.out, "1")).epsilon(1e-15));
  double gap = as_number(split_csv(row_rest(derived.out, "convention_gap"))[1]);
  CHECK(mu_at(printed.out, "0.9") - mu_at(derived.out, "0.9") ==
        doctest::Approx(gap).epsilon(1e-12));
  CHECK(std::abs(gap) > 1e-4);
}

TEST_CASE("displace distinguishes the barycenter from movable sets") {
  std::string space = write_fixture("cp2_disp.json", simplex_json(2));

  RunResult fixed = run_cli("displace --space " + space +
                            " --point 0.333333333333333315,0.333333333333333315");
  REQUIRE(fixed.exit_code == 0);
  CHECK(row_rest(fixed.out, "displaceable") == "false");
  CHECK(count_rows(fixed.out, "element") == 0);

  RunResult moved = run_cli("displace --space " + space + " --point 0.6,0.2");
  REQUIRE(moved.exit_code == 0);
  CHECK(row_rest(moved.out, "displaceable") == "true");
  CHECK(!row_rest(moved.out, "element").empty());
  CHECK(as_number(row_rest(moved.out, "separation")) > 0.0);

  RunResult ball =
      run_cli("displace --space " + space + " --center 0.6,0.2 --radius 0.05");
  REQUIRE(ball.exit_code == 0);
  CHECK(row_rest(ball.out, "displaceable") == "true");
  CHECK(as_number(row_rest(ball.out, "separation")) > 0.0);
}

TEST_CASE("decompose adds up and emits a well-formed JSON report") {
  std::string space = write_fixture("cp2_dec.json", simplex_json(2));
  std::string fun =
      write_fixture("dec_f.json", R"({"kind":"monomial","exps":[2,0],"coef":1.0})");
  std::string report = scratch_dir() + "/report.json";
  RunResult r = run_cli("decompose --space " + space + " --function " + fun +
                        " --gamma 0.1 --json " + report);
  REQUIRE(r.exit_code == 0);

  double sum = as_number(row_rest(r.out, "sum_of_values"));
  double direct = as_number(row_rest(r.out, "direct_value"));
  CHECK(std::abs(sum - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
  CHECK(as_number(row_rest(r.out, "reconstruction_error")) <= 1e-12);
  int pieces = static_cast<int>(as_number(row_rest(r.out, "pieces")));
  CHECK(pieces >= 2);
  CHECK(count_rows(r.out, "piece") == pieces);

  // The first piece sits in the flattened zone; every other one carries a
  // symmetry certificate.
  for (const auto& line : lines_of(r.out)) {
    auto cells = split_csv(line);
    if (cells[0] != "piece") continue;
    if (cells[1] == "0") {
      CHECK(cells[3] == "flat");
    } else {
      CHECK(cells[3] == "certified");
      CHECK(cells[4] != "-");
      CHECK(as_number(cells[5]) > 0.0);
    }
  }

  nlohmann::json j = nlohmann::json::parse(slurp(report));
  CHECK(j["pieces"].size() == static_cast<std::size_t>(pieces));
  CHECK(j["sum_of_values"].get<double>() == doctest::Approx(sum).epsilon(1e-15));
}

TEST_CASE("decompose --gamma-sweep walks the standard ladder") {
  std::string space = write_fixture("cp2_sw.json", simplex_json(2));
  std::string fun =
      write_fixture("sw_f.json", R"({"kind":"monomial","exps":[1,1],"coef":1.0})");
  RunResult r = run_cli("decompose --space " + space + " --function " + fun +
                        " --gamma-sweep");
  REQUIRE(r.exit_code == 0);
  auto rows = lines_of(r.out);
  REQUIRE(rows.size() == 4);
  double prev_eps = 1e300;
  for (const auto& line : rows) {
    auto cells = split_csv(line);
    REQUIRE(cells.size() == 6);
    CHECK(cells[0] == "sweep");
    double sum = as_number(cells[2]);
    double direct = as_number(cells[3]);
    CHECK(std::abs(sum - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    double eps = as_number(cells[4]);
    CHECK(eps < prev_eps);
    prev_eps = eps;
  }
}

TEST_CASE("revolve emits a parseable tree with the right lateral area") {
  // Cylinder of radius 1 and height 2: lateral area 4*pi.
  std::string cyl =
      write_fixture("cyl_profile.json", R"({"kind":"const","value":1.0})");
  std::string tree_file = scratch_dir() + "/cylinder.json";
  RunResult r = run_cli("revolve --profile " + cyl + " --length 2 --out " + tree_file);
  REQUIRE(r.exit_code == 0);
  double reported = as_number(row_rest(r.out, "mass"));
  CHECK(reported == doctest::Approx(4 * 3.14159265358979323846).epsilon(1e-12));

  toricqs::BaseSpace sp = toricqs::parse_space(slurp(tree_file));
  REQUIRE(sp.is_tree());
  toricqs::QuasiStateModel m = toricqs::standard_model(sp);
  CHECK(m.dh.total_mass() ==
        doctest::Approx(4 * 3.14159265358979323846).epsilon(1e-12));

  // Cone r(h) = h over [0, 1]: lateral area sqrt(2)*pi, exact for the
  // midpoint rule on a linear integrand.
  std::string cone =
      write_fixture("cone_profile.json", R"({"kind":"monomial","exps":[1],"coef":1.0})");
  RunResult rc = run_cli("revolve --profile " + cone + " --length 1");
  REQUIRE(rc.exit_code == 0);
  toricqs::BaseSpace cone_sp = toricqs::parse_space(rc.out);
  REQUIRE(cone_sp.is_tree());
  CHECK(toricqs::standard_model(cone_sp).dh.total_mass() ==
        doctest::Approx(std::sqrt(2.0) * 3.14159265358979323846).epsilon(1e-9));
}

TEST_CASE("invalid inputs exit with code 1 and a located message") {
  std::string bad = write_fixture("bad.json", R"({"kind": "simplex", "n": )");
  std::string fun =
      write_fixture("ok_fun.json", R"({"kind":"monomial","exps":[2],"coef":1.0})");
  RunResult r = run_cli("eval --space " + bad + " --function " + fun);
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("validation error") != std::string::npos);
  CHECK(r.err.find("line") != std::string::npos);
  CHECK(r.err.find("column") != std::string::npos);

  // Violated preconditions name the offending predicate.
  std::string prof =
      write_fixture("prof_bad.json", R"({"kind":"monomial","exps":[2],"coef":1.0})");
  RunResult small = run_cli("mu-delta --n 1 --deltas 0.4 --profile " + prof);
  CHECK(small.exit_code == 1);
  CHECK(small.err.find("delta") != std::string::npos);

  // Usage errors (unknown flags, missing subcommand) also exit 1.
  RunResult usage = run_cli("eval --nonsense");
  CHECK(usage.exit_code == 1);
  RunResult none = run_cli("");
  CHECK(none.exit_code == 1);

  // Tree input where a simplex is required.
  std::string star = write_fixture("star2.json", kStarTree);
  RunResult wrong = run_cli("displace --space " + star + " --point 0.5");
  CHECK(wrong.exit_code == 1);
  CHECK(wrong.err.find("simplex") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  RunResult top = run_cli("--help");
  CHECK(top.exit_code == 0);
  CHECK(top.out.find("eval") != std::string::npos);
  RunResult sub = run_cli("eval --help");
  CHECK(sub.exit_code == 0);
  CHECK(sub.out.find("--engine") != std::string::npos);
}
