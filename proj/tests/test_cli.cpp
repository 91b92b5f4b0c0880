#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "srip/cli.hpp"
#include "srip/dict_io.hpp"
#include "srip/report.hpp"

using namespace srip;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "srip_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  const auto b = read_file_bytes(p);
  return {b.begin(), b.end()};
}

}  // namespace

TEST_CASE("build then coherence") {
  const auto file = (scratch() / "d11.srip").string();
  const auto b = run({"build", "--kind", "heisenberg", "--p", "11", "--out", file});
  REQUIRE(b.code == 0);
  const auto built = json::parse(b.out);
  CHECK(built["result"]["atoms"] == 132);
  const auto before = read_file_bytes(file);

  const auto c = run({"coherence", "--in", file});
  REQUIRE(c.code == 0);
  const auto r = json::parse(c.out);
  CHECK(r["schema"] == 1);
  CHECK(r["version"] == "0.1.0");
  CHECK(r["result"]["pass"] == true);
  CHECK(r["result"]["max_sqrt_p_coherence"].get<double>() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(read_file_bytes(file) == before);  // inputs are never rewritten
}

TEST_CASE("paths-verify") {
  const auto csv = scratch() / "classes.csv";
  const auto r = run({"paths-verify", "--k", "8", "--classes-csv", csv.string()});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["result"]["pass"] == true);
  const auto& rows = j["result"]["lengths"];
  CHECK(rows.back()["k"] == 8);
  CHECK(rows.back()["trees"] == 14);
  CHECK(rows.back()["catalan"] == 14);
  CHECK(slurp(csv).rfind("canonical,k,vertex_count,is_tree,dyck\n", 0) == 0);
  CHECK(run({"paths-verify", "--k", "11"}).code == 2);
}

TEST_CASE("invalid prime fails validation without output") {
  const auto file = scratch() / "bad.srip";
  fs::remove(file);
  const auto r = run({"build", "--kind", "heisenberg", "--p", "4", "--out", file.string()});
  CHECK(r.code == 2);
  CHECK_FALSE(fs::exists(file));
  CHECK(r.err.find("InvalidArgument") != std::string::npos);
}

TEST_CASE("validation errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"srip", "--p", "11", "--epsilon", "1.5"}).code == 2);
  CHECK(run({"srip", "--p", "11", "--trials", "0"}).code == 2);
  CHECK(run({"srip", "--p", "11", "--n", "1000"}).code == 2);
  CHECK(run({"moments", "--kind", "gabor", "--p", "11"}).code == 2);
  CHECK(run({"coherence", "--in", (scratch() / "missing.srip").string()}).code == 2);
  CHECK(run({"build", "--kind", "extended_oscillator", "--p", "7", "--out", "x"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("coherence violation is a contract failure") {
  const auto d = build_heisenberg_dict(5);
  std::vector<OrthonormalBasis> bases = d.bases();
  const Dictionary tight(5, DictionaryKind::heisenberg, 0.5, std::move(bases));
  const auto file = scratch() / "tight.srip";
  save_dictionary(file, tight);
  const auto r = run({"coherence", "--in", file.string()});
  CHECK(r.code == 3);
  CHECK(json::parse(r.out)["result"]["pass"] == false);
}

TEST_CASE("reports are deterministic apart from duration") {
  const auto dir = scratch();
  const std::vector<std::string> base{"spectrum", "--p", "11", "--trials", "30", "--seed", "5"};
  auto a = base, b = base;
  for (auto* v : {&a, &b}) {
    const std::string tag = v == &a ? "a" : "b";
    v->insert(v->end(), {"--json", (dir / ("s" + tag + ".json")).string(), "--eigen-csv",
                         (dir / ("e" + tag + ".csv")).string(), "--moments-csv", (dir / ("m" + tag + ".csv")).string(),
                         "--srip-csv", (dir / ("r" + tag + ".csv")).string()});
  }
  REQUIRE(run(a).code == 0);
  REQUIRE(run({"--threads", "1"}).code == 2);  // no subcommand
  setenv("SRIP_THREADS", "1", 1);
  REQUIRE(run(b).code == 0);
  unsetenv("SRIP_THREADS");
  const auto ja = json::parse(slurp(dir / "sa.json")), jb = json::parse(slurp(dir / "sb.json"));
  CHECK(ja.contains("duration_seconds"));
  CHECK(ja["seed"] == 5);
  CHECK(ja["config"]["trials"] == 30);
  CHECK(deterministic_payload(ja) == deterministic_payload(jb));
  CHECK(slurp(dir / "ea.csv") == slurp(dir / "eb.csv"));
  CHECK(slurp(dir / "ma.csv") == slurp(dir / "mb.csv"));
  CHECK(slurp(dir / "ra.csv") == slurp(dir / "rb.csv"));
  CHECK(slurp(dir / "ea.csv").rfind("lambda\n", 0) == 0);
  CHECK(slurp(dir / "ma.csv").rfind("k,mean,variance,semicircle_moment\n", 0) == 0);
  CHECK(slurp(dir / "ra.csv").rfind("threshold_kind,threshold,frequency\n", 0) == 0);
}

TEST_CASE("bad SRIP_THREADS is a validation error") {
  setenv("SRIP_THREADS", "many", 1);
  CHECK(run({"moments", "--p", "11", "--trials", "3"}).code == 2);
  unsetenv("SRIP_THREADS");
  CHECK(run({"moments", "--p", "11", "--trials", "3", "--threads", "2"}).code == 0);
}

TEST_CASE("srip and moments subcommands") {
  const auto r = run({"srip", "--p", "11", "--trials", "20", "--threshold", "0.9"});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["result"]["rows"].size() == 3);
  CHECK(j["config"]["epsilon"] == 0.3);
  const auto m = run({"moments", "--kind", "oscillator", "--p", "7", "--trials", "10", "--kmax", "4"});
  REQUIRE(m.code == 0);
  CHECK(json::parse(m.out)["result"]["rows"].size() == 4);
}
