#include "deltagraph/cli.hpp"

#include "deltagraph/intfactor.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace deltagraph;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  std::vector<const char*> argv{"deltagraph"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("deltagraph_cli_" + tag + "_" + std::to_string(::getpid()) + ".txt");
    std::filesystem::remove(path);
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("decompose single row text") {
  const CliResult r = run({"decompose", "--q", "2", "--n", "7"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "7 | 10 | 9(O_7*T_2)+(O_1*T_2)\n");
  CHECK(r.err.empty());
}

TEST_CASE("decompose single row json") {
  const CliResult r = run({"decompose", "--q", "3", "--n", "13", "--format", "json"});
  CHECK(r.code == kExitOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.is_object());
  CHECK(j["total_components"] == "20469");
  CHECK(j["h"] == "1");
}

TEST_CASE("decompose range json is an array in ascending order") {
  const CliResult r = run({"decompose", "--q", "2", "--n-range", "2..5", "--format", "json"});
  CHECK(r.code == kExitOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) CHECK(j[i]["n"] == std::to_string(i + 2));
}

TEST_CASE("decompose csv") {
  const CliResult r = run({"decompose", "--q", "3", "--n", "12", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(r.out ==
        "q,n,h,tree_size,m,count\n"
        "3,12,3,27,24,818\n3,12,3,27,8,3\n3,12,3,27,3,8\n3,12,3,27,1,3\n");
}

TEST_CASE("worker count does not change the output") {
  const CliResult serial = run({"decompose", "--q", "2", "--n-range", "2..14"});
  const CliResult parallel =
      run({"decompose", "--q", "2", "--n-range", "2..14", "--workers", "4"});
  CHECK(serial.code == kExitOk);
  CHECK(parallel.code == kExitOk);
  CHECK(serial.out == parallel.out);

  // rows arrive in ascending n
  std::istringstream lines(parallel.out);
  std::string line;
  std::uint64_t expect = 2;
  while (std::getline(lines, line)) {
    CHECK(line.substr(0, line.find(' ')) == std::to_string(expect));
    ++expect;
  }
  CHECK(expect == 15);
}

TEST_CASE("seed flag leaves results unchanged") {
  const CliResult a = run({"decompose", "--q", "2", "--n", "15"});
  const CliResult b = run({"decompose", "--q", "2", "--n", "15", "--seed", "7"});
  CHECK(a.out == b.out);
}

TEST_CASE("verify single n") {
  const CliResult r = run({"verify", "--q", "2", "--n", "1"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "PASS n=1 (O_1*T_2)\n");
}

TEST_CASE("verify range") {
  const CliResult r = run({"verify", "--q", "2", "--n-range", "2..10"});
  CHECK(r.code == kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::size_t count = 0;
  while (std::getline(lines, line)) {
    CHECK(line.rfind("PASS n=", 0) == 0);
    ++count;
  }
  CHECK(count == 9);
}

TEST_CASE("verify beyond the oracle limit is a usage error") {
  const CliResult r = run({"verify", "--q", "2", "--n", "25"});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find("limit") != std::string::npos);
}

TEST_CASE("verify honors a raised oracle limit") {
  const CliResult r =
      run({"verify", "--q", "2", "--n", "21", "--oracle-limit", "4194304"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("PASS n=21", 0) == 0);
}

TEST_CASE("dot export from verify") {
  TempFile dot("dot");
  const CliResult r =
      run({"verify", "--q", "2", "--n", "3", "--dot-out", dot.path.string()});
  CHECK(r.code == kExitOk);
  std::ifstream in(dot.path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(content.str().find("digraph") != std::string::npos);

  const CliResult bad =
      run({"verify", "--q", "2", "--n-range", "2..3", "--dot-out", dot.path.string()});
  CHECK(bad.code == kExitUsage);
}

TEST_CASE("cache lifecycle through the cli") {
  TempFile cache("cache");
  const CliResult dec =
      run({"decompose", "--q", "3", "--n-range", "2..10", "--cache", cache.path.string()});
  CHECK(dec.code == kExitOk);

  const CliResult show = run({"cache", "show", "--cache", cache.path.string()});
  CHECK(show.code == kExitOk);
  CHECK(show.out.find("80 = 2^4 * 5\n") != std::string::npos);  // 3^4 - 1

  TempFile extra("import");
  {
    std::ofstream out(extra.path);
    out << "# extra entries\n97 = 97\n";
  }
  const CliResult imp =
      run({"cache", "import", "--cache", cache.path.string(), extra.path.string()});
  CHECK(imp.code == kExitOk);
  CHECK(imp.out.find("imported 1") != std::string::npos);
  const CliResult show2 = run({"cache", "show", "--cache", cache.path.string()});
  CHECK(show2.out.find("97 = 97\n") != std::string::npos);

  TempFile bad("bad_import");
  {
    std::ofstream out(bad.path);
    out << "97 = 97\n10 = 3 * 3\n";
  }
  const CliResult rejected =
      run({"cache", "import", "--cache", cache.path.string(), bad.path.string()});
  CHECK(rejected.code == kExitUsage);
  CHECK(rejected.err.find(":2:") != std::string::npos);

  const CliResult cleared = run({"cache", "clear", "--cache", cache.path.string()});
  CHECK(cleared.code == kExitOk);
  const CliResult empty_show = run({"cache", "show", "--cache", cache.path.string()});
  CHECK(empty_show.code == kExitOk);
  CHECK(empty_show.out.empty());
}

TEST_CASE("corrupt cache file is rejected with its line number") {
  TempFile cache("corrupt");
  {
    std::ofstream out(cache.path);
    out << "242 = 2 * 11^2\nnot a cache line\n";
  }
  const CliResult r =
      run({"decompose", "--q", "2", "--n", "7", "--cache", cache.path.string()});
  CHECK(r.code == kExitUsage);
  CHECK(r.err.find(":2:") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(run({"decompose", "--q", "2"}).code == kExitUsage);  // no n
  CHECK(run({"decompose", "--q", "2", "--n", "5", "--n-range", "2..4"}).code == kExitUsage);
  CHECK(run({"decompose", "--q", "2", "--n-range", "5..2"}).code == kExitUsage);
  CHECK(run({"decompose", "--q", "2", "--n-range", "nonsense"}).code == kExitUsage);
  CHECK(run({"decompose", "--n", "5"}).code == kExitUsage);  // no q
  CHECK(run({"decompose", "--q", "4", "--n", "5"}).code == kExitUsage);  // q not prime
  CHECK(run({"nonsense"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"decompose", "--q", "2", "--n", "0"}).code == kExitUsage);
  CHECK(run({"cache", "show"}).code == kExitUsage);  // --cache required
}

TEST_CASE("help exits cleanly") {
  const CliResult r = run({"--help"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("decompose") != std::string::npos);
}

TEST_CASE("budget exhaustion exits with its own status") {
  const CliResult r =
      run({"decompose", "--q", "2", "--n", "149", "--rho-budget", "16"});
  CHECK(r.code == kExitBudgetExceeded);
  CHECK(r.out.find("149 | incomplete |") != std::string::npos);
  CHECK(r.err.find("composite") != std::string::npos);

  const CliResult json = run(
      {"decompose", "--q", "2", "--n", "149", "--rho-budget", "16", "--format", "json"});
  CHECK(json.code == kExitBudgetExceeded);
  const nlohmann::json j = nlohmann::json::parse(json.out);
  CHECK(j["status"] == "incomplete");
}

TEST_CASE("range rows keep going past an incomplete row") {
  const CliResult r = run(
      {"decompose", "--q", "2", "--n-range", "148..150", "--rho-budget", "16"});
  CHECK(r.code == kExitBudgetExceeded);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].rfind("148 |", 0) == 0);
  CHECK(rows[1].rfind("149 | incomplete |", 0) == 0);
  CHECK(rows[2].rfind("150 |", 0) == 0);
}
