#include <doctest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int exit_code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(MINAP_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string write_file(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "minap_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p.string();
}

json run_json(const std::string& args, int expected_exit, const std::string& env = "") {
  const Run r = run(args + " --json", env);
  CHECK(r.exit_code == expected_exit);
  return json::parse(r.out);
}

void check_schema(const json& j, const std::string& command) {
  CHECK(j.at("command") == command);
  for (const char* key : {"version", "inputs", "verdict", "certificate", "window"}) CHECK(j.contains(key));
}

}  // namespace

TEST_CASE("minap subcommand") {
  const std::string g = write_file("g4.txt", "block 0.. : e=4, H=[]\n");
  const json j = run_json("minap --group " + g, 0);
  check_schema(j, "minap");
  CHECK(j["verdict"]["admissible"] == true);

  const std::string f = write_file("g24.txt", "block 0..2 : e=4\nblock 3.. : e=2\n");
  const json k = run_json("minap --group " + f, 0);
  CHECK(k["verdict"]["admissible"] == false);
  CHECK(k["verdict"]["witness"]["m"] == "2");
}

TEST_CASE("circle subcommand") {
  const json j = run_json("circle --rule 'geom(2)' --x 1/3", 0);
  check_schema(j, "circle");
  CHECK(j["verdict"]["membership"] == "NOT_IN");
  CHECK(j["verdict"]["period"] == 2);
  const json k = run_json("circle --rule 'geom(2)' --x 5/8", 0);
  CHECK(k["verdict"]["membership"] == "IN");
}

TEST_CASE("tseq-check exit codes") {
  const std::string g = write_file("z4z2.txt", "block 0.. : e=4, H=[2]\n");
  const json ex = run_json("tseq-check --group " + g + " --element 'h[0,1]' --k 0 --mmax 64 --prefix 256", 0);
  check_schema(ex, "tseq-check");
  CHECK(ex["verdict"]["kind"] == "EXCLUDED");
  const json mem = run_json("tseq-check --group " + g + " --element 'e[1]' --k 1 --mmax 8 --prefix 128", 2);
  CHECK(mem["verdict"]["kind"] == "MEMBER_UP_TO");
  const json inc =
      run_json("tseq-check --group " + g + " --element 'e[1]' --k 1 --mmax 40 --prefix 200", 3, "MINAP_BUDGET=1");
  CHECK(inc["verdict"]["kind"] == "INCONCLUSIVE");

  const json zero = run_json("tseq-check --group " + g + " --element 0 --k 0 --mmax 4 --prefix 16", 1);
  CHECK(zero["error"]["code"] == "ZERO_ELEMENT");
  CHECK(run("tseq-check --group " + g + " --element 0").exit_code == 1);
}

TEST_CASE("construct, radical and decompose") {
  const std::string g = write_file("z4z2.txt", "block 0.. : e=4, H=[2]\n");
  const json c = run_json("construct --group " + g + " --index 5", 0);
  check_schema(c, "construct");
  CHECK(c["verdict"]["terms"][5]["term"] == "h[1,1] + e[2] + e[3]");

  const json r = run_json("radical --group " + g + " --support 3 --window 200", 0);
  check_schema(r, "radical");
  CHECK(r["verdict"]["tag"] == "EQUALS_H");

  const std::string h = write_file("h.txt", "H\n");
  const json d = run_json("decompose --group " + g + " --subgroup " + h + " --window 8", 0);
  check_schema(d, "decompose");
  CHECK(d["verdict"]["case"] == "bounded");
  CHECK(d["verdict"]["decomposition"]["verified"] == true);
}

TEST_CASE("errors") {
  const std::string bad = write_file("bad.txt", "block 0 : e=Z\nblock 2 : e=4\n");
  const json j = run_json("minap --group " + bad, 1);
  CHECK(j["error"]["code"] == "PARSE_ERROR");
  CHECK(j["error"]["line"] == 2);
  CHECK(j["error"]["column"] == 7);
  CHECK(run("nosuch").exit_code == 1);
  CHECK(run("minap").exit_code == 1);
  CHECK(run("minap --group /nonexistent/file").exit_code == 1);
}

TEST_CASE("json output is byte-identical across runs") {
  const std::string g = write_file("z4z2.txt", "block 0.. : e=4, H=[2]\n");
  const std::string args = "construct --group " + g + " --index 9 --json";
  CHECK(run(args).out == run(args).out);
  const std::string h = write_file("h.txt", "H\n");
  const std::string dargs = "decompose --group " + g + " --subgroup " + h + " --window 6 --json";
  CHECK(run(dargs).out == run(dargs).out);
}
