// Copyright 2026 The factdil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "factdil/cli.hpp"

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "test_util.hpp"

namespace factdil {
namespace {

namespace fs = std::filesystem;

struct Invocation {
  int code = -1;
  std::string out;
};

Invocation run(const std::string& args) {
  const std::string cmd = std::string(FACTDIL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  Invocation r;
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("factdil_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const json& j) const {
    std::ofstream(path(name)) << j.dump();
    return path(name);
  }

  static json without_timing(json j) {
    j.erase("elapsed_ms");
    return j;
  }

  fs::path dir_;
};

TEST_F(CliTest, GeneratedPresentationVerifies) {
  const Invocation gen = run("--seed 7 generate random_presentation --n 2 --k 2 --blocks 2 --out " + path("p.json"));
  ASSERT_EQ(gen.code, 0);
  const Invocation ver = run("verify " + path("p.json") + " --suite presentation");
  EXPECT_EQ(ver.code, 0);
  const json rep = json::parse(ver.out);
  EXPECT_EQ(rep["command"], "verify");
  ASSERT_FALSE(rep["checks"].empty());
  for (const auto& c : rep["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>()) << c["name"];
    EXPECT_LE(c["measured"].get<double>(), c["tolerance"].get<double>());
  }
  EXPECT_TRUE(rep.contains("elapsed_ms"));
}

TEST_F(CliTest, GenerateIsByteIdentical) {
  const Invocation a = run("--seed 11 generate random_presentation --n 3 --blocks 2,1");
  const Invocation b = run("--seed 11 generate random_presentation --n 3 --blocks 2,1");
  const Invocation c = run("--seed 12 generate random_presentation --n 3 --blocks 2,1");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST_F(CliTest, ReportsAreDeterministicApartFromTiming) {
  ASSERT_EQ(run("--seed 5 generate random_presentation --n 2 --blocks 1,1 --out " + path("p.json")).code, 0);
  const Invocation a = run("--seed 9 verify " + path("p.json") + " --suite presentation");
  const Invocation b = run("--seed 9 verify " + path("p.json") + " --suite presentation");
  EXPECT_EQ(without_timing(json::parse(a.out)), without_timing(json::parse(b.out)));
}

TEST_F(CliTest, ChecksSortedByName) {
  ASSERT_EQ(run("generate random_presentation --n 2 --out " + path("p.json")).code, 0);
  const json rep = json::parse(run("verify " + path("p.json") + " --suite presentation").out);
  std::vector<std::string> names;
  for (const auto& c : rep["checks"]) names.push_back(c["name"]);
  EXPECT_TRUE(std::is_sorted(names.begin(), names.end()));
}

TEST_F(CliTest, PowerOfConjugation) {
  Rng rng(1);
  const Matrix u = haar_unitary(rng, 2);
  const auto p = FactorizablePresentation::create(2, BlockAlgebra::full(2), kron(u, Matrix::identity(2)));
  const std::string file = write("u.json", to_json(p));
  EXPECT_EQ(run("verify " + file + " --suite power:2").code, 0);
  const Invocation q = run("power " + file + " --m 2");
  ASSERT_EQ(q.code, 0);
  const Channel sq = channel_from_json(json::parse(q.out)["result"]);
  EXPECT_LT(choi_distance(sq, Channel::conjugation(u * u)), 1e-12);
}

TEST_F(CliTest, MembershipNonMemberIsAVerdict) {
  const UnitaryFamily fam(SubalgebraSpec::full(2), {Matrix::identity(2), test::pauli_x()});
  json j = to_json(fam);
  j["target"] = to_json(Channel::conjugation(test::hadamard()));
  const std::string file = write("m.json", j);
  const Invocation v = run("verify " + file + " --suite membership");
  EXPECT_EQ(v.code, 0);
  EXPECT_EQ(json::parse(v.out)["result"]["verdict"], "non_member_at_tolerance");
  const Invocation q = run("membership " + file);
  EXPECT_EQ(q.code, 0);
  EXPECT_EQ(json::parse(q.out)["result"]["verdict"], "non_member_at_tolerance");
}

TEST_F(CliTest, GeneratedFamilyTargetIsMember) {
  ASSERT_EQ(run("--seed 4 generate random_unitary_family --n 3 --k 4 --blocks 2,1 --out " + path("f.json")).code, 0);
  const Invocation v = run("verify " + path("f.json") + " --suite membership");
  EXPECT_EQ(v.code, 0);
  const json rep = json::parse(v.out);
  EXPECT_EQ(rep["result"]["verdict"], "member");
  for (const auto& c : rep["checks"]) EXPECT_TRUE(c["pass"].get<bool>()) << c["name"];
}

TEST_F(CliTest, RandomSchurSymbol) {
  const Invocation gen = run("--seed 2 generate random_schur --n 3 --blocks 1,1");
  ASSERT_EQ(gen.code, 0);
  const json j = json::parse(gen.out);
  const auto s = schur_symbol_from_json(j);
  EXPECT_GE(min_eigenvalue(s.b), -1e-10);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(std::abs(s.b(i, i) - 1.0), 0.0, 1e-12);
  const std::string file = write("s.json", j);
  EXPECT_EQ(run("verify " + file + " --suite schur").code, 0);
  EXPECT_EQ(run("schur " + file).code, 0);
}

TEST_F(CliTest, SymbolAndMonitor) {
  ASSERT_EQ(run("--seed 3 generate random_presentation --n 2 --out " + path("p.json")).code, 0);
  EXPECT_EQ(run("verify " + path("p.json") + " --suite symbol").code, 0);
  const Invocation s = run("symbol " + path("p.json"));
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(json::parse(s.out)["result"]["dim"], 2);

  std::ifstream in(path("p.json"));
  const json p = json::parse(in);
  const std::string seq = write("seq.json", json{{"sequence", {p, p, p}}});
  const Invocation m = run("monitor " + seq);
  ASSERT_EQ(m.code, 0);
  EXPECT_TRUE(json::parse(m.out)["result"]["cauchy"].get<bool>());
}

TEST_F(CliTest, InvariantFailureExitsOne) {
  Rng rng(8);
  const auto p = FactorizablePresentation::unchecked(2, BlockAlgebra::diagonal(2), haar_unitary(rng, 4));
  const std::string file = write("bad.json", to_json(p));
  const Invocation v = run("verify " + file + " --suite presentation");
  EXPECT_EQ(v.code, 1);
  bool returns_failed = false;
  const json rep = json::parse(v.out);
  for (const auto& c : rep["checks"])
    if (c["name"] == "returns_to_ancilla") returns_failed = !c["pass"].get<bool>();
  EXPECT_TRUE(returns_failed);
  EXPECT_EQ(run("symbol " + file).code, 1);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  EXPECT_EQ(run("generate random_presentation --n 17").code, 2);
  EXPECT_EQ(run("generate random_presentation --n 2 --k 17").code, 2);
  EXPECT_EQ(run("generate random_presentation --n 2 --blocks 2,,1").code, 2);
  EXPECT_EQ(run("generate random_presentation --n 2 --k 3 --blocks 1,1").code, 2);
  EXPECT_EQ(run("generate no_such_kind").code, 2);
  EXPECT_EQ(run("verify " + path("missing.json") + " --suite presentation").code, 2);
  std::ofstream(path("garbage.json")) << "{not json";
  EXPECT_EQ(run("verify " + path("garbage.json") + " --suite presentation").code, 2);
  const std::string unrelated = write("x.json", json{{"hello", 1}});
  EXPECT_EQ(run("verify " + unrelated + " --suite presentation").code, 2);
  EXPECT_EQ(run("verify " + unrelated + " --suite no_such_suite").code, 2);
  EXPECT_EQ(run("--tol -1 generate random_presentation").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST_F(CliTest, PowerCapExitsTwo) {
  const auto p = FactorizablePresentation::create(4, BlockAlgebra::full(4), Matrix::identity(16));
  const std::string file = write("big.json", to_json(p));
  EXPECT_EQ(run("verify " + file + " --suite power:6").code, 2);
  EXPECT_EQ(run("verify " + file + " --suite power:x").code, 2);
}

TEST(CliInProcess, ReportCheckSemantics) {
  cli::Options opt;
  opt.seed = 42;
  cli::Report rep("verify", opt);
  rep.check("b", 1e-9, 1e-8);
  rep.check("a", 2e-8, 1e-8);
  const auto out = rep.finish();
  EXPECT_EQ(out.exit_code, cli::kExitInvariant);
  EXPECT_EQ(out.document["checks"][0]["name"], "a");
  EXPECT_FALSE(out.document["checks"][0]["pass"].get<bool>());
  EXPECT_EQ(out.document["seed"], 42);
}

TEST(CliInProcess, GenerateRespectsBlocks) {
  cli::Options opt;
  opt.seed = 1;
  const json j = cli::cmd_generate("random_presentation", 2, 3, "2,1", opt);
  const auto p = presentation_from_json(j);
  EXPECT_EQ(p.ancilla().block_dims(), (std::vector<std::size_t>{2, 1}));
  EXPECT_TRUE(p.validate());
}

}  // namespace
}  // namespace factdil
