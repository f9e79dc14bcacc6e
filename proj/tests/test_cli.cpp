#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FACTPAT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(Cli, Factor) {
  const auto r = run("factor --field 7 --poly 6,4,6,1 --seed 1");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("factorization: (1,1)^1 * (2,1)^1 * (3,1)^1"), std::string::npos);
  EXPECT_NE(r.out.find("pattern: 1^3"), std::string::npos);
  EXPECT_EQ(run("factor --field 3^2 --poly 1,0,1 --seed 1").code, 0);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run("census --field 5 --family filter:r=4").code, 0);
  EXPECT_EQ(run("census --field 3 --family 'trinomial:r=5;s=3'").code, 3);
  // a constraint declared as m = 0 shifts every count by a factor of q
  EXPECT_EQ(run("census --field 13 --family 'filter:r=2;m=0;a0=1'").code, 2);
  EXPECT_EQ(run("census --field 5").code, 1);
  EXPECT_EQ(run("census --field 6 --family filter:r=4").code, 1);
  EXPECT_EQ(run("factor --field 2 --poly 1,1,1").code, 1);
  EXPECT_EQ(run("bogus").code, 1);
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, Sieve) {
  const auto r = run("sieve --field 2 --max-degree 3");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "degree 1: 2\ndegree 2: 1\ndegree 3: 2\n");
}

TEST(Cli, VerifyIdentities) {
  const auto r = run("verify-identities --field 65537 --r 5 --trials 100 --seed 2");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.find("FAIL"), std::string::npos);
  EXPECT_NE(r.out.find("PASS jacobian minor identity"), std::string::npos);
}

TEST(Cli, CsvAndOutFile) {
  const std::string path = ::testing::TempDir() + "factpat_cli_census.csv";
  EXPECT_EQ(run("census --field 5 --family filter:r=3 --format csv --out " + path).code, 0);
  FILE* f = fopen(path.c_str(), "r");
  ASSERT_NE(f, nullptr);
  int lines = 0;
  for (int c; (c = fgetc(f)) != EOF;) lines += c == '\n';
  fclose(f);
  EXPECT_EQ(lines, 4);  // header + 3 patterns
  std::remove(path.c_str());
}

TEST(Cli, Deterministic) {
  for (const std::string args :
       {"census --field 7 --family 'trinomial:r=6;s=3' --seed 5", "census --field 101 --family toephess:r=4 --sample 3000 --seed 5",
        "cost --field 101 --family filter:r=6 --n 500 --seed 5"}) {
    const auto a = run(args + " --workers 1");
    const auto b = run(args + " --workers 4");
    const auto c = run(args + " --workers 1");
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_EQ(a.out, c.out) << args;
    EXPECT_FALSE(a.out.empty());
  }
}
