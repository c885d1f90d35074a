// Copyright 2026 The qmimo Authors
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

#include <qmimo/io.hpp>
#include <qmimo/runner.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

struct Fixture {
  fs::path dir;

  Fixture() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir = fs::temp_directory_path() / "qmimo_cli_tests" / info->name();
    fs::remove_all(dir);
    fs::create_directories(dir);
  }

  fs::path write(const std::string& name, const std::string& text) const {
    const auto path = dir / name;
    std::ofstream(path) << text;
    return path;
  }

  /// Runs the CLI with stdout/stderr captured into log.txt; returns the exit code.
  int run(const std::string& args) const {
    const std::string cmd = std::string("\"") + QMIMO_CLI_PATH + "\" " + args + " > \"" + (dir / "log.txt").string() +
                            "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string log() const {
    std::ifstream is(dir / "log.txt");
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  }
};

TEST(Cli, ValidatePassesWithSeed) {
  Fixture f;
  EXPECT_EQ(f.run("validate --seed 1 --out \"" + (f.dir / "out").string() + "\""), 0) << f.log();
  EXPECT_NE(f.log().find("PASS crossing-row-sums"), std::string::npos);
  EXPECT_EQ(f.log().find("FAIL"), std::string::npos);
  EXPECT_TRUE(fs::exists(f.dir / "out" / "validate.json"));
}

TEST(Cli, MissingSeedIsAConfigError) {
  Fixture f;
  EXPECT_EQ(f.run("validate --out \"" + f.dir.string() + "\""), 2);
  EXPECT_NE(f.log().find("seed"), std::string::npos);
}

TEST(Cli, UnknownKeyIsAConfigError) {
  Fixture f;
  const auto cfg = f.write("bad.cfg", "experiment = scan2x2\ngird = 10\n");
  EXPECT_EQ(f.run("scan2x2 --config \"" + cfg.string() + "\""), 2);
  EXPECT_NE(f.log().find("gird"), std::string::npos);
}

TEST(Cli, MismatchedExperimentIsAConfigError) {
  Fixture f;
  const auto cfg = f.write("tradeoff.cfg", "experiment = tradeoff\n");
  EXPECT_EQ(f.run("scan4x4 --config \"" + cfg.string() + "\""), 2);
}

TEST(Cli, BadArgumentsAreUsageErrors) {
  Fixture f;
  EXPECT_EQ(f.run(""), 2);
  EXPECT_EQ(f.run("frobnicate"), 2);
  EXPECT_EQ(f.run("validate --config \"" + (f.dir / "missing.cfg").string() + "\""), 2);
}

TEST(Cli, InjectedFaultFailsValidation) {
  Fixture f;
  const auto cfg = f.write("corrupt.cfg", "experiment = validate\ncorrupt_eta_sign = true\nsamples = 20000\n");
  EXPECT_EQ(f.run("validate --seed 5 --config \"" + cfg.string() + "\" --out \"" + f.dir.string() + "\""), 1);
  EXPECT_NE(f.log().find("FAIL crossing-row-sums"), std::string::npos);
}

TEST(Cli, QrDumpWritesAParsableMatrixFile) {
  Fixture f;
  const auto cfg = f.write("dump.cfg", "experiment = qr-dump\neta = 0\nlambda1 = 0\nlambda2 = 0\np_step = 0.1\n");
  ASSERT_EQ(f.run("qr-dump --config \"" + cfg.string() + "\" --out \"" + f.dir.string() + "\""), 0) << f.log();
  std::ifstream is(f.dir / "qr_dump.txt");
  const auto ms = qmimo::io::read_matrices(is);
  ASSERT_EQ(ms.size(), 5u);
  EXPECT_LT(qmimo::test::max_abs_diff(ms[1].value, qmimo::golden::symmetric_r()), 1e-12);
  EXPECT_LT(qmimo::test::max_abs_diff(ms[2].value, qmimo::golden::symmetric_q()), 1e-12);
  EXPECT_TRUE(fs::exists(f.dir / "qr-dump_summary.json"));
}

}  // namespace
