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

#include <qmimo/config.hpp>
#include <qmimo/io.hpp>

#include "test_util.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

namespace qmimo {
namespace {

TEST(MatrixIo, RoundTripIsExact) {
  std::mt19937_64 gen(71);
  const std::vector<io::NamedMatrix> in{{"Q", "clone1,clone2,reference", test::random_complex(8, 8, gen)},
                                        {"J", "", test::random_complex(3, 5, gen)},
                                        {"empty", "x", Matrix::Zero(0, 0)}};
  std::stringstream ss;
  ss << "# leading comment\n\n";
  io::write_matrices(ss, in);
  const auto out = io::read_matrices(ss);
  ASSERT_EQ(out.size(), in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    EXPECT_EQ(out[i].name, in[i].name);
    EXPECT_EQ(out[i].layout, in[i].layout);
    ASSERT_EQ(out[i].value.rows(), in[i].value.rows());
    ASSERT_EQ(out[i].value.cols(), in[i].value.cols());
    EXPECT_TRUE(out[i].value == in[i].value) << in[i].name;
  }
}

TEST(MatrixIo, RejectsMalformedFiles) {
  const char* bad[] = {
      "matrix A\nlayout -\ndims 1 1\n1 0\n",             // missing end
      "matrix A\nlayout -\ndims 1 1\n1\nend\n",           // short row
      "matrix A\nlayout -\ndims 1 1\n1 x\nend\n",         // bad number
      "matrix A\ndims 1 1\n1 0\nend\n",                   // missing layout
      "matrix A\nlayout -\ndims -1 1\nend\n",             // bad dims
      "matrix A\nlayout -\ndims 2 1\n1 0\n",              // truncated
      "nonsense\n",                                       // unknown record
  };
  for (const char* text : bad) {
    std::istringstream is(text);
    EXPECT_THROW(io::read_matrices(is), io::FormatError) << text;
  }
  std::ostringstream os;
  EXPECT_THROW(io::write_matrix(os, {"two words", "", Matrix::Zero(1, 1)}), io::FormatError);
}

TEST(MatrixIo, FormatNumber) {
  EXPECT_EQ(io::format_number(0.5), "0.5");
  EXPECT_EQ(io::format_number(std::nan("")), "nan");
  EXPECT_EQ(io::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(io::format_number(1.0 / 3.0, 4), "0.3333");
}

TEST(Csv, WriteAndRead) {
  std::stringstream ss;
  io::CsvWriter w(ss, {"a", "b"});
  w.row({"1", "2.5"});
  w.row({"x", ""});
  EXPECT_THROW(w.row({"1"}), io::FormatError);
  EXPECT_THROW(w.row({"1,2", "3"}), io::FormatError);
  const auto rows = io::read_csv(ss);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "2.5"}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"x", ""}));
}

std::string field_of(const std::string& text, bool validate) {
  try {
    auto cfg = parse_config(text);
    if (validate) cfg.validate();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

TEST(Config, ParsesKeysListsAndComments) {
  const auto cfg = parse_config(
      "# sweep\n"
      "experiment = tradeoff\n"
      "lambdas = 0.1, 0.25 ,0.4   # three values\n"
      "asymmetry = symmetric, optimize, 0.7\n"
      "a = 0.6\n"
      "csi = 1,3\n"
      "seed = 18446744073709551615\n"
      "corrupt_eta_sign = yes\n");
  EXPECT_EQ(cfg.experiment, "tradeoff");
  EXPECT_EQ(cfg.lambdas, (std::vector<double>{0.1, 0.25, 0.4}));
  ASSERT_EQ(cfg.asymmetry.size(), 3u);
  EXPECT_EQ(cfg.asymmetry[1].mode, AsymmetrySetting::Mode::optimize);
  EXPECT_EQ(cfg.asymmetry[2].mode, AsymmetrySetting::Mode::fixed);
  EXPECT_EQ(cfg.asymmetry[2].a, 0.7);
  EXPECT_EQ(cfg.a.str(), "0.59999999999999998");
  EXPECT_EQ(cfg.csi, (std::vector<int>{1, 3}));
  ASSERT_TRUE(cfg.seed.has_value());
  EXPECT_EQ(*cfg.seed, 18446744073709551615ULL);
  EXPECT_TRUE(cfg.corrupt_eta_sign);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(field_of("experiment = scan2x2\nbogus = 1\n", false), "bogus");
  EXPECT_EQ(field_of("eta = 0.1\neta = 0.2\n", false), "eta");
  EXPECT_EQ(field_of("eta = zero\n", false), "eta");
  EXPECT_EQ(field_of("grid = 3.5\n", false), "grid");
  EXPECT_EQ(field_of("seed = -4\n", false), "seed");
  EXPECT_EQ(field_of("csi = 1,,2\n", false), "csi");
  EXPECT_EQ(field_of("corrupt_eta_sign = maybe\n", false), "corrupt_eta_sign");
  EXPECT_EQ(field_of("lambda1\n", false), "line 1");
  EXPECT_EQ(field_of("samples = 1\n", false), "samples");
}

TEST(Config, RangeValidation) {
  const std::string base = "experiment = scan2x2\n";
  EXPECT_EQ(field_of(base, true), "");
  EXPECT_EQ(field_of("experiment = nope\n", true), "experiment");
  EXPECT_EQ(field_of(base + "eta = 0.6\n", true), "eta");
  EXPECT_EQ(field_of(base + "lambda2 = -0.1\n", true), "lambda2");
  EXPECT_EQ(field_of(base + "csi = 5\n", true), "csi");
  EXPECT_EQ(field_of(base + "clones = 3\n", true), "clones");
  EXPECT_EQ(field_of(base + "lambdas = 0.2, 1.2\n", true), "lambdas");
  EXPECT_EQ(field_of(base + "asymmetry = 1.5\n", true), "asymmetry");
  EXPECT_EQ(field_of(base + "a = optimize\n", true), "a");
  EXPECT_EQ(field_of(base + "threads = 0\n", true), "threads");
  EXPECT_EQ(field_of(base + "p_step = 0\n", true), "p_step");
  EXPECT_EQ(field_of(base + "p_step = 0.4\n", true), "");
  EXPECT_EQ(field_of(base + "search_p_step = 0.5\n", true), "search_p_step");
  EXPECT_EQ(field_of(base + "tolerance = 0.5\n", true), "tolerance");
  EXPECT_EQ(field_of(base + "grid = 0\n", true), "grid");
}

TEST(Config, SeedRequiredForMonteCarlo) {
  EXPECT_EQ(field_of("experiment = validate\n", true), "seed");
  EXPECT_EQ(field_of("experiment = validate\nseed = 3\n", true), "");
  EXPECT_EQ(field_of("experiment = scan4x4\n", true), "");
}

}  // namespace
}  // namespace qmimo
