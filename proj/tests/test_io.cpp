#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "sflab/grid_io.hpp"
#include "sflab/model_io.hpp"
#include "sflab/semiflat.hpp"

using namespace sflab;
namespace fs = std::filesystem;

namespace {

fs::path tmp(const std::string& name) { return fs::temp_directory_path() / ("sflab_io_" + name); }

TorusGrid ramp(int m, int n) {
  TorusGrid g(m, n);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = 0.1 * std::sin(0.37 * i) + 1e-17 * i;
  return g;
}

}  // namespace

TEST(ModelIo, ParsesFixtures) {
  const FiberModel a = load_model(SFLAB_TEST_DIR "/data/i1.model");
  EXPECT_EQ(a.type, KodairaType::I(1));
  EXPECT_EQ(a.pole, PoleFlag::MinusD);
  const FiberModel b = load_model(SFLAB_TEST_DIR "/data/i2star.model");
  EXPECT_EQ(b.type, KodairaType::Istar(2));
  const FiberModel c = load_model(SFLAB_TEST_DIR "/data/i0_linear.model");
  ASSERT_TRUE(c.tau.has_value());
  EXPECT_NEAR(std::abs(c.tau->value(0.4) - Complex(0.1, 1.0)), 0.0, 1e-15);
  EXPECT_FALSE(load_model(SFLAB_TEST_DIR "/data/ii.model").m.has_value());
}

TEST(ModelIo, Defaults) {
  const FiberModel m = parse_model_text("type = III*\n");
  EXPECT_EQ(m.epsilon, 1.0);
  EXPECT_EQ(m.k0(), Complex(1.0, 0.0));
  EXPECT_FALSE(m.m.has_value());
}

TEST(ModelIo, Errors) {
  EXPECT_THROW(parse_model_text(""), InputError);
  EXPECT_THROW(parse_model_text("type = V\n"), InputError);
  EXPECT_THROW(parse_model_text("type = II\ncolour = red\n"), InputError);
  EXPECT_THROW(parse_model_text("type = II\ntype = III\n"), InputError);
  EXPECT_THROW(parse_model_text("type = II\nm = 2\n"), InputError);
  EXPECT_THROW(parse_model_text("type = II\nepsilon = -1\n"), InputError);
  EXPECT_THROW(parse_model_text("type = II\nepsilon = nan\n"), InputError);
  EXPECT_THROW(parse_model_text("type = I_2\nb = 3\n"), InputError);
  EXPECT_THROW(parse_model_text("type = I\n"), InputError);
  EXPECT_THROW(parse_model_text("type = I_1\ntau0_im = 2\n"), InputError);
  EXPECT_THROW(parse_model_text("type = I_0\ntau0_im = -1\n"), InputError);
  EXPECT_THROW(parse_model_text("type = II\npole_flag = maybe\n"), InputError);
  EXPECT_THROW(parse_model_text("type II\n"), InputError);
  EXPECT_THROW(load_model("/nonexistent/model"), InputError);
}

TEST(GridIo, BinaryRoundTripIsExact) {
  for (int m : {1, 2}) {
    const TorusGrid g = ramp(m, 8);
    const fs::path p = tmp("rt.bin");
    write_grid_binary(p, g);
    EXPECT_EQ(fs::file_size(p), 32 + g.size() * 8);
    const TorusGrid h = read_grid(p);
    ASSERT_TRUE(h.same_shape(g));
    EXPECT_EQ(h.values(), g.values());
    fs::remove(p);
  }
}

TEST(GridIo, CsvRoundTripIsExact) {
  const TorusGrid g = ramp(2, 4);
  const fs::path p = tmp("rt.csv");
  write_grid_csv(p, g);
  const TorusGrid h = read_grid(p);
  ASSERT_TRUE(h.same_shape(g));
  EXPECT_EQ(h.values(), g.values());
  fs::remove(p);
}

TEST(GridIo, TruncatedAndCorruptFiles) {
  const TorusGrid g = ramp(1, 8);
  const fs::path p = tmp("bad.bin");
  write_grid_binary(p, g);
  fs::resize_file(p, fs::file_size(p) - 4);
  EXPECT_THROW(read_grid_binary(p), InputError);
  write_grid_binary(p, g);
  {
    std::ofstream o(p, std::ios::app | std::ios::binary);
    o << 'x';
  }
  EXPECT_THROW(read_grid_binary(p), InputError);
  {
    std::ofstream o(p, std::ios::binary);
    o << "NOTAGRID and some more bytes to fill the header....";
  }
  EXPECT_THROW(read_grid_binary(p), InputError);
  fs::remove(p);
}

TEST(GridIo, CsvValidation) {
  const fs::path p = tmp("bad.csv");
  auto write = [&](const std::string& s) {
    std::ofstream o(p);
    o << s;
  };
  write("i0,i1,value\n0,0,1\n");
  EXPECT_THROW(read_grid_csv(p), InputError);
  write("i0,value\n0,1\n");
  EXPECT_THROW(read_grid_csv(p), InputError);
  std::string dup = "i0,i1,value\n";
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) dup += std::to_string(i) + "," + std::to_string(j == 3 ? 2 : j) + ",0.5\n";
  write(dup);
  EXPECT_THROW(read_grid_csv(p), InputError);
  write("i0,i1,value\n0,0,abc\n");
  EXPECT_THROW(read_grid_csv(p), InputError);
  fs::remove(p);
}

TEST(GridIo, SummaryJsonKeys) {
  Solution s;
  s.u = TorusGrid(1, 4);
  s.residual_inf = 1e-12;
  s.iterations = 3;
  const std::string j = solution_summary_json(s);
  for (const char* key : {"\"m\"", "\"n\"", "\"residual_inf\"", "\"iterations\"", "\"positivity_margin\"", "\"u_max_abs\""})
    EXPECT_NE(j.find(key), std::string::npos) << key;
}
