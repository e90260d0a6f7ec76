#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>

#include "fsynth/exhibits.hpp"
#include "fsynth/field_io.hpp"

using namespace fsynth;

namespace {

bool same_bits(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  return a.size() == b.size() &&
         std::memcmp(a.data(), b.data(), a.size() * sizeof(Complex)) == 0;
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "fsynth_field_io";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(BinaryFormat, UniformRoundTrip) {
  const SuiteMember m = suite_member(2, "bump2_modulated");
  const Field w = m.fn.sample_transform(GridSpec{{1.0, 2.0}, {5, 7}});
  const FieldFile back = decode_field(encode_field(to_file(w)));
  EXPECT_EQ(back.domain, Domain::frequency);
  EXPECT_EQ(back.layout, Layout::uniform);
  EXPECT_EQ(back.grid.half_width, w.grid.half_width);
  EXPECT_EQ(back.grid.points, w.grid.points);
  EXPECT_TRUE(same_bits(back.field().values, w.values));
  EXPECT_FALSE(back.sigma.has_value());
}

TEST(BinaryFormat, SpatialWithSigma) {
  const SuiteMember m = suite_member(1, "bump_scaled");
  const FieldFile back = decode_field(encode_field(to_file(m.samples)));
  EXPECT_EQ(back.domain, Domain::physical);
  ASSERT_TRUE(back.sigma.has_value());
  EXPECT_EQ(*back.sigma, m.sigma);
  EXPECT_TRUE(same_bits(back.spatial().values, m.samples.values));
  EXPECT_THROW((void)back.field(), ValidationError);
}

TEST(BinaryFormat, ChebyshevNodes) {
  const SuiteMember m = suite_member(2, "bump2");
  const NodeSamples w = m.fn.node_data(cheb_nodes(2, 12, 0.75));
  const NodeSamples back = decode_field(encode_field(to_file(w))).node_samples();
  EXPECT_EQ(back.grid.M, 12u);
  EXPECT_EQ(back.grid.r, 0.75);
  EXPECT_EQ(back.grid.nodes, w.grid.nodes);
  EXPECT_TRUE(same_bits(back.values, w.values));
}

TEST(BinaryFormat, RejectsDamagedInput) {
  const Field w = Field::zeros(GridSpec::cube(1, 1.0, 4));
  const std::string good = encode_field(to_file(w));
  EXPECT_THROW((void)decode_field("no newline"), IoError);
  EXPECT_THROW((void)decode_field("{not json\n"), IoError);
  EXPECT_THROW((void)decode_field(good.substr(0, good.size() - 3)), IoError);
  EXPECT_THROW((void)decode_field(good + "x"), IoError);
  EXPECT_THROW(
      (void)decode_field("{\"d\":1,\"half_widths\":[1],\"points\":[2],\"domain\":\"k\"}\n"),
      IoError);
  EXPECT_THROW((void)decode_field("{\"d\":2,\"half_widths\":[1],\"points\":[2],"
                                  "\"domain\":\"x\"}\n"),
               IoError);
}

TEST(CsvFormat, RoundTripAtFullPrecision) {
  const SuiteMember m = suite_member(1, "bump_modulated");
  const Field w = m.fn.sample_transform(GridSpec::cube(1, 3.0, 25));
  const std::string text = encode_field_csv(to_file(w));
  EXPECT_EQ(text.substr(0, 9), "xi,re,im\n");
  const FieldFile back = decode_field_csv(text);
  EXPECT_EQ(back.domain, Domain::frequency);
  EXPECT_EQ(back.grid.points[0], 25u);
  EXPECT_TRUE(same_bits(back.values, w.values));
}

TEST(CsvFormat, RejectsBadInput) {
  EXPECT_THROW((void)decode_field_csv(""), IoError);
  EXPECT_THROW((void)decode_field_csv("t,re,im\n-1,0,0\n1,0,0\n"), IoError);
  EXPECT_THROW((void)decode_field_csv("x,re,im\n-1,0,0\n"), IoError);
  EXPECT_THROW((void)decode_field_csv("x,re,im\n-1,0,0\n0.5,0,0\n"), IoError);
  EXPECT_THROW((void)decode_field_csv("x,re,im\n-1,0,0\n0.2,0,0\n1,0,0\n"), IoError);
  EXPECT_THROW((void)decode_field_csv("x,re,im\n-1;0;0\n1,0,0\n"), IoError);
  EXPECT_THROW((void)encode_field_csv(to_file(Field::zeros(GridSpec::cube(2, 1.0, 3)))),
               ValidationError);
}

TEST(Files, ExtensionSelectsFormat) {
  const SuiteMember m = suite_member(1, "bump");
  for (const char* name : {"v.bin", "v.csv"}) {
    const auto path = scratch(name);
    save_field(path, to_file(m.samples));
    const FieldFile back = load_field(path);
    EXPECT_TRUE(same_bits(back.values, m.samples.values)) << name;
  }
  EXPECT_EQ(read_file(scratch("v.csv")).substr(0, 8), "x,re,im\n");
  EXPECT_THROW((void)load_field(scratch("missing.bin")), IoError);
}
