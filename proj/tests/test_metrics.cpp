#include <gtest/gtest.h>

#include <cmath>

#include "hdrbench/error.hpp"
#include "hdrbench/metrics.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace hdrbench;
using testsupport::TempDir;

namespace {

oracle::Image image(const Plane& p) {
  oracle::Image im;
  im.w = p.width;
  im.h = p.height;
  for (auto s : p.samples) im.px.push_back(s);
  return im;
}

}  // namespace

TEST(Psnr, MatchesOracleOnRandomPlanes) {
  std::mt19937 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto a = testsupport::random_plane(8 + i % 9, 8 + i % 7, rng);
    const auto b = testsupport::random_plane(a.width, a.height, rng);
    EXPECT_NEAR(metrics::mse_plane(a, b), oracle::mse(image(a), image(b)), 1e-9);
    EXPECT_NEAR(metrics::psnr_plane(a, b, 1023.0), oracle::psnr(image(a), image(b), 1023.0), 1e-9);
  }
}

TEST(Psnr, IdenticalFramesGiveInfinity) {
  const auto f = PlanarFrame::filled(testsupport::spec(8, 8), 400, 512);
  EXPECT_TRUE(std::isinf(metrics::psnr_frame(f, f, {})));
}

TEST(Psnr, SingleLevelErrorAtNominalPeak) {
  const auto s = testsupport::spec(8, 8);
  auto a = PlanarFrame::filled(s, 100, 512);
  auto b = PlanarFrame::filled(s, 101, 512);
  EXPECT_NEAR(metrics::psnr_frame(a, b, {}), 20.0 * std::log10(1023.0), 1e-12);
}

TEST(Psnr, PeakConventions) {
  EXPECT_EQ(metrics::PeakConvention::parse("nominal").value(), 1023.0);
  EXPECT_EQ(metrics::PeakConvention::parse("paper").value(), 1024.0);
  EXPECT_EQ(metrics::PeakConvention::parse("paper_1024").value(), 1024.0);
  EXPECT_THROW(metrics::PeakConvention::parse("max"), Error);
}

TEST(Psnr, ChromaIgnoredForLuma) {
  const auto s = testsupport::spec(8, 8);
  auto a = PlanarFrame::filled(s, 300, 512);
  auto b = PlanarFrame::filled(s, 300, 100);
  EXPECT_TRUE(std::isinf(metrics::psnr_frame(a, b, {})));
}

TEST(Psnr, DimensionMismatch) {
  Plane a(8, 8), b(8, 6);
  try {
    metrics::mse_plane(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Psnr, VideoMeanCapsInfinity) {
  TempDir dir;
  const auto s = testsupport::spec(8, 8);
  {
    YuvWriter ref(dir / "ref.yuv", s), dist(dir / "dist.yuv", s);
    ref.write_frame(PlanarFrame::filled(s, 100, 512));
    dist.write_frame(PlanarFrame::filled(s, 100, 512));
    ref.write_frame(PlanarFrame::filled(s, 100, 512));
    dist.write_frame(PlanarFrame::filled(s, 101, 512));
  }
  auto r = open_sequence(dir / "ref.yuv", s);
  auto d = open_sequence(dir / "dist.yuv", s);
  const auto series = metrics::psnr_video(r, d, {}, 100.0);
  ASSERT_EQ(series.per_frame.size(), 2u);
  EXPECT_TRUE(std::isinf(series.per_frame[0]));
  EXPECT_NEAR(series.summary, (100.0 + 20.0 * std::log10(1023.0)) / 2.0, 1e-12);
  EXPECT_EQ(series.metric_id, "psnr_y");
}

TEST(Psnr, FrameCountMismatch) {
  TempDir dir;
  const auto s = testsupport::spec(8, 8);
  testsupport::write_sequence(dir / "a.yuv", s, 3, 0);
  testsupport::write_sequence(dir / "b.yuv", s, 2, 0);
  auto a = open_sequence(dir / "a.yuv", s);
  auto b = open_sequence(dir / "b.yuv", s);
  try {
    metrics::psnr_video(a, b, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FrameCountMismatch);
  }
}

TEST(SiTi, MatchesOracle) {
  std::mt19937 rng(5);
  for (int i = 0; i < 30; ++i) {
    const auto a = testsupport::random_plane(8 + i % 9, 8 + (i * 3) % 9, rng);
    const auto b = testsupport::random_plane(a.width, a.height, rng);
    EXPECT_NEAR(metrics::spatial_information(a), oracle::si(image(a)), 1e-9);
    EXPECT_NEAR(metrics::temporal_information(a, b), oracle::ti(image(a), image(b)), 1e-9);
  }
}

TEST(SiTi, ConstantClipIsZeroAndSingleFrameHasNoTi) {
  TempDir dir;
  const auto s = testsupport::spec(16, 16);
  {
    YuvWriter w(dir / "c.yuv", s);
    for (int i = 0; i < 3; ++i) w.write_frame(PlanarFrame::filled(s, 512, 512));
  }
  auto r = open_sequence(dir / "c.yuv", s);
  const auto st = metrics::siti_video(r);
  EXPECT_EQ(st.si, 0.0);
  ASSERT_TRUE(st.ti);
  EXPECT_EQ(*st.ti, 0.0);

  {
    YuvWriter w(dir / "one.yuv", s);
    w.write_frame(PlanarFrame::filled(s, 512, 512));
  }
  auto one = open_sequence(dir / "one.yuv", s);
  EXPECT_FALSE(metrics::siti_video(one).ti);
}

TEST(SiTi, MaxPooling) {
  TempDir dir;
  const auto s = testsupport::spec(16, 16);
  std::mt19937 rng(8);
  std::vector<PlanarFrame> frames;
  {
    YuvWriter w(dir / "r.yuv", s);
    for (int i = 0; i < 4; ++i) {
      frames.push_back(testsupport::random_frame(s, rng));
      w.write_frame(frames.back());
    }
  }
  double si = 0, ti = 0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    si = std::max(si, oracle::si(image(frames[i].y)));
    if (i) ti = std::max(ti, oracle::ti(image(frames[i - 1].y), image(frames[i].y)));
  }
  auto r = open_sequence(dir / "r.yuv", s);
  const auto st = metrics::siti_video(r);
  EXPECT_NEAR(st.si, si, 1e-9);
  EXPECT_NEAR(*st.ti, ti, 1e-9);
  EXPECT_EQ(st.ti_series.per_frame.size(), 3u);
}

TEST(DynamicRange, Fixtures) {
  Plane uniform(10, 10, 700);
  EXPECT_EQ(metrics::dr_plane(uniform), 0.0);

  Plane ramp(10, 10);
  for (int i = 0; i < 100; ++i) ramp.samples[i] = static_cast<std::uint16_t>(i + 1);
  EXPECT_NEAR(metrics::dr_plane(ramp), std::log2(99.0), 1e-12);

  Plane dark(10, 10, 0);
  EXPECT_EQ(metrics::dr_plane(dark), 0.0);  // clamped to 1 on both ends

  Plane small(9, 9, 1);
  try {
    metrics::dr_plane(small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooFewSamples);
  }
}

TEST(DynamicRange, MatchesOracleAndIsPermutationInvariant) {
  std::mt19937 rng(21);
  for (int i = 0; i < 20; ++i) {
    auto p = testsupport::random_plane(16, 12, rng);
    const double dr = metrics::dr_plane(p);
    EXPECT_NEAR(dr, oracle::dr(image(p)), 1e-12);
    std::shuffle(p.samples.begin(), p.samples.end(), rng);
    EXPECT_EQ(metrics::dr_plane(p), dr);
  }
}

TEST(ExternalScores, PerFrameAndSummaryForms) {
  TempDir dir;
  testsupport::spit(dir / "a.csv", "frame,value\n0,0.5\n1,0.7\n2,0.9\n");
  const auto a = metrics::ingest_external_scores(dir / "a.csv", "hdrvqm");
  EXPECT_EQ(a.metric_id, "hdrvqm");
  EXPECT_EQ(a.per_frame.size(), 3u);
  EXPECT_NEAR(a.summary, 0.7, 1e-12);

  testsupport::spit(dir / "b.csv", "value\n0.42\n");
  const auto b = metrics::ingest_external_scores(dir / "b.csv", "hdrvqm");
  EXPECT_TRUE(b.per_frame.empty());
  EXPECT_EQ(b.summary, 0.42);

  testsupport::spit(dir / "c.csv", "frame,value\n0,1\n2,1\n1,1\n");
  try {
    metrics::ingest_external_scores(dir / "c.csv", "hdrvqm");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonMonotonicFrameIndex);
  }

  testsupport::spit(dir / "d.csv", "idx,score\n0,1\n");
  EXPECT_THROW(metrics::ingest_external_scores(dir / "d.csv", "hdrvqm"), Error);
}
