#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hdrbench::bd {

struct RdPoint {
  double bitrate_kbps = 0.0;  // measured, not the encoder target
  double quality = 0.0;       // capped PSNR dB or an external score
};

struct RdCurve {
  std::string codec_id;
  std::string sequence_id;
  std::string metric_id;
  std::vector<RdPoint> points;  // ascending bitrate

  // Throws TooFewPoints / InvalidValue / DegenerateAbscissa.
  void validate() const;
};

// Cubic stored in a centred, scaled variable t = (x - center) / scale so the
// fit stays well conditioned on narrow log-rate spans.
struct Cubic {
  double center = 0.0;
  double scale = 1.0;
  std::array<double, 4> q{};  // coefficients in t, ascending powers

  double operator()(double x) const {
    const double t = (x - center) / scale;
    return q[0] + t * (q[1] + t * (q[2] + t * q[3]));
  }
  double antiderivative(double x) const {
    const double t = (x - center) / scale;
    return scale * t * (q[0] + t * (q[1] / 2.0 + t * (q[2] / 3.0 + t * q[3] / 4.0)));
  }
  double integral(double lo, double hi) const { return antiderivative(hi) - antiderivative(lo); }

  // Coefficients of the same polynomial in x, ascending powers.
  std::array<double, 4> monomial() const;
};

// Least-squares cubic through (x, y); interpolates when there are exactly 4 points.
Cubic fit_cubic(std::span<const double> x, std::span<const double> y);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

// Sign conventions:
//   bd_quality_db   > 0 : curve a has higher quality than b at equal rate.
//   bd_rate_percent < 0 : curve a needs less rate than b at equal quality.
// The overlap is in log10(kbps) for bd_quality and in quality units for bd_rate.
struct BdResult {
  std::string codec_a;
  std::string codec_b;
  std::string sequence_id;
  std::string metric_id;
  std::optional<double> bd_quality_db;
  std::optional<double> bd_rate_percent;
  Interval overlap;
  double overlap_fraction = 0.0;  // overlap length / union length of the two spans
  bool low_overlap = false;       // overlap_fraction < kLowOverlapFraction
  bool non_monotonic = false;     // quality not strictly increasing with rate
};

inline constexpr double kLowOverlapFraction = 0.5;

BdResult bd_quality(const RdCurve& a, const RdCurve& b);
BdResult bd_rate(const RdCurve& a, const RdCurve& b);

double mean(std::span<const double> values);

}  // namespace hdrbench::bd
