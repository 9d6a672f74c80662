#include "hdrbench/bdrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hdrbench/error.hpp"

namespace hdrbench::bd {

std::array<double, 4> Cubic::monomial() const {
  // sum_k q_k ((x - m) / s)^k expanded with the binomial theorem.
  static constexpr double kBinom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  std::array<double, 4> out{};
  for (int k = 0; k < 4; ++k) {
    const double inv = std::pow(scale, -k);
    for (int j = 0; j <= k; ++j) {
      out[j] += q[k] * inv * kBinom[k][j] * std::pow(-center, k - j);
    }
  }
  return out;
}

void RdCurve::validate() const {
  if (points.size() < 4) {
    throw Error(ErrorCode::TooFewPoints, codec_id + "/" + sequence_id + ": " + std::to_string(points.size()) +
                                             " rate points, need at least 4");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.bitrate_kbps > 0.0) || !std::isfinite(p.bitrate_kbps)) {
      throw Error(ErrorCode::InvalidValue, codec_id + "/" + sequence_id + ": bitrate must be positive");
    }
    if (!std::isfinite(p.quality)) {
      throw Error(ErrorCode::InvalidValue, codec_id + "/" + sequence_id + ": quality must be finite");
    }
    if (i > 0 && !(p.bitrate_kbps > points[i - 1].bitrate_kbps)) {
      throw Error(ErrorCode::DegenerateAbscissa,
                  codec_id + "/" + sequence_id + ": bitrates must be strictly increasing");
    }
  }
}

Cubic fit_cubic(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "x and y differ in length");
  const std::size_t n = x.size();
  if (n < 4) throw Error(ErrorCode::TooFewPoints, "cubic fit needs at least 4 points, got " + std::to_string(n));
  {
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorCode::DegenerateAbscissa, "duplicate abscissa in cubic fit");
    }
    for (double v : sorted) {
      if (!std::isfinite(v)) throw Error(ErrorCode::InvalidValue, "non-finite abscissa");
    }
  }

  Cubic fit;
  const auto [mn, mx] = std::minmax_element(x.begin(), x.end());
  fit.center = 0.5 * (*mn + *mx);
  fit.scale = 0.5 * (*mx - *mn);

  // Householder QR of the n x 4 design matrix in t, applied to y in place.
  std::vector<std::array<double, 4>> a(n);
  std::vector<double> rhs(y.begin(), y.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double t = (x[i] - fit.center) / fit.scale;
    a[i] = {1.0, t, t * t, t * t * t};
  }
  for (std::size_t col = 0; col < 4; ++col) {
    double norm = 0.0;
    for (std::size_t i = col; i < n; ++i) norm += a[i][col] * a[i][col];
    norm = std::sqrt(norm);
    if (norm == 0.0) throw Error(ErrorCode::DegenerateAbscissa, "rank-deficient design matrix");
    const double alpha = a[col][col] > 0 ? -norm : norm;
    std::vector<double> v(n, 0.0);
    v[col] = a[col][col] - alpha;
    for (std::size_t i = col + 1; i < n; ++i) v[i] = a[i][col];
    double vnorm2 = 0.0;
    for (std::size_t i = col; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    for (std::size_t j = col; j < 4; ++j) {
      double dot = 0.0;
      for (std::size_t i = col; i < n; ++i) dot += v[i] * a[i][j];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t i = col; i < n; ++i) a[i][j] -= f * v[i];
    }
    double dot = 0.0;
    for (std::size_t i = col; i < n; ++i) dot += v[i] * rhs[i];
    const double f = 2.0 * dot / vnorm2;
    for (std::size_t i = col; i < n; ++i) rhs[i] -= f * v[i];
  }
  for (int row = 3; row >= 0; --row) {
    double s = rhs[row];
    for (int j = row + 1; j < 4; ++j) s -= a[row][j] * fit.q[j];
    if (std::abs(a[row][row]) < 1e-300) throw Error(ErrorCode::DegenerateAbscissa, "singular fit");
    fit.q[row] = s / a[row][row];
  }
  return fit;
}

namespace {

void check_pair(const RdCurve& a, const RdCurve& b) {
  a.validate();
  b.validate();
  if (a.sequence_id != b.sequence_id || a.metric_id != b.metric_id) {
    throw Error(ErrorCode::InvalidValue, "BD comparison needs curves of one sequence and metric, got " +
                                             a.sequence_id + "/" + a.metric_id + " vs " + b.sequence_id + "/" +
                                             b.metric_id);
  }
}

bool strictly_increasing_quality(const RdCurve& c) {
  for (std::size_t i = 1; i < c.points.size(); ++i) {
    if (!(c.points[i].quality > c.points[i - 1].quality)) return false;
  }
  return true;
}

struct Samples {
  std::vector<double> x;
  std::vector<double> y;
};

// Average of fa - fb over the common span of the two abscissa sets.
double average_gap(const Samples& sa, const Samples& sb, BdResult& result) {
  const auto [a_lo, a_hi] = std::minmax_element(sa.x.begin(), sa.x.end());
  const auto [b_lo, b_hi] = std::minmax_element(sb.x.begin(), sb.x.end());
  const double lo = std::max(*a_lo, *b_lo);
  const double hi = std::min(*a_hi, *b_hi);
  if (!(lo < hi)) {
    throw Error(ErrorCode::NoOverlap, result.codec_a + " vs " + result.codec_b + " on " + result.sequence_id +
                                          ": curves do not overlap");
  }
  const double union_len = std::max(*a_hi, *b_hi) - std::min(*a_lo, *b_lo);
  result.overlap = {lo, hi};
  result.overlap_fraction = (hi - lo) / union_len;
  result.low_overlap = result.overlap_fraction < kLowOverlapFraction;

  const Cubic fa = fit_cubic(sa.x, sa.y);
  const Cubic fb = fit_cubic(sb.x, sb.y);
  return (fa.integral(lo, hi) - fb.integral(lo, hi)) / (hi - lo);
}

BdResult blank_result(const RdCurve& a, const RdCurve& b) {
  BdResult r;
  r.codec_a = a.codec_id;
  r.codec_b = b.codec_id;
  r.sequence_id = a.sequence_id;
  r.metric_id = a.metric_id;
  r.non_monotonic = !strictly_increasing_quality(a) || !strictly_increasing_quality(b);
  return r;
}

}  // namespace

BdResult bd_quality(const RdCurve& a, const RdCurve& b) {
  check_pair(a, b);
  BdResult result = blank_result(a, b);
  auto samples = [](const RdCurve& c) {
    Samples s;
    for (const auto& p : c.points) {
      s.x.push_back(std::log10(p.bitrate_kbps));
      s.y.push_back(p.quality);
    }
    return s;
  };
  result.bd_quality_db = average_gap(samples(a), samples(b), result);
  return result;
}

BdResult bd_rate(const RdCurve& a, const RdCurve& b) {
  check_pair(a, b);
  BdResult result = blank_result(a, b);
  auto samples = [](const RdCurve& c) {
    Samples s;
    for (const auto& p : c.points) {
      s.x.push_back(p.quality);
      s.y.push_back(std::log10(p.bitrate_kbps));
    }
    return s;
  };
  const double avg_log_gap = average_gap(samples(a), samples(b), result);
  result.bd_rate_percent = (std::pow(10.0, avg_log_gap) - 1.0) * 100.0;
  return result;
}

double mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

}  // namespace hdrbench::bd
