#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "netflux/error.hpp"
#include "netflux/pdf.hpp"

namespace netflux {

// Commutative monoid (count, sum, sum of squares).
struct Accumulator {
  std::size_t count = 0;
  double sum = 0.0;
  double sum_sq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sum_sq += x * x;
  }

  Accumulator& operator+=(const Accumulator& o) {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    return *this;
  }

  double mean() const { return count ? sum / static_cast<double>(count) : 0.0; }

  double variance() const {
    if (count < 2)
      return 0.0;
    const double c = static_cast<double>(count);
    return std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
  }

  double std_error() const {
    return count ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
  }
};

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::size_t count = 0;
  double mass = 0.0;     // count / total
  double density = 0.0;  // mass / width
};

// Histogram of non-negative integer-valued samples. Linear binning puts each
// integer F in [F, F+1); logarithmic binning uses integer-aligned edges
// growing by `ratio`, so density = mass / (number of integers covered).
inline std::vector<HistogramBin> integer_histogram(std::span<const double> samples,
                                                   bool logarithmic, double ratio = 1.3) {
  if (samples.empty())
    throw ParameterError("histogram: no samples");
  const double top = *std::max_element(samples.begin(), samples.end());
  std::vector<double> edges;
  if (!logarithmic) {
    for (double e = 0.0; e <= top + 1.0; e += 1.0)
      edges.push_back(e);
  } else {
    edges = {0.0, 1.0};
    while (edges.back() <= top) {
      double next = std::max(edges.back() + 1.0, std::ceil(edges.back() * ratio));
      edges.push_back(next);
    }
  }
  std::vector<HistogramBin> bins(edges.size() - 1);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    bins[i].left = edges[i], bins[i].right = edges[i + 1];
  for (double x : samples) {
    auto it = std::upper_bound(edges.begin(), edges.end(), std::floor(x));
    std::size_t i = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++bins[std::min(i, bins.size() - 1)].count;
  }
  const double total = static_cast<double>(samples.size());
  for (auto& b : bins) {
    b.mass = static_cast<double>(b.count) / total;
    b.density = b.mass / (b.right - b.left);
  }
  return bins;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

inline LineFit weighted_line_fit(std::span<const double> x, std::span<const double> y,
                                 std::span<const double> w) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
    sxx += w[i] * x[i] * x[i];
    sxy += w[i] * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (x.size() < 2 || det <= 0.0)
    throw FitError("line fit: fewer than two distinct points");
  LineFit f;
  f.slope = (sw * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / sw;
  f.points = x.size();
  return f;
}

// Slope of log density vs log bin centre over non-empty bins with left edge
// >= lo and right edge <= hi (hi = 0 means no upper limit). Bins are weighted
// by their counts, the inverse Poisson variance of a log count.
inline LineFit log_log_tail_slope(std::span<const HistogramBin> bins, double lo, double hi = 0.0,
                                  std::size_t min_count = 1) {
  std::vector<double> x, y, w;
  lo = std::max(lo, 1.0);
  for (const auto& b : bins) {
    if (b.left < lo || (hi > 0.0 && b.right > hi) || b.count < min_count)
      continue;
    // geometric centre of the integers covered
    x.push_back(0.5 * (std::log(b.left) + std::log(b.right - 1.0 > b.left ? b.right - 1.0 : b.left)));
    y.push_back(std::log(b.density));
    w.push_back(static_cast<double>(b.count));
  }
  return weighted_line_fit(x, y, w);
}

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

// Pearson chi-square of observed integer counts against a pmf. Cells are
// pooled left to right until each expects at least `min_expected`; any
// remainder (including mass beyond the pmf's support) joins the last cell.
inline ChiSquareResult chi_square_gof(std::span<const std::size_t> observed, const Pdf& expected,
                                      std::size_t total, double min_expected = 5.0) {
  std::vector<double> exp_cells, obs_cells;
  double e_acc = 0.0, o_acc = 0.0;
  const std::size_t len = std::max(observed.size(), expected.size());
  for (std::size_t k = 0; k < len; ++k) {
    e_acc += expected.at(k) * static_cast<double>(total);
    o_acc += k < observed.size() ? static_cast<double>(observed[k]) : 0.0;
    if (e_acc >= min_expected) {
      exp_cells.push_back(e_acc);
      obs_cells.push_back(o_acc);
      e_acc = o_acc = 0.0;
    }
  }
  e_acc += expected.truncation_mass * static_cast<double>(total);
  if (!exp_cells.empty()) {
    exp_cells.back() += e_acc;
    obs_cells.back() += o_acc;
  }
  ChiSquareResult r;
  if (exp_cells.size() < 2)
    return r;
  for (std::size_t i = 0; i < exp_cells.size(); ++i) {
    const double d = obs_cells[i] - exp_cells[i];
    r.statistic += d * d / exp_cells[i];
  }
  r.dof = exp_cells.size() - 1;
  boost::math::chi_squared dist(static_cast<double>(r.dof));
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

}  // namespace netflux
