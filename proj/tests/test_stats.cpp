#include <gtest/gtest.h>

#include <cmath>

#include "netflux/parallel.hpp"
#include "netflux/stats.hpp"

using namespace netflux;

TEST(Accumulator, Moments) {
  Accumulator a;
  for (double x : {1.0, 2.0, 3.0, 4.0})
    a.add(x);
  EXPECT_EQ(a.count, 4u);
  EXPECT_DOUBLE_EQ(a.mean(), 2.5);
  EXPECT_DOUBLE_EQ(a.variance(), 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(a.std_error(), std::sqrt(5.0 / 3.0 / 4.0));
  Accumulator empty;
  EXPECT_EQ(empty.mean(), 0.0);
  EXPECT_EQ(empty.std_error(), 0.0);
}

TEST(Histogram, LinearBins) {
  std::vector<double> v{0, 1, 1, 3};
  auto bins = integer_histogram(v, false);
  ASSERT_EQ(bins.size(), 4u);
  EXPECT_EQ(bins[1].count, 2u);
  EXPECT_DOUBLE_EQ(bins[1].mass, 0.5);
  EXPECT_EQ(bins[2].count, 0u);
  EXPECT_EQ(bins[3].count, 1u);
  EXPECT_THROW(integer_histogram(std::vector<double>{}, false), ParameterError);
}

TEST(Histogram, LogBinsCoverAllSamples) {
  std::vector<double> v;
  for (int i = 0; i < 1000; ++i)
    v.push_back(i);
  auto bins = integer_histogram(v, true, 1.3);
  std::size_t total = 0;
  double mass = 0.0;
  for (std::size_t i = 0; i < bins.size(); ++i) {
    total += bins[i].count;
    mass += bins[i].mass;
    EXPECT_NEAR(bins[i].density * (bins[i].right - bins[i].left), bins[i].mass, 1e-15);
    if (i)
      EXPECT_EQ(bins[i].left, bins[i - 1].right);
    // integer-aligned: each bin holds exactly (right - left) of the values
    EXPECT_EQ(bins[i].count, std::min(1000.0, bins[i].right) - bins[i].left);
  }
  EXPECT_EQ(total, 1000u);
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(LineFit, ExactLine) {
  std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9}, w{1, 2, 1, 5};
  auto f = weighted_line_fit(x, y, w);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  std::vector<double> one{1};
  EXPECT_THROW(weighted_line_fit(one, one, one), FitError);
}

TEST(LineFit, PowerLawTail) {
  // Deterministic counts proportional to F^-4 on 1..2000.
  std::vector<double> samples;
  for (int F = 1; F <= 60; ++F) {
    int c = static_cast<int>(std::llround(1e8 * std::pow(F, -4.0)));
    for (int i = 0; i < c; ++i)
      samples.push_back(F);
  }
  auto bins = integer_histogram(samples, true, 1.3);
  auto fit = log_log_tail_slope(bins, 5, 40);
  EXPECT_NEAR(fit.slope, -4.0, 0.15);
}

TEST(ChiSquare, PerfectAgreementAndRejection) {
  Pdf pdf = Pdf::integer({0.25, 0.5, 0.25});
  std::vector<std::size_t> exact{250, 500, 250};
  auto ok = chi_square_gof(exact, pdf, 1000);
  EXPECT_NEAR(ok.statistic, 0.0, 1e-12);
  EXPECT_EQ(ok.dof, 2u);
  EXPECT_NEAR(ok.p_value, 1.0, 1e-12);
  std::vector<std::size_t> off{400, 400, 200};
  EXPECT_LT(chi_square_gof(off, pdf, 1000).p_value, 1e-6);
}

TEST(Parallel, VisitsEveryIndexOnceAndPropagatesErrors) {
  std::vector<int> hits(1000, 0);
  parallel_for(1000, 4, [&](std::size_t i) { ++hits[i]; });
  for (int h : hits)
    ASSERT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 57)
                                throw std::runtime_error("boom");
                            }),
               std::runtime_error);
  parallel_for(0, 2, [](std::size_t) { FAIL(); });
}
