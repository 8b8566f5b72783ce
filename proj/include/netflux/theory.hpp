#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numeric>
#include <span>
#include <vector>

#include <fftw3.h>

#include "netflux/error.hpp"
#include "netflux/pdf.hpp"
#include "netflux/special.hpp"

namespace netflux {

inline constexpr double kPoissonTail = 1e-12;

struct TheoryParams {
  std::size_t N = 0;
  double mean_degree = 0.0;
  double gamma = 2.5;
  std::size_t m = 1;
  std::size_t n = 1;
  double c = 1.0;

  double p() const { return mean_degree / static_cast<double>(N - 1); }

  void validate() const {
    if (N < 2)
      throw ParameterError("theory: N must be at least 2");
    if (!(p() > 0.0 && p() < 1.0))
      throw ParameterError("theory: p = <k>/(N-1) must lie in (0, 1)");
    if (2 * n > N)
      throw ParameterError("theory: n must not exceed N/2");
    if (!(c > 0.0 && c <= 1.0))
      throw ParameterError("theory: c must lie in (0, 1]");
  }
};

// ---------------------------------------------------------------------------
// Small-n theory: transport set by the degree sums of the two terminal sets.

// Z = sum of n Poisson(<k>) degrees = Poisson(n<k>), truncated at tail 1e-12.
inline Pdf degree_sum_pdf_er(const TheoryParams& prm) {
  const double lambda = static_cast<double>(prm.n) * prm.mean_degree;
  const std::size_t cutoff = poisson_cutoff(lambda, kPoissonTail);
  std::vector<double> mass(cutoff + 1);
  for (std::size_t z = 0; z <= cutoff; ++z)
    mass[z] = poisson_pmf(z, lambda);
  return Pdf::integer(std::move(mass), poisson_upper_tail(cutoff, lambda));
}

// Closed form for the pmf of min(Z1, Z2), Z_i ~ Poisson(lambda):
//   2 P(F) [gamma(F, lambda)/Gamma(F) - P(F)/2].
inline Pdf min_of_two_poisson_pdf(double lambda) {
  const std::size_t cutoff = poisson_cutoff(lambda, kPoissonTail);
  std::vector<double> mass(cutoff + 1);
  for (std::size_t f = 0; f <= cutoff; ++f) {
    const double pz = poisson_pmf(f, lambda);
    mass[f] = 2.0 * pz * (regularized_lower_gamma(static_cast<double>(f), lambda) - 0.5 * pz);
  }
  const double tail = poisson_upper_tail(cutoff, lambda);
  return Pdf::integer(std::move(mass), tail * tail);
}

inline Pdf flow_pdf_er(const TheoryParams& prm) {
  return min_of_two_poisson_pdf(static_cast<double>(prm.n) * prm.mean_degree);
}

struct SmallNFlow {
  double total = 0.0;
  double per_terminal = 0.0;
};

inline SmallNFlow mean_flow_small_n(const TheoryParams& prm) {
  const double total = flow_pdf_er(prm).mean();
  return {total, total / static_cast<double>(prm.n)};
}

// Pmf of min(Z1, Z2) for i.i.d. Z with an arbitrary integer pmf.
inline Pdf min_of_two_pdf(const Pdf& z) {
  std::vector<double> tail(z.size() + 1, 0.0);
  for (std::size_t i = z.size(); i-- > 0;)
    tail[i] = tail[i + 1] + z.mass[i];
  std::vector<double> mass(z.size());
  for (std::size_t f = 0; f < z.size(); ++f)
    mass[f] = 2.0 * z.mass[f] * (tail[f] + z.truncation_mass) - z.mass[f] * z.mass[f];
  return Pdf::integer(std::move(mass), z.truncation_mass * z.truncation_mass);
}

// Cloud-in-cell deposit: mass at x splits between its two neighbouring grid
// points, which keeps the mean exact for values inside the grid.
inline void deposit_on_grid(std::span<const double> grid, std::vector<double>& mass, double x,
                            double w, double& outside) {
  if (x < grid.front() || x > grid.back()) {
    outside += w;
    return;
  }
  auto it = std::upper_bound(grid.begin(), grid.end(), x);
  if (it == grid.end()) {
    mass.back() += w;
    return;
  }
  std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  std::size_t lo = hi - 1;
  const double frac = (x - grid[lo]) / (grid[hi] - grid[lo]);
  mass[lo] += w * (1.0 - frac);
  mass[hi] += w * frac;
}

inline double harmonic_current(double c, double z1, double z2) {
  return z1 + z2 > 0.0 ? c * z1 * z2 / (z1 + z2) : 0.0;
}

// Pdf of I = c z1 z2 / (z1 + z2) with z1, z2 ~ Poisson(n<k>) independent.
inline Pdf current_pdf_small_n(const TheoryParams& prm, std::span<const double> grid) {
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()) ||
      std::adjacent_find(grid.begin(), grid.end()) != grid.end())
    throw ParameterError("current_pdf_small_n: grid must be strictly increasing");
  const Pdf z = degree_sum_pdf_er(prm);
  Pdf out;
  out.support.assign(grid.begin(), grid.end());
  out.mass.assign(grid.size(), 0.0);
  double outside = 0.0;
  for (std::size_t z1 = 0; z1 < z.size(); ++z1)
    for (std::size_t z2 = 0; z2 < z.size(); ++z2)
      deposit_on_grid(grid, out.mass,
                      harmonic_current(prm.c, static_cast<double>(z1), static_cast<double>(z2)),
                      z.mass[z1] * z.mass[z2], outside);
  const double covered = 1.0 - z.truncation_mass;
  out.truncation_mass = outside + (1.0 - covered * covered);
  return out;
}

inline double mean_current_small_n(const TheoryParams& prm) {
  const Pdf z = degree_sum_pdf_er(prm);
  double mean = 0.0;
  for (std::size_t z1 = 0; z1 < z.size(); ++z1)
    for (std::size_t z2 = 0; z2 < z.size(); ++z2)
      mean += z.mass[z1] * z.mass[z2] *
              harmonic_current(prm.c, static_cast<double>(z1), static_cast<double>(z2));
  return mean;
}

// Full linear convolution through FFTW. Rounding noise is about 1e-16 per
// entry; negative noise is clamped to zero.
inline std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t full = a.size() + b.size() - 1;
  std::size_t len = 1;
  while (len < full)
    len <<= 1;
  const std::size_t bins = len / 2 + 1;
  std::vector<double> ra(len, 0.0), rb(len, 0.0);
  std::copy(a.begin(), a.end(), ra.begin());
  std::copy(b.begin(), b.end(), rb.begin());
  std::vector<std::complex<double>> fa(bins), fb(bins);
  auto* ca = reinterpret_cast<fftw_complex*>(fa.data());
  auto* cb = reinterpret_cast<fftw_complex*>(fb.data());
  static std::mutex planner;  // the FFTW planner is not thread-safe
  fftw_plan pa, pb, inv;
  {
    std::lock_guard lock(planner);
    pa = fftw_plan_dft_r2c_1d(static_cast<int>(len), ra.data(), ca, FFTW_ESTIMATE);
    pb = fftw_plan_dft_r2c_1d(static_cast<int>(len), rb.data(), cb, FFTW_ESTIMATE);
    inv = fftw_plan_dft_c2r_1d(static_cast<int>(len), ca, ra.data(), FFTW_ESTIMATE);
  }
  fftw_execute(pa);
  fftw_execute(pb);
  for (std::size_t k = 0; k < bins; ++k)
    fa[k] *= fb[k];
  fftw_execute(inv);
  {
    std::lock_guard lock(planner);
    fftw_destroy_plan(pa);
    fftw_destroy_plan(pb);
    fftw_destroy_plan(inv);
  }
  std::vector<double> out(full);
  for (std::size_t i = 0; i < full; ++i)
    out[i] = std::max(0.0, ra[i] / static_cast<double>(len));
  return out;
}

// Direct summation below kFftThreshold multiply-adds, FFT above.
inline constexpr double kFftThreshold = 1 << 24;

inline Pdf convolve(const Pdf& a, const Pdf& b, std::size_t max_size = SIZE_MAX) {
  std::size_t size = std::min(max_size, a.size() + b.size() - 1);
  std::vector<double> mass(size, 0.0);
  double dropped = 0.0;
  if (static_cast<double>(a.size()) * static_cast<double>(b.size()) > kFftThreshold) {
    auto full = fft_convolve(a.mass, b.mass);
    std::copy_n(full.begin(), size, mass.begin());
    for (std::size_t i = size; i < full.size(); ++i)
      dropped += full[i];
  } else {
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        double w = a.mass[i] * b.mass[j];
        if (i + j < size)
          mass[i + j] += w;
        else
          dropped += w;
      }
  }
  double trunc = 1.0 - (1.0 - a.truncation_mass) * (1.0 - b.truncation_mass) + dropped;
  return Pdf::integer(std::move(mass), trunc);
}

// Flow over n independent pairs: n-fold convolution of min of two
// Poisson(<k>) degrees.
inline Pdf mc_flow_pdf_small_n(const TheoryParams& prm) {
  const Pdf single = min_of_two_poisson_pdf(prm.mean_degree);
  Pdf acc = Pdf::integer({1.0});
  for (std::size_t i = 0; i < prm.n; ++i)
    acc = convolve(acc, single);
  return acc;
}

// Discrete power law k^-gamma on [m, N-1] and its n-fold sum.
inline Pdf degree_pdf_sf(const TheoryParams& prm) {
  std::vector<double> mass(prm.N, 0.0);
  double norm = 0.0;
  for (std::size_t k = prm.m; k < prm.N; ++k)
    norm += mass[k] = std::pow(static_cast<double>(k), -prm.gamma);
  for (auto& w : mass)
    w /= norm;
  return Pdf::integer(std::move(mass));
}

// n-fold convolution by repeated squaring.
inline Pdf degree_sum_pdf_sf(const TheoryParams& prm) {
  Pdf base = degree_pdf_sf(prm);
  Pdf acc = Pdf::integer({1.0});
  for (std::size_t e = prm.n; e > 0; e >>= 1) {
    if (e & 1)
      acc = convolve(acc, base);
    if (e > 1)
      base = convolve(base, base);
  }
  return acc;
}

inline Pdf flow_pdf_sf(const TheoryParams& prm) { return min_of_two_pdf(degree_sum_pdf_sf(prm)); }

inline double sf_flow_tail_exponent(double gamma) {
  if (!(gamma > 2.0))
    throw ParameterError("sf_flow_tail_exponent: gamma must exceed 2");
  return 2.0 * gamma - 1.0;
}

// ---------------------------------------------------------------------------
// Large-n theory: flow decomposed by path length.

// Min of two i.i.d. Binomial(n, p) link counts.
inline Pdf n_min_pmf(std::size_t n, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ParameterError("n_min_pmf: p must lie in (0, 1)");
  const auto pb = binomial_pmf(n, p);
  std::vector<double> tail(n + 2, 0.0);
  for (std::size_t j = n + 1; j-- > 0;)
    tail[j] = tail[j + 1] + pb[j];
  std::vector<double> mass(n + 1);
  for (std::size_t k = 0; k <= n; ++k)
    mass[k] = 2.0 * pb[k] * tail[k] - pb[k] * pb[k];
  return Pdf::integer(std::move(mass));
}

// Poisson(np) limit of n_min_pmf.
inline Pdf n_min_pmf_poisson(double np) { return min_of_two_poisson_pdf(np); }

struct PathLengthMeans {
  double f1 = 0.0;
  double f2 = 0.0;
};

inline PathLengthMeans mean_f1_f2(const TheoryParams& prm) {
  if (2 * prm.n > prm.N)
    throw ParameterError("mean_f1_f2: need 2n <= N");
  const double n = static_cast<double>(prm.n);
  PathLengthMeans out;
  out.f1 = n * n * prm.p();
  const std::size_t intermediates = prm.N - 2 * prm.n;
  out.f2 = intermediates ? static_cast<double>(intermediates) * n_min_pmf(prm.n, prm.p()).mean() : 0.0;
  return out;
}

// beta solving beta / c = 1 - exp(-beta) by bisection; 0 when c <= 1.
inline double two_core_beta(double mean_degree, double tol = 1e-12) {
  if (mean_degree <= 1.0)
    return 0.0;
  double lo = 1e-300, hi = mean_degree;
  // g(beta) = c (1 - e^-beta) - beta is positive below the root, negative above.
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mean_degree * -std::expm1(-mid) - mid > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Fraction of nodes in the 2-core of a sparse random graph of mean degree c.
inline double two_core_fraction(double mean_degree) {
  const double beta = two_core_beta(mean_degree);
  return 1.0 - std::exp(-beta) * (1.0 + beta);
}

enum class F3UpperRule {
  // spare nodes * min(E[bipartite degree], E[spare links | spare > 0])
  MinOfMeans,
  // spare nodes * E[min(D, S)] with D ~ Bin(round(|I|), p), S independent
  MeanOfMin,
};

struct F3Bounds {
  double lower = 0.0;
  double upper = 0.0;              // per the chosen rule
  double upper_mean_of_min = 0.0;  // alternative reading, always reported
  double upper_min_of_means = 0.0;
  double p_spare = 0.0;            // P(n_s > n_t)
  double spare_nodes = 0.0;        // <|I|>
  double mean_spare_links = 0.0;   // <s>
  double bipartite_degree = 0.0;   // <|I|> p
  double beta = 0.0;
  double core_fraction = 0.0;      // x
};

// Length-3 paths: intermediate nodes with more source links than sink links
// (class I1) feed nodes with the opposite imbalance (class I2) through a
// generalized bipartite matching.
inline F3Bounds f3_bounds(const TheoryParams& prm, F3UpperRule rule = F3UpperRule::MinOfMeans) {
  if (2 * prm.n >= prm.N)
    return {};
  const std::size_t n = prm.n;
  const double p = prm.p();
  const auto pb = binomial_pmf(n, p);
  double sum_sq = 0.0;
  for (double v : pb)
    sum_sq += v * v;

  F3Bounds b;
  b.p_spare = 0.5 * (1.0 - sum_sq);
  b.spare_nodes = static_cast<double>(prm.N - 2 * n) * b.p_spare;
  if (b.p_spare <= 0.0)
    return b;

  // P(n_s - n_t = i) for i = 1..n, then conditioned on a positive difference.
  std::vector<double> spare(n + 1, 0.0);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j <= n; ++j)
      spare[i] += pb[j] * pb[j - i];
  double mean_spare = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    spare[i] /= b.p_spare;
    mean_spare += static_cast<double>(i) * spare[i];
  }
  b.mean_spare_links = mean_spare;
  b.bipartite_degree = b.spare_nodes * p;

  b.beta = two_core_beta(b.bipartite_degree);
  b.core_fraction = 1.0 - std::exp(-b.beta) * (1.0 + b.beta);
  b.lower = b.core_fraction * b.spare_nodes;

  b.upper_min_of_means = b.spare_nodes * std::min(b.bipartite_degree, mean_spare);

  const auto trials = static_cast<std::size_t>(std::llround(b.spare_nodes));
  const auto pd = binomial_pmf(trials, p);
  double expected_min = 0.0;
  for (std::size_t d = 1; d < pd.size(); ++d) {
    if (pd[d] < 1e-300)
      continue;
    double inner = 0.0;
    for (std::size_t s = 1; s <= n; ++s)
      inner += spare[s] * static_cast<double>(std::min(d, s));
    expected_min += pd[d] * inner;
  }
  b.upper_mean_of_min = b.spare_nodes * expected_min;
  b.upper = rule == F3UpperRule::MinOfMeans ? b.upper_min_of_means : b.upper_mean_of_min;
  return b;
}

struct LargeNPrediction {
  double f1 = 0.0;
  double f2 = 0.0;
  double f3 = 0.0;
  double f3_lower = 0.0;
  double flow = 0.0;     // f1 + f2 + f3 (upper bound)
  double current = 0.0;  // f1 + f2/2 + f3/3
};

inline LargeNPrediction large_n_prediction(const TheoryParams& prm,
                                           F3UpperRule rule = F3UpperRule::MinOfMeans) {
  auto f12 = mean_f1_f2(prm);
  auto f3 = f3_bounds(prm, rule);
  LargeNPrediction out;
  out.f1 = f12.f1;
  out.f2 = f12.f2;
  out.f3 = f3.upper;
  out.f3_lower = f3.lower;
  out.flow = out.f1 + out.f2 + out.f3;
  out.current = out.f1 + out.f2 / 2.0 + out.f3 / 3.0;
  return out;
}

inline double mean_flow_large_n(const TheoryParams& prm,
                                F3UpperRule rule = F3UpperRule::MinOfMeans) {
  return large_n_prediction(prm, rule).flow;
}

inline double mean_current_large_n(const TheoryParams& prm,
                                   F3UpperRule rule = F3UpperRule::MinOfMeans) {
  return large_n_prediction(prm, rule).current;
}

// ---------------------------------------------------------------------------
// Multicommodity flow.

// E[min(X, Y)] for X, Y i.i.d. Poisson(k).
inline double mu(double k) {
  if (k < 0.0)
    throw ParameterError("mu: k must be non-negative");
  if (k == 0.0)
    return 0.0;
  return min_of_two_poisson_pdf(k).mean();
}

struct McFlowCurve {
  std::vector<double> flow;              // flow[i] = predicted total for n = i + 1
  std::vector<double> effective_degree;  // k_0, k_1, ... up to saturation
  std::size_t saturation = 0;            // first n with k_n <= 1 + eps (0 if never reached)
};

inline constexpr double kSaturationEps = 1e-6;

// k_{n+1} = k_n - mu(k_n) log N / (N log k_n), k_0 = <k>; the flow for n
// pairs sums mu(k_n') over n' < n and stays flat from the saturation point.
inline McFlowCurve mc_flow_theory(const TheoryParams& prm, std::size_t n_max,
                                  std::size_t iteration_cap = 10'000'000) {
  if (n_max < 1)
    throw ParameterError("mc_flow_theory: n_max must be at least 1");
  if (prm.N < 2 || !(prm.mean_degree > 0.0))
    throw ParameterError("mc_flow_theory: need N >= 2 and <k> > 0");
  McFlowCurve curve;
  const double N = static_cast<double>(prm.N);
  const double rate = std::log(N) / N;
  double k = prm.mean_degree;
  double total = 0.0;
  bool saturated = false;
  curve.effective_degree.push_back(k);
  for (std::size_t step = 0; step < iteration_cap; ++step) {
    if (!saturated && (k <= 1.0 + kSaturationEps || std::log(k) <= kSaturationEps)) {
      saturated = true;
      curve.saturation = step;
    }
    if (saturated && step >= n_max)
      break;
    if (!saturated) {
      const double mk = mu(k);
      total += mk;
      k -= mk * rate / std::log(k);
      curve.effective_degree.push_back(k);
    }
    if (step < n_max)
      curve.flow.push_back(total);
  }
  return curve;
}

struct NStarBounds {
  double lower = 0.0;
  double upper = 0.0;
  double recursion = 0.0;
};

inline NStarBounds n_star_bounds(const TheoryParams& prm) {
  if (prm.mean_degree <= 1.0)
    return {};
  const double N = static_cast<double>(prm.N);
  const double lk = std::log(prm.mean_degree);
  const double scale = N / std::log(N);
  NStarBounds b;
  b.lower = 0.5 * lk * lk * scale;
  b.upper = (prm.mean_degree * lk - prm.mean_degree + 1.0) * scale;
  b.recursion = static_cast<double>(mc_flow_theory(prm, 1).saturation);
  return b;
}

struct IntraSetCorrection {
  double probability = 0.0;  // exp(-n^2 <k> / N)
  double exact = 0.0;        // (1 - n/N)^(n <k>)
  double validity_scale = 0.0;  // sqrt(N / <k>)
};

inline IntraSetCorrection intra_set_link_correction(const TheoryParams& prm) {
  const double n = static_cast<double>(prm.n), N = static_cast<double>(prm.N);
  return {std::exp(-n * n * prm.mean_degree / N),
          std::pow(1.0 - n / N, n * prm.mean_degree), std::sqrt(N / prm.mean_degree)};
}

struct CurrentSample {
  double z1 = 0.0;
  double z2 = 0.0;
  double current = 0.0;
};

// Least squares through the origin of I against z1 z2 / (z1 + z2).
inline double fit_c(std::span<const CurrentSample> points) {
  if (points.size() < 10)
    throw ParameterError("fit_c: need at least 10 points");
  double sxy = 0.0, sxx = 0.0;
  for (const auto& pt : points) {
    const double h = harmonic_current(1.0, pt.z1, pt.z2);
    sxy += h * pt.current;
    sxx += h * h;
  }
  if (sxx <= 0.0)
    throw FitError("fit_c: all degree sums are zero");
  return sxy / sxx;
}

}  // namespace netflux
