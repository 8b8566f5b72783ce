#pragma once

#include <cstddef>
#include <vector>

namespace netflux {

// Probability masses on a support grid. Integer-valued distributions use
// support 0, 1, 2, ... ; truncation_mass is the probability left off the grid.
struct Pdf {
  std::vector<double> support;
  std::vector<double> mass;
  double truncation_mass = 0.0;

  std::size_t size() const { return mass.size(); }

  double total() const {
    double s = 0.0;
    for (double m : mass)
      s += m;
    return s;
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < mass.size(); ++i)
      s += support[i] * mass[i];
    return s;
  }

  // Mass at integer value k for pdfs on 0, 1, 2, ... (0 outside).
  double at(std::size_t k) const { return k < mass.size() ? mass[k] : 0.0; }

  static Pdf integer(std::vector<double> masses, double truncation = 0.0) {
    Pdf p;
    p.support.resize(masses.size());
    for (std::size_t i = 0; i < masses.size(); ++i)
      p.support[i] = static_cast<double>(i);
    p.mass = std::move(masses);
    p.truncation_mass = truncation;
    return p;
  }
};

}  // namespace netflux
