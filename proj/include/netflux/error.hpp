#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netflux {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid arguments to a generator, sampler or theory routine.
struct ParameterError : Error {
  using Error::Error;
};

struct GenerationError : Error {
  using Error::Error;
};

struct LoadError : Error {
  LoadError(const std::string& what, std::size_t line_no = 0)
      : Error(line_no ? what + " (line " + std::to_string(line_no) + ")" : what), line(line_no) {}
  std::size_t line;
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double res, std::size_t iters)
      : Error(what + ": residual " + std::to_string(res) + " after " + std::to_string(iters) +
              " iterations"),
        residual(res), iterations(iters) {}
  double residual;
  std::size_t iterations;
};

struct SizeError : Error {
  using Error::Error;
};

struct FitError : Error {
  using Error::Error;
};

}  // namespace netflux
