#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vexp {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exponent violates its admissible range (p <= 1, s outside (0,1), ...).
class InvalidExponent : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// |u|^p saturated the double range at a grid node.
class OutOfRange : public Error {
 public:
  OutOfRange(const std::string& what, std::size_t node) : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

/// A quadrature integrand produced NaN or infinity at an included pair.
class NonFiniteValue : public Error {
 public:
  NonFiniteValue(const std::string& what, std::size_t i, std::size_t j)
      : Error(what), i_(i), j_(j) {}
  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }

 private:
  std::size_t i_;
  std::size_t j_;
};

/// Luxemburg bisection could not bracket the unit level of the modular.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// No t <= 2^40 with I[t u] < 0; usually 2 r^- <= p^+.
class ValleyNotFound : public Error {
 public:
  using Error::Error;
};

/// A grid is too coarse for the requested geometric probe.
class RefineGrid : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace vexp
