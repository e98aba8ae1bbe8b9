#pragma once

#include <stdexcept>
#include <string>

namespace ham {

//! Input describes a model outside the admissible parameter region.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! A numerical procedure failed to reach its tolerance or produced NaN.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ham
