#pragma once

#include <stdexcept>
#include <string>

namespace trailscape {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A mark with non-finite or out-of-range geometry.
struct invalid_mark : error {
  using error::error;
};

// A numeric argument outside its documented range.
struct invalid_parameter : error {
  using error::error;
};

// Two trails that do not share a grid cannot be compared.
struct incompatible_grids : error {
  using error::error;
};

// Every receptive field reported zero similarity; the weighted mean
// is undefined and the caller must fall back.
struct no_activation : error {
  using error::error;
};

// File/CSV/config problems, message carries row or stage context.
struct io_error : error {
  using error::error;
};

}  // namespace trailscape
