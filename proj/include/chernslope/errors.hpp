#pragma once

#include <stdexcept>
#include <string>

namespace chernslope {

/// Argument outside the mathematical domain of an operation.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

/// A quantity that must be nonzero (a denominator, c2(X), ...) vanished.
struct degenerate_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An explicit search or size cap was exceeded.
struct cap_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw domain_error(what);
}

}  // namespace detail
}  // namespace chernslope
