#pragma once

#include <stdexcept>
#include <string>

namespace catana {

// Input violates a documented precondition (asymmetric distance matrix,
// out-of-range subscriber count, malformed file). CLI maps this to exit 2.
class ContractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A fetcher could not produce a record. Never replaced by fabricated data.
class FetchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace catana
