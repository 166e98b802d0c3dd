#pragma once

// Error taxonomy shared across the library. Argument errors use the standard
// std::invalid_argument / std::out_of_range; ConvergenceError marks a request
// whose numerical scheme cannot reach its tolerance within resource limits,
// so callers can distinguish "bad input" from "did not converge".

#include <stdexcept>
#include <string>

namespace airyspec {

class ConvergenceError : public std::runtime_error {
  public:
    explicit ConvergenceError(const std::string& what)
        : std::runtime_error(what) {}
};

}  // namespace airyspec
