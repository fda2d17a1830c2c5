#pragma once

#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ucplab {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;

/// Raised when an operation is called outside its documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when two fields (or a field and an operator) live on different grids.
class DomainMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a perturbation fails the pointwise admissibility bound.
class NonAdmissibleError : public std::runtime_error {
public:
    NonAdmissibleError(std::string failed_bound, std::size_t witness_point)
        : std::runtime_error("perturbation is not admissible: " + failed_bound),
          failed_bound_(std::move(failed_bound)), witness_point_(witness_point) {}

    const std::string& failed_bound() const noexcept { return failed_bound_; }
    std::size_t witness_point() const noexcept { return witness_point_; }

private:
    std::string failed_bound_;
    std::size_t witness_point_;
};

/// Raised by the gradient flow when an accepted step would increase the functional.
class FlowInstability : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ucplab
