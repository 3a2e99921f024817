#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace twostep {

// Base of every error raised by the library. Callers that only need to know
// "something went wrong" catch this; the CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class SingularMatrix : public Error {
public:
    SingularMatrix(std::size_t pivot_index, double pivot, double threshold)
        : Error("singular matrix: pivot " + std::to_string(pivot_index) +
                " below the relative threshold"),
          pivot_index_(pivot_index), pivot_(pivot), threshold_(threshold) {}

    std::size_t pivot_index() const noexcept { return pivot_index_; }
    double pivot() const noexcept { return pivot_; }
    double threshold() const noexcept { return threshold_; }

private:
    std::size_t pivot_index_;
    double pivot_;
    double threshold_;
};

class DomainExceeded : public Error {
public:
    using Error::Error;
};

class NoRoot : public Error {
public:
    using Error::Error;
};

class CriterionViolated : public Error {
public:
    using Error::Error;
};

class NotApplicable : public Error {
public:
    using Error::Error;
};

class InvalidSize : public Error {
public:
    using Error::Error;
};

class InsufficientData : public Error {
public:
    using Error::Error;
};

}  // namespace twostep
