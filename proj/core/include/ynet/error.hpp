#pragma once

#include <stdexcept>
#include <string>

namespace ynet {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Input violates a documented precondition (dimension mismatch, bad parameter).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// A numerical procedure failed (divergence, singularity, rank loss).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& what) : Error(what) {}
};

/// Evaluation requested at (or too close to) a pole.
class PoleError : public NumericError {
public:
    explicit PoleError(const std::string& what) : NumericError(what) {}
};

}  // namespace ynet
