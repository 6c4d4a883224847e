#pragma once

#include <stdexcept>
#include <string>

namespace tmvksc {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched matrix/vector shapes or sample counts.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Invalid configuration values (k, rho, kappa, beta, grids, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Normalized polynomial kernel evaluated at a zero-norm point with t = 0.
class DegenerateKernelError : public Error {
public:
    using Error::Error;
};

// A kernel row sum d_i <= 0; the random-walk weighting is undefined.
class NonPositiveDegreeError : public Error {
public:
    using Error::Error;
};

// Fused operator is numerically zero; eigenvectors would be arbitrary.
class DegenerateSpectrumError : public Error {
public:
    using Error::Error;
};

// Fewer distinct sign patterns than requested clusters.
class InsufficientCodewordsError : public Error {
public:
    using Error::Error;
};

// Guard limit exceeded (e.g. materializing an oversized tensor).
class ResourceError : public Error {
public:
    using Error::Error;
};

// Malformed input file; message carries file and line.
class ParseError : public Error {
public:
    using Error::Error;
};

// Model archive written by an incompatible format version.
class FormatVersionError : public Error {
public:
    using Error::Error;
};

// Model archive is truncated or internally inconsistent.
class CorruptModelError : public Error {
public:
    using Error::Error;
};

// Invariant violation that should be unreachable.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace tmvksc
