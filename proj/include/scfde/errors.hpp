#pragma once

#include <stdexcept>
#include <string>

namespace scfde {

/// Base class for all scfde errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Block length smaller than the channel memory allows (L < nu+1).
class BlockTooShort : public Error {
public:
    using Error::Error;
};

/// Vector lengths disagree.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// An eigenvalue is exactly zero where an inverse is required.
class DegenerateEigenvalue : public Error {
public:
    using Error::Error;
};

/// A sweep or oracle configuration fails validation.
class InvalidConfig : public Error {
public:
    using Error::Error;
};

/// Too few usable points for a regression.
class InsufficientData : public Error {
public:
    using Error::Error;
};

} // namespace scfde
