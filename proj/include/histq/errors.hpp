#pragma once

#include <stdexcept>
#include <string>

namespace histq {

/// Base class for every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotHermitian : Error {
    using Error::Error;
};

struct NotPSD : Error {
    using Error::Error;
};

struct SpecMismatch : Error {
    using Error::Error;
};

struct InvalidFactor : Error {
    using Error::Error;
};

struct NotAPartition : Error {
    using Error::Error;
};

struct DimensionCap : Error {
    using Error::Error;
};

struct NotSwapHermitian : Error {
    using Error::Error;
};

struct BadGrouping : Error {
    using Error::Error;
};

struct BadIndex : Error {
    using Error::Error;
};

struct ParseError : Error {
    using Error::Error;
};

struct ValidationError : Error {
    using Error::Error;
};

struct NotFound : Error {
    using Error::Error;
};

}  // namespace histq
