#pragma once

#include <stdexcept>
#include <string>

namespace fbmre {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A parameter lies outside its admissible range (Hurst index, level, ...).
class RangeError : public Error {
public:
    using Error::Error;
};

/// Cholesky factorization of a Gram matrix failed.
class FactorizationError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// Observation grids of a panel and a Gram matrix differ.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Filter order p < 2: the filter cannot annihilate a linear drift.
class OrderTooLowError : public Error {
public:
    using Error::Error;
};

class SeriesTooShortError : public Error {
public:
    using Error::Error;
};

/// The observed k-variation cannot be produced by any H in the search interval.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class DegenerateSampleError : public Error {
public:
    using Error::Error;
};

/// Circulant embedding is not nonnegative definite for the requested (n, H).
class NegativeEigenvalueError : public Error {
public:
    using Error::Error;
};

}  // namespace fbmre
