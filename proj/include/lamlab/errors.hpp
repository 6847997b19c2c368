#pragma once

#include <stdexcept>
#include <string>

namespace lamlab {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// |a^perp . b| too small for the F.2-type frame identity.
class DegenerateFrame : public Error {
public:
    using Error::Error;
};

/// A starred/plus envelope function evaluated below its domain floor.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Inputs do not have the structure an operation requires.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// |det F - 1| exceeds the membership tolerance.
class OffManifold : public Error {
public:
    using Error::Error;
};

/// Two closed-form branches disagree at a region boundary.
class BranchDisagreement : public Error {
public:
    using Error::Error;
};

/// Slip system or configuration violates an invariant.
class InvalidSlipSystem : public Error {
public:
    using Error::Error;
};

}  // namespace lamlab
