#pragma once

#include <stdexcept>
#include <string>

namespace mlab {

// All recoverable failures are exceptions derived from Error so the CLI can
// map them to exit code 1 uniformly. InternalCheckError marks a violated
// internal assertion (a bug or a broken mathematical expectation), not bad
// user input.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ShapeError : Error {
    using Error::Error;
};
struct ContainmentError : Error {
    using Error::Error;
};
struct NotAPGroup : Error {
    using Error::Error;
};
struct CapExceeded : Error {
    using Error::Error;
};
struct NotSubgroup : Error {
    using Error::Error;
};
struct NotNormal : Error {
    using Error::Error;
};
struct ZeroModule : Error {
    using Error::Error;
};
struct DegreeOverCap : Error {
    using Error::Error;
};
struct NotNormalSection : Error {
    using Error::Error;
};
struct NotAMorphism : Error {
    using Error::Error;
};
struct NotSES : Error {
    using Error::Error;
};
struct PreconditionFailed : Error {
    using Error::Error;
};
struct NotSurjective : Error {
    using Error::Error;
};
struct NotHomomorphism : Error {
    using Error::Error;
};
struct StageOutOfRange : Error {
    using Error::Error;
};
struct IncompatibleWitness : Error {
    using Error::Error;
};
struct SchemaError : Error {
    using Error::Error;
};
struct InvariantError : Error {
    using Error::Error;
};
struct InternalCheckError : Error {
    using Error::Error;
};

}  // namespace mlab
