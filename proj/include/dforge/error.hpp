#pragma once

#include <stdexcept>
#include <string>

namespace dforge {

// Base for every error the library raises. Outcomes that callers are expected
// to branch on (infeasible search, nibble failure) are returned as values.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

// A configured size cap (clique count, subset scan, outcome space) was hit.
class ResourceError : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

// A resampling loop exceeded its cap.
class Nontermination : public Error {
public:
    using Error::Error;
};

class RetryExhausted : public Error {
public:
    using Error::Error;
};

}  // namespace dforge
