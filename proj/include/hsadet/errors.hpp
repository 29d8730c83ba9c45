#pragma once

#include <stdexcept>
#include <string>

namespace hsadet {

// Base class for all library errors. The CLI maps these to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class MissingColumnError : public Error {
public:
    using Error::Error;
};

class EmptySelectionError : public Error {
public:
    using Error::Error;
};

class EmptyGraphError : public Error {
public:
    using Error::Error;
};

class UnknownNodeError : public Error {
public:
    using Error::Error;
};

class PartitionMismatchError : public Error {
public:
    using Error::Error;
};

class NonIntegerWeightsError : public Error {
public:
    using Error::Error;
};

class EmptyValuesError : public Error {
public:
    using Error::Error;
};

class UnmappedFacilityError : public Error {
public:
    using Error::Error;
};

class MissingAdjacencyError : public Error {
public:
    using Error::Error;
};

class InvalidConfigError : public Error {
public:
    using Error::Error;
};

class SchemaMismatchError : public Error {
public:
    using Error::Error;
};

class BoundaryFileError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace hsadet
