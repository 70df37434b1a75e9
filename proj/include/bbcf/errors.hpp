#pragma once

#include <stdexcept>
#include <string>

namespace bbcf {

// Base for every error the library raises on a violated contract.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class IndexError : public Error {
public:
    using Error::Error;
};

class NotDivisibleError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class OrderTooSmallError : public Error {
public:
    using Error::Error;
};

// Characteristic polynomial does not split over the Gaussian rationals.
class UncertifiableSpectrumError : public Error {
public:
    using Error::Error;
};

class InvalidChartError : public Error {
public:
    using Error::Error;
};

class NotNormalizedError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

// Malformed numeric or document text; the message starts with the location.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
    ParseError(const std::string& location, const std::string& what)
        : Error(location.empty() ? what : location + ": " + what), location_(location) {}
    const std::string& location() const { return location_; }

private:
    std::string location_;
};

}  // namespace bbcf
