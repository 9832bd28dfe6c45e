#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cqad {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid physical input (non-positive lengths, out-of-range K2, ...).
struct DomainError : Error {
    using Error::Error;
};

// cos(2 pi phi) within 1e-9 of zero.
struct FluxDivergenceError : DomainError {
    using DomainError::DomainError;
};

// cos(2 pi phi) < 0: negative inductance, no atom frequency.
struct FluxBranchError : DomainError {
    using DomainError::DomainError;
};

struct GateDisabledError : Error {
    using Error::Error;
};

struct NotSplitError : Error {
    using Error::Error;
};

struct PoleSearchError : Error {
    PoleSearchError(const std::string& what, std::vector<std::complex<double>> c)
        : Error(what), candidates(std::move(c)) {}
    std::vector<std::complex<double>> candidates;
};

struct InstabilityError : Error {
    InstabilityError(const std::string& what, std::size_t s) : Error(what), step(s) {}
    std::size_t step;
};

struct CoverageError : Error {
    CoverageError(const std::string& what, double m) : Error(what), margin_db(m) {}
    double margin_db;
};

struct ConservationError : Error {
    using Error::Error;
};

// Scenario validation failure; path is a JSON-pointer-like field path.
struct ConfigError : Error {
    ConfigError(std::string p, const std::string& msg)
        : Error(p + ": " + msg), path(std::move(p)) {}
    std::string path;
};

}  // namespace cqad
