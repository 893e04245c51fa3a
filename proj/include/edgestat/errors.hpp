#pragma once

#include <stdexcept>
#include <string>

namespace edgestat {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Raised when a node-doubling check disagrees; carries both estimates.
struct AccuracyError : std::runtime_error {
    AccuracyError(const std::string& what, double coarse, double fine)
        : std::runtime_error(what), coarse(coarse), fine(fine) {}
    double coarse;
    double fine;
};

struct SamplerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace edgestat

namespace edgestat {

// A sampled diagonal entry reached w_c; the caller redraws.
struct CutoffViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace edgestat
