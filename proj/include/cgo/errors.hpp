#ifndef CGO_ERRORS_HPP
#define CGO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cgo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration; `field()` names the offending entry.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field))
    {
    }
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double contraction, int iterations)
        : Error(what), contraction_(contraction), iterations_(iterations)
    {
    }
    double contraction() const { return contraction_; }
    int iterations() const { return iterations_; }

private:
    double contraction_;
    int iterations_;
};

class ResonantGridError : public Error {
public:
    ResonantGridError(const std::string& what, double clamp_fraction) : Error(what), fraction_(clamp_fraction) {}
    double clamp_fraction() const { return fraction_; }

private:
    double fraction_;
};

/// Too many failed samples for a Monte Carlo average to be meaningful.
class StatisticalError : public Error {
public:
    using Error::Error;
};

}  // namespace cgo

#endif  // CGO_ERRORS_HPP
