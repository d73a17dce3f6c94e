#pragma once

#include <stdexcept>
#include <string>

namespace wireoff {

enum class ErrorKind {
    Domain,
    Alignment,
    Fit,
    Tune,
    Validation,
    Estimation,
    Simulation,
    Parse,
    Gap,
    Io,
    NotFound,
    Conflict,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every error the engine raises. The kind maps one-to-one onto the
/// C API status codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define WIREOFF_DEFINE_ERROR(Name, Kind)                                         \
    class Name : public Error {                                                  \
    public:                                                                      \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
    }

WIREOFF_DEFINE_ERROR(DomainError, Domain);
WIREOFF_DEFINE_ERROR(AlignmentError, Alignment);
WIREOFF_DEFINE_ERROR(TuneError, Tune);
WIREOFF_DEFINE_ERROR(ValidationError, Validation);
WIREOFF_DEFINE_ERROR(EstimationError, Estimation);
WIREOFF_DEFINE_ERROR(SimulationError, Simulation);
WIREOFF_DEFINE_ERROR(IoError, Io);
WIREOFF_DEFINE_ERROR(NotFoundError, NotFound);
WIREOFF_DEFINE_ERROR(ConflictError, Conflict);

#undef WIREOFF_DEFINE_ERROR

class FitError : public Error {
public:
    explicit FitError(const std::string& what, double final_objective = 0.0)
        : Error(ErrorKind::Fit, what), final_objective_(final_objective) {}
    double final_objective() const noexcept { return final_objective_; }

private:
    double final_objective_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, long line) : Error(ErrorKind::Parse, what), line_(line) {}
    long line() const noexcept { return line_; }

private:
    long line_;
};

class GapError : public Error {
public:
    GapError(const std::string& what, std::string vendor, long long first_missing, long long last_missing)
        : Error(ErrorKind::Gap, what),
          vendor_(std::move(vendor)),
          first_missing_(first_missing),
          last_missing_(last_missing) {}
    const std::string& vendor() const noexcept { return vendor_; }
    long long first_missing() const noexcept { return first_missing_; }
    long long last_missing() const noexcept { return last_missing_; }

private:
    std::string vendor_;
    long long first_missing_;
    long long last_missing_;
};

}  // namespace wireoff
