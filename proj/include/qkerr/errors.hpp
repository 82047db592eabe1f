#pragma once

#include <stdexcept>
#include <string>

namespace qkerr {

// Base for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid values or violated preconditions. Maps to CLI exit code 2.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Mismatched grid geometries.
class ShapeError : public DomainError {
public:
    explicit ShapeError(const std::string& msg) : DomainError(msg) {}
};

// Device-file or field-grid ingestion failure; carries file/line context.
class ParseError : public Error {
public:
    ParseError(const std::string& path, int line, const std::string& msg)
        : Error(path + ":" + std::to_string(line) + ": " + msg),
          path_(path), line_(line) {}
    ParseError(const std::string& path, const std::string& msg)
        : Error(path + ": " + msg), path_(path), line_(0) {}

    const std::string& path() const { return path_; }
    int line() const { return line_; }

private:
    std::string path_;
    int line_;
};

// Solver or bracketing failure. Maps to CLI exit code 3.
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(msg) {}
};

// c4(flux) keeps one sign over the search interval: the device has no
// Kerr-cancellation bias in (0, 0.5).
class NoKerrFreePoint : public NumericalError {
public:
    explicit NoKerrFreePoint(const std::string& msg) : NumericalError(msg) {}
};

// Re eps(omega) has no root on the search interval.
class NoEnzPoint : public NumericalError {
public:
    explicit NoEnzPoint(const std::string& msg) : NumericalError(msg) {}
};

// |eps| below the guard threshold: the quartic scale formula diverges.
class SingularityError : public NumericalError {
public:
    explicit SingularityError(const std::string& msg) : NumericalError(msg) {}
};

// A bare occupation label could not be assigned to any eigenvector with
// fidelity > 0.5; the perturbative labeling assumption is violated.
class StrongMixing : public NumericalError {
public:
    StrongMixing(const std::string& label, double fidelity)
        : NumericalError("strong mixing at label " + label +
                         " (best fidelity " + std::to_string(fidelity) + " <= 0.5)"),
          label_(label), fidelity_(fidelity) {}

    const std::string& label() const { return label_; }
    double fidelity() const { return fidelity_; }

private:
    std::string label_;
    double fidelity_;
};

// Requested operation is not defined for the device's platform.
class UnsupportedPlatform : public DomainError {
public:
    explicit UnsupportedPlatform(const std::string& msg) : DomainError(msg) {}
};

} // namespace qkerr
