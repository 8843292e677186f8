#pragma once

#include <stdexcept>
#include <string>

namespace beltrami {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input field contains NaN or Inf.
class NonFiniteInput : public Error {
public:
    explicit NonFiniteInput(const std::string& msg) : Error(msg) {}
};

// Direction field is not unit length within tolerance.
class NotUnit : public Error {
public:
    explicit NotUnit(const std::string& msg) : Error(msg) {}
};

// |grad f| fell below the requested floor somewhere on the grid.
class GradientTooSmall : public Error {
public:
    explicit GradientTooSmall(const std::string& msg) : Error(msg) {}
};

// Principal directions are not well defined (umbilic within tolerance)
// and the caller demanded a principal frame.
class AmbiguousPrincipalDirections : public Error {
public:
    explicit AmbiguousPrincipalDirections(const std::string& msg) : Error(msg) {}
};

// Evaluation outside the domain of ln/sqrt, division by zero, or an ODE
// interval crossing a coordinate singularity.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// Unbound variable during expression evaluation.
class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& msg) : Error(msg) {}
};

// Expression parse failure; carries the byte offset of the offending token.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

// Damped Newton failed to reduce the residual down to the damping floor.
class NewtonDiverged : public Error {
public:
    explicit NewtonDiverged(const std::string& msg) : Error(msg) {}
};

// Cauchy marching: |u3| dropped below the configured floor.
class U3Vanished : public Error {
public:
    explicit U3Vanished(const std::string& msg) : Error(msg) {}
};

// Cauchy marching: field norm exceeded the blow-up guard.
class BlowUp : public Error {
public:
    explicit BlowUp(const std::string& msg) : Error(msg) {}
};

// Level-surface evolution left the grid.
class StepOutOfDomain : public Error {
public:
    explicit StepOutOfDomain(const std::string& msg) : Error(msg) {}
};

// Level-surface evolution: initial data violates the tangential system.
class IncompatibleInitialData : public Error {
public:
    explicit IncompatibleInitialData(const std::string& msg) : Error(msg) {}
};

// PlanarCR oracle: the supplied (w, v) pair is not a Cauchy-Riemann pair.
class CRViolation : public Error {
public:
    explicit CRViolation(const std::string& msg) : Error(msg) {}
};

}  // namespace beltrami
