#ifndef FRIRIDGE_ERRORS_HPP
#define FRIRIDGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace friridge {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller-supplied value violates a precondition.
class InvalidParameterError : public Error {
public:
    explicit InvalidParameterError(const std::string& what) : Error(what) {}
};

/// Kernel spectrum decays below the invertibility floor for the requested bandlimit.
class IllConditionedKernelError : public Error {
public:
    explicit IllConditionedKernelError(const std::string& what) : Error(what) {}
};

/// A structured linear system is rank-deficient (coincident or missing pulses).
class DegenerateSystemError : public Error {
public:
    explicit DegenerateSystemError(const std::string& what) : Error(what) {}
};

/// An iterative numerical routine failed to converge.
class NumericalFailureError : public Error {
public:
    explicit NumericalFailureError(const std::string& what) : Error(what) {}
};

/// Every frame of a run failed; there is no result to report.
class PipelineFailureError : public Error {
public:
    explicit PipelineFailureError(const std::string& what) : Error(what) {}
};

} // namespace friridge

#endif // FRIRIDGE_ERRORS_HPP
