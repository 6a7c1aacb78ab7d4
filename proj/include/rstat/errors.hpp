#ifndef RSTAT_ERRORS_HPP
#define RSTAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace rstat {

/// Error categories. The numeric values double as process exit codes and as
/// the status codes of the C API, so keep them stable.
enum class ErrorCode : int {
    invalid_input = 2,   // schema violations, malformed densities, bad arguments
    numeric = 3,         // non-convergence, conditioning, minimality violations
    class_inapplicable = 4
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct InvalidInputError : Error {
    explicit InvalidInputError(const std::string& what) : Error(ErrorCode::invalid_input, what) {}
};

struct NumericError : Error {
    explicit NumericError(const std::string& what) : Error(ErrorCode::numeric, what) {}
};

struct ClassError : Error {
    explicit ClassError(const std::string& what) : Error(ErrorCode::class_inapplicable, what) {}
};

}  // namespace rstat

#endif
