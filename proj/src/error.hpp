#pragma once

#include <stdexcept>
#include <string>

namespace gsa {

enum class ErrorKind {
    Argument,          // bad parameter or inconsistent inputs
    Capacity,          // request exceeds generator/table limits
    DegenerateModel,   // zero output variance, estimators undefined
    Io,                // file could not be read/written
    Parse,             // malformed file content
    Evaluation,        // external model failed or timed out
    Infeasible,        // no design fits the requested budget
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace gsa
