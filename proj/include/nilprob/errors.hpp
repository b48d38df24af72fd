#pragma once

#include <stdexcept>
#include <string>

namespace nilprob {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CapExceeded : Error {
    using Error::Error;
};
struct SizeCap : Error {
    using Error::Error;
};
struct InvalidElement : Error {
    using Error::Error;
};
struct NotNormal : Error {
    using Error::Error;
};
struct NotPGroup : Error {
    using Error::Error;
};
struct ArityMismatch : Error {
    using Error::Error;
};
struct ChainInvalid : Error {
    using Error::Error;
};
struct NotCoprime : Error {
    using Error::Error;
};
struct UnknownGroup : Error {
    using Error::Error;
};
struct NonIntegerResult : Error {
    using Error::Error;
};
struct PreconditionFailed : Error {
    using Error::Error;
};

struct ParseError : Error {
    int line = 0;
    ParseError(const std::string& msg, int line_no)
        : Error("parse error at line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
    explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

}  // namespace nilprob
