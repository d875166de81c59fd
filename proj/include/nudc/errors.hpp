#ifndef NUDC_ERRORS_HPP
#define NUDC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nudc {

/// Base class for all nudc errors. The concrete subclass decides the
/// process exit code when an error escapes the CLI (see tools/).
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or layer wiring (bad channel counts, bad config
/// file keys, out-of-range model settings). CLI exit code 2.
class config_error : public error {
public:
    using error::error;
};

/// API misuse: mismatched tensor shapes between operands, missing or
/// superfluous arguments for a given nesting level. CLI exit code 2.
class contract_error : public error {
public:
    using error::error;
};

/// Tensor shape does not satisfy an operation's precondition
/// (odd dims for pooling, indivisible pyramid dims). CLI exit code 2.
class shape_error : public error {
public:
    using error::error;
};

/// Malformed or unsupported file content (bad magic, truncated payload,
/// unknown TIFF layout). CLI exit code 3.
class format_error : public error {
public:
    using error::error;
};

/// Filesystem-level failure: unreadable/unwritable path. CLI exit code 3.
class io_error : public error {
public:
    using error::error;
};

/// Non-finite value where a finite one is required (NaN loss, NaN
/// gradient). CLI exit code 4.
class numeric_error : public error {
public:
    using error::error;
};

} // namespace nudc

#endif // NUDC_ERRORS_HPP
