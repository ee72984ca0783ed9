#pragma once

#include <stdexcept>
#include <string>

namespace einsvd {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Incompatible shapes, extents, or mode splits.
class shape_error : public error {
public:
    explicit shape_error(const std::string& what) : error(what) {}
};

/// Multi-index or mode outside the valid range.
class index_error : public error {
public:
    explicit index_error(const std::string& what) : error(what) {}
};

/// Caller violated a documented precondition (non-unit start tensor, k > m, ...).
class precondition_error : public error {
public:
    explicit precondition_error(const std::string& what) : error(what) {}
};

/// Numerical failure: NaN/Inf encountered, iteration did not converge.
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& what) : error(what) {}
};

/// Problem exceeds the documented size cap of a dense code path.
class capacity_error : public error {
public:
    explicit capacity_error(const std::string& what) : error(what) {}
};

/// File I/O failure or malformed file contents.
class io_error : public error {
public:
    explicit io_error(const std::string& what) : error(what) {}
};

} // namespace einsvd
