#pragma once

#include <stdexcept>
#include <string>

namespace svcj {

// Base class for all library errors so callers can catch one type.
class error : public std::runtime_error {
public:
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid parameter set, config value, or argument.
class validation_error : public error {
public:
    explicit validation_error(const std::string& msg) : error(msg) {}
};

// Malformed input file contents (bad row, bad date, bad number).
class parse_error : public error {
public:
    explicit parse_error(const std::string& msg) : error(msg) {}
};

// Structurally valid file with the wrong column set.
class schema_error : public error {
public:
    explicit schema_error(const std::string& msg) : error(msg) {}
};

// Rows out of chronological order.
class order_error : public error {
public:
    explicit order_error(const std::string& msg) : error(msg) {}
};

// Parsed value outside its legal range (e.g. price <= 0).
class value_error : public error {
public:
    explicit value_error(const std::string& msg) : error(msg) {}
};

// Two rows carry the same date.
class duplicate_date_error : public error {
public:
    explicit duplicate_date_error(const std::string& msg) : error(msg) {}
};

// Filesystem-level failure (missing file, unwritable path).
class io_error : public error {
public:
    explicit io_error(const std::string& msg) : error(msg) {}
};

// Degenerate conditional in the sampler (non-positive variance, non-finite value).
class numerical_error : public error {
public:
    explicit numerical_error(const std::string& msg) : error(msg) {}
};

} // namespace svcj
