#pragma once

#include <stdexcept>
#include <string>

namespace washtrace {

// Unreadable or unwritable files.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Structurally invalid input (missing CSV columns, inconsistent config,
// depth requests beyond what a linkability network was built with).
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace washtrace
