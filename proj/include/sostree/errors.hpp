#ifndef SOSTREE_ERRORS_HPP
#define SOSTREE_ERRORS_HPP

#include <stdexcept>

namespace sostree {

// A request exceeded a hard feasibility guard (e.g. the brute-force
// enumeration size limit). Recoverable by asking for less.
struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A cross-checked identity failed. This signals a defect in the library
// itself, never bad user input.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace sostree

#endif
