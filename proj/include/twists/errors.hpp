#pragma once

#include <stdexcept>

namespace twists {

// A caller violated an operation's stated precondition (CLI exit code 2).
struct precondition_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A configured effort bound ran out before a definite answer (CLI exit code 3).
// Never signals a wrong answer, only an incomplete one.
struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace twists
