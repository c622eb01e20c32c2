// errors.hpp: exception types shared by all ncorr modules.

#pragma once

#include <stdexcept>
#include <string>

namespace ncorr {

// A requested Fock index does not fit into the retained cutoff.
struct cutoff_exceeded : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// The truncated representation would silently distort the requested quantity.
struct truncation_risk : std::domain_error {
    using std::domain_error::domain_error;
};

// A physical parameter outside its admissible range (negative n̄, r < 0, ...).
struct invalid_parameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Shape / arity mismatches between inputs.
struct invalid_argument : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Enumeration would exceed the configured subset budget.
struct combinatorial_limit : std::length_error {
    using std::length_error::length_error;
};

}  // namespace ncorr
