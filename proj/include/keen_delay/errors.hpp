#pragma once

#include <stdexcept>
#include <string>

namespace keen {

/// Argument outside the domain of a model function (e.g. Phillips curve at lambda >= 1).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A scalar root search found no sign change.
class no_root_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Division by a vanishing quantity or a singular linear system.
class singular_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nondegeneracy condition violated (transversality, normalization).
class degenerate_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Hypothesis of a stability theorem does not hold at the given equilibrium.
class hypothesis_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or run configuration.
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace keen
