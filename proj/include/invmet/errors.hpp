#pragma once

#include <stdexcept>
#include <string>

namespace invmet {

// Error hierarchy shared by all modules. Every failure mode the library
// reports maps onto one of these; callers that want a single catch point
// can catch invmet::error.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Vector length or coordinate-count mismatch.
class dimension_error : public error {
public:
    explicit dimension_error(const std::string& what) : error(what) {}
};

/// Point not where an operation requires it (outside domain, delta too large, ...).
class geometry_error : public error {
public:
    explicit geometry_error(const std::string& what) : error(what) {}
};

/// An iterative search did not reach its tolerance.
class convergence_error : public error {
public:
    explicit convergence_error(const std::string& what) : error(what) {}
};

/// Invalid scalar parameter (negative delta, beta = 0, xi <= 1, ...).
class parameter_error : public error {
public:
    explicit parameter_error(const std::string& what) : error(what) {}
};

/// Unsupported variant / bad config file / unknown key.
class configuration_error : public error {
public:
    explicit configuration_error(const std::string& what) : error(what) {}
};

/// Functional fails its contract (projection not into the unit disk, sup > 1).
class functional_error : public error {
public:
    explicit functional_error(const std::string& what) : error(what) {}
};

/// Disk evaluated outside its radius of definition.
class disk_domain_error : public error {
public:
    explicit disk_domain_error(const std::string& what) : error(what) {}
};

/// A construction whose numerical verification failed (Hartogs figure grid).
class construction_error : public error {
public:
    explicit construction_error(const std::string& what) : error(what) {}
};

/// Operation invoked on inputs violating its documented precondition.
class precondition_error : public error {
public:
    explicit precondition_error(const std::string& what) : error(what) {}
};

} // namespace invmet
