#pragma once

#include <stdexcept>
#include <string>

namespace mpmv {

/// A standing market assumption does not hold (r(s) <= 0, zero excess
/// return, or a volatility Gram matrix that is not positive definite).
class AssumptionError : public std::runtime_error {
public:
    explicit AssumptionError(const std::string& what) : std::runtime_error(what) {}
};

/// A mean target that cannot be reached: it does not exceed the pure
/// risk-free terminal wealth, so no positive risk aversion attains it.
class InfeasibleTargetError : public std::runtime_error {
public:
    InfeasibleTargetError(const std::string& what, double bound)
        : std::runtime_error(what), feasibility_bound(bound) {}
    /// Lowest infeasible target: x times the risk-free growth product.
    double feasibility_bound;
};

/// Malformed or insufficient input data (price files, config files).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Two algebraically equivalent routes disagreed beyond tolerance.
class ConsistencyError : public std::logic_error {
public:
    explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace mpmv
