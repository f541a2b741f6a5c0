#pragma once

#include <stdexcept>
#include <string>

namespace wkam {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// model
struct DomainError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct NotYetComputed : Error { using Error::Error; };

// bellman
struct ContractionViolation : Error { using Error::Error; };
struct DiscountTooLarge : Error { using Error::Error; };
struct NotAFixedPoint : Error { using Error::Error; };

struct MaxIterExceeded : Error {
    MaxIterExceeded(const std::string& what, double residual_)
        : Error(what), residual(residual_) {}
    double residual;
};

// critical
struct NegativeCycle : Error { using Error::Error; };
struct EmptyAubry : Error { using Error::Error; };

// mather
struct CycleExplosion : Error { using Error::Error; };
struct LpInfeasible : Error { using Error::Error; };
struct LpUnbounded : Error { using Error::Error; };

// limit
struct DegenerateWeight : Error { using Error::Error; };
struct PreconditionFailed : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };

// occupation
struct TailNotDecaying : Error { using Error::Error; };

// cli
struct ConfigError : Error { using Error::Error; };
struct RefinementNotDecreasing : Error { using Error::Error; };

} // namespace wkam
