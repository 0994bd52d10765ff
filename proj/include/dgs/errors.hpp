#pragma once

#include <stdexcept>
#include <string>

namespace dgs {

// Base class for every failure this library reports on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// degree_model
struct EmptySequence : Error { using Error::Error; };
struct UnbalancedSums : Error { using Error::Error; };
struct DegreeTooSmall : Error { using Error::Error; };
struct SizeMismatch : Error { using Error::Error; };

// config_sampler / enumeration caps
struct TooLarge : Error { using Error::Error; };

// half-edge typing
struct KindMismatch : Error { using Error::Error; };

// numerics
struct ConvergenceFailure : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };
struct DegenerateInnerProduct : Error { using Error::Error; };
struct Overflow : Error { using Error::Error; };

// paths and tangles
struct InconsistentPath : Error { using Error::Error; };
struct NotTangleFree : Error { using Error::Error; };
struct BadEll : Error { using Error::Error; };

// Markov-chain structure
struct Reducible : Error { using Error::Error; };
struct Periodic : Error { using Error::Error; };

// experiment runner
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace dgs
