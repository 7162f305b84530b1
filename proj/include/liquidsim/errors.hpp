#pragma once

#include <stdexcept>
#include <string>

namespace liquidsim {

// Parameter fails a domain precondition (sign, range, shape).
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// eta_tilde <= 0: the quadratic cost model loses convexity.
struct ConvexityViolation : InvalidParameter {
    using InvalidParameter::InvalidParameter;
};

// Trajectory violates sell-only / monotonicity constraints.
struct InvalidTrajectory : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Scenario inputs inconsistent (partition does not sum to X, ...).
struct InvalidScenario : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// step() called on a finished episode.
struct EpisodeFinished : std::logic_error {
    using std::logic_error::logic_error;
};

// Terminal-only query issued mid-episode.
struct IncompleteEpisode : std::logic_error {
    using std::logic_error::logic_error;
};

struct InvalidAction : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Reward scheme or preset applied to an incompatible agent set.
struct UnsupportedConfiguration : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Non-finite gradients reached the optimizer.
struct TrainingDivergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config text failed to parse or validate; message names the key.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace liquidsim
