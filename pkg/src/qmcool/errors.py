"""Exception types shared across the package.

Two failure families matter operationally: bad user-supplied configuration
(reported as exit code 2 by the CLI) and violated internal invariants such as
a non-physical channel or a second-law breach (exit code 3).
"""


class ConfigError(ValueError):
    """User-supplied configuration is malformed or inconsistent."""


class ValidationError(ValueError):
    """A state, operator, or parameter failed a structural invariant."""


class SecondLawViolation(RuntimeError):
    """An engine cycle produced beta1*dE1 + beta2*dE2 below tolerance.

    For a unital measurement channel acting on a product of Gibbs states this
    quantity is non-negative, so a violation signals a non-physical channel
    or a bug rather than interesting physics.
    """
