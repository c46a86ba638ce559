"""Error taxonomy shared across the package.

Three failure classes cover every operation contract:

* ``InvalidArgument`` -- the caller violated a precondition (bad shape,
  out-of-range value, unknown id inside an otherwise valid request).
* ``ConfigError``     -- a missing or inconsistent configuration item
  (unknown extractor, missing checkpoint, unregistered backend).
* ``NumericFailure``  -- the computation itself broke down (non-finite
  activations, non-PSD covariance beyond tolerance, divergence).
"""


class InvalidArgument(ValueError):
    pass


class ConfigError(ValueError):
    pass


class NumericFailure(RuntimeError):
    pass
