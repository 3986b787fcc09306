"""Newton maps of g(z) = int_0^z p(t) e^{q(t)} dt + c: evaluation, orbits and Julia-set measures."""

from ._core import (
    NumericError,
    Problem,
    density,
    gamma_solve,
    render_basins,
    run,
)

__all__ = ["NumericError", "Problem", "density", "gamma_solve", "render_basins", "run"]
