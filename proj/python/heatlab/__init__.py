"""Heat content and heat loss of unions of balls in R^m."""

from ._core import (
    Ball,
    BallUnion,
    ConvergenceError,
    Estimate,
    LatticeFamily,
    ball_perimeter,
    ball_volume,
    c_constant,
    classify_regime,
    d_constant,
    fit_power_law,
    functionals_ball,
    heat_content_ball,
    heat_content_mc,
    heat_loss_ball,
    heat_loss_mc,
    lattice_heat_content,
    lattice_heat_loss,
    lens_volume,
    liyau_constant,
    parse_t_grid,
    separation_delta,
    single_ball_remainder_constant,
    verify_decoupling,
    verify_theorem1,
    verify_theorem2,
    zeta,
)

__all__ = [name for name in dir() if not name.startswith("_")]
