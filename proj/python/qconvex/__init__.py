"""Quasi-concavity checks, convexity losses and convexification for 2D masks.

Arrays are 2D float64 numpy arrays indexed [x, y]: the first axis is x (rows),
the second is y (columns).
"""

from ._core import (
    CgpmConfig,
    ConditionConfig,
    LossConfig,
    apply_adjoint,
    apply_stencil,
    brute_force_quasiconcave,
    cgpm,
    check_first_order,
    check_second_order,
    check_zero_order,
    curvature_field,
    gradient_check,
    half_disk_ratio,
    hull_deficit,
    loss,
    loss_gradient,
    make_offsets,
    make_shape,
    midpoint_convexify,
    q2_field,
    read_field,
    write_field,
)

__all__ = [
    "CgpmConfig",
    "ConditionConfig",
    "LossConfig",
    "apply_adjoint",
    "apply_stencil",
    "brute_force_quasiconcave",
    "cgpm",
    "check_first_order",
    "check_second_order",
    "check_zero_order",
    "curvature_field",
    "gradient_check",
    "half_disk_ratio",
    "hull_deficit",
    "loss",
    "loss_gradient",
    "make_offsets",
    "make_shape",
    "midpoint_convexify",
    "q2_field",
    "read_field",
    "write_field",
]
