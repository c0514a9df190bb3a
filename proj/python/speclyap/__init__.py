from ._core import (
    bessel_j,
    bessel_zero,
    run_cli,
    simulate,
    solve_dense_lyapunov,
    solve_lyapunov,
    spectrum,
)

__all__ = [
    "bessel_j",
    "bessel_zero",
    "run_cli",
    "simulate",
    "solve_dense_lyapunov",
    "solve_lyapunov",
    "spectrum",
]
