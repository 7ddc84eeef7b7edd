"""Numerical inverse-scattering toolkit for the massive Thirring model."""

__version__ = "0.1.0"

from .core import (  # noqa: F401
    FieldState,
    Grid1D,
    ScatteringData,
    SpectralGrid,
    charge,
    gamma,
    make_spectral_grid,
    read_field_csv,
    read_scattering_json,
    write_field_csv,
    write_scattering_json,
)
