"""Numerical amoebas of plane curves."""

from .analysis import (
    AreaEstimate,
    ComplementComponent,
    ComponentResult,
    SpineResult,
    area_estimate,
    complement_components,
    spine,
)
from .contour import log_gauss_contour
from .dequant import (
    complex_points,
    dequant_distances,
    dequant_family,
    hausdorff_distance,
    limit_polynomial,
    rescaled_amoeba_points,
)
from .poly import ComplexLaurentPolynomial
from .ronkin import NumericFailure, RonkinEstimate, circle_log_mean, ronkin_gradient, ronkin_value
from .roots import batch_roots
from .slices import AmoebaRaster, amoeba_raster, amoeba_slice, rng_for, slice_intervals, slice_intervals_batch

__all__ = [
    "AmoebaRaster",
    "AreaEstimate",
    "ComplementComponent",
    "ComplexLaurentPolynomial",
    "ComponentResult",
    "NumericFailure",
    "RonkinEstimate",
    "SpineResult",
    "amoeba_raster",
    "amoeba_slice",
    "area_estimate",
    "batch_roots",
    "circle_log_mean",
    "complement_components",
    "complex_points",
    "dequant_distances",
    "dequant_family",
    "hausdorff_distance",
    "limit_polynomial",
    "log_gauss_contour",
    "rescaled_amoeba_points",
    "rng_for",
    "ronkin_gradient",
    "ronkin_value",
    "slice_intervals",
    "slice_intervals_batch",
    "spine",
]
