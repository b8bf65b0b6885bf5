from .distances import (
    DistanceComponent,
    DistanceSpec,
    EuclideanDistance,
    IndicatorDistance,
    MatrixFileDistance,
    distance_spec_from_config,
    parse_distance_component,
)
from .population import Population, distance, load_population

__all__ = [
    "DistanceComponent",
    "DistanceSpec",
    "EuclideanDistance",
    "IndicatorDistance",
    "MatrixFileDistance",
    "Population",
    "distance",
    "distance_spec_from_config",
    "load_population",
    "parse_distance_component",
]
