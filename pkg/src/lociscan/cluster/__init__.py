from .centroids import Centroid, CentroidProvenance, extract_centroids
from .dbscan import active_kernel, available_kernels, dbscan
from .features import FeatureBuild, FeatureSpace, build_features
from .kmeans import KMeansResult, kmeans
from .labeling import ClusterLabeling
from .scaling import ScaledMatrix, standard_scale

__all__ = [
    "Centroid",
    "CentroidProvenance",
    "ClusterLabeling",
    "FeatureBuild",
    "FeatureSpace",
    "KMeansResult",
    "ScaledMatrix",
    "active_kernel",
    "available_kernels",
    "build_features",
    "dbscan",
    "extract_centroids",
    "kmeans",
    "standard_scale",
]
