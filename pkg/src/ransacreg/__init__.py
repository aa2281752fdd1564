"""3D rigid registration: RANSAC with pluggable hypothesis-evaluation metrics.

The package implements a full correspondence-based registration pipeline
(minimal 3-point solver, seeded RANSAC, ten scoring functions) plus a
synthetic benchmark harness for comparing metrics under controlled inlier
ratios, noise, decimation, and missing data.
"""

from .errors import (BadConfig, DegenerateSample, EmptyCloud,
                     EmptyGroundTruth, InsufficientPairs, InvalidInput,
                     InvalidSpec, KTooLarge, MissingClouds, ParseError,
                     PersistentDegeneracy, RansacRegError,
                     TooFewCorrespondences, TooFewPoints, UnsupportedFormat)
from .geom import (PointCloud, RigidTransform, cloud_resolution,
                   estimate_rigid_transform, rotation_about_axis,
                   triangle_area)
from .spatial import NeighborIndex, build_index
from .metrics import (CLOUD_KINDS, CORRESPONDENCE_KINDS, PROPOSED_KINDS,
                      Correspondence, CorrespondenceSet, HypothesisScore,
                      MetricKind, MetricSpec, evaluate_hypothesis,
                      evaluate_hypothesis_cloud, score_correspondence,
                      score_errors, transformation_error,
                      transformation_errors)
from .ransac import (RansacConfig, RegistrationResult, run_ransac,
                     sample_minimal)
from .synth import (CorrespondenceConfig, SceneConfig, ScenePair,
                    add_gaussian_noise, decimate_random, decimate_uniform,
                    generate_correspondences, generate_scene, punch_holes)
from .evalbench import (EvalConfig, ExperimentRow, MetricPlan, SWEEP_AXES,
                        is_correct, rmse, run_experiment,
                        time_metric_evaluation)
from .cloudio import parse_cloud_file, write_cloud_file

__version__ = "0.1.0"

__all__ = [
    "BadConfig", "DegenerateSample", "EmptyCloud", "EmptyGroundTruth",
    "InsufficientPairs", "InvalidInput", "InvalidSpec", "KTooLarge",
    "MissingClouds", "ParseError", "PersistentDegeneracy", "RansacRegError",
    "TooFewCorrespondences", "TooFewPoints", "UnsupportedFormat",
    "PointCloud", "RigidTransform", "cloud_resolution",
    "estimate_rigid_transform", "rotation_about_axis", "triangle_area",
    "NeighborIndex", "build_index",
    "CLOUD_KINDS", "CORRESPONDENCE_KINDS", "PROPOSED_KINDS",
    "Correspondence", "CorrespondenceSet", "HypothesisScore", "MetricKind",
    "MetricSpec", "evaluate_hypothesis", "evaluate_hypothesis_cloud",
    "score_correspondence", "score_errors", "transformation_error",
    "transformation_errors",
    "RansacConfig", "RegistrationResult", "run_ransac", "sample_minimal",
    "CorrespondenceConfig", "SceneConfig", "ScenePair", "add_gaussian_noise",
    "decimate_random", "decimate_uniform", "generate_correspondences",
    "generate_scene", "punch_holes",
    "EvalConfig", "ExperimentRow", "MetricPlan", "SWEEP_AXES", "is_correct",
    "rmse", "run_experiment", "time_metric_evaluation",
    "parse_cloud_file", "write_cloud_file",
    "__version__",
]
