# Copyright 2026 The trajkanon Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Trajectory k-anonymization: partitioning, alignment and clustering."""

import json as _json

from ._core import (
    DEFAULT_REGION,
    AnonymityViolation,
    BoundingBox,
    ConfigError,
    DomainError,
    EmptyTrajectoryError,
    Error,
    Grid,
    GridTree,
    InfeasibleError,
    OutOfBoundsError,
    ParseError,
    StageError,
    Trajectory,
    TrajPoint,
    adaptive_dbscan,
    compare,
    distance,
    dsa,
    iterative_kmeans,
    partition,
    psa,
    read_trajectories_csv,
    synthetic_dataset,
    trajectories_to_csv,
)
from . import _core


def run(trajectories, **options):
    """Anonymize `trajectories`; returns (report dict, published records)."""
    report, published = _core.run(trajectories, **options)
    return _json.loads(report), published


def run_config(input, **options):
    """Run on a file or directory, writing outputs when out_dir is given."""
    return _json.loads(_core.run_config(input, **options))


__all__ = [name for name in dir() if not name.startswith("_")]
