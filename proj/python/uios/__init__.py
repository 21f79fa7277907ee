# Copyright 2026 The uios Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Evidential Dirichlet open-set classification with uncertainty thresholding."""

from ._core import (
    CalibrationError,
    DataError,
    DomainError,
    Error,
    NumericError,
    ShapeError,
    UsageError,
    binary_auc,
    calibrate,
    compare,
    digamma,
    evaluate,
    gen_data,
    kl_loss,
    log_gamma,
    ood_eval,
    opinion_from_alpha,
    opinion_from_outputs,
    predict,
    schedule_at,
    select_threshold,
    softplus,
    tce_loss,
    train,
    trigamma,
    tun_loss,
    unce_loss,
)

__all__ = [
    "CalibrationError",
    "DataError",
    "DomainError",
    "Error",
    "NumericError",
    "ShapeError",
    "UsageError",
    "binary_auc",
    "calibrate",
    "compare",
    "digamma",
    "evaluate",
    "gen_data",
    "kl_loss",
    "log_gamma",
    "ood_eval",
    "opinion_from_alpha",
    "opinion_from_outputs",
    "predict",
    "schedule_at",
    "select_threshold",
    "softplus",
    "tce_loss",
    "train",
    "trigamma",
    "tun_loss",
    "unce_loss",
]
