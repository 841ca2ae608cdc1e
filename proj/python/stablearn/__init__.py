# Copyright 2026 The stablearn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Python bindings for stablearn."""

import json as _json

from ._stablearn import *  # noqa: F401,F403
from ._stablearn import run_experiment_json


def run_experiment(mode, n, t, eps, delta, trials, seed, **kwargs):
    """Runs a harness experiment and returns the report as a dict."""
    return _json.loads(run_experiment_json(mode, n, t, eps, delta, trials, seed, **kwargs))
