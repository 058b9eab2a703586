# Copyright 2026 The efgfom Authors
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


"""Sequence-form distance-generating functions and first-order solvers."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import Error, validate_chain as _validate_chain, validate_game as _validate_game


def validate_game(game, seed=0, threads=0):
    """Invariant report for both players of `game`, as a dict."""
    return _json.loads(_validate_game(game, seed, threads))


def validate_chain(chain, seed=0, threads=0):
    return _json.loads(_validate_chain(chain, seed, threads))


__all__ = [name for name in dir() if not name.startswith("_")]
