# Copyright (c) 2026 The fairsv Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#   http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Fairness benchmarking toolkit for speaker verification.

The heavy lifting lives in the compiled ``_fairsv`` extension; this
package re-exports its types and operations.
"""

from ._fairsv import *  # noqa: F401,F403
from ._fairsv import __version__  # noqa: F401
