# Copyright 2026 The gausstomo Authors
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

"""Gaussian-state covariance tomography.

Thin Python layer over the C++ core. Matrices are numpy arrays in
(x_1..x_M, p_1..p_M) ordering with vacuum = identity.
"""

__path__ = __import__("pkgutil").extend_path(__path__, __name__)

from gausstomo._core import (  # noqa: E402
    Dataset,
    GausstomoError,
    __version__,
    analyze,
    apply_loss,
    bench,
    bloch_messiah,
    build_state,
    cayley,
    cayley_inverse,
    fidelity,
    ghz_state,
    graph_state,
    is_physical,
    is_symplectic,
    omega,
    ppt_min_eigenvalue,
    read_dataset,
    reconstruct_direct,
    reconstruct_mle,
    sample,
    settings,
    squeezing_db_to_r,
    symplectic_eigenvalues,
    williamson,
)

__all__ = [
    "Dataset",
    "GausstomoError",
    "__version__",
    "analyze",
    "apply_loss",
    "bench",
    "bloch_messiah",
    "build_state",
    "cayley",
    "cayley_inverse",
    "fidelity",
    "ghz_state",
    "graph_state",
    "is_physical",
    "is_symplectic",
    "omega",
    "ppt_min_eigenvalue",
    "read_dataset",
    "reconstruct_direct",
    "reconstruct_mle",
    "sample",
    "settings",
    "squeezing_db_to_r",
    "symplectic_eigenvalues",
    "williamson",
]
