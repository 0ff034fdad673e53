"""The expansive shifted-host operator family.

A host operator acts on l2_+(C) (+) C^m: the backbone W is a weighted forward
shift with first weight a >= 1 and all later weights 1, and a block T0 maps the
m-dimensional tail into the grade-0 slot (the cokernel of W).  Differences such
as A - T*T for the certificates built on this family vanish outside a finite
core, so every check runs on exact window matrices.
"""

from __future__ import annotations

import numpy as np

from .errors import HypothesesFailed, ShapeMismatchError
from .graded import LiftedSpaceShape, window_dim
from .operators import BaseSpace, LiftingOperator
from . import linalg

__all__ = ["ShiftedHostOperator", "host_norm_wt0"]


class ShiftedHostOperator(LiftingOperator):
    """Weighted-shift backbone with a tail-to-cokernel coupling block."""

    def __init__(self, a: float, t0):
        t0m = linalg.as_matrix(t0)
        if t0m.shape[0] != 1:
            raise ShapeMismatchError("t0 must map the tail into the 1-dim grade-0 slot")
        if a < 1.0:
            raise HypothesesFailed("a >= 1", f"first shift weight {a} is below 1")
        m = t0m.shape[1]
        shape = LiftedSpaceShape(1, (m,))
        super().__init__(
            kind="SHIFTED_HOST_37",
            shape=shape,
            f0=np.array([[a]], dtype=np.complex128),
            c00=np.zeros((1, 1), dtype=np.complex128),
            ct0=t0m.copy(),
            mt=np.zeros((m, m), dtype=np.complex128),
            blocks={"T0": t0m.copy()},
            base=None,
            parent=None,
            meta={"a": float(a), "tail_labels": ["tail"], "claims": []},
        )
        self.a = float(a)
        self.t0 = t0m
        self.m = m

    # -- exact window materializations --------------------------------------
    def t_rect(self, g: int) -> np.ndarray:
        """T as an exact map window(g) -> window(g+1)."""
        from .operators import window_matrix

        return window_matrix(self, g)

    def a_diag(self, g: int, c: float) -> np.ndarray:
        """Certificate operator diag(W*W, c^2 I) on window(g): a^2 at grade 0,
        identity at higher grades, c^2 on the tail."""
        d = np.ones(window_dim(self.shape, g))
        d[0] = self.a ** 2
        d[g + 1 :] = c ** 2
        return np.diag(d).astype(np.complex128)

    def a_power(self, g: int, c: float, exponent: float) -> np.ndarray:
        """A^exponent on window(g) (diagonal, exact for any real exponent)."""
        d = np.ones(window_dim(self.shape, g))
        d[0] = self.a ** 2
        d[g + 1 :] = c ** 2
        return np.diag(d ** exponent).astype(np.complex128)

    def amtt(self, g: int, c: float) -> np.ndarray:
        """A - T*T on window(g): supported on the tail block only."""
        wd = window_dim(self.shape, g)
        out = np.zeros((wd, wd), dtype=np.complex128)
        core = c ** 2 * np.eye(self.m) - self.t0.conj().T @ self.t0
        out[g + 1 :, g + 1 :] = core
        return out

    def amtat(self, g: int, c: float) -> np.ndarray:
        """A - T*AT on window(g): tail block c^2 I - a^2 T0^H T0, zero elsewhere."""
        wd = window_dim(self.shape, g)
        out = np.zeros((wd, wd), dtype=np.complex128)
        core = c ** 2 * np.eye(self.m) - self.a ** 2 * (self.t0.conj().T @ self.t0)
        out[g + 1 :, g + 1 :] = core
        return out


def host_norm_wt0(host: ShiftedHostOperator) -> float:
    """Operator norm of W T0 (the shifted coupling): a * ||T0||."""
    return host.a * linalg.spectral_norm(host.t0)
