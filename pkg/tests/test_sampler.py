"""Generator/checker coherence and deterministic batch search."""

import numpy as np
import pytest

from liftlab import linalg
from liftlab.errors import UnknownClassError
from liftlab.sampler import (
    gen_quasi_isometry,
    gen_quasicontraction,
    gen_shifted_host,
    gen_strict_similarity,
    search,
)
from liftlab.verify import is_quasi_isometry, is_quasicontraction, quasi_isometry_residual


class TestGenerators:
    def test_quasi_isometries_pass_their_predicate(self):
        for seed in range(100):
            t = gen_quasi_isometry((2, 8), 1 + seed % 2, seed=seed)
            assert quasi_isometry_residual(t) <= 1e-12

    def test_quasi_isometry_kernel_dimension(self):
        t = gen_quasi_isometry(5, 2, seed=3)
        assert linalg.kernel_basis(t.conj().T).dim == 2

    def test_quasicontractions_pass_their_predicate(self):
        for seed in range(60):
            t = gen_quasicontraction((2, 6), seed=seed)
            assert is_quasicontraction(t)

    def test_strict_similarity_certified_by_trichotomy(self):
        t, cert = gen_strict_similarity(4, 0.7, seed=9)
        res = linalg.spectral_radius_trichotomy(t)
        assert res.verdict == "LT_ONE"
        tt = t.conj().T @ t
        tat = t.conj().T @ cert.matrix @ t
        assert linalg.psd_compare(tt, tat).leq
        assert linalg.psd_compare(tat, cert.matrix).leq

    def test_shifted_host_algebra(self):
        # T*T <= T*^2 T^2 = T*^3 T^3 on exact windows, for 100 seeded hosts
        for seed in range(100):
            a = 1.0 + (seed % 5) * 0.3
            host = gen_shifted_host(a, 1 + seed % 3, seed=seed)
            g = 3
            t1 = host.t_rect(g)
            t2 = host.t_rect(g + 1) @ t1
            t3 = host.t_rect(g + 2) @ t2
            g1 = t1.conj().T @ t1
            g2 = t2.conj().T @ t2
            g3 = t3.conj().T @ t3
            scale = max(linalg.spectral_norm(g1), 1.0)
            assert linalg.psd_compare(g1, g2, 1e-10 * scale).leq
            assert linalg.spectral_norm(g3 - g2) <= 1e-10 * scale
            # expansive backbone: W*W >= I on the fiber part
            w_gram = g1[: g + 1, : g + 1]
            assert linalg.psd_compare(np.eye(g + 1), w_gram, 1e-10).leq

    def test_host_with_unit_weight_is_quasi_isometry(self):
        host = gen_shifted_host(1.0, 2, seed=4)
        t1 = host.t_rect(3)
        t2 = host.t_rect(4) @ t1
        assert (
            linalg.spectral_norm(t2.conj().T @ t2 - t1.conj().T @ t1) <= 1e-12
        )

    def test_determinism(self):
        a1 = gen_quasi_isometry((2, 6), 1, seed=77)
        a2 = gen_quasi_isometry((2, 6), 1, seed=77)
        np.testing.assert_array_equal(a1, a2)
        h1 = gen_shifted_host(1.5, 2, seed=5)
        h2 = gen_shifted_host(1.5, 2, seed=5)
        np.testing.assert_array_equal(h1.t0, h2.t0)

    def test_bad_arguments(self):
        with pytest.raises(ValueError):
            gen_quasi_isometry(4, 0, seed=1)
        with pytest.raises(ValueError):
            gen_strict_similarity(3, 1.2, seed=1)
        with pytest.raises(ValueError):
            gen_shifted_host(1.0, 0, seed=1)


class TestSearch:
    def test_quasicontraction_batch_clean(self):
        out = search("quasicontraction", (2, 5), trials=60, seed=11)
        assert out.trials == 60
        assert out.violations == []
        assert "accepted_by_dim" in out.telemetry

    def test_symmetry_class_always_refutes(self):
        out = search("symmetry_similarity", (2, 6), trials=20, seed=2)
        assert out.violations == []

    def test_shifted_host_batch_clean(self):
        out = search("shifted_host", (1, 3), trials=20, seed=3)
        assert out.violations == []

    def test_strict_similarity_batch_clean(self):
        out = search("strict_similarity", (2, 5), trials=15, seed=4)
        assert out.violations == []

    def test_quasi_isometry_batch_clean(self):
        out = search("quasi_isometry", (2, 5), trials=25, seed=5)
        assert out.violations == []

    def test_unknown_class_and_zero_trials(self):
        with pytest.raises(UnknownClassError):
            search("nope", (2, 4), trials=1, seed=0)
        with pytest.raises(ValueError):
            search("quasicontraction", (2, 4), trials=0, seed=0)

    def test_search_determinism(self):
        o1 = search("quasicontraction", (2, 4), trials=10, seed=42)
        o2 = search("quasicontraction", (2, 4), trials=10, seed=42)
        assert o1.to_obj() == o2.to_obj()
