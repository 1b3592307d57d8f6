import math

import numpy as np
import pytest

from edgehodge.errors import UnderResolvedSpectrumError
from edgehodge.fibredec import (
    build_fibre,
    circle_mode_eigenvalue,
    export_spectrum_csv,
    fibre_spectrum,
    laplacian_matrix,
    spectrum_for_predicates,
)

from oracles import circle_discrete_eigenvalue


def test_build_circle_cell_counts():
    fib = build_fibre("circle", 8)
    assert fib.complex.dims == (8, 8)
    assert fib.complex.verify()


def test_build_torus_cell_counts():
    fib = build_fibre("torus", (8, 8))
    assert fib.complex.dims == (64, 128, 64)
    assert fib.complex.verify()


def test_torus_equals_product_of_circles():
    t = build_fibre("torus", (8, 6))
    p = build_fibre("product", (8, 6))
    assert t.complex == p.complex
    assert all((a == b).all() for a, b in zip(t.weights, p.weights))


def test_degenerate_sizes_rejected():
    with pytest.raises(ValueError):
        build_fibre("circle", 2)


def test_circle_spectrum_against_analytic_discrete_oracle():
    n, L = 64, 2 * math.pi
    fib = build_fibre("circle", n, L)
    res = fibre_spectrum(fib, 0, 6)
    # frozen oracle values: (2n/L sin(pi m/n))^2 for m = 0,1,1,2,2,3
    for got, m in zip(res.eigenvalues, (0, 1, 1, 2, 2, 3)):
        assert abs(got - circle_discrete_eigenvalue(n, L, m)) < 1e-10
    assert abs(res.eigenvalues[1] - 1.0) < 0.01
    assert circle_mode_eigenvalue(n, L, 1) == pytest.approx(res.eigenvalues[1])


def test_circle_mesh_convergence_rate():
    L = 2 * math.pi
    errs = {}
    for n in (32, 64):
        fib = build_fibre("circle", n, L)
        errs[n] = abs(fibre_spectrum(fib, 0, 2).eigenvalues[1] - 1.0)
    assert 3.5 <= errs[32] / errs[64] <= 4.5


def test_torus_one_form_harmonics():
    fib = build_fibre("torus", (8, 8))
    res = fibre_spectrum(fib, 1, 4, tol=1e-8)
    assert res.harmonic_dim == 2
    assert res.eigenvalues[0] < 1e-12 and res.eigenvalues[1] < 1e-12


def test_constants_harmonic_any_fibre():
    for fib in (build_fibre("circle", 5), build_fibre("torus", (4, 5))):
        res = fibre_spectrum(fib, 0, 1)
        assert res.eigenvalues[0] < 1e-12


def test_scaled_circle_shifts_spectrum():
    fib = build_fibre("circle", 64, scale=math.pi)
    res = fibre_spectrum(fib, 0, 2)
    assert abs(res.eigenvalues[1] - 4.0) < 0.05


def test_coarse_circle_still_has_correct_harmonics():
    spec = spectrum_for_predicates(build_fibre("circle", 3))
    assert spec.zero_multiplicities() == (1, 1)


def test_spectrum_for_predicates_torus_16():
    spec = spectrum_for_predicates(build_fibre("torus", (16, 16)))
    assert spec.zero_multiplicities() == (1, 2, 1)
    assert spec.betti == (1, 2, 1)
    # snapped zeros are stored exactly
    assert spec.eigenvalues(1)[0] == (0, 2)


def test_laplacian_symmetric_and_psd():
    fib = build_fibre("torus", (6, 8))
    for q in range(3):
        s = laplacian_matrix(fib, q)
        assert np.max(np.abs(s - s.T)) <= 1e-15 * max(1.0, np.max(np.abs(s)))
        vals = np.linalg.eigvalsh(s)
        assert vals[0] > -1e-10


def test_torus_hodge_duality_of_spectra():
    spec = spectrum_for_predicates(build_fibre("torus", (8, 8)), count=12)
    s0 = [float(v) for v, m in spec.eigenvalues(0) for _ in range(m)]
    s2 = [float(v) for v, m in spec.eigenvalues(2) for _ in range(m)]
    assert len(s0) == len(s2)
    assert np.allclose(s0, s2, atol=1e-9)


def test_under_resolution_is_an_error():
    fib = build_fibre("torus", (4, 4))
    with pytest.raises(UnderResolvedSpectrumError):
        # absurd tolerance turns near-zero modes into spurious harmonics
        spectrum_for_predicates(fib, tol=0.5)


def test_count_larger_than_space_rejected():
    with pytest.raises(ValueError):
        fibre_spectrum(build_fibre("circle", 4), 0, 9)


def test_csv_export(tmp_path):
    spec = spectrum_for_predicates(build_fibre("circle", 6), count=3)
    out = tmp_path / "spec.csv"
    export_spectrum_csv(str(out), spec)
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "degree,index,eigenvalue"
    assert lines[1].startswith("0,0,0")
