import numpy as np
import pytest

from speclap.grid import (
    DisconnectedMaskError,
    GridFunction,
    assemble_laplacian,
    build_domain,
    eigendecompose,
    heat_apply,
    heat_kernel,
    load_mask_file,
    write_mask_file,
)

import oracles


def _dec(shape, size):
    dom = build_domain(shape, size)
    return eigendecompose(assemble_laplacian(dom), dom)


def test_interval_spectrum_matches_sine_closed_form():
    dec = _dec("interval", 60)
    expected = oracles.interval_eigenvalues(60)
    assert np.allclose(dec.eigenvalues, expected, rtol=1e-12, atol=0)


def test_interval_first_eigenvalue_near_continuum():
    dec = _dec("interval", 200)
    assert abs(dec.eigenvalues[0] - np.pi**2) / np.pi**2 < 5e-3


def test_square_spectrum_is_tensor_sum():
    dec = _dec("square", 10)
    expected = oracles.square_eigenvalues(10)
    assert np.allclose(np.sort(dec.eigenvalues), expected, rtol=1e-10, atol=1e-8)


@pytest.mark.parametrize("shape,size", [("interval", 40), ("square", 8), ("l_shape", 5)])
def test_basis_orthonormal(shape, size):
    # columns are unit in plain l2; grid weights enter through the
    # operator formulas, not the stored basis
    dec = _dec(shape, size)
    gram = dec.basis.T @ dec.basis
    assert np.allclose(gram, np.eye(gram.shape[0]), atol=1e-10)


def test_eigenvalues_sorted_and_positive():
    dec = _dec("disk", 12)
    lam = dec.eigenvalues
    assert lam[0] > 0
    assert np.all(np.diff(lam) >= -1e-9)


def test_heat_kernel_matches_sine_expansion():
    n, t = 30, 0.01
    dec = _dec("interval", n)
    K = heat_kernel(dec, t)
    expected = oracles.interval_heat_kernel(n, t)
    assert np.max(np.abs(K - expected)) < 1e-10 * np.max(expected)


def test_heat_apply_agrees_with_kernel_action():
    dec = _dec("interval", 25)
    dom = dec.domain
    rng = np.random.default_rng(5)
    f = rng.standard_normal(25)
    via_kernel = dom.h * (heat_kernel(dec, 0.02) @ f)
    via_apply = heat_apply(dec, 0.02, f)
    assert np.allclose(via_kernel, via_apply, atol=1e-12)


def test_heat_kernel_symmetric_and_positive_at_moderate_time():
    dec = _dec("square", 8)
    K = heat_kernel(dec, 0.05)
    assert np.allclose(K, K.T, atol=1e-12)
    assert K.min() > -1e-12


@pytest.mark.parametrize("shape,dim", [
    ("interval", 1), ("square", 2), ("disk", 2),
    ("l_shape", 2), ("slit", 2), ("annulus", 2),
])
def test_builtin_shapes_build(shape, dim):
    dom = build_domain(shape, 10)
    assert dom.dim == dim
    assert dom.coords.shape[0] >= 10
    assert 0 < dom.h < 1


def test_lshape_spacing_uses_doubled_box():
    dom = build_domain("l_shape", 10)
    assert dom.h == pytest.approx(1.0 / 21.0)


def test_unknown_shape_rejected():
    with pytest.raises(ValueError, match="unknown shape"):
        build_domain("hexagon", 10)


def test_shape_needs_positive_size():
    with pytest.raises(ValueError, match="size"):
        build_domain("interval", 0)


def test_mask_file_round_trip(tmp_path):
    dom = build_domain("l_shape", 6)
    path = str(tmp_path / "ell.mask")
    write_mask_file(dom, path)
    back = load_mask_file(path)
    assert back.dim == dom.dim
    assert back.h == pytest.approx(dom.h)
    assert np.array_equal(back.mask, dom.mask)
    assert back.name.startswith("file:")


def test_mask_file_spectrum_matches_builtin(tmp_path):
    dom = build_domain("square", 7)
    path = str(tmp_path / "sq.mask")
    write_mask_file(dom, path)
    dec_a = eigendecompose(assemble_laplacian(dom), dom)
    back = load_mask_file(path)
    dec_b = eigendecompose(assemble_laplacian(back), back)
    assert np.allclose(dec_a.eigenvalues, dec_b.eigenvalues, rtol=1e-12)


def test_disconnected_mask_rejected(tmp_path):
    path = tmp_path / "two_blobs.mask"
    path.write_text(
        "2 0.1 9 5\n000000000\n011001100\n011001100\n000000000\n000000000\n"
    )
    with pytest.raises(DisconnectedMaskError):
        load_mask_file(str(path))


def test_ragged_mask_rejected(tmp_path):
    path = tmp_path / "ragged.mask"
    path.write_text("2 0.1 5 4\n00000\n01100\n0110\n00000\n")
    with pytest.raises(ValueError):
        load_mask_file(str(path))


def test_boundary_touching_mask_rejected(tmp_path):
    path = tmp_path / "touch.mask"
    path.write_text("2 0.1 5 3\n00000\n11100\n00000\n")
    with pytest.raises(ValueError, match="edge"):
        load_mask_file(str(path))


def test_dense_eigensolver_guard():
    dom = build_domain("interval", 50)
    lap = assemble_laplacian(dom)
    with pytest.raises(ValueError, match="capped"):
        eigendecompose(lap, dom, max_n=20)


def test_laplacian_row_sums_at_interior_nodes():
    # away from the boundary the stencil sums to zero on constants
    dom = build_domain("square", 12)
    lap = assemble_laplacian(dom).toarray()
    ones = np.ones(lap.shape[0])
    residual = lap @ ones
    # interior-of-interior nodes: all four neighbours present
    full_rows = np.isclose(lap.diagonal(), 4.0 / dom.h**2)
    inner = residual[full_rows & np.isclose(np.abs(lap).sum(axis=1), 8.0 / dom.h**2)]
    assert np.allclose(inner, 0.0, atol=1e-9)


def test_grid_function_shape_guard():
    dom = build_domain("interval", 10)
    with pytest.raises(ValueError):
        GridFunction(dom, np.zeros(11))
