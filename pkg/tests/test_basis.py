"""Occupation-basis conventions every other module builds on."""

from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from drivenchain import basis


def test_dimension():
    assert basis.dimension(1) == 2
    assert basis.dimension(3) == 8
    assert basis.dimension(10) == 1024


def test_site_one_is_most_significant_bit():
    assert basis.index_of([1, 0, 0]) == 4
    assert basis.index_of([0, 0, 1]) == 1
    assert list(basis.occupations(4, 3)) == [1, 0, 0]
    assert list(basis.occupations(1, 3)) == [0, 0, 1]


@given(st.integers(1, 12), st.data())
def test_occupations_round_trip(n_sites, data):
    index = data.draw(st.integers(0, basis.dimension(n_sites) - 1))
    occs = basis.occupations(index, n_sites)
    assert occs.shape == (n_sites,)
    assert basis.index_of(occs) == index


def test_occupations_rejects_out_of_range():
    with pytest.raises(ValueError):
        basis.occupations(8, 3)
    with pytest.raises(ValueError):
        basis.occupations(-1, 3)
    with pytest.raises(ValueError):
        basis.index_of([0, 2, 0])


@pytest.mark.parametrize("n_sites", [2, 3, 6])
def test_particle_numbers_match_occupations(n_sites):
    counts = basis.particle_numbers(n_sites)
    for index in range(basis.dimension(n_sites)):
        assert counts[index] == basis.occupations(index, n_sites).sum()


@pytest.mark.parametrize("n_sites", [2, 5, 8])
def test_sector_indices_partition_the_basis(n_sites):
    seen = []
    for n in range(n_sites + 1):
        idx = basis.sector_indices(n_sites, n)
        assert idx.size == comb(n_sites, n)
        assert basis.sector_dimension(n_sites, n) == idx.size
        assert np.all(np.diff(idx) > 0)
        seen.extend(idx.tolist())
    assert sorted(seen) == list(range(basis.dimension(n_sites)))


def test_sector_indices_rejects_bad_sector():
    with pytest.raises(ValueError):
        basis.sector_indices(4, 5)
    with pytest.raises(ValueError):
        basis.sector_indices(4, -1)


def test_vec_index_is_column_stacking(rng):
    dim = 5
    mat = rng.normal(size=(dim, dim))
    flat = mat.flatten(order="F")
    for row in range(dim):
        for col in range(dim):
            assert flat[basis.vec_index(row, col, dim)] == mat[row, col]


@pytest.mark.parametrize("n_sites", [2, 4, 6])
def test_number_conserving_vec_indices(n_sites):
    idx = basis.number_conserving_vec_indices(n_sites)
    counts = basis.particle_numbers(n_sites)
    dim = basis.dimension(n_sites)
    rows = idx % dim
    cols = idx // dim
    assert np.all(counts[rows] == counts[cols])
    expected = sum(comb(n_sites, n) ** 2 for n in range(n_sites + 1))
    assert idx.size == expected
