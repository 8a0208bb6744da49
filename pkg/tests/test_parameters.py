"""Validation and immutability of the parameter containers."""

import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from drivenchain.parameters import ChainParameters, ToyParameters


class TestChainParameters:
    def test_defaults(self):
        params = ChainParameters(n_sites=4)
        assert params.hopping == 1.0
        assert params.interaction == 0.0
        assert params.coupling == 1.0
        assert params.bias == 0.0
        assert params.dephasing == 0.0
        assert params.staggered == 0.0

    @pytest.mark.parametrize(
        "changes",
        [
            {"n_sites": 1},
            {"n_sites": 0},
            {"hopping": 0.0},
            {"coupling": 0.0},
            {"coupling": -1.0},
            {"dephasing": -0.1},
            {"bias": 1.5},
            {"bias": -1.01},
        ],
    )
    def test_rejects_invalid(self, changes):
        fields = {"n_sites": 4, **changes}
        with pytest.raises(ValueError):
            ChainParameters(**fields)

    def test_frozen(self):
        params = ChainParameters(n_sites=4)
        with pytest.raises(dataclasses.FrozenInstanceError):
            params.bias = 0.3

    def test_with_returns_revalidated_copy(self):
        params = ChainParameters(n_sites=4)
        updated = params.with_(bias=0.5, dephasing=0.2)
        assert updated.bias == 0.5
        assert updated.dephasing == 0.2
        assert params.bias == 0.0
        with pytest.raises(ValueError):
            params.with_(bias=2.0)

    @given(
        n=st.integers(2, 14),
        f=st.floats(-1, 1),
        gamma=st.floats(0, 50),
        coupling=st.floats(0.01, 50),
        delta=st.floats(-50, 50),
        stag=st.floats(-5, 5),
    )
    def test_accepts_valid_ranges(self, n, f, gamma, coupling, delta, stag):
        params = ChainParameters(
            n_sites=n,
            bias=f,
            dephasing=gamma,
            coupling=coupling,
            interaction=delta,
            staggered=stag,
        )
        assert params.n_sites == n
        assert params.with_(bias=-f).bias == -f


class TestToyParameters:
    def test_defaults(self):
        params = ToyParameters(n_levels=5)
        assert params.interaction == 0.0
        assert params.coupling == 1.0
        assert params.bias == 0.0
        assert params.dephasing == 0.0

    @pytest.mark.parametrize(
        "changes",
        [
            {"n_levels": 1},
            {"coupling": 0.0},
            {"dephasing": -1e-9},
            {"bias": -0.1},
            {"bias": 1.1},
        ],
    )
    def test_rejects_invalid(self, changes):
        fields = {"n_levels": 5, **changes}
        with pytest.raises(ValueError):
            ToyParameters(**fields)

    def test_frozen_and_with(self):
        params = ToyParameters(n_levels=3, interaction=2.0)
        with pytest.raises(dataclasses.FrozenInstanceError):
            params.interaction = 1.0
        assert params.with_(bias=1.0).bias == 1.0

    @given(
        k=st.integers(2, 40),
        f=st.floats(0, 1),
        gamma=st.floats(0, 10),
    )
    def test_accepts_valid_ranges(self, k, f, gamma):
        params = ToyParameters(n_levels=k, bias=f, dephasing=gamma)
        assert params.n_levels == k
