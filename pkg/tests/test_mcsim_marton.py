from __future__ import annotations

import copy

import numpy as np
import pytest

from bcfb.channels.catalog import make_parallel_bsc
from bcfb.config import defaults
from bcfb.config.defaults import DEFAULT_CONFIG
from bcfb.errors import ArgumentError, ResourceError
from bcfb.info.pmf import Alphabet, JointPmf, uniform
from bcfb.mcsim.harness import marton_trial
from bcfb.mcsim.marton import (
    MartonCode,
    MartonDecoding,
    MartonMessage,
    MartonRates,
    MartonSizes,
    codebook_symbols,
    conditional_table,
    gen_marton_code,
    marton_decode,
    marton_encode,
    message_errors,
    random_message,
    size_of,
)
from bcfb.regions.schemes import AuxiliaryScheme, induced_joint


def _make_aux(law: JointPmf | None = None) -> AuxiliaryScheme:
    law = law or uniform(Alphabet("U0", 1), Alphabet("U1", 2), Alphabet("U2", 2))
    return AuxiliaryScheme.from_map(law, lambda u0, u1, u2: 2 * u1 + u2, 4)


def _make_code(sizes: MartonSizes, n: int, seed: int = 0, aux: AuxiliaryScheme | None = None) -> MartonCode:
    aux = aux or _make_aux()
    joint = induced_joint(aux, None, make_parallel_bsc(0.0, 0.0))
    return gen_marton_code(aux, joint, sizes, n, np.random.default_rng(seed))


class TestSizes:
    def test_size_of(self) -> None:
        assert size_of(0.5, 10) == 32
        assert size_of(0.0, 10) == 1
        assert size_of(0.01, 10) == 1

    def test_size_of_rejects_negative(self) -> None:
        with pytest.raises(ArgumentError, match="nonnegative"):
            size_of(-0.1, 10)

    def test_rates_to_sizes(self) -> None:
        s = MartonRates(r0=0.1, r1p=0.2, r2c=0.3).sizes(10)
        assert (s.j0, s.j1p, s.j2c, s.j1c, s.j2p) == (2, 4, 8, 1, 1)
        assert s.common == 16

    def test_message_rates(self) -> None:
        rates = MartonRates(r0=0.1, r1p=0.2, r1c=0.05, r2p=0.3)
        assert rates.message_rates == pytest.approx((0.1, 0.25, 0.3))

    def test_rates_json(self) -> None:
        rates = MartonRates(r1p=0.2, r2b=0.1)
        assert MartonRates.from_json(rates.to_json()) == rates
        with pytest.raises(ArgumentError, match="unknown Marton rate keys"):
            MartonRates.from_json({"r3": 0.1})

    def test_sizes_validated(self) -> None:
        with pytest.raises(ArgumentError, match="j1p"):
            MartonSizes(j1p=0)


class TestCodebook:
    def test_shapes(self) -> None:
        sizes = MartonSizes(j0=2, j1c=3, j1p=4, b1=5, j2p=2, b2=1)
        code = _make_code(sizes, 7)
        assert code.c0.shape == (6, 7)
        assert code.c1.shape == (6, 4, 5, 7)
        assert code.c2.shape == (6, 2, 1, 7)
        assert codebook_symbols(sizes, 7) == 7 * 6 * (1 + 20 + 2)

    def test_superposition_follows_conditional(self) -> None:
        # U1 copies U0
        mass = np.zeros((2, 2, 2))
        mass[0, 0, :] = mass[1, 1, :] = 0.25
        law = JointPmf(tuple(Alphabet(a, 2) for a in ("U0", "U1", "U2")), mass)
        code = _make_code(MartonSizes(j0=4, j1p=3, b1=2), 16, aux=_make_aux(law))
        for mc in range(4):
            assert np.all(code.c1[mc] == code.c0[mc])

    def test_conditional_table_zero_rows_uniform(self) -> None:
        mass = np.zeros((2, 2, 1))
        mass[0, 1, 0] = 1.0
        law = JointPmf((Alphabet("U0", 2), Alphabet("U1", 2), Alphabet("U2", 1)), mass)
        table = conditional_table(law, "U0", "U1")
        assert table.tolist() == [[0.0, 1.0], [0.5, 0.5]]

    def test_memory_cap(self) -> None:
        aux = _make_aux()
        joint = induced_joint(aux, None, make_parallel_bsc(0.0, 0.0))
        with pytest.raises(ResourceError, match="Marton codebook"):
            gen_marton_code(aux, joint, MartonSizes(j1p=64), 10, np.random.default_rng(0), memory_cap=100)

    def test_memory_cap_from_settings(self, monkeypatch) -> None:
        aux = _make_aux()
        joint = induced_joint(aux, None, make_parallel_bsc(0.0, 0.0))
        sizes = MartonSizes(j1p=64)
        gen_marton_code(aux, joint, sizes, 10, np.random.default_rng(0))
        cfg = copy.deepcopy(DEFAULT_CONFIG)
        cfg["simulation"]["memory_cap"] = 100
        monkeypatch.setattr(defaults, "_active", cfg)
        with pytest.raises(ResourceError, match="raise simulation.memory_cap") as info:
            gen_marton_code(aux, joint, sizes, 10, np.random.default_rng(0))
        assert info.value.cap == 100

    def test_resource_cap_env_leaves_memory_cap_alone(self, monkeypatch) -> None:
        monkeypatch.setenv("BCFB_RESOURCE_CAP", "2**40")
        aux = _make_aux()
        joint = induced_joint(aux, None, make_parallel_bsc(0.0, 0.0))
        with pytest.raises(ResourceError, match="simulation.memory_cap") as info:
            gen_marton_code(aux, joint, MartonSizes(j1p=2**20, j2p=2**20), 80, np.random.default_rng(0))
        assert info.value.cap == DEFAULT_CONFIG["simulation"]["memory_cap"]
        assert "BCFB_RESOURCE_CAP" not in str(info.value)

    def test_common_index_round_trip(self) -> None:
        code = _make_code(MartonSizes(j0=2, j1c=3, j2c=4), 4)
        msg = MartonMessage(j0=1, j1c=2, j2c=3)
        assert code.split_common(code.common_index(msg)) == (1, 2, 3)

    def test_seeded_draws_repeat(self) -> None:
        a = _make_code(MartonSizes(j1p=8), 10, seed=5)
        b = _make_code(MartonSizes(j1p=8), 10, seed=5)
        assert np.array_equal(a.c1, b.c1)


class TestEncodeDecode:
    def test_empty_window_falls_back(self) -> None:
        # n * 1/4 is not an integer, so a window of width eps * n/4 < 1 holds nothing
        code = _make_code(MartonSizes(), 41)
        enc = marton_encode(code, MartonMessage(), 0.001, np.random.default_rng(0))
        assert enc.fallback
        assert enc.list_size == 0
        assert enc.chosen == (0, 0)
        assert np.array_equal(enc.x, 2 * enc.u[1] + enc.u[2])

    def test_noiseless_decode(self) -> None:
        rng = np.random.default_rng(3)
        code = _make_code(MartonSizes(j1p=16, j2p=16), 40, seed=3)
        msg = MartonMessage(j1p=5, j2p=11)
        enc = marton_encode(code, msg, 0.5, rng)
        y1, y2 = enc.x >> 1, enc.x & 1
        assert np.array_equal(y1, code.c1[0, 5, 0])
        d1 = marton_decode(code, {"Y1": y1}, 1, 0.5, rng)
        d2 = marton_decode(code, {"Y2": y2}, 2, 0.5, rng)
        assert d1.message == (0, 0, 5)
        assert d2.message == (0, 0, 11)
        assert message_errors(msg, (d1, d2)) == (False, False)

    def test_bad_receiver(self) -> None:
        code = _make_code(MartonSizes(), 8)
        with pytest.raises(ArgumentError, match="receiver"):
            marton_decode(code, {"Y1": np.zeros(8, dtype=int)}, 3, 0.5, np.random.default_rng(0))


def test_message_errors() -> None:
    msg = MartonMessage(j0=1, j1p=2, j2p=3)
    decoded = (MartonDecoding(1, 0, 2, 1), MartonDecoding(0, 0, 3, 1))
    assert message_errors(msg, decoded) == (False, True)


def test_random_message_in_range() -> None:
    sizes = MartonSizes(j0=2, j1p=3, j2p=5)
    rng = np.random.default_rng(0)
    for _ in range(20):
        m = random_message(sizes, rng)
        assert 0 <= m.j0 < 2 and 0 <= m.j1p < 3 and 0 <= m.j2p < 5
        assert m.j1c == m.j2c == 0


def test_trial_on_noiseless_channel() -> None:
    channel = make_parallel_bsc(0.0, 0.0)
    rng = np.random.default_rng(11)
    rates = MartonRates(r1p=0.2, r2p=0.2)
    outcomes = [marton_trial(channel, _make_aux(), rates, 40, 0.5, rng) for _ in range(10)]
    assert sum(o.error for o in outcomes) <= 1
