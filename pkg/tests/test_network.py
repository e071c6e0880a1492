import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from flwin import network as nw


def test_dbm_mw_known_values():
    assert nw.dbm_to_mw(0.0) == 1.0
    assert nw.dbm_to_mw(20.0) == pytest.approx(100.0, rel=1e-14)
    assert nw.mw_to_dbm(1000.0) == pytest.approx(30.0, rel=1e-14)


@given(st.floats(min_value=-200.0, max_value=200.0))
def test_dbm_round_trip(x):
    assert nw.mw_to_dbm(nw.dbm_to_mw(x)) == pytest.approx(x, abs=1e-10)


@given(st.floats(min_value=-100.0, max_value=100.0))
def test_db_round_trip(x):
    assert nw.linear_to_db(nw.db_to_linear(x)) == pytest.approx(x, abs=1e-10)


def test_power_law_gain_known_values():
    model = nw.PowerLawPathLoss()
    # 34 dB loss at 1 m, +40 dB per decade
    assert float(model.gain(1.0)) == pytest.approx(10 ** -3.4, rel=1e-12)
    assert float(model.gain(10.0)) == pytest.approx(10 ** -7.4, rel=1e-12)
    assert float(model.gain(100.0)) == pytest.approx(10 ** -11.4, rel=1e-12)


@given(st.floats(min_value=1.0, max_value=999.0), st.floats(min_value=1.001, max_value=1.5))
def test_power_law_gain_strictly_decreasing(d, factor):
    model = nw.PowerLawPathLoss()
    assert float(model.gain(d * factor)) < float(model.gain(d))


def test_power_law_gain_rejects_nonpositive_distance():
    model = nw.PowerLawPathLoss()
    with pytest.raises(ValueError):
        model.gain(0.0)
    with pytest.raises(ValueError):
        model.gain(np.array([1.0, -2.0]))


def test_power_law_rejects_nonpositive_slope():
    with pytest.raises(ValueError):
        nw.PowerLawPathLoss(slope_db_per_decade=0.0)


def test_tabulated_gain_interpolates():
    model = nw.TabulatedPathLoss(distances=(1.0, 3.0), gains=(1.0, 3.0))
    assert float(model.gain(2.0)) == pytest.approx(2.0)


def test_tabulated_validation():
    with pytest.raises(ValueError):
        nw.TabulatedPathLoss(distances=(1.0, 1.0), gains=(1.0, 1.0))
    with pytest.raises(ValueError):
        nw.TabulatedPathLoss(distances=(1.0, 2.0), gains=(1.0, 0.0))
    with pytest.raises(ValueError):
        nw.TabulatedPathLoss(distances=(1.0,), gains=(1.0,))


def test_network_config_linear_properties():
    cfg = nw.NetworkConfig()
    assert cfg.p_up_mw == pytest.approx(100.0, rel=1e-14)
    assert cfg.p_down_mw == pytest.approx(10 ** 4.3, rel=1e-14)
    assert cfg.noise_mw == pytest.approx(10 ** -17.3, rel=1e-14)
    assert cfg.beta_up == pytest.approx(10 ** -1.5, rel=1e-14)
    assert cfg.beta_down == pytest.approx(10 ** 1.5, rel=1e-14)


def test_network_config_ordering_invariant():
    with pytest.raises(ValueError):
        nw.NetworkConfig(d_min=0.0)
    with pytest.raises(ValueError):
        nw.NetworkConfig(d0=2000.0)  # d0 > r0
    with pytest.raises(ValueError):
        nw.NetworkConfig(lambda_i=0.0)


def test_gain_domain_check():
    cfg = nw.NetworkConfig()
    model = nw.PowerLawPathLoss()
    with pytest.raises(ValueError):
        nw.gain(model, 0.5, cfg)
    with pytest.raises(ValueError):
        nw.gain(model, 1500.0, cfg)
    assert float(nw.gain(model, 10.0, cfg)) == pytest.approx(10 ** -7.4, rel=1e-12)


def test_snr_down_value():
    cfg = nw.NetworkConfig()
    model = nw.PowerLawPathLoss()
    # 43 dBm - 74 dB loss - (-173 dBm) = 142 dB
    assert float(nw.snr_down(cfg, model, 10.0)) == pytest.approx(10 ** 14.2, rel=1e-10)


def test_hyper_params_preconditions():
    with pytest.raises(ValueError):
        nw.FlHyperParams(zeta=1.5)  # zeta >= gamma/L
    with pytest.raises(ValueError):
        nw.FlHyperParams(gd_step_xi=25.0)  # xi >= 2/L
    with pytest.raises(ValueError):
        nw.FlHyperParams(eps_local=0.0)
    with pytest.raises(ValueError):
        nw.FlHyperParams(eps_global=1.5)


def test_load_config_round_trip(tmp_path):
    cfg = nw.FullConfig()
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg.to_dict()))
    loaded = nw.load_config(str(path))
    assert loaded == cfg
    assert nw.config_hash(loaded) == nw.config_hash(cfg)


def test_load_config_from_dict_defaults():
    cfg = nw.load_config({})
    assert cfg.network.r0 == 1000.0
    assert isinstance(cfg.path_loss, nw.PowerLawPathLoss)


def test_load_config_table_variant():
    cfg = nw.load_config({"path_loss": {"variant": "table",
                                        "distances": [1.0, 1000.0],
                                        "gains": [1.0, 0.5]}})
    assert isinstance(cfg.path_loss, nw.TabulatedPathLoss)
    with pytest.raises(ValueError):
        nw.load_config({"path_loss": {"variant": "bogus"}})


def test_config_hash_sensitivity():
    a = nw.FullConfig()
    b = nw.FullConfig(network=nw.NetworkConfig(lambda_i=2e-4))
    ha, hb = nw.config_hash(a), nw.config_hash(b)
    assert ha != hb
    assert len(ha) == 12 and all(c in "0123456789abcdef" for c in ha)
