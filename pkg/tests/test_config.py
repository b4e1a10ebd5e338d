import pytest
from hypothesis import given, strategies as st

from cvqkd.config import RunConfig, SweepGrid, load_config, parse_config, serialize_config
from cvqkd.errors import ConfigError
from cvqkd.noise import HardwareParams
from cvqkd.rates import SecurityParams


def test_defaults_reference_values():
    cfg = RunConfig()
    assert cfg.protocol.v_a == 6.77 and cfg.protocol.mu == 2
    assert cfg.hardware == HardwareParams()
    assert cfg.collective == SecurityParams.collective()
    assert cfg.coherent.eps_pe == 1e-43 and cfg.coherent.f_et == 0.2
    assert cfg.channel.effective_loss_db == pytest.approx(5.0)
    assert len(cfg.sweep.points()) == 151


def test_round_trip_defaults():
    cfg = RunConfig()
    text = serialize_config(cfg)
    assert parse_config(text) == cfg
    assert serialize_config(parse_config(text)) == text


@pytest.mark.filterwarnings("ignore:channel.loss_db overrides")
@given(
    st.floats(0.1, 30.0),
    st.floats(1e-12, 1e-2),
    st.integers(1, 24),
    st.sampled_from(["collective", "coherent", "asymptotic"]),
    st.one_of(st.none(), st.floats(0.0, 30.0)),
)
def test_round_trip_edited(v_a, eps, n_res, mode, loss):
    text = serialize_config(RunConfig())
    text += "\n"
    edits = {
        "protocol.v_a": repr(v_a),
        "security.collective.eps_pe": repr(eps),
        "hardware.n_res": str(n_res),
        "run.mode": mode,
        "channel.loss_db": "none" if loss is None else repr(loss),
    }
    lines = [ln for ln in text.splitlines() if ln.split(" = ")[0] not in edits]
    lines += [f"{k} = {v}" for k, v in edits.items()]
    cfg = parse_config("\n".join(lines))
    assert cfg.protocol.v_a == v_a and cfg.run.mode == mode and cfg.hardware.n_res == n_res
    assert parse_config(serialize_config(cfg)) == cfg


def test_comments_and_blank_lines():
    cfg = parse_config("# header\n\nprotocol.v_a = 5.0  # tuned\n")
    assert cfg.protocol.v_a == 5.0


@pytest.mark.parametrize("text", [
    "hardware.rinn = 1e-14",
    "security.collective.n_pt = 1e8",
    "nosuch.key = 1",
    "protocol.v_a 5",
    "hardware.n_res = 16.5",
    "protocol.v_a = abc",
    "run.mode = quantum",
    "sweep.step_db = 0",
    "protocol.v_a = 1\nprotocol.v_a = 2",
    "security.collective.eps_s = 2",
])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_loss_db_wins_with_warning():
    with pytest.warns(UserWarning, match="overrides"):
        cfg = parse_config("channel.length_km = 40\nchannel.loss_db = 7.5\n")
    assert cfg.channel.effective_loss_db == 7.5


def test_pilot_count_shared():
    cfg = parse_config("hardware.n_pt = 2e8\n")
    assert cfg.security("collective").n_pt == 2e8
    assert cfg.security("coherent").n_pt == 2e8


def test_sweep_grid_labels():
    pts = SweepGrid(0.0, 1.0, 0.1).points()
    assert pts[3] == 0.3 and pts[-1] == 1.0


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")
