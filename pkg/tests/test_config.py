import pytest

from bmvq import (
    ConfigError,
    PolicyConfig,
    PolicyKind,
    PowerProfile,
    TrafficModel,
    parse_config_text,
    serialize_config,
    validate_config,
)


def bmv_config(lam=0.3, mu=0.8, lengths=(0.8,) * 6, powers=None, cap=50, p_idle=None):
    powers = powers if powers is not None else (75.0,) * len(lengths)
    return validate_config(
        TrafficModel(lam=lam, mu=mu),
        PolicyConfig(kind=PolicyKind.BMV, stage_lengths=lengths, queue_cap=cap),
        PowerProfile(p_active=130.0, stage_powers=powers, p_idle=p_idle),
    )


def test_case_study_config_is_valid():
    # the reference optimum: six stages of 0.8 at K = 50
    cfg = bmv_config()
    assert cfg.rho == pytest.approx(0.375)
    assert cfg.policy.total_sleep == pytest.approx(4.8)


def test_zero_rate_rejected():
    with pytest.raises(ConfigError) as err:
        bmv_config(lam=0.0)
    assert "NonPositiveRate" in err.value.codes


def test_stage_power_length_mismatch():
    with pytest.raises(ConfigError) as err:
        bmv_config(lengths=(0.1, 0.2, 0.3, 0.4), powers=(75.0,) * 3)
    assert "StagePowerLengthMismatch" in err.value.codes


def test_all_violations_reported_not_just_first():
    with pytest.raises(ConfigError) as err:
        validate_config(
            TrafficModel(lam=-1.0, mu=0.0),
            PolicyConfig(kind=PolicyKind.BMV, stage_lengths=(), queue_cap=0),
            PowerProfile(p_active=-5.0),
        )
    codes = err.value.codes
    assert codes.count("NonPositiveRate") == 2
    assert "EmptyStageList" in codes
    assert "CapOutOfRange" in codes
    assert "NonPositivePower" in codes


def test_npolicy_threshold_bounds():
    traffic = TrafficModel(lam=550, mu=1000)
    power = PowerProfile(p_active=130.0, stage_powers=(75.0,))
    ok = validate_config(traffic, PolicyConfig(kind=PolicyKind.NPOLICY,
                                               n_threshold=50, queue_cap=50), power)
    assert ok.policy.n_threshold == 50
    with pytest.raises(ConfigError) as err:
        validate_config(traffic, PolicyConfig(kind=PolicyKind.NPOLICY,
                                              n_threshold=51, queue_cap=50), power)
    assert "CapOutOfRange" in err.value.codes


def test_npolicy_needs_exactly_one_stage_power():
    with pytest.raises(ConfigError) as err:
        validate_config(
            TrafficModel(lam=1, mu=2),
            PolicyConfig(kind=PolicyKind.NPOLICY, n_threshold=3, queue_cap=10),
            PowerProfile(p_active=10.0, stage_powers=(1.0, 2.0)),
        )
    assert "StagePowerLengthMismatch" in err.value.codes


def test_p_idle_defaults_to_p_active():
    cfg = bmv_config()
    assert cfg.power.idle_power == cfg.power.p_active
    cfg2 = bmv_config(p_idle=38.2)
    assert cfg2.power.idle_power == 38.2


def test_serialize_round_trip():
    cfg = bmv_config(lengths=(0.0000714, 0.001, 0.01, 1.0),
                     powers=(25.5, 2.9, 2.0, 1.8), p_idle=38.2)
    text = serialize_config(cfg)
    cfg2 = validate_config(*parse_config_text(text))
    assert serialize_config(cfg2) == text
    assert cfg2 == cfg


def test_parse_grammar_comments_and_lists():
    text = """
    # comment line
    lambda = 0.3
    mu = 0.8   # trailing comment
    policy = bmv
    stage_lengths = 0.8, 0.8, 0.8
    stage_powers = 75 75 75
    queue_cap = 50
    p_active = 130
    """
    traffic, policy, power = parse_config_text(text)
    cfg = validate_config(traffic, policy, power)
    assert cfg.policy.stage_lengths == (0.8, 0.8, 0.8)
    assert cfg.power.stage_powers == (75.0, 75.0, 75.0)


def test_parse_rejects_unknown_key():
    with pytest.raises(ConfigError) as err:
        parse_config_text("lambda = 1\nmu = 2\nbogus = 3\n")
    assert "UnknownKey" in err.value.codes


def test_json_dict_fields():
    d = bmv_config().to_json_dict()
    assert d["policy"] == "bmv"
    assert d["stage_lengths"] == [0.8] * 6
    assert d["rho"] == pytest.approx(0.375)
