from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from frmp.cli import main
from frmp.config import ServiceConfig, load_config
from frmp.geo import ValidationError


def test_defaults():
    cfg = ServiceConfig()
    assert cfg.public_read is True
    assert cfg.tokens == {"cco-token": "cco1", "am-token": "am1"}
    assert "standard" in cfg.profiles


def test_load_full_config(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(
        json.dumps(
            {
                "host": "0.0.0.0",
                "port": 9001,
                "public_read": False,
                "tokens": {"secret": "ops1"},
                "users": [{"id": "ops1", "display_name": "Ops", "role": "AM"}],
                "profiles": [
                    {"name": "standard", "speed_kmh": 14.0},
                    {"name": "light", "speed_kmh": 30.0, "payload_note": "patrol jeep"},
                ],
                "snap_tolerance": 2.5,
            }
        )
    )
    cfg = load_config(path)
    assert cfg.host == "0.0.0.0"
    assert cfg.port == 9001
    assert cfg.public_read is False
    assert cfg.tokens == {"secret": "ops1"}
    assert cfg.users[0].role == "AM"
    assert cfg.profiles["light"].speed_kmh == 30.0
    assert cfg.snap_tolerance == 2.5


def test_bad_json_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    with pytest.raises(ValidationError):
        load_config(path)


def test_serve_rejects_bad_config_via_env(tmp_path):
    bad = tmp_path / "config.json"
    bad.write_text("{nope")
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["serve", "--store", str(tmp_path / "s.json")],
        env={"FRMP_CONFIG": str(bad)},
    )
    assert result.exit_code == 1


def test_serve_rejects_bad_catalog(tmp_path):
    config = tmp_path / "config.json"
    catalog = tmp_path / "catalog.json"
    catalog.write_text(json.dumps([{"code": "X"}]))  # missing required columns
    config.write_text(json.dumps({"catalog_path": str(catalog)}))
    runner = CliRunner()
    result = runner.invoke(
        main,
        ["serve", "--store", str(tmp_path / "s.json"), "--config", str(config)],
    )
    assert result.exit_code == 1
    assert "catalog" in result.output
