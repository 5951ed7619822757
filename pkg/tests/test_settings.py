import pytest
from pydantic import ValidationError

from config.settings import Settings
from utils.logger import setup_logger


def test_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    s = Settings(_env_file=None)
    assert s.seed == 42
    assert s.dense_cap == 4096
    assert s.noise_floor == 1e-13
    assert s.record_timings is False
    assert s.report_output_dir.exists()


def test_environment_overrides(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("QLW_SEED", "7")
    monkeypatch.setenv("QLW_LOG_LEVEL", "debug")
    s = Settings(_env_file=None)
    assert s.seed == 7
    assert s.log_level == "DEBUG"
    assert "seed" in s.model_fields_set


def test_invalid_log_level(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    with pytest.raises(ValidationError):
        Settings(_env_file=None, log_level="chatty")


def test_logger_writes_file(tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    logger = setup_logger("tests.file_logger", level="DEBUG", log_file=log_file)
    logger.debug("walk step built")
    for handler in logger.handlers:
        handler.flush()
    assert "walk step built" in log_file.read_text()
