"""Tests for the logging setup"""

import logging

from src.utils.logger import StderrHandler, setup_logger


def test_file_and_stderr_handlers(tmp_path, capsys):
    log_file = tmp_path / "logs" / "run.log"
    logger = setup_logger("src.test_logger", log_file=str(log_file), level="info")

    logger.info("fiber count 2")
    for handler in logger.handlers:
        handler.flush()

    assert "fiber count 2" in log_file.read_text()
    assert "fiber count 2" in capsys.readouterr().err
    assert logger.level == logging.INFO


def test_reconfigure_replaces_handlers(tmp_path):
    first = setup_logger("src.test_reconfigure", log_file=str(tmp_path / "a.log"))
    second = setup_logger("src.test_reconfigure", log_file=str(tmp_path / "b.log"), console_output=False)

    assert first is second
    assert len(second.handlers) == 1
    assert second.handlers[0].baseFilename.endswith("b.log")


def test_unknown_level_falls_back_to_warning():
    logger = setup_logger("src.test_level", level="chatty", console_output=False)
    assert logger.level == logging.WARNING
    assert logger.handlers == []


def test_stderr_handler_follows_capture(capsys):
    handler = StderrHandler()
    handler.setFormatter(logging.Formatter('%(message)s'))
    handler.emit(logging.makeLogRecord({'msg': 'degenerate system'}))
    assert capsys.readouterr().err == "degenerate system\n"
