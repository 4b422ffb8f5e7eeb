"""
Tests for centralized logging configuration.
"""
import logging

from firecast.utils.logging_config import get_logger, setup_logging


class TestLoggingConfig:
    """Test centralized logging configuration."""

    def teardown_method(self):
        root_logger = logging.getLogger()
        for handler in root_logger.handlers[:]:
            root_logger.removeHandler(handler)
            handler.close()

    def test_setup_logging_uses_file_handler_only(self, tmp_path):
        """Test that setup_logging writes to a file and never the console."""
        log_file = tmp_path / "test.log"

        setup_logging(log_file=str(log_file))

        root_logger = logging.getLogger()
        assert len(root_logger.handlers) == 1
        assert root_logger.handlers[0].baseFilename == str(log_file)

    def test_messages_reach_the_file(self, tmp_path):
        log_file = tmp_path / "run.log"
        setup_logging(log_file=str(log_file))

        get_logger("firecast.test").info("epoch 0 finished")
        for handler in logging.getLogger().handlers:
            handler.flush()

        content = log_file.read_text()
        assert "firecast.test" in content
        assert "epoch 0 finished" in content

    def test_env_var_sets_file_and_level(self, tmp_path, monkeypatch):
        log_file = tmp_path / "env.log"
        monkeypatch.setenv("FIRECAST_LOG_FILE", str(log_file))
        monkeypatch.setenv("FIRECAST_LOG_LEVEL", "debug")

        setup_logging()

        root_logger = logging.getLogger()
        assert root_logger.level == logging.DEBUG
        assert root_logger.handlers[0].baseFilename == str(log_file)

    def test_repeated_setup_does_not_duplicate_handlers(self, tmp_path):
        setup_logging(log_file=str(tmp_path / "a.log"))
        setup_logging(log_file=str(tmp_path / "b.log"))

        assert len(logging.getLogger().handlers) == 1

    def test_creates_missing_directory(self, tmp_path):
        log_file = tmp_path / "nested" / "dir" / "x.log"

        setup_logging(log_file=str(log_file))

        assert log_file.parent.is_dir()

    def test_get_logger_returns_named_logger(self):
        assert get_logger("firecast.services.trainer").name == "firecast.services.trainer"
