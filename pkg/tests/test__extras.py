"""Tests for ``_extras`` module."""
import pytest

from stonework import _extras


class TestInstallGuard:
    """Test ``install_guard``."""

    @staticmethod
    @pytest.mark.skipif(not _extras.TOMLI_INSTALLED, reason="Depends on toml extra.")
    def test_passes_when_installed() -> None:
        """Test nothing is raised with tomli present."""
        _extras.install_guard("tomli")  # act

    @staticmethod
    def test_raises_when_missing(monkeypatch: pytest.MonkeyPatch) -> None:
        """Test the error names the extra to install."""
        monkeypatch.setattr(_extras, "TOMLI_INSTALLED", False)

        with pytest.raises(ModuleNotFoundError, match=r"stonework\[toml\]"):
            _extras.install_guard("tomli")
