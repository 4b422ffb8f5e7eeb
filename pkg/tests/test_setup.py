"""Test project setup and infrastructure."""

from firecast import __version__


def test_package_version():
    """Test that package version is accessible."""
    assert __version__ == "0.1.0"


def test_import_package():
    """Test that main package and its subpackages can be imported."""
    import firecast
    import firecast.architectures
    import firecast.nn
    import firecast.services
    import firecast.sources
    assert firecast is not None


def test_pytest_working():
    """Test that pytest framework is functioning."""
    assert True
