"""Sample sources: where feature tensors come from."""

from .array_source import ArraySampleSource
from .cube_source import CubeSampleSource
from .sample_source import SampleSource

__all__ = ["ArraySampleSource", "CubeSampleSource", "SampleSource"]
