"""Fields module."""

from charflow.modules.fields.services.frame_service import BuiltinField, FrameArrays, FrameField, FrameSample
from charflow.modules.fields.services.rotation import FrameRotation
from charflow.modules.fields.services.types import Box, CurveKind, FieldMode, Point

__all__ = [
    "Box",
    "BuiltinField",
    "CurveKind",
    "FieldMode",
    "FrameArrays",
    "FrameField",
    "FrameRotation",
    "FrameSample",
    "Point",
]
