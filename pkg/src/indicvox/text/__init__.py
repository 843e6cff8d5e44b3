"""Script-independent text representations for the eight Indic scripts."""

from indicvox.text.scripts import (
    MLCMSequence,
    CommonToken,
    ScriptBlock,
    detect_script,
    render_from_mlcm,
    to_mlcm,
)
from indicvox.text.phones import PhoneSequence, parse_to_cls

__all__ = [
    "ScriptBlock",
    "CommonToken",
    "MLCMSequence",
    "PhoneSequence",
    "detect_script",
    "to_mlcm",
    "render_from_mlcm",
    "parse_to_cls",
]
