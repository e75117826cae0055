"""
Channel, direction and constraint models plus spec-file handling.
"""

from sinr_region.model.models import (
    ChannelModel,
    Direction,
    NormalizedGain,
    PowerConstraint,
    SolveReport,
    TimeVaryingChannel,
    achieved_sinr,
    eta,
    normalize,
    rate_from_sinr,
)
from sinr_region.model.spec_file import (
    ChannelSpec,
    dump_channel_spec,
    load_channel_spec,
    load_directions,
    parse_channel_spec,
)

__all__ = [
    "ChannelModel",
    "ChannelSpec",
    "Direction",
    "NormalizedGain",
    "PowerConstraint",
    "SolveReport",
    "TimeVaryingChannel",
    "achieved_sinr",
    "dump_channel_spec",
    "eta",
    "load_channel_spec",
    "load_directions",
    "normalize",
    "parse_channel_spec",
    "rate_from_sinr",
]
