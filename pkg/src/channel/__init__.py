from .gain import (
    LinkGeometry,
    beer_lambert_loss,
    geometric_loss,
    channel_gain,
    gain_at_distance,
)

__all__ = ["LinkGeometry", "beer_lambert_loss", "geometric_loss", "channel_gain", "gain_at_distance"]
