from .special import lambert_w0, erfc, erfc_inv, INV_E

__all__ = ["lambert_w0", "erfc", "erfc_inv", "INV_E"]
