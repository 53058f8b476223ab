"""
Custom exception classes for layer state handling.
"""

class LayerStateError(Exception):
    """Raised when a layer is used out of order, e.g. backward before forward."""

    def __init__(self, message: str = "Layer used out of order", layer_name: str | None = None):
        self.layer_name = layer_name
        if layer_name:
            message = f"{layer_name}: {message}"
        super().__init__(message)
