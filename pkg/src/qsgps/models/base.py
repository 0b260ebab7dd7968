from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np


class Model(ABC):
    """
    Base class for all value types.

    Every model (states, circuits, strategies, fixes, reports) inherits from
    this class and implements to_dict, which returns a JSON-serializable
    dictionary. Reports are assembled from these dictionaries only.
    """

    def __init__(self, model_type: str):
        """
        Initialize a model with its type tag.

        Args:
            model_type: Tag written into serialized output
        """
        self.model_type = model_type

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """
        Convert the model to a JSON-serializable dictionary.

        Returns:
            A dictionary representation of the model
        """
        pass

    def __str__(self) -> str:
        """String representation of the model for debugging."""
        return f"{self.__class__.__name__}({self.model_type})"


def complex_to_dict(values: np.ndarray) -> Dict[str, Any]:
    """Split a complex array into nested real/imag lists."""
    values = np.asarray(values)
    return {"real": values.real.tolist(), "imag": values.imag.tolist()}


def complex_from_dict(data: Dict[str, Any]) -> np.ndarray:
    """Inverse of complex_to_dict."""
    real = np.asarray(data["real"], dtype=float)
    imag = np.asarray(data.get("imag", np.zeros_like(real)), dtype=float)
    return real + 1j * imag


def frozen(array: np.ndarray) -> np.ndarray:
    """Return a read-only copy of the array."""
    out = np.array(array, copy=True)
    out.setflags(write=False)
    return out
