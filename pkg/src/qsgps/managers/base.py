from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Type


class Manager(ABC):
    """
    Base class for all managers.

    A manager claims the items it can handle (an attack variant, a CLI
    subcommand) and runs them. Managers are stateless; every method is a
    classmethod.
    """

    @classmethod
    @abstractmethod
    def can_handle(cls, item: Any) -> bool:
        """
        Check whether this manager handles the item.

        Args:
            item: The object to dispatch on

        Returns:
            True if run() accepts the item
        """
        pass

    @classmethod
    @abstractmethod
    def run(cls, item: Any, *args: Any, **kwargs: Any) -> Any:
        """
        Run the item.

        Args:
            item: An object for which can_handle returned True

        Returns:
            The manager-specific result
        """
        pass

    @classmethod
    def to_dict(cls, item: Any, *args: Any, **kwargs: Any) -> Dict[str, Any]:
        """
        Run the item and serialize the result.

        Args:
            item: An object for which can_handle returned True

        Returns:
            A JSON-serializable dictionary
        """
        result = cls.run(item, *args, **kwargs)
        return result if isinstance(result, dict) else result.to_dict()

    @classmethod
    def find_handler(cls, item: Any, managers: List[Type['Manager']]) -> Optional[Type['Manager']]:
        """
        Find the first manager in a list that handles the item.

        Args:
            item: The object to dispatch on
            managers: Manager classes to search through

        Returns:
            The first matching manager class, or None
        """
        for manager in managers:
            if manager.can_handle(item):
                return manager
        return None
