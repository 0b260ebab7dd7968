from typing import Any, List, Optional, Type
import logging

from qsgps.managers.base import Manager
from qsgps.managers.attack_managers import (
    DephasingManager,
    DepolarizingManager,
    NoAttackManager,
    PauliAttackManager,
    StateReplacementManager,
)

logger = logging.getLogger('qsgps.registry')


class ManagerRegistry:
    """
    Registry of managers.

    This class provides a central list of managers, with methods to find
    the manager for a given item and to dispatch the item to it.
    """

    def __init__(self, managers: List[Type[Manager]] = None):
        """
        Initialize the registry with a list of manager classes.

        Args:
            managers: List of Manager classes to register
        """
        self.managers = list(managers or [])

        # Register default managers if none provided
        if not self.managers:
            self.register_default_managers()

    def register_manager(self, manager_class: Type[Manager]) -> None:
        """
        Register a manager class with the registry.

        Args:
            manager_class: Manager class to register
        """
        if manager_class not in self.managers:
            self.managers.append(manager_class)

    def register_default_managers(self) -> None:
        """Register the default managers; the base registry has none."""

    def find_manager(self, item: Any) -> Optional[Type[Manager]]:
        """
        Find the manager for an item.

        If multiple managers can handle the item, the first one in
        registration order wins.

        Args:
            item: The object to dispatch on

        Returns:
            A Manager class that can handle the item, or None if none found
        """
        return Manager.find_handler(item, self.managers)

    def dispatch(self, item: Any, *args: Any, **kwargs: Any) -> Any:
        """
        Run an item with its manager.

        Raises:
            ValueError: If no manager can handle the item
        """
        manager = self.find_manager(item)
        if not manager:
            raise ValueError(f"No manager found for item type: {type(item).__name__}")
        logger.debug(f"Dispatching {item} to {manager.__name__}")
        return manager.run(item, *args, **kwargs)

    def dump_managers(self) -> List[str]:
        """
        Get a list of registered manager names for debugging.

        Returns:
            A list of manager class names
        """
        return [manager.__name__ for manager in self.managers]


class AttackRegistry(ManagerRegistry):
    """Managers for every AttackModel variant."""

    def register_default_managers(self) -> None:
        self.register_manager(NoAttackManager)
        self.register_manager(PauliAttackManager)
        self.register_manager(DepolarizingManager)
        self.register_manager(DephasingManager)
        self.register_manager(StateReplacementManager)
