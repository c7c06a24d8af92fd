"""Base class for verification suites registered with the module manager."""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from charflow.modules.report.tolerances import TolerancePolicy, default_policy
from charflow.schemas.report import VerificationReport
from charflow.schemas.run_config import RunConfig


@dataclass
class SuiteContext:
    """What a suite runs against: one resolved field plus the run parameters."""

    frame: Any
    entry: Optional[Any] = None  # CatalogEntry when the field came from the catalog
    run: Optional[RunConfig] = None
    policy: TolerancePolicy = default_policy

    @property
    def field_name(self) -> str:
        return self.frame.name

    @property
    def config(self) -> RunConfig:
        return self.run or RunConfig()


class BaseModule(ABC):
    """A feature module's verification suite."""

    def __init__(self, name: str, version: str, description: str, dependencies: Optional[List[str]] = None):
        self.name = name
        self.version = version
        self.description = description
        self.dependencies = dependencies or []
        self.logger = logging.getLogger(f"charflow.modules.{self.name}")
        self._initialized = False

    @property
    def is_initialized(self) -> bool:
        return self._initialized

    @property
    def module_info(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "version": self.version,
            "description": self.description,
            "dependencies": self.dependencies,
            "initialized": self._initialized,
        }

    async def _base_initialize(self) -> None:
        if self._initialized:
            return
        await self.initialize()
        self._initialized = True
        self.logger.debug(f"Suite {self.name} v{self.version} initialized")

    async def _base_cleanup(self) -> None:
        await self.cleanup()
        self._initialized = False

    async def initialize(self) -> None:
        """Load module configuration; override for heavier setup."""

    async def cleanup(self) -> None:
        pass

    def applies_to(self, context: SuiteContext) -> bool:
        """Whether the suite has anything to check on this field."""
        return True

    @abstractmethod
    def run(self, context: SuiteContext) -> VerificationReport:
        """Run every check of the suite on one field; blocking, called from a worker thread."""

    async def health_check(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "status": "healthy" if self._initialized else "not_initialized",
            "version": self.version,
        }
