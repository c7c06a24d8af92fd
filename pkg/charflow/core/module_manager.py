"""Module manager for the verification suites."""

import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Sequence

from charflow.core.base_module import BaseModule, SuiteContext
from charflow.core.exceptions import UsageError
from charflow.core.executor import worker_count
from charflow.modules.report.services.report_service import merge, new_report
from charflow.schemas.report import VerificationReport


class ModuleManager:
    """Registers suites, checks their dependencies and runs them concurrently."""

    def __init__(self):
        self.modules: Dict[str, BaseModule] = {}
        self.logger = logging.getLogger(__name__)

    def register_module(self, module: BaseModule) -> None:
        """Register a new suite."""
        if module.name in self.modules:
            raise ValueError(f"Module {module.name} is already registered")
        self.modules[module.name] = module
        self.logger.debug(f"Registered module: {module.name} v{module.version}")

    def get_module(self, name: str) -> Optional[BaseModule]:
        return self.modules.get(name)

    def list_modules(self) -> List[str]:
        return list(self.modules.keys())

    def get_modules_info(self) -> List[Dict[str, Any]]:
        return [module.module_info for module in self.modules.values()]

    async def initialize_all(self) -> None:
        """Initialize all registered suites in dependency order."""
        self._check_dependencies()
        for module_name in self._get_initialization_order():
            module = self.modules[module_name]
            try:
                await module._base_initialize()
            except Exception as e:
                self.logger.error(f"Module {module_name} initialization failed: {str(e)}")
                raise
        self.logger.info(f"Initialized {len(self.modules)} suites")

    async def cleanup_all(self) -> None:
        cleanup_tasks = [m._base_cleanup() for m in reversed(list(self.modules.values())) if m.is_initialized]
        if cleanup_tasks:
            await asyncio.gather(*cleanup_tasks, return_exceptions=True)

    async def health_check_all(self) -> Dict[str, Any]:
        results = {}
        for module in self.modules.values():
            try:
                results[module.name] = await module.health_check()
            except Exception as e:
                results[module.name] = {"name": module.name, "status": "error", "error": str(e)}
        healthy = all(r.get("status") == "healthy" for r in results.values())
        return {"status": "healthy" if healthy else "degraded", "modules": results,
                "total_modules": len(self.modules)}

    def _check_dependencies(self) -> None:
        """Check if all module dependencies are satisfied."""
        for module in self.modules.values():
            for dependency in module.dependencies:
                if dependency not in self.modules:
                    raise ValueError(f"Dependency {dependency} for module {module.name} not found")

    def _get_initialization_order(self) -> List[str]:
        """Dependency-first order; registration order breaks ties."""
        visited = set()
        temp_visited = set()
        order = []

        def visit(module_name: str):
            if module_name in temp_visited:
                raise ValueError(f"Circular dependency detected involving module {module_name}")
            if module_name not in visited:
                temp_visited.add(module_name)
                for dependency in self.modules[module_name].dependencies:
                    visit(dependency)
                temp_visited.remove(module_name)
                visited.add(module_name)
                order.append(module_name)

        for module_name in self.modules:
            if module_name not in visited:
                visit(module_name)
        return order

    def resolve(self, names: Sequence[str]) -> List[BaseModule]:
        """Suites for the requested names; "all" means every registered suite."""
        if "all" in names:
            return [self.modules[n] for n in self._get_initialization_order()]
        unknown = [n for n in names if n not in self.modules]
        if unknown:
            raise UsageError(f"unknown suite(s) {', '.join(unknown)}; known: {', '.join(self.modules)}, all")
        return [self.modules[n] for n in names]

    async def _run_one(self, module: BaseModule, context: SuiteContext,
                       pool: ThreadPoolExecutor) -> Optional[VerificationReport]:
        if not module.applies_to(context):
            self.logger.info(f"Suite {module.name} does not apply to {context.field_name}; skipped")
            return None
        self.logger.info(f"Running suite {module.name} on {context.field_name}")
        loop = asyncio.get_running_loop()
        return await loop.run_in_executor(pool, module.run, context)

    async def run_suites(self, names: Sequence[str], contexts: Sequence[SuiteContext]) -> VerificationReport:
        """Run the named suites on every context and merge the reports.

        At most CHARFLOW_THREADS (suite, field) pairs run at the same time.
        """
        await self.initialize_all()
        modules = self.resolve(names)
        pairs = [(m, c) for c in contexts for m in modules]
        workers = worker_count(len(pairs))
        self.logger.debug(f"Running {len(pairs)} suite jobs on {workers} thread(s)")
        with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="charflow-suite") as pool:
            results = await asyncio.gather(*(self._run_one(m, c, pool) for m, c in pairs))
        reports = [r for r in results if r is not None]
        if not reports:
            return new_report()
        return merge(reports)


def build_default_manager() -> ModuleManager:
    """Manager with every built-in suite registered."""
    from charflow.modules import get_all_suites

    manager = ModuleManager()
    for suite in get_all_suites():
        manager.register_module(suite)
    return manager
