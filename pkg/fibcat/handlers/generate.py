"""
Corpus generation command handler.
"""
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO

from config import ExitCode, get_logger
from config.constants import GenMode
from fibcat.models.instance import Instance
from fibcat.services.generators import (
    TENSOR_BASES,
    base_blueprint,
    build_corpus,
    mutation_battery,
    strict_corpus,
    strict_presheaf_instance,
    twisted_instance,
)
from fibcat.utils import emit_instance, format_json

logger = get_logger(__name__)

DEFAULT_BASE = "powerset2"
DEFAULT_FIBER = "bz3"


class GenerateHandlers:
    """Handler for --gen."""

    def __init__(self, out: Optional[TextIO] = None) -> None:
        self.out = out

    def _emit(self, text: str) -> None:
        (self.out or sys.stdout).write(text)

    def _write(self, instances: List[Instance], out_dir: Path) -> List[str]:
        return [str(emit_instance(i, out_dir / f"{i.name}.json")) for i in instances]

    def generate(
        self,
        mode: GenMode,
        out_dir: str,
        seed: int,
        base: Optional[str] = None,
        fiber: Optional[str] = None,
        count: int = 100,
    ) -> ExitCode:
        """
        Handle --gen: write instance files and print their paths.

        strict emits one instance when a base or fiber is given and the whole
        strict corpus otherwise; twist likewise emits one twisted instance or
        the full seeded corpus; mutate emits count mutants together with the
        list of mutations outside every enumerated diagram in _undetectable.json.

        Args:
            mode: strict, twist or mutate
            out_dir: Output directory
            seed: Corpus seed
            base: Base blueprint name
            fiber: Fiber blueprint name
            count: Number of mutants

        Returns:
            OK

        Raises:
            BadBlueprint: For unknown blueprint names
        """
        directory = Path(out_dir)
        single = base is not None or fiber is not None
        base_name, fiber_name = base or DEFAULT_BASE, fiber or DEFAULT_FIBER
        summary: Dict[str, Any] = {"mode": mode.value, "seed": seed}

        if mode == GenMode.STRICT:
            if single:
                b = base_blueprint(base_name)
                instances = [strict_presheaf_instance(b, fiber_name, tensor=base_name in TENSOR_BASES)]
            else:
                instances = strict_corpus()
        elif mode == GenMode.TWIST:
            instances = [twisted_instance(base_name, fiber_name, seed)] if single else build_corpus(seed)
        else:
            battery = mutation_battery(seed, count)
            instances = battery.instances
            summary["undetectable"] = [
                {"family": r.family, "key": list(r.key), "object": r.obj} for r in battery.undetectable
            ]

        summary["files"] = self._write(instances, directory)
        if mode == GenMode.MUTATE:
            index = directory / "_undetectable.json"
            index.write_text(format_json(summary["undetectable"]), encoding="utf-8")
            summary["files"].append(str(index))
        logger.info(f"Generated {len(instances)} {mode.value} instances in {directory}")
        self._emit(format_json(summary))
        return ExitCode.OK
