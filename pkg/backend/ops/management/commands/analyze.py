# backend/ops/management/commands/analyze.py
from __future__ import annotations

from ops.management.base import AlgebraCommand
from algebra.services.runner import RunConfig


class Command(AlgebraCommand):
    help = (
        "Drapeaux seminormal / normal, normalisation et seminormalisation d'un semigroupe "
        "affine ou de chaque cellule d'un complexe monoïdal. Usage: analyze INPUT [--bound B] [--format json|table]"
    )
    command_name = "analyze"

    def build_config(self, opts):
        return RunConfig.build(
            "analyze", opts["input"],
            box=opts["box"], cell_box=opts["cell_box"], field=opts["field"],
            bound=opts["bound"], jobs=opts["jobs"], output_format=opts["output_format"],
        )
