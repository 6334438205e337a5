# backend/ops/management/commands/checks.py
from __future__ import annotations

from ops.management.base import AlgebraCommand
from algebra.services.runner import CHECKS, RunConfig


class Command(AlgebraCommand):
    help = (
        "Vérifications bornées à une boîte : dualité, Cohen-Macaulay, chaîne CM, comparaisons, "
        "topologie en degré 0, axiomes du complexe. Usage: checks INPUT {" + ",".join(CHECKS) + "} [options]"
    )
    command_name = "checks"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("check", choices=CHECKS)

    def job_name(self, config):
        return f"checks.{config.check}"

    def build_config(self, opts):
        return RunConfig.build(
            "checks", opts["input"],
            box=opts["box"], cell_box=opts["cell_box"], field=opts["field"],
            bound=opts["bound"], jobs=opts["jobs"], output_format=opts["output_format"],
            check=opts["check"],
        )
