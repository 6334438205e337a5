# backend/ops/management/commands/cohomology.py
from __future__ import annotations

from ops.management.base import AlgebraCommand
from algebra.services.runner import KINDS, RunConfig


class Command(AlgebraCommand):
    help = (
        "Dimensions de cohomologie des tranches (Čech, Ishida, Ishida saturé) sur une boîte de degrés. "
        "Usage: cohomology INPUT --kind {cech,ishida,plus} [--box] [--cell-box] [--field] [--bound] [--jobs] [--degree-zero]"
    )
    command_name = "cohomology"

    def add_arguments(self, parser):
        super().add_arguments(parser)
        parser.add_argument("--kind", choices=KINDS, default="cech")
        parser.add_argument(
            "--degree-zero", dest="degree_zero", action="store_true",
            help="Seulement le degré 0 (cohomologie réduite de la réalisation)",
        )

    def job_name(self, config):
        return f"cohomology.{config.kind}"

    def build_config(self, opts):
        return RunConfig.build(
            "cohomology", opts["input"],
            box=opts["box"], cell_box=opts["cell_box"], field=opts["field"],
            bound=opts["bound"], jobs=opts["jobs"], output_format=opts["output_format"],
            kind=opts["kind"], degree_zero=bool(opts["degree_zero"]),
        )
