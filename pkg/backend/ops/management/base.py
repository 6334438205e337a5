# backend/ops/management/base.py
from __future__ import annotations

from typing import Any, Dict

from django.core.management.base import BaseCommand, CommandError

from algebra.errors import AlgebraError
from algebra.services.reports import ExitCode, Report
from algebra.services.runner import FORMATS, RunConfig, execute, report_metrics
from ops.services.jobrun import job_context

EXIT_MESSAGES = {
    ExitCode.WITNESSES: "Témoins trouvés.",
    ExitCode.INVALID_INPUT: "Entrée invalide.",
    ExitCode.BOUND_TOO_SMALL: "Borne de recherche insuffisante (augmenter --bound).",
    ExitCode.UNRESOLVED: "Degrés non résolus avec la borne courante.",
}


class AlgebraCommand(BaseCommand):
    """
    Socle des commandes analyze / cohomology / checks : options communes, JobRun,
    rapport sur stdout, puis CommandError(returncode=...) si le code n'est pas 0.
    """

    command_name = ""
    stealth_options = ("stdin",)

    def add_arguments(self, parser):
        parser.add_argument("input", help="Fichier JSON, '-' (stdin) ou nom d'un jeu embarqué")
        parser.add_argument("--box", default=None, help="Boîte de degrés, ex. -3..3 ou 0..4,0..4")
        parser.add_argument(
            "--cell-box", dest="cell_box", action="append", default=[],
            help="Boîte propre à une cellule : ID=lo..hi,... (répétable)",
        )
        parser.add_argument("--field", default=None, help="QQ, GF(p), Fp ou p")
        parser.add_argument("--bound", type=int, default=None, help="Borne de recherche B")
        parser.add_argument("--jobs", type=int, default=None, help="Processus parallèles pour les balayages")
        parser.add_argument("--format", dest="output_format", choices=FORMATS, default=None)

    def build_config(self, opts: Dict[str, Any]) -> RunConfig:
        raise NotImplementedError

    def job_name(self, config: RunConfig) -> str:
        return self.command_name

    def handle(self, *args, **opts):
        try:
            config = self.build_config(opts)
        except AlgebraError as e:
            raise CommandError(f"{e.code}: {e.detail}", returncode=int(ExitCode.INVALID_INPUT)) from e

        with job_context(self.job_name(config), params=config.to_params()) as jc:
            report: Report = execute(config, stdin=opts.get("stdin"), logger=jc.logger)
            jc.set_metrics(report_metrics(report))
            jc.set_outcome(
                report.exit_code,
                input_digest=report.input_digest,
                error=str(report.error.get("message", "")),
            )

        self.stdout.write(report.render(config.output_format), ending="")
        if report.exit_code != ExitCode.OK:
            msg = EXIT_MESSAGES[report.exit_code]
            if report.error:
                msg = f"{msg} {report.error.get('code')}: {report.error.get('message')}"
            raise CommandError(msg, returncode=int(report.exit_code))
