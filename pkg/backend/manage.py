#!/usr/bin/env python
"""
Point d'entrée de la CLI.

    python manage.py analyze <entrée> [--bound B] [--box ...]
    python manage.py cohomology <entrée> [--kind {cech,ishida,plus}] [--degree-zero]
    python manage.py checks <entrée> {duality-check,cm-probe,cm-chain,compare,topology,validate}

Le rapport part sur stdout ; les logs vont dans var/logs/ (voir doc/usage.txt).
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'sitecfg.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Is it installed (pip install -r requirements.txt) "
            "and is the virtual environment active?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
