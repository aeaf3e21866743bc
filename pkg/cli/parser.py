"""
Analizador de argumentos. Las opciones no indicadas quedan fuera del espacio de nombres para
que el archivo de configuración y los valores por defecto de RunConfig las resuelvan.
"""

import argparse

from models import Alternative, LogLevel
from models.config import TOOL_NAME, TOOL_VERSION


COMMANDS = ("phantom", "prep", "cv", "eval", "stats", "report")
STATS_TESTS = ("wilcoxon", "kappa", "chi2", "reader")

# Destinos que no son claves de RunConfig
NON_CONFIG_KEYS = {"command", "stats_test", "config"}


def _global_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="Archivo YAML plano con opciones (clave: valor).")
    common.add_argument("--seed", type=int, help="Semilla raíz de todos los flujos aleatorios.")
    common.add_argument("--jobs", type=int, help="Procesos para ejecutar folds en paralelo.")
    common.add_argument("--out", help="Directorio de salida de la ejecución.")
    common.add_argument("--force", action="store_true", help="Permite escribir sobre un directorio con contenido.")
    common.add_argument("--log-level", choices=[level.value for level in LogLevel])
    common.add_argument("--log-file", help="Archivo de log (por defecto <out>/jointnet.log).")
    return common


def _threshold_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--threshold", type=float, help="Umbral de probabilidad en (0, 1).")
    group.add_argument("--threshold-score", type=float, help="Umbral en (-1, 1); se convierte a (t + 1) / 2.")


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(
        prog=TOOL_NAME,
        description="Detección de sacroileítis activa en radiografías: fantomas, preprocesado, "
                    "validación cruzada, evaluación y estadística.",
        parents=[common],
    )
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {TOOL_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    phantom = sub.add_parser("phantom", parents=[common], argument_default=argparse.SUPPRESS,
                             help="Genera un dataset sintético con manifiesto y plantilla.")
    phantom.add_argument("--patients", type=int)
    phantom.add_argument("--height", type=int)
    phantom.add_argument("--width", type=int)
    phantom.add_argument("--prevalence", type=float)
    phantom.add_argument("--delta", type=float, help="Incremento de intensidad de la inflamación.")
    phantom.add_argument("--noise", type=float, help="Desviación del ruido.")
    phantom.add_argument("--aux-coupling", type=float)
    phantom.add_argument("--age-min", type=int)
    phantom.add_argument("--age-max", type=int)
    phantom.add_argument("--template-side", type=int)

    prep = sub.add_parser("prep", parents=[common], argument_default=argparse.SUPPRESS,
                          help="Preprocesa las radiografías de un manifiesto en parches ROI.")
    prep.add_argument("--manifest")
    prep.add_argument("--template")
    prep.add_argument("--patch-size", type=int)
    prep.add_argument("--tiles-rows", type=int)
    prep.add_argument("--tiles-cols", type=int)
    prep.add_argument("--clip-limit", type=float, help="Límite relativo de contraste; 'inf' lo desactiva.")
    prep.add_argument("--bins", type=int)

    cv = sub.add_parser("cv", parents=[common], argument_default=argparse.SUPPRESS,
                        help="Validación cruzada por paciente del ensamble.")
    cv.add_argument("--manifest")
    cv.add_argument("--patches", help="Directorio de parches generado por 'prep'.")
    cv.add_argument("--patch-size", type=int)
    cv.add_argument("--folds", type=int)
    cv.add_argument("--epochs", type=int)
    cv.add_argument("--lr", type=float)
    cv.add_argument("--batch-size", type=int)
    cv.add_argument("--weight-decay", type=float)
    cv.add_argument("--backbones", help="Lista separada por comas: dense,residual,plain.")
    cv.add_argument("--no-age", action="store_true")
    cv.add_argument("--no-sex", action="store_true")
    cv.add_argument("--no-augment", action="store_true")
    cv.add_argument("--no-normalize", action="store_true")
    cv.add_argument("--hflip-prob", type=float)
    cv.add_argument("--max-rotation", type=float)
    cv.add_argument("--max-translate", type=float)
    cv.add_argument("--jitter", type=float)
    cv.add_argument("--copies", type=int)
    cv.add_argument("--precision", choices=["float32", "float64"])
    cv.add_argument("--resamples", type=int)
    _threshold_options(cv)

    ev = sub.add_parser("eval", parents=[common], argument_default=argparse.SUPPRESS,
                        help="Evalúa un checkpoint sobre un manifiesto y emite métricas y curvas.")
    ev.add_argument("--checkpoint")
    ev.add_argument("--manifest")
    ev.add_argument("--patches")
    ev.add_argument("--no-normalize", action="store_true")
    ev.add_argument("--prevalence-min", type=float)
    ev.add_argument("--prevalence-max", type=float)
    ev.add_argument("--prevalence-points", type=int)
    ev.add_argument("--resamples", type=int)
    _threshold_options(ev)

    stats = sub.add_parser("stats", parents=[common], argument_default=argparse.SUPPRESS,
                           help="Pruebas estadísticas sobre tablas o AUC por fold.")
    tests = stats.add_subparsers(dest="stats_test", required=True)
    wilcoxon = tests.add_parser("wilcoxon", parents=[common], argument_default=argparse.SUPPRESS)
    wilcoxon.add_argument("--a", help="CSV de AUC por fold del modelo A (fold_auc.csv).")
    wilcoxon.add_argument("--b", help="CSV de AUC por fold del modelo B.")
    wilcoxon.add_argument("--column-a")
    wilcoxon.add_argument("--column-b")
    wilcoxon.add_argument("--alternative", choices=[alt.value for alt in Alternative])
    for name, help_text in (
            ("kappa", "Tabla de acuerdo k x k por filas, p. ej. 40,10,5,45."),
            ("chi2", "Tabla 2x2 a,b,c,d por filas."),
            ("reader", "Tabla lector x referencia tn,fn,fp,tp."),
    ):
        test = tests.add_parser(name, parents=[common], argument_default=argparse.SUPPRESS)
        test.add_argument("--table", help=help_text)

    report = sub.add_parser("report", parents=[common], argument_default=argparse.SUPPRESS,
                            help="Compara varias ejecuciones de 'cv'.")
    report.add_argument("--runs", help="Directorios de ejecución separados por comas.")

    return parser


def config_overrides(args: argparse.Namespace) -> dict:
    """Opciones indicadas explícitamente, con el nombre de su clave en RunConfig."""
    return {key: value for key, value in vars(args).items() if key not in NON_CONFIG_KEYS}
