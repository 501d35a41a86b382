"""Справочник экспериментов, релаксаций и колонок отчёта."""

# Эксперимент -> допустимые релаксации
EXPERIMENT_RELAXATIONS: dict[str, list[str]] = {
    "uniform-gap": [
        "LEF", "CEF", "RQP", "1TERM", "1TERM-CONIC", "KTERM", "ZMC", "ZMC-D",
    ],
    "assortment": [
        "LEF", "CEF", "RQP", "1TERM", "1TERM-CONIC", "KTERM", "ZMC", "ZMC-D",
    ],
    "univariate": [
        "UNI-MC", "UNI-MH",
    ],
}

# Набор по умолчанию воспроизводит структуру таблицы сравнения LEF / CEF / 1Term-Conic
DEFAULT_RELAXATIONS: dict[str, list[str]] = {
    "uniform-gap": ["LEF", "CEF", "1TERM-CONIC"],
    "assortment": ["LEF", "CEF", "1TERM-CONIC"],
    "univariate": ["UNI-MC", "UNI-MH"],
}

# Генератор, которым строится экземпляр эксперимента
EXPERIMENT_GENERATOR: dict[str, str] = {
    "uniform-gap": "uniform",
    "assortment": "assortment",
    "univariate": "univariate",
}

# Релаксации, которые решаются циклом отсечений
CUTTING_RELAXATIONS: frozenset[str] = frozenset({"CEF", "1TERM-CONIC", "UNI-MH"})

REPORT_FIELDS: list[str] = [
    "experiment", "n", "m", "seed", "relaxation", "k", "status",
    "value", "oracle", "oracle_method", "v_lef", "closed_lef_gap", "remaining_gap",
    "rounds", "cuts", "time_us", "error",
]

SUMMARY_FIELDS: list[str] = [
    "experiment", "n", "m", "relaxation", "metric", "count", "avg", "min", "max", "std",
]

CDF_FIELDS: list[str] = ["experiment", "n", "m", "relaxation", "rank", "gap", "fraction"]


def validate_relaxation(experiment: str, relaxation: str) -> bool:
    """Проверить, что релаксация допустима для эксперимента."""
    return (
        experiment in EXPERIMENT_RELAXATIONS
        and relaxation in EXPERIMENT_RELAXATIONS[experiment]
    )
