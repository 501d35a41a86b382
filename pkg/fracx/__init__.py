"""Выпуклые релаксации дробных программ: LEF/CEF/R_QP/1-Term/k-Term, моментные оболочки."""

__version__ = "0.3.0"
