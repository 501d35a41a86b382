from .csv_exporter import export_cdf_csv, export_report_csv, export_summary_csv, read_report_csv
from .json_exporter import load_instance, parse_instance, save_instance
from .lp_exporter import export_lp, sanitize, write_lp

__all__ = [
    "export_cdf_csv",
    "export_lp",
    "export_report_csv",
    "export_summary_csv",
    "load_instance",
    "parse_instance",
    "read_report_csv",
    "sanitize",
    "save_instance",
    "write_lp",
]
