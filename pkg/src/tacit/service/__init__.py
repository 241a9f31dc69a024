from .bench import BenchReport, BenchRow, bench_file, report_csv, report_json

__all__ = ["BenchReport", "BenchRow", "bench_file", "report_csv", "report_json"]
