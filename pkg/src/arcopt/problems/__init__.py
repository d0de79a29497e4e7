"""Benchmark problem library: hand-coded and text-format entries."""

from .registry import (BenchmarkEntry, available_names, get_problem,
                       reference_entry, reference_table)
from . import library as _library  # noqa: F401  (registers hand-coded problems)
from . import textfmt as _textfmt  # noqa: F401  (registers data-file problems)
from .textfmt import FormatError, load_data_file, parse_problem_text

__all__ = [
    "BenchmarkEntry",
    "FormatError",
    "available_names",
    "get_problem",
    "load_data_file",
    "parse_problem_text",
    "reference_entry",
    "reference_table",
]
