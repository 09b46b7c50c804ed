from .check import Check, Relation, all_passed
from .manifest import Manifest, create_manifest, tag_rows, write_results
from .table import table_from_checks
from .writer import (
    Value,
    canonical_json,
    columns_of,
    config_hash,
    format_value,
    json_value,
    write_csv,
    write_json,
)

__all__ = [
    "Check",
    "Relation",
    "all_passed",
    "Manifest",
    "create_manifest",
    "tag_rows",
    "write_results",
    "table_from_checks",
    "Value",
    "canonical_json",
    "columns_of",
    "config_hash",
    "format_value",
    "json_value",
    "write_csv",
    "write_json",
]
