"""Nut graphs: certified decision, isomorph-free generation and kernel statistics."""

from .exact import is_nut_exact
from .generate import GenerationConstraints, generate
from .graph import Graph, parse_graph6, write_graph6
from .nut import NutCertificate, is_nut, verify_certificate
from .stats import NutReport, StatsTable, nut_report

__all__ = [
    "Graph",
    "GenerationConstraints",
    "NutCertificate",
    "NutReport",
    "StatsTable",
    "generate",
    "is_nut",
    "is_nut_exact",
    "nut_report",
    "parse_graph6",
    "verify_certificate",
    "write_graph6",
]
