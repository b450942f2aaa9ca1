"""Text and JSON formats, and seeded instance generators."""

from pvas_bound.adapters.generators import random_gvas, random_normalized, random_pvas
from pvas_bound.adapters.json_codec import load_certificate, load_flow_tree, to_dot
from pvas_bound.adapters.text_format import format_gvas, format_pvas, parse_gvas, parse_pvas

__all__ = [
    "format_gvas",
    "format_pvas",
    "load_certificate",
    "load_flow_tree",
    "parse_gvas",
    "parse_pvas",
    "random_gvas",
    "random_normalized",
    "random_pvas",
    "to_dot",
]
