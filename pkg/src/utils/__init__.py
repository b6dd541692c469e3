"""ユーティリティモジュール"""
from .render import format_matrix, format_poly, format_quotient, format_series, format_sqrt
