"""Deterministic text renderings of polynomials.

Plain and LaTeX output list terms in descending graded-lex order (leading
term first); JSON serialization stays ascending, matching the wire format
of MPoly.to_json_terms.  Dimensions up to three use the letters x, y, z;
higher dimensions fall back to x1..xd (x_{i} in LaTeX).
"""

from __future__ import annotations

import json

from . import multiindex as mi
from .mpoly import MPoly
from .rationals import format_rational

_LETTERS = ("x", "y", "z")


def render(p: MPoly, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(p.to_json_terms(), separators=(",", ":"))
    if fmt == "plain":
        return render_plain(p)
    if fmt == "latex":
        return render_latex(p)
    raise ValueError(f"unknown format {fmt!r}")


def _variable_names(dim: int, latex: bool) -> list:
    if dim <= 3:
        return list(_LETTERS[:dim])
    if latex:
        return [f"x_{{{i + 1}}}" for i in range(dim)]
    return [f"x{i + 1}" for i in range(dim)]


def _descending_terms(p: MPoly) -> list:
    return sorted(p.terms.items(), key=lambda t: mi.grlex_key(t[0]), reverse=True)


def _monomial_plain(exp, names, dim) -> str:
    factors = []
    for axis, e in enumerate(exp):
        if e == 0:
            continue
        factors.append(names[axis] if e == 1 else f"{names[axis]}^{e}")
    sep = "" if dim <= 3 else "*"
    return sep.join(factors)


def _monomial_latex(exp, names) -> str:
    factors = []
    for axis, e in enumerate(exp):
        if e == 0:
            continue
        factors.append(names[axis] if e == 1 else f"{names[axis]}^{{{e}}}")
    return "".join(factors)


def render_plain(p: MPoly) -> str:
    if p.is_zero:
        return "0"
    names = _variable_names(p.dim, latex=False)
    pieces = []
    for exp, coef in _descending_terms(p):
        mono = _monomial_plain(exp, names, p.dim)
        coef_str = format_rational(abs(coef))
        if not mono:
            body = coef_str
        elif coef_str == "1":
            body = mono
        elif coef.denominator == 1:
            body = f"{coef_str}{mono}"
        else:
            body = f"{coef_str} {mono}"
        pieces.append(("-" if coef < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def render_latex(p: MPoly) -> str:
    if p.is_zero:
        return "0"
    names = _variable_names(p.dim, latex=True)
    pieces = []
    for exp, coef in _descending_terms(p):
        mono = _monomial_latex(exp, names)
        mag = abs(coef)
        if mag.denominator == 1:
            coef_str = str(mag.numerator)
        else:
            coef_str = f"\\frac{{{mag.numerator}}}{{{mag.denominator}}}"
        if not mono:
            body = coef_str
        elif coef_str == "1":
            body = mono
        else:
            body = f"{coef_str}{mono}"
        pieces.append(("-" if coef < 0 else "+", body))
    sign, body = pieces[0]
    out = body if sign == "+" else f"-{body}"
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out
