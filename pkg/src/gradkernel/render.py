"""Deterministic text form for kernel values.

One fixed rendering for every value: Fractions as num/den, Laurent terms in
descending exponent order, graded monomials in table order, series terms in
ascending degree.  Everything printed here re-parses to an equal value, which
the script round-trip test pins down.
"""

from __future__ import annotations

from fractions import Fraction


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def format_solution(s) -> str:
    return "(%s;%s)" % (
        ",".join(str(x) for x in s.p),
        ",".join(str(x) for x in s.q),
    )


def format_solution_set(solutions) -> str:
    return "{%s}" % ",".join(format_solution(s) for s in sorted(solutions))


def _power(name: str, e: int) -> str:
    return name if e == 1 else f"{name}^{e}"


def format_base_monomial(table, expo, scalar: Fraction) -> str:
    """One Laurent term, e.g. 3/2*x^2*y^-1; scalar must be nonzero."""
    factors = [
        _power(table.base[i], e) for i, e in enumerate(expo) if e != 0
    ]
    if not factors:
        return format_fraction(scalar)
    if scalar == 1:
        return "*".join(factors)
    if scalar == -1:
        return "-" + "*".join(factors)
    return "*".join([format_fraction(scalar)] + factors)


def format_coefficient(coef) -> str:
    if coef.is_zero():
        return "0"
    parts = []
    for expo in sorted(coef.terms, reverse=True):
        term = format_base_monomial(coef.table, expo, coef.terms[expo])
        if parts and term.startswith("-"):
            parts.append("- " + term[1:])
        elif parts:
            parts.append("+ " + term)
        else:
            parts.append(term)
    return " ".join(parts)


def format_graded_monomial(table, expo) -> str:
    factors = [
        _power(table.graded[i][0], e) for i, e in enumerate(expo) if e != 0
    ]
    return "*".join(factors)


def _series_term(table, expo, coef) -> tuple[bool, str]:
    """Render one series term; returns (negative, text without sign)."""
    mono = format_graded_monomial(table, expo)
    if not mono:
        return False, format_coefficient(coef)
    unit = coef.as_unit()
    if unit is None:
        return False, f"({format_coefficient(coef)})*{mono}"
    bexpo, scalar = unit
    negative = scalar < 0
    lead = format_base_monomial(coef.table, bexpo, abs(scalar))
    if lead == "1":
        return negative, mono
    return negative, f"{lead}*{mono}"


def format_series(f) -> str:
    from .series import monomial_degree

    if not f.terms:
        return "0"
    keys = sorted(f.terms, key=lambda e: (monomial_degree(f.table, e), e))
    parts = []
    for expo in keys:
        negative, text = _series_term(f.table, expo, f.terms[expo])
        if not parts:
            parts.append(("-" if negative else "") + text)
        else:
            parts.append(("- " if negative else "+ ") + text)
    return " ".join(parts)


def format_morphism(m) -> str:
    lines = []
    for name in list(m.target.base) + list(m.target.graded_names):
        lines.append(f"  {name} -> {format_series(m.images[name])};")
    return "{\n" + "\n".join(lines) + "\n}"


def format_bigraded(b) -> list[str]:
    return [
        f"({pos},{neg}) {format_series(piece)}"
        for (pos, neg), piece in sorted(b.components.items())
    ]


def _tail_term(basis_strs, counts, coef) -> tuple[bool, str]:
    zpart = "*".join(
        f"({basis_strs[k]})" if c == 1 else f"({basis_strs[k]})^{c}"
        for k, c in enumerate(counts)
        if c
    )
    if not zpart:
        text = format_coefficient(coef)
        return text.startswith("-"), text.lstrip("-")
    unit = coef.as_unit()
    if unit is None:
        return False, f"({format_coefficient(coef)})*{zpart}"
    bexpo, scalar = unit
    lead = format_base_monomial(coef.table, bexpo, abs(scalar))
    if lead == "1":
        return scalar < 0, zpart
    return scalar < 0, f"{lead}*{zpart}"


def format_normal_form(nf) -> list[str]:
    basis_strs = [format_graded_monomial(nf.table, b) for b in nf.basis]
    lines = ["basis {%s}" % ",".join(basis_strs)]
    for lead in sorted(nf.parts):
        parts = []
        tail = nf.parts[lead]
        for counts in sorted(tail):
            negative, text = _tail_term(basis_strs, counts, tail[counts])
            if not parts:
                parts.append(("-" if negative else "") + text)
            else:
                parts.append(("- " if negative else "+ ") + text)
        lead_str = format_graded_monomial(nf.table, lead) or "1"
        lines.append(f"lead {lead_str}: " + " ".join(parts))
    return lines
