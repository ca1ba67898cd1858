"""Singular links, resolutions, and the weight-system consistency check.

A singular diagram carries double points as sign-0 crossings.  Resolving
assigns each double point a crossing sign; the invariant of the singular
link is the alternating sum over all 2^m resolutions, and after the
substitution tk := exp(uk) its lowest surviving homogeneous part must
reproduce the chord-diagram weight of the underlying diagram.

The comparison sign between that series coefficient and the weight is a
single global constant.  With the row conventions used in this package it
is +1; the m=1 fixture pins it and the larger fixtures confirm it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import MultiPoly, TruncatedSeries, series_exp_substitute
from .chord import ColouredChordDiagram, Component, Site
from .link import LinkDiagram, LinkError, mva
from .weight import weight

__all__ = [
    "THEOREM_SIGN",
    "ResolutionSum",
    "TheoremCheck",
    "resolve",
    "underlying_chord_diagram",
    "verify_theorem",
]

# Global comparison sign: series coefficient == THEOREM_SIGN * weight.
THEOREM_SIGN = 1


def double_points(d: LinkDiagram) -> list[int]:
    return [ci for ci, c in enumerate(d.crossings) if c.sign == 0]


@dataclass(frozen=True)
class ResolutionSum:
    origin: LinkDiagram
    terms: tuple[tuple[int, LinkDiagram], ...]  # (sign, resolved diagram)


def _resolved_crossing(c, sigma: int):
    """Copy crossing c (a double) with the chosen geometric sign."""
    from .link import Crossing

    sigma0 = 1 if (c.second_in - c.under_in) % 4 == 3 else -1
    if sigma == sigma0:
        return Crossing(c.id, sigma, c.under_in, c.second_in)
    # the other strand goes under; relisting starts from its entry slot
    return Crossing(c.id, -sigma0, c.second_in, c.under_in)


def resolve(s: LinkDiagram) -> ResolutionSum:
    """All 2^m sign assignments of the double points, with parity signs."""
    doubles = double_points(s)
    if not doubles:
        raise LinkError("diagram has no double points to resolve")
    words = {
        key: mono
        for key, mono in s.word_overrides.items()
        if key not in {s.crossings[ci].id for ci in doubles}
    }
    terms = []
    m = len(doubles)
    for mask in range(1 << m):
        signs = [1 if mask >> k & 1 == 0 else -1 for k in range(m)]
        crossings = list(s.crossings)
        for k, ci in enumerate(doubles):
            crossings[ci] = _resolved_crossing(s.crossings[ci], signs[k])
        diagram = LinkDiagram(
            s.variables,
            s.components,
            crossings,
            s.segments,
            outer_dart=s.outer_dart,
            word_overrides=words,
            delete_hint=s.delete_hint,
            check_delete_hint=s.check_delete_hint,
            mark_component=s.mark_component,
            arc_names=s._arc_names,
        )
        parity = 1 if signs.count(-1) % 2 == 0 else -1
        terms.append((parity, diagram))
    return ResolutionSum(s, tuple(terms))


def underlying_chord_diagram(s: LinkDiagram) -> ColouredChordDiagram:
    """One circle per component, one chord per double point.

    Endpoint order follows the traversal of each component; the side of a
    chord named A is the endpoint met first (components in declared order).
    The marked point goes at position 0 of the designated component, which
    is an arc away from any double point.
    """
    doubles = set(double_points(s))
    if not doubles:
        raise LinkError("diagram has no double points")
    names = {ci: s.crossings[ci].id for ci in doubles}
    seen: set[int] = set()
    comps: list[Component] = []
    for k in range(len(s.components)):
        sites: list[Site] = []
        if k == s.mark_component:
            sites.append(Site("marked"))
        for ci, slot in s.strand_passages(k):
            if ci not in doubles:
                continue
            c = s.crossings[ci]
            if slot not in c.entry_slots():
                continue  # exit half of the same passage
            side = "A" if ci not in seen else "B"
            seen.add(ci)
            sites.append(Site("chord", names[ci], side))
        comps.append(Component(s.components[k].colour, tuple(sites)))
    return ColouredChordDiagram(s.variables, comps)


@dataclass(frozen=True)
class TheoremCheck:
    diagram: ColouredChordDiagram
    series_coefficient: MultiPoly  # degree m-1 part of the resolution series
    weight_value: MultiPoly
    verdict: str  # "equal" | "equal-up-to-sign" | "mismatch"
    observed_sign: int | None
    lower_parts_vanish: bool
    lower_parts: dict[int, MultiPoly]
    first_nonzero_degree: int | None
    cap: int
    n_doubles: int

    def ok(self) -> bool:
        return self.verdict == "equal" and self.lower_parts_vanish


def verify_theorem(s: LinkDiagram, cap: int | None = None) -> TheoremCheck:
    """Compare the resolution-sum series with the chord-diagram weight."""
    doubles = double_points(s)
    m = len(doubles)
    if cap is None:
        cap = m
    if cap < m:
        raise LinkError(f"cap {cap} below double-point count {m}")
    total = TruncatedSeries.const(len(s.variables), 0, cap)
    for parity, diagram in resolve(s).terms:
        value = mva(diagram, delete=diagram.delete_hint).value
        if diagram.check_delete_hint and not diagram.is_split_over():
            again = mva(diagram, delete=diagram.check_delete_hint).value
            if again != value:
                raise LinkError(
                    f"resolution of {s.crossings[doubles[0]].id}...: invariant "
                    "differs between deletion choices; fixture words are wrong"
                )
        total = total + series_exp_substitute(value, cap) * parity

    lower = {k: total.homogeneous_part(k) for k in range(m - 1)}
    lower_ok = all(p.is_zero() for p in lower.values())
    coeff = total.homogeneous_part(m - 1)
    first_nonzero = None
    for k in range(cap + 1):
        if not total.homogeneous_part(k).is_zero():
            first_nonzero = k
            break

    d = underlying_chord_diagram(s)
    w = weight(d).weight
    expected = w * THEOREM_SIGN
    if coeff == expected:
        verdict = "equal"
        observed: int | None = THEOREM_SIGN if not w.is_zero() else None
    elif coeff == -expected and not w.is_zero():
        verdict = "equal-up-to-sign"
        observed = -THEOREM_SIGN
    else:
        verdict = "mismatch"
        observed = None
    return TheoremCheck(
        d, coeff, w, verdict, observed, lower_ok, lower, first_nonzero, cap, m
    )
