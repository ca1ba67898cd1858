"""Coloured chord diagrams: data model, JSON parsing, and small-scale enumeration.

A diagram is a set of oriented circles (components), each carrying a colour
(a 1-based variable index) and a cyclic list of sites.  Sites are chord
endpoints, subdivision points, or the single marked point.  Arcs are the
segments between consecutive sites; the arc written after a site in cyclic
order is that site's out-arc.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterator, Sequence

__all__ = [
    "DiagramError",
    "Site",
    "Component",
    "ColouredChordDiagram",
    "parse_chord_diagram",
    "subdivide",
    "enumerate_diagrams",
]


class DiagramError(ValueError):
    """Structurally invalid diagram; message names the offending element."""


@dataclass(frozen=True)
class Site:
    kind: str  # "chord" | "marked" | "sub"
    chord: str | None = None
    side: str | None = None  # "A" | "B" for chord endpoints

    def label(self) -> str:
        if self.kind == "chord":
            return f"{self.chord}:{self.side}"
        return self.kind


@dataclass(frozen=True)
class Component:
    colour: int
    sites: tuple[Site, ...]


@dataclass(frozen=True)
class ChordEnd:
    """One endpoint of a chord, resolved to its component and arc context."""

    component: int
    in_arc: int
    out_arc: int
    colour: int


@dataclass(frozen=True)
class Chord:
    name: str
    a: ChordEnd
    b: ChordEnd


class ColouredChordDiagram:
    """Validated immutable diagram with a single marked point."""

    def __init__(self, variables: Sequence[str], components: Sequence[Component]):
        self.variables = tuple(variables)
        self.components = tuple(components)
        self._validate()
        self._index_arcs()

    # -- validation and arc table ----------------------------------------

    def _validate(self) -> None:
        marked = 0
        ends: dict[str, list[tuple[int, int]]] = {}
        for ci, comp in enumerate(self.components):
            if not 1 <= comp.colour <= len(self.variables):
                raise DiagramError(
                    f"component {ci}: colour {comp.colour} has no variable "
                    f"(declared {list(self.variables)})"
                )
            if not comp.sites:
                raise DiagramError(f"component {ci}: no sites")
            has_chord = False
            for si, site in enumerate(comp.sites):
                if site.kind == "marked":
                    marked += 1
                elif site.kind == "chord":
                    has_chord = True
                    if site.side not in ("A", "B"):
                        raise DiagramError(
                            f"component {ci} site {si}: chord side must be A or B"
                        )
                    ends.setdefault(site.chord, []).append((ci, si))
                elif site.kind != "sub":
                    raise DiagramError(f"component {ci} site {si}: unknown kind {site.kind!r}")
            if not has_chord:
                raise DiagramError(
                    f"component {ci}: no chord endpoints (arc bookkeeping "
                    "requires every circle to meet a chord)"
                )
        if marked != 1:
            raise DiagramError(f"diagram must have exactly one marked point, found {marked}")
        for name, sites in ends.items():
            if len(sites) != 2:
                raise DiagramError(f"chord {name!r} has {len(sites)} endpoints, wants 2")
            sides = {self.components[ci].sites[si].side for ci, si in sites}
            if sides != {"A", "B"}:
                raise DiagramError(f"chord {name!r} must have one A and one B endpoint")

    def _index_arcs(self) -> None:
        # Arc k is the out-arc of the k-th site in reading order; labels a1..an.
        self.arc_labels: list[str] = []
        self._site_arc: dict[tuple[int, int], int] = {}
        n = 0
        for ci, comp in enumerate(self.components):
            for si in range(len(comp.sites)):
                self._site_arc[(ci, si)] = n
                self.arc_labels.append(f"a{n + 1}")
                n += 1
        self.arc_colour: list[int] = []
        for ci, comp in enumerate(self.components):
            self.arc_colour.extend(comp.colour for _ in comp.sites)

        self.chords: list[Chord] = []
        placed: dict[str, dict[str, ChordEnd]] = {}
        order: list[str] = []
        for ci, comp in enumerate(self.components):
            k = len(comp.sites)
            for si, site in enumerate(comp.sites):
                if site.kind == "marked":
                    self.marked_component = ci
                    self.marked_arc = self._site_arc[(ci, si)]
                if site.kind != "chord":
                    continue
                out_arc = self._site_arc[(ci, si)]
                in_arc = self._site_arc[(ci, (si - 1) % k)]
                end = ChordEnd(ci, in_arc, out_arc, comp.colour)
                slot = placed.setdefault(site.chord, {})
                if site.chord not in order:
                    order.append(site.chord)
                slot[site.side] = end
        for name in order:
            self.chords.append(Chord(name, placed[name]["A"], placed[name]["B"]))

        self.subdivisions: list[tuple[int, int]] = []  # (in_arc, out_arc)
        for ci, comp in enumerate(self.components):
            k = len(comp.sites)
            for si, site in enumerate(comp.sites):
                if site.kind == "sub":
                    self.subdivisions.append(
                        (self._site_arc[(ci, (si - 1) % k)], self._site_arc[(ci, si)])
                    )

    # -- derived data ------------------------------------------------------

    @property
    def n_arcs(self) -> int:
        return len(self.arc_labels)

    @property
    def n_chords(self) -> int:
        return len(self.chords)

    @property
    def marked_colour(self) -> int:
        return self.components[self.marked_component].colour

    def __eq__(self, other) -> bool:
        if not isinstance(other, ColouredChordDiagram):
            return NotImplemented
        return self.variables == other.variables and self.components == other.components

    def __hash__(self):
        return hash((self.variables, self.components))

    def __repr__(self) -> str:
        parts = []
        for comp in self.components:
            parts.append(
                f"{self.variables[comp.colour - 1]}:[" +
                " ".join(s.label() for s in comp.sites) + "]"
            )
        return "ChordDiagram(" + "; ".join(parts) + ")"

    # -- editing (returns new diagrams) -------------------------------------

    def with_sites(self, ci: int, sites: Sequence[Site]) -> "ColouredChordDiagram":
        comps = list(self.components)
        comps[ci] = Component(comps[ci].colour, tuple(sites))
        return ColouredChordDiagram(self.variables, comps)

    def swap_chord_sides(self, name: str) -> "ColouredChordDiagram":
        comps = []
        for comp in self.components:
            sites = tuple(
                Site("chord", s.chord, "B" if s.side == "A" else "A")
                if s.kind == "chord" and s.chord == name
                else s
                for s in comp.sites
            )
            comps.append(Component(comp.colour, sites))
        return ColouredChordDiagram(self.variables, comps)

    def move_marked(self, ci: int, gap: int) -> "ColouredChordDiagram":
        """Reinsert the marked point before position gap on component ci."""
        comps = []
        for i, comp in enumerate(self.components):
            sites = [s for s in comp.sites if s.kind != "marked"]
            if i == ci:
                sites.insert(gap % (len(sites) + 1), Site("marked"))
            comps.append(Component(comp.colour, tuple(sites)))
        return ColouredChordDiagram(self.variables, comps)

    def to_json_obj(self) -> dict:
        comps = []
        for comp in self.components:
            sites = []
            for s in comp.sites:
                if s.kind == "chord":
                    sites.append({"chord": s.chord, "side": s.side})
                elif s.kind == "marked":
                    sites.append({"marked": True})
                else:
                    sites.append({"sub": True})
            comps.append({"colour": comp.colour, "sites": sites})
        return {"variables": list(self.variables), "components": comps}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2)


def parse_chord_diagram(source) -> ColouredChordDiagram:
    """Parse a diagram from a JSON string, dict, or file-like object."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, str):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as e:
            raise DiagramError(f"not valid JSON: {e}") from None
    else:
        obj = source
    if not isinstance(obj, dict) or "components" not in obj:
        raise DiagramError("diagram file must be an object with 'components'")
    variables = obj.get("variables")
    if not variables:
        raise DiagramError("diagram file must declare 'variables'")
    seen_sides: dict[str, list[str]] = {}
    comps = []
    for ci, c in enumerate(obj["components"]):
        sites = []
        for si, s in enumerate(c.get("sites", [])):
            if "marked" in s:
                sites.append(Site("marked"))
            elif "sub" in s:
                sites.append(Site("sub"))
            elif "chord" in s:
                name = str(s["chord"])
                side = s.get("side")
                if side is None:
                    # default: first written endpoint is side A
                    taken = seen_sides.setdefault(name, [])
                    side = "A" if not taken else "B"
                seen_sides.setdefault(name, []).append(side)
                sites.append(Site("chord", name, side))
            else:
                raise DiagramError(f"component {ci} site {si}: unrecognized site {s!r}")
        comps.append(Component(int(c["colour"]), tuple(sites)))
    return ColouredChordDiagram(variables, comps)


def subdivide(d: ColouredChordDiagram, arc_label: str) -> ColouredChordDiagram:
    """Split the named arc with a subdivision point."""
    if arc_label not in d.arc_labels:
        raise DiagramError(f"unknown arc {arc_label!r} (have {d.arc_labels})")
    arc = d.arc_labels.index(arc_label)
    for ci, comp in enumerate(d.components):
        k = len(comp.sites)
        for si in range(k):
            if d._site_arc[(ci, si)] == arc:
                sites = list(comp.sites)
                sites.insert(si + 1, Site("sub"))
                return d.with_sites(ci, sites)
    raise DiagramError(f"arc {arc_label!r} not located")  # pragma: no cover


def enumerate_diagrams(
    m: int, colours: Sequence[int], variables: Sequence[str] | None = None
) -> Iterator[ColouredChordDiagram]:
    """All m-chord diagrams over components with the given colours.

    Endpoint slots are distributed over the components (at least one per
    component), paired in all ways, and the marked point is placed at
    position 0 of component 1.  Rotational duplicates are not removed.
    """
    if m > 4:
        raise DiagramError("enumeration capped at 4 chords")
    k = len(colours)
    if variables is None:
        variables = [f"t{i}" for i in range(1, max(colours) + 1)]
    total = 2 * m

    def pairings(slots: list[int]) -> Iterator[list[tuple[int, int]]]:
        if not slots:
            yield []
            return
        first = slots[0]
        for i in range(1, len(slots)):
            rest = slots[1:i] + slots[i + 1 :]
            for sub in pairings(rest):
                yield [(first, slots[i])] + sub

    for counts in itertools.product(range(1, total + 1), repeat=k):
        if sum(counts) != total:
            continue
        # slot s belongs to component comp_of[s], at local position loc_of[s]
        comp_of, loc_of = [], []
        for ci, n in enumerate(counts):
            for j in range(n):
                comp_of.append(ci)
                loc_of.append(j)
        for pairing in pairings(list(range(total))):
            side: dict[int, tuple[str, str]] = {}
            for idx, (sa, sb) in enumerate(pairing):
                name = f"c{idx + 1}"
                side[sa] = (name, "A")
                side[sb] = (name, "B")
            comps = []
            slot = 0
            for ci, n in enumerate(counts):
                sites = []
                if ci == 0:
                    sites.append(Site("marked"))
                for j in range(n):
                    name, sd = side[slot]
                    sites.append(Site("chord", name, sd))
                    slot += 1
                comps.append(Component(colours[ci], tuple(sites)))
            yield ColouredChordDiagram(variables, comps)
