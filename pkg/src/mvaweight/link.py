"""Planar link diagrams and the multivariable Alexander polynomial.

A diagram is a 4-valent planar map: crossings with four ends listed in
counterclockwise rotational order, segments joining ends, and per-component
colour and rotation number.  Rotation numbers are declared in the input; a
combinatorial code cannot recover them.

Conventions, pinned once by reproducing the published five-crossing example
and never revisited:

* Ends of a regular crossing are listed counterclockwise starting from the
  incoming under-strand, so slot 0 is the under-in and slot 2 the under-out.
  The over strand enters at slot 3 for a positive crossing and at slot 1
  for a negative one.

* Alexander matrix rows, one per crossing, labeled by the exiting under
  arc, with x the under-strand colour and y the over-strand colour:
      positive:  -y at under-in,  x-1 at over,  1 at under-out
      negative:  -1 at under-in,  1-x at over,  y at under-out
  (the negative row is the Fox row scaled by y to clear denominators).
  Entries accumulate when arcs coincide.

* Path words are face potentials: the unbounded face carries 1, and
  crossing a strand from its left face to its right face multiplies by the
  strand colour.  The word of a crossing is read in the corner
  counterclockwise-adjacent to the under-in end (between slots 0 and 1).
  File-level overrides take precedence; they exist because a published
  figure may read its word in a different corner of the crossing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    DivisionError_,
    Monomial,
    MultiPoly,
    PolyMatrix,
    UsageError,
    mono_make,
    mono_mul,
)

__all__ = [
    "LinkError",
    "LinkComponent",
    "Crossing",
    "Segment",
    "Arc",
    "LinkDiagram",
    "MvaResult",
    "parse_link",
    "wirtinger_matrix",
    "path_word",
    "mu_rot",
    "mva",
]


class LinkError(ValueError):
    """Structurally invalid link diagram."""


@dataclass(frozen=True)
class LinkComponent:
    colour: int
    rot: int


@dataclass
class Crossing:
    """One crossing: four dart slots in CCW order plus under/over bookkeeping.

    sign 0 marks a double point (no strand designated as over); second_in is
    then the slot (1 or 3) where the other strand enters.
    """

    id: str
    sign: int
    under_in: int = 0
    second_in: int = 3

    def entry_slots(self) -> tuple[int, ...]:
        if self.sign == 0:
            return (self.under_in, self.second_in)
        return (self.under_in,)

    def over_in_slot(self) -> int:
        if self.sign == 1:
            return (self.under_in + 3) % 4
        if self.sign == -1:
            return (self.under_in + 1) % 4
        raise UsageError("double point has no over strand")


@dataclass(frozen=True)
class Segment:
    """Directed edge of the planar map: tail dart to head dart."""

    tail: tuple[int, int]  # (crossing index, slot)
    head: tuple[int, int]
    component: int


@dataclass(frozen=True)
class Arc:
    label: str
    component: int
    segments: tuple[int, ...]
    tail: tuple[int, int]  # dart where the arc starts (an exit slot)
    head: tuple[int, int]  # dart where the arc ends (an entry slot)


class LinkDiagram:
    """Validated planar diagram with colours, rotation numbers, and words."""

    def __init__(
        self,
        variables: Sequence[str],
        components: Sequence[LinkComponent],
        crossings: Sequence[Crossing],
        segments: Sequence[Segment],
        outer_dart: tuple[int, int] | None = None,
        outer_hint: tuple[str, int, str] | None = None,
        word_overrides: dict[str, Monomial] | None = None,
        delete_hint: str | None = None,
        check_delete_hint: str | None = None,
        mark_component: int = 0,
        arc_names: dict[tuple[int, int], str] | None = None,
    ):
        self.variables = tuple(variables)
        self.components = tuple(components)
        self.crossings = list(crossings)
        self.segments = list(segments)
        self.word_overrides = dict(word_overrides or {})
        self.delete_hint = delete_hint
        self.check_delete_hint = check_delete_hint
        self.mark_component = mark_component
        self._arc_names = dict(arc_names or {})
        self._potentials: list[Monomial] | None = None

        self._index_darts()
        self._trace_faces()
        self._derive_arcs()
        expected = len(self.segments) - len(self.crossings) + 2
        if len(self.faces) != expected:
            raise LinkError(
                f"face count {len(self.faces)} != {expected}: "
                "rotational data is not a connected planar diagram"
            )
        if outer_dart is None and outer_hint is not None:
            outer_dart = self._resolve_outer(outer_hint)
        if outer_dart is None:
            outer_dart = (0, 0)
        self.outer_dart = outer_dart

    # -- construction helpers ------------------------------------------------

    def _index_darts(self) -> None:
        self._dart_segment: dict[tuple[int, int], tuple[int, bool]] = {}
        for si, seg in enumerate(self.segments):
            for dart, at_tail in ((seg.tail, True), (seg.head, False)):
                if dart in self._dart_segment:
                    raise LinkError(f"dart {dart} used by two segment ends")
                self._dart_segment[dart] = (si, at_tail)
        for ci, c in enumerate(self.crossings):
            for s in range(4):
                if (ci, s) not in self._dart_segment:
                    raise LinkError(f"crossing {c.id}: slot {s} not attached")
            if c.sign not in (-1, 0, 1):
                raise LinkError(f"crossing {c.id}: sign must be -1, 0, or 1")
            if c.sign == 0 and (c.second_in - c.under_in) % 4 not in (1, 3):
                raise LinkError(f"double point {c.id}: strands must alternate slots")

    def _next_leaving(self, dart: tuple[int, int]) -> tuple[int, int]:
        si, at_tail = self._dart_segment[dart]
        seg = self.segments[si]
        far = seg.head if at_tail else seg.tail
        return (far[0], (far[1] + 1) % 4)

    def _trace_faces(self) -> None:
        # Orbits of leave-segment-then-turn-CCW.  Each orbit is the face to
        # the right of every directed traversal it contains.
        self.face_of_leaving: dict[tuple[int, int], int] = {}
        self.faces: list[list[tuple[int, int]]] = []
        for ci in range(len(self.crossings)):
            for s in range(4):
                start = (ci, s)
                if start in self.face_of_leaving:
                    continue
                fid = len(self.faces)
                orbit = []
                d = start
                while True:
                    self.face_of_leaving[d] = fid
                    orbit.append(d)
                    d = self._next_leaving(d)
                    if d == start:
                        break
                self.faces.append(orbit)

    def _derive_arcs(self) -> None:
        breaks: set[tuple[int, int]] = set()
        for ci, c in enumerate(self.crossings):
            for s in c.entry_slots():
                breaks.add((ci, s))

        next_seg: dict[int, int] = {}
        for si, seg in enumerate(self.segments):
            ci, s = seg.head
            out_dart = (ci, (s + 2) % 4)
            sj, at_tail = self._dart_segment[out_dart]
            if not at_tail:
                raise LinkError(
                    f"crossing {self.crossings[ci].id}: slot {out_dart[1]} should "
                    "start a segment but ends one (inconsistent in/out pattern)"
                )
            next_seg[si] = sj

        def is_arc_start(si: int) -> bool:
            ci, s = self.segments[si].tail
            return (ci, (s + 2) % 4) in breaks

        seen: set[int] = set()
        self.arcs: list[Arc] = []
        self._arc_of_segment: dict[int, int] = {}
        for si in range(len(self.segments)):
            if si in seen or not is_arc_start(si):
                continue
            chain = [si]
            seen.add(si)
            d = next_seg[si]
            while not is_arc_start(d):
                if d in seen:
                    raise LinkError("segment chain error")  # pragma: no cover
                chain.append(d)
                seen.add(d)
                d = next_seg[d]
            first, last = self.segments[chain[0]], self.segments[chain[-1]]
            idx = len(self.arcs)
            name = self._arc_names.get(first.tail) or f"a{idx + 1}"
            self.arcs.append(Arc(name, first.component, tuple(chain), first.tail, last.head))
            for s2 in chain:
                self._arc_of_segment[s2] = idx
        # components whose strand never enters a breaking slot carry no arcs;
        # they lie entirely above the diagram, see is_split_over
        self.unbroken_components = {
            self.segments[si].component
            for si in range(len(self.segments))
            if si not in seen
        }
        self.arc_labels = [a.label for a in self.arcs]
        if len(set(self.arc_labels)) != len(self.arc_labels):
            raise LinkError("duplicate arc labels")
        self._arc_index = {a.label: i for i, a in enumerate(self.arcs)}

    def _resolve_outer(self, hint: tuple[str, int, str]) -> tuple[int, int]:
        arc_label, segno, side = hint
        if side not in ("left", "right"):
            raise LinkError("outer side must be left or right")
        if arc_label not in self._arc_index:
            raise LinkError(f"outer hint names unknown arc {arc_label!r}")
        arc = self.arcs[self._arc_index[arc_label]]
        if not 0 <= segno < len(arc.segments):
            raise LinkError(
                f"outer hint: arc {arc_label!r} has segments 0..{len(arc.segments) - 1}"
            )
        seg = self.segments[arc.segments[segno]]
        # right face = orbit of the tail leaving-dart, left face = head one
        return seg.head if side == "left" else seg.tail

    # -- lookups ---------------------------------------------------------------

    def arc_index(self, label: str) -> int:
        if label not in self._arc_index:
            raise UsageError(f"unknown arc {label!r} (have {self.arc_labels})")
        return self._arc_index[label]

    def arc_colour(self, idx: int) -> int:
        return self.components[self.arcs[idx].component].colour

    def crossing_roles(self, ci: int) -> tuple[int, int, int]:
        """(under-in, over, under-out) arc indices of a regular crossing."""
        c = self.crossings[ci]
        if c.sign == 0:
            raise UsageError(f"crossing {c.id} is a double point")
        si, _ = self._dart_segment[(ci, c.under_in)]
        u_in = self._arc_of_segment[si]
        sj, _ = self._dart_segment[(ci, (c.under_in + 2) % 4)]
        u_out = self._arc_of_segment[sj]
        sk, _ = self._dart_segment[(ci, c.over_in_slot())]
        over = self._arc_of_segment[sk]
        return u_in, over, u_out

    def crossing_by_label(self, label: str) -> int:
        for ci, c in enumerate(self.crossings):
            if c.id == label:
                return ci
        for ci, c in enumerate(self.crossings):
            if c.sign != 0:
                _, _, u_out = self.crossing_roles(ci)
                if self.arcs[u_out].label == label:
                    return ci
        raise UsageError(f"no crossing named {label!r} and none exits arc {label!r}")

    def label_of_crossing(self, ci: int) -> str:
        _, _, u_out = self.crossing_roles(ci)
        return self.arcs[u_out].label

    def component_underpasses(self) -> list[int]:
        counts = [0] * len(self.components)
        for ci, c in enumerate(self.crossings):
            for s in c.entry_slots():
                si, _ = self._dart_segment[(ci, s)]
                counts[self.segments[si].component] += 1
        return counts

    def is_split_over(self) -> bool:
        """True when some component never passes under (it lies on top)."""
        return bool(self.unbroken_components) or 0 in self.component_underpasses()

    def strand_passages(self, component: int) -> list[tuple[int, int]]:
        """Cyclic list of (crossing, entry slot) along the component.

        Starts at the tail of the component's first arc; includes every
        crossing passage, over and under alike.
        """
        start_arc = next(a for a in self.arcs if a.component == component)
        passages: list[tuple[int, int]] = []
        si = start_arc.segments[0]
        first = si
        while True:
            ci, s = self.segments[si].head
            passages.append((ci, s))
            sj, _ = self._dart_segment[(ci, (s + 2) % 4)]
            si = sj
            if si == first:
                break
        return passages

    # -- face potentials and words ------------------------------------------------

    def outer_face(self) -> int:
        return self.face_of_leaving[self.outer_dart]

    def segment_faces(self, si: int) -> tuple[int, int]:
        """(left, right) face relative to the tail-to-head direction."""
        seg = self.segments[si]
        return self.face_of_leaving[seg.head], self.face_of_leaving[seg.tail]

    def corner_face(self, ci: int, slot: int) -> int:
        """Face in the corner between slots slot and slot+1 of crossing ci."""
        return self.face_of_leaving[(ci, (slot + 1) % 4)]

    def face_potentials(self) -> list[Monomial]:
        """Word of each face relative to the unbounded one."""
        if self._potentials is not None:
            return self._potentials
        nf = len(self.faces)
        adj: list[list[tuple[int, int, int]]] = [[] for _ in range(nf)]
        for si in range(len(self.segments)):
            left, right = self.segment_faces(si)
            col = self.components[self.segments[si].component].colour
            # phi(left) = t_col * phi(right): stepping left->right divides
            adj[left].append((right, col, -1))
            adj[right].append((left, col, 1))
        pot: list[Monomial | None] = [None] * nf
        outer = self.outer_face()
        pot[outer] = mono_make([])
        queue = [outer]
        while queue:
            f = queue.pop()
            for g, col, sgn in adj[f]:
                # phi(left) = t_col * phi(right); stepping from f to g
                word = mono_mul(pot[f], mono_make([(col, 2 * sgn)]))
                if pot[g] is None:
                    pot[g] = word
                    queue.append(g)
                elif pot[g] != word:
                    raise LinkError("inconsistent face potentials; bad planar data")
        if any(p is None for p in pot):
            raise LinkError("disconnected face graph")  # pragma: no cover
        self._potentials = pot  # type: ignore[assignment]
        return self._potentials

    def word_at(self, ci: int) -> Monomial:
        """Path word of crossing ci: override if given, else corner potential."""
        c = self.crossings[ci]
        if c.id in self.word_overrides:
            return self.word_overrides[c.id]
        if c.sign != 0:
            label = self.label_of_crossing(ci)
            if label in self.word_overrides:
                return self.word_overrides[label]
        face = self.corner_face(ci, c.under_in)
        return self.face_potentials()[face]


# -- operations ---------------------------------------------------------------


def wirtinger_matrix(d: LinkDiagram) -> PolyMatrix:
    """Square Alexander matrix: rows = crossings by exiting under arc, cols = arcs."""
    if any(c.sign == 0 for c in d.crossings):
        raise UsageError("matrix undefined for singular diagrams; resolve first")
    n = len(d.arcs)
    if len(d.crossings) != n:
        raise LinkError(f"{len(d.crossings)} crossings but {n} arcs")
    nv = len(d.variables)
    m = PolyMatrix(nv, n, n, d.arc_labels, d.arc_labels)
    one = MultiPoly.one(nv)
    for ci in range(len(d.crossings)):
        u_in, over, u_out = d.crossing_roles(ci)
        row = u_out
        x = MultiPoly.var(d.arc_colour(u_in), nv)  # under colour
        y = MultiPoly.var(d.arc_colour(over), nv)  # over colour
        if d.crossings[ci].sign == 1:
            m.add_at(row, u_in, -y)
            m.add_at(row, over, x - one)
            m.add_at(row, u_out, one)
        else:
            m.add_at(row, u_in, -one)
            m.add_at(row, over, one - x)
            m.add_at(row, u_out, y)
    return m


def path_word(d: LinkDiagram, crossing: str) -> MultiPoly:
    ci = d.crossing_by_label(crossing)
    return MultiPoly(len(d.variables), {d.word_at(ci): Fraction(1)})


def mu_rot(d: LinkDiagram) -> list[tuple[int, int]]:
    """Per component (mu, rot): over-strand count and declared rotation number."""
    mu = [0] * len(d.components)
    for ci, c in enumerate(d.crossings):
        if c.sign == 0:
            continue
        _, over, _ = d.crossing_roles(ci)
        mu[d.arcs[over].component] += 1
    return [(mu[k], d.components[k].rot) for k in range(len(d.components))]


@dataclass(frozen=True)
class MvaResult:
    value: MultiPoly
    deleted_row: str
    deleted_col: str
    knot_normalized: bool
    split: bool
    # knots only: the variant divided by t-1, when that division is exact
    knot_divided_variant: MultiPoly | None = None

    def to_text(self, names=None) -> str:
        return self.value.to_text(names)


def mva(d: LinkDiagram, delete: str | None = None, delete_col: str | None = None) -> MvaResult:
    """Normalized multivariable Alexander polynomial of one diagram.

    delete picks the deleted row (crossing id or its exiting-under arc
    label); delete_col defaults to the matching arc.  The result does not
    depend on either choice.
    """
    if any(c.sign == 0 for c in d.crossings):
        raise UsageError("diagram has unresolved double points")
    nv = len(d.variables)
    if d.is_split_over():
        # a component with no underpass lies entirely above the rest: the
        # diagram is split and the invariant vanishes
        return MvaResult(MultiPoly.zero(nv), "-", "-", False, True)

    if delete is None:
        delete = d.delete_hint or d.arc_labels[0]
    ci = d.crossing_by_label(delete)
    row_label = d.label_of_crossing(ci)
    col_label = delete_col or row_label
    m = wirtinger_matrix(d)
    i = m.row_index(row_label)
    j = m.col_index(col_label)
    det = m.delete(i, j).det()
    if (i + j) % 2:
        det = -det
    word = d.word_at(ci)
    det = det.mul_monomial(1, [(v, -e) for v, e in word])

    knot = len(d.components) == 1
    t_col = MultiPoly.var(d.arc_colour(j), nv)
    one = MultiPoly.one(nv)
    divided = None
    if not knot:
        det = det.div_exact(t_col - one)  # exact for links by construction
    else:
        try:
            divided = det.div_exact(t_col - one)
        except DivisionError_:
            divided = None

    shift = []
    for k, (mu_k, rot_k) in enumerate(mu_rot(d)):
        shift.append((d.components[k].colour, rot_k - mu_k))  # s-steps of t^(rot-mu)/2
    value = det.mul_monomial(1, shift)
    if knot and divided is not None:
        divided = divided.mul_monomial(1, shift)
    return MvaResult(value, row_label, col_label, knot, False, divided)


# -- parsing -------------------------------------------------------------------


def _end_key(e: dict, where: str) -> tuple[str, int, str]:
    try:
        arc, visit, end = str(e["arc"]), int(e.get("visit", 0)), str(e["end"])
    except (KeyError, TypeError, ValueError):
        raise LinkError(f"{where}: malformed end {e!r}") from None
    if end not in ("in", "out"):
        raise LinkError(f"{where}: end must be 'in' or 'out'")
    return arc, visit, end


def parse_link(source) -> LinkDiagram:
    """Parse a link or singular-link diagram from JSON text, dict, or file."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, str):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as e:
            raise LinkError(f"not valid JSON: {e}") from None
    else:
        obj = source
    for req in ("variables", "components", "crossings"):
        if req not in obj:
            raise LinkError(f"link file missing {req!r}")
    variables = [str(v) for v in obj["variables"]]
    components: list[LinkComponent] = []
    arc_comp: dict[str, int] = {}
    for ci, c in enumerate(obj["components"]):
        if "rot" not in c:
            raise LinkError(f"component {ci}: missing rotation number")
        components.append(LinkComponent(int(c["colour"]), int(c["rot"])))
        for a in c.get("arcs", []):
            if a in arc_comp:
                raise LinkError(f"arc {a!r} listed in two components")
            arc_comp[str(a)] = ci

    crossings: list[Crossing] = []
    ends_by_arc: dict[str, list[tuple[int, int, int, str]]] = {}
    for xi, cr in enumerate(obj["crossings"]):
        where = f"crossing #{xi}"
        if "id" not in cr or "sign" not in cr or "ends" not in cr:
            raise LinkError(f"{where}: needs id, sign, ends")
        where = f"crossing {cr['id']}"
        ends = cr["ends"]
        if len(ends) != 4:
            raise LinkError(f"{where}: needs exactly 4 ends")
        parsed = [_end_key(e, where) for e in ends]
        sign = int(cr["sign"])
        for slot, (arc, visit, end) in enumerate(parsed):
            if arc not in arc_comp:
                raise LinkError(f"{where}: arc {arc!r} not in any component")
            ends_by_arc.setdefault(arc, []).append((xi, slot, visit, end))
        if parsed[0][2] != "in" or parsed[2][2] != "out":
            raise LinkError(
                f"{where}: slot 0 must be the incoming under strand, slot 2 its exit"
            )
        if {parsed[1][2], parsed[3][2]} != {"in", "out"}:
            raise LinkError(f"{where}: slots 1 and 3 must be one in, one out")
        if sign == 1 and parsed[3][2] != "in":
            raise LinkError(f"{where}: sign +1 needs the over strand entering slot 3")
        if sign == -1 and parsed[1][2] != "in":
            raise LinkError(f"{where}: sign -1 needs the over strand entering slot 1")
        second = 3 if parsed[3][2] == "in" else 1
        crossings.append(Crossing(str(cr["id"]), sign, 0, second))

    segments: list[Segment] = []
    arc_names: dict[tuple[int, int], str] = {}
    for arc in sorted(ends_by_arc):
        recs = ends_by_arc[arc]
        outs = {v: (xi, slot) for xi, slot, v, e in recs if e == "out"}
        ins = {v: (xi, slot) for xi, slot, v, e in recs if e == "in"}
        if len(outs) + len(ins) != len(recs):
            raise LinkError(f"arc {arc!r}: duplicate visit indices")
        top = max(ins) if ins else 0
        if (
            not ins
            or 0 not in outs
            or set(outs) != set(range(top))
            or set(ins) != set(range(1, top + 1))
        ):
            raise LinkError(
                f"arc {arc!r}: ends must be out(0), in/out pairs at visits "
                f"1..k-1, then in(k); found outs {sorted(outs)}, ins {sorted(ins)}"
            )
        for v in range(1, top):
            if outs[v][0] != ins[v][0]:
                raise LinkError(f"arc {arc!r}: visit {v} enters and leaves different crossings")
        ci = arc_comp[arc]
        for v in range(top):
            segments.append(Segment(outs[v], ins[v + 1], ci))
        arc_names[outs[0]] = arc

    missing = sorted(a for a in arc_comp if a not in ends_by_arc)
    if missing:
        raise LinkError(f"arcs never touch a crossing: {missing}")

    outer_hint = None
    if "outer" in obj and obj["outer"] is not None:
        o = obj["outer"]
        outer_hint = (str(o["arc"]), int(o.get("segment", 0)), str(o.get("side", "left")))
    elif "words" not in obj:
        raise LinkError("missing outer-face hint (required unless every word is explicit)")

    words: dict[str, Monomial] = {}
    var_index = {n: k + 1 for k, n in enumerate(variables)}
    for key, mono in (obj.get("words") or {}).items():
        pairs = []
        for name, t_exp in mono.items():
            if name not in var_index:
                raise LinkError(f"word override {key!r}: unknown variable {name!r}")
            pairs.append((var_index[name], 2 * int(t_exp)))
        words[str(key)] = mono_make(pairs)

    d = LinkDiagram(
        variables,
        components,
        crossings,
        segments,
        outer_hint=outer_hint,
        word_overrides=words,
        delete_hint=obj.get("delete"),
        check_delete_hint=obj.get("check_delete"),
        mark_component=int(obj.get("mark_component", 0)),
        arc_names=arc_names,
    )
    declared, derived = set(arc_comp), set(d.arc_labels)
    if declared != derived:
        raise LinkError(
            f"declared arcs {sorted(declared)} do not match derived arcs "
            f"{sorted(derived)}; check visit and in/out data"
        )
    for a in d.arcs:
        if arc_comp[a.label] != a.component:
            raise LinkError(f"arc {a.label!r} derived on a different component than declared")
    return d
