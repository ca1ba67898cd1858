"""Weight of a coloured chord diagram via the determinant construction.

Matrix rows and columns are indexed by the arcs of the diagram.  Each chord
contributes two rows:

  half row, indexed by the A-side out-arc:
      +1/2 at outA and outB, -1/2 at inA and inB
  t row, indexed by the B-side out-arc:
      -t_cA at outB and inB, +t_cB at outA and inA

Note the colour crossing in the t row: the A-side colour lands on the B-side
arcs and vice versa.  Uncrossed colours make det(M) lose divisibility by the
marked colour, so they are provably wrong.  The overall t-row sign follows
the row table used in the finite-type reduction argument; published example
tables flip it chord by chord, which negates the determinant once per flip,
so golden tests compare determinants and allow per-chord presentation
changes.  Swapping a chord's sides exchanges the two row positions and
negates the t row, leaving the determinant fixed; the builder never
canonicalizes sides.

A subdivision point contributes a single row (+1 at out-arc, -1 at in-arc)
indexed by its out-arc.  The marked point's row stays empty, and the weight
deletes that row and column before taking the determinant.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import DivisionError_, MultiPoly, PolyMatrix
from .chord import ColouredChordDiagram, subdivide

__all__ = ["WeightResult", "InvarianceReport", "build_matrix", "weight",
           "weight_invariance_report"]


@dataclass(frozen=True)
class WeightResult:
    weight: MultiPoly
    matrix: PolyMatrix          # full matrix, marked row/column not yet deleted
    det_before_division: MultiPoly
    marked_colour: int
    chord_count: int


def build_matrix(d: ColouredChordDiagram) -> PolyMatrix:
    n = d.n_arcs
    nv = len(d.variables)
    m = PolyMatrix(nv, n, n, d.arc_labels, d.arc_labels)
    half = Fraction(1, 2)
    for chord in d.chords:
        a, b = chord.a, chord.b
        ra, rb = a.out_arc, b.out_arc
        m.add_at(ra, a.out_arc, MultiPoly.const(nv, half))
        m.add_at(ra, b.out_arc, MultiPoly.const(nv, half))
        m.add_at(ra, a.in_arc, MultiPoly.const(nv, -half))
        m.add_at(ra, b.in_arc, MultiPoly.const(nv, -half))
        ta = MultiPoly.var(a.colour, nv)
        tb = MultiPoly.var(b.colour, nv)
        m.add_at(rb, b.out_arc, -ta)
        m.add_at(rb, b.in_arc, -ta)
        m.add_at(rb, a.out_arc, tb)
        m.add_at(rb, a.in_arc, tb)
    one = MultiPoly.one(nv)
    for in_arc, out_arc in d.subdivisions:
        m.add_at(out_arc, out_arc, one)
        m.add_at(out_arc, in_arc, -one)
    return m


def weight(d: ColouredChordDiagram) -> WeightResult:
    m = build_matrix(d)
    reduced = m.delete(d.marked_arc, d.marked_arc)
    det = reduced.det()
    t_marked = MultiPoly.var(d.marked_colour, len(d.variables))
    try:
        w = det.div_exact(t_marked)
    except DivisionError_ as e:  # convention violation, must not happen
        raise DivisionError_(
            f"det {det} not divisible by marked colour t{d.marked_colour}", e.remainder
        ) from None
    return WeightResult(w, m, det, d.marked_colour, d.n_chords)


@dataclass(frozen=True)
class InvarianceReport:
    """Weight recomputed under convention-probing edits of one diagram."""

    base: MultiPoly
    side_swaps: dict[str, MultiPoly]
    subdivisions: dict[str, MultiPoly]
    marked_moves_same_component: dict[int, MultiPoly]
    marked_moves_other_components: dict[tuple[int, int], MultiPoly]

    def side_swaps_equal(self) -> bool:
        return all(v == self.base for v in self.side_swaps.values())

    def subdivisions_equal(self) -> bool:
        return all(v == self.base for v in self.subdivisions.values())

    def marked_moves_equal(self) -> bool:
        return all(v == self.base for v in self.marked_moves_same_component.values())

    def lines(self, names=None) -> list[str]:
        names = names or ["base", ]
        out = [f"base weight: {self.base.to_text()}"]
        for name, v in self.side_swaps.items():
            out.append(f"swap {name}: {v.to_text()} {'==' if v == self.base else '!='}")
        for arc, v in self.subdivisions.items():
            out.append(f"subdivide {arc}: {v.to_text()} {'==' if v == self.base else '!='}")
        for gap, v in self.marked_moves_same_component.items():
            out.append(f"marked at gap {gap}: {v.to_text()} {'==' if v == self.base else '!='}")
        for (ci, gap), v in self.marked_moves_other_components.items():
            out.append(
                f"marked on component {ci} gap {gap}: {v.to_text()} "
                f"{'==' if v == self.base else '!='}"
            )
        return out


def weight_invariance_report(d: ColouredChordDiagram) -> InvarianceReport:
    base = weight(d).weight
    swaps = {c.name: weight(d.swap_chord_sides(c.name)).weight for c in d.chords}
    subs = {arc: weight(subdivide(d, arc)).weight for arc in d.arc_labels}
    same: dict[int, MultiPoly] = {}
    ci = d.marked_component
    n_gaps = len([s for s in d.components[ci].sites if s.kind != "marked"]) + 1
    for gap in range(n_gaps):
        same[gap] = weight(d.move_marked(ci, gap)).weight
    other: dict[tuple[int, int], MultiPoly] = {}
    for cj, comp in enumerate(d.components):
        if cj == ci:
            continue
        for gap in range(len(comp.sites) + 1):
            other[(cj, gap)] = weight(d.move_marked(cj, gap)).weight
    return InvarianceReport(base, swaps, subs, same, other)
