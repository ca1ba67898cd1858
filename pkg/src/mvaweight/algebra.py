"""Exact multivariate Laurent polynomial arithmetic over rational coefficients.

Variables t1..tn are represented on a half-step lattice: internally every
exponent counts powers of sk = tk^(1/2), so "s-exponent 2" means tk^1 and
"s-exponent -1" means tk^(-1/2).  This keeps all bookkeeping in integers
while allowing the half powers that show up in normalization factors.

No floating point is used anywhere; coefficients are fractions.Fraction.
All values are immutable after construction and safe to share.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

__all__ = [
    "DivisionError_",
    "UsageError",
    "Monomial",
    "MultiPoly",
    "TruncatedSeries",
    "PolyMatrix",
    "poly_add",
    "poly_mul",
    "poly_neg",
    "poly_div_exact",
    "poly_homogeneous_part",
    "series_exp_substitute",
    "det",
    "all_minors",
    "parse_poly",
]


class UsageError(ValueError):
    """Raised when an operation is invoked outside its contract."""


class DivisionError_(ArithmeticError):
    """Exact polynomial division failed; carries the nonzero remainder."""

    def __init__(self, message: str, remainder: "MultiPoly"):
        super().__init__(f"{message}; remainder {remainder}")
        self.remainder = remainder


# A monomial is a sorted tuple of (variable index, s-exponent) pairs with no
# zero exponents.  Variable indices are 1-based, matching t1..tn.
Monomial = tuple  # tuple[tuple[int, int], ...]

MONO_ONE: Monomial = ()


def mono_make(pairs: Iterable[tuple[int, int]]) -> Monomial:
    return tuple(sorted((v, e) for v, e in pairs if e != 0))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps: dict[int, int] = dict(a)
    for v, e in b:
        n = exps.get(v, 0) + e
        if n:
            exps[v] = n
        else:
            del exps[v]
    return tuple(sorted(exps.items()))

def mono_sdeg(m: Monomial) -> int:
    """Total degree in s-steps (twice the t-degree)."""
    return sum(e for _, e in m)


def mono_key(m: Monomial, nvars: int) -> tuple:
    """Graded lexicographic sort key: total s-degree, then exponent vector."""
    exps = dict(m)
    return (mono_sdeg(m), tuple(exps.get(v, 0) for v in range(1, nvars + 1)))


class MultiPoly:
    """Sparse exact Laurent polynomial in t1..tn on the half-step lattice."""

    __slots__ = ("terms", "nvars", "_hash")

    def __init__(self, nvars: int, terms: dict[Monomial, Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[Monomial, Fraction] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = Fraction(c)
        self._hash = None

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "MultiPoly":
        return cls(nvars)

    @classmethod
    def const(cls, nvars: int, c) -> "MultiPoly":
        c = Fraction(c)
        return cls(nvars, {MONO_ONE: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "MultiPoly":
        return cls.const(nvars, 1)

    @classmethod
    def var(cls, k: int, nvars: int, spower: int = 2) -> "MultiPoly":
        """tk raised to spower half-steps (spower=2 is tk itself)."""
        if not 1 <= k <= nvars:
            raise UsageError(f"variable index {k} outside 1..{nvars}")
        return cls(nvars, {mono_make([(k, spower)]): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, coeff, pairs: Iterable[tuple[int, int]]) -> "MultiPoly":
        c = Fraction(coeff)
        return cls(nvars, {mono_make(pairs): c} if c else {})

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __bool__(self) -> bool:
        return bool(self.terms)

    def _check(self, other: "MultiPoly") -> None:
        if self.nvars != other.nvars:
            raise UsageError(
                f"mixed variable contexts: {self.nvars} vs {other.nvars}"
            )

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            n = terms.get(m, Fraction(0)) + c
            if n:
                terms[m] = n
            else:
                terms.pop(m, None)
        out = MultiPoly(self.nvars)
        out.terms = terms
        return out

    def __neg__(self) -> "MultiPoly":
        out = MultiPoly(self.nvars)
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            out = MultiPoly(self.nvars)
            if c:
                out.terms = {m: co * c for m, co in self.terms.items()}
            return out
        self._check(other)
        # iterate over the smaller operand
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        terms: dict[Monomial, Fraction] = {}
        for ma, ca in a.items():
            for mb, cb in b.items():
                m = mono_mul(ma, mb)
                n = terms.get(m, Fraction(0)) + ca * cb
                if n:
                    terms[m] = n
                else:
                    terms.pop(m, None)
        out = MultiPoly(self.nvars)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise UsageError("negative polynomial power; invert monomials explicitly")
        out = MultiPoly.one(self.nvars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def mul_monomial(self, coeff, pairs: Iterable[tuple[int, int]]) -> "MultiPoly":
        """Multiply by coeff * prod sk^e: exact for Laurent units."""
        c = Fraction(coeff)
        shift = mono_make(pairs)
        out = MultiPoly(self.nvars)
        if c:
            out.terms = {mono_mul(m, shift): co * c for m, co in self.terms.items()}
        return out

    # -- division and slicing -------------------------------------------

    def _leading(self) -> tuple[Monomial, Fraction]:
        m = max(self.terms, key=lambda mo: mono_key(mo, self.nvars))
        return m, self.terms[m]

    def div_exact(self, other: "MultiPoly") -> "MultiPoly":
        """Exact quotient; raises DivisionError_ with the remainder witness."""
        self._check(other)
        if other.is_zero():
            raise UsageError("division by zero polynomial")
        if self.is_zero():
            return MultiPoly.zero(self.nvars)
        # Clear Laurent offsets so ordinary multivariate division applies.
        def min_exps(p: MultiPoly) -> Monomial:
            mins: dict[int, int] = {}
            for m in p.terms:
                d = dict(m)
                for v in range(1, p.nvars + 1):
                    e = d.get(v, 0)
                    if v not in mins or e < mins[v]:
                        mins[v] = e
            return mono_make(mins.items())

        sa, sb = min_exps(self), min_exps(other)
        a = self.mul_monomial(1, [(v, -e) for v, e in sa])
        b = other.mul_monomial(1, [(v, -e) for v, e in sb])
        lt_m, lt_c = b._leading()
        lt_d = dict(lt_m)
        q = MultiPoly.zero(self.nvars)
        r = a
        while not r.is_zero():
            rm, rc = r._leading()
            rd = dict(rm)
            quot = [(v, rd.get(v, 0) - e) for v, e in lt_d.items()]
            quot += [(v, rd[v]) for v in rd if v not in lt_d]
            if any(e < 0 for _, e in quot):
                raise DivisionError_("polynomial division is not exact", r)
            qt = MultiPoly.monomial(self.nvars, rc / lt_c, quot)
            q = q + qt
            r = r - qt * b
        # restore the Laurent offset difference
        off = [(v, e) for v, e in mono_mul(sa, tuple((v, -e) for v, e in sb))]
        return q.mul_monomial(1, off)

    def homogeneous_part(self, tdeg) -> "MultiPoly":
        """Terms of total t-degree exactly tdeg (tdeg may be a Fraction)."""
        want = Fraction(tdeg) * 2
        out = MultiPoly(self.nvars)
        out.terms = {m: c for m, c in self.terms.items() if mono_sdeg(m) == want}
        return out

    def total_degrees(self) -> set[Fraction]:
        return {Fraction(mono_sdeg(m), 2) for m in self.terms}

    def substitute_one(self) -> Fraction:
        """Evaluate at t1 = ... = tn = 1."""
        return sum(self.terms.values(), Fraction(0))

    def merge_variables(self, target: int = 1) -> "MultiPoly":
        """Send every variable to t_target (one-colour specialization)."""
        terms: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            s = mono_sdeg(m)
            mm = mono_make([(target, s)])
            n = terms.get(mm, Fraction(0)) + c
            if n:
                terms[mm] = n
            else:
                terms.pop(mm, None)
        out = MultiPoly(self.nvars)
        out.terms = terms
        return out

    # -- rendering -------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0], self.nvars))

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero():
            return "0"
        names = names or [f"t{k}" for k in range(1, self.nvars + 1)]
        pieces: list[str] = []
        for m, c in self.sorted_terms():
            factors = []
            for v, e in m:
                name = names[v - 1]
                if e == 2:
                    factors.append(name)
                elif e % 2 == 0:
                    factors.append(f"{name}^{e // 2}")
                else:
                    factors.append(f"{name}^({e}/2)")
            if not factors:
                body = str(abs(c))
            else:
                mag = abs(c)
                body = "*".join(([] if mag == 1 else [str(mag)]) + factors)
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first_body = pieces[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def to_latex(self, names: Sequence[str] | None = None) -> str:
        if self.is_zero():
            return "0"
        names = names or [f"t_{{{k}}}" for k in range(1, self.nvars + 1)]
        pieces = []
        for m, c in self.sorted_terms():
            factors = []
            for v, e in m:
                name = names[v - 1]
                if e == 2:
                    factors.append(name)
                elif e % 2 == 0:
                    factors.append(f"{name}^{{{e // 2}}}")
                else:
                    factors.append(f"{name}^{{{e}/2}}")
            mag = abs(c)
            if not factors:
                body = _frac_latex(mag)
            else:
                body = (" " if mag == 1 else _frac_latex(mag)) + " ".join(factors)
                body = body.strip()
            pieces.append(("-" if c < 0 else "+", body))
        text = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def to_json_obj(self, names: Sequence[str] | None = None) -> list[dict]:
        """List of {coeff, exps} with exponents in half-steps of each variable."""
        names = names or [f"t{k}" for k in range(1, self.nvars + 1)]
        out = []
        for m, c in self.sorted_terms():
            out.append(
                {
                    "coeff": str(c),
                    "exps": {names[v - 1]: e for v, e in m},
                }
            )
        return out

    @classmethod
    def from_json_obj(cls, obj: list[dict], names: Sequence[str]) -> "MultiPoly":
        idx = {n: k + 1 for k, n in enumerate(names)}
        p = cls.zero(len(names))
        for t in obj:
            pairs = [(idx[n], e) for n, e in t["exps"].items()]
            p = p + cls.monomial(len(names), Fraction(t["coeff"]), pairs)
        return p

    def __repr__(self) -> str:
        return f"MultiPoly({self.to_text()})"

    __str__ = __repr__


def _frac_latex(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"\\frac{{{c.numerator}}}{{{c.denominator}}}"


# -- module-level operation aliases (the public contract surface) ---------

def poly_add(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a + b


def poly_mul(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a * b


def poly_neg(a: MultiPoly) -> MultiPoly:
    return -a


def poly_div_exact(a: MultiPoly, b: MultiPoly) -> MultiPoly:
    return a.div_exact(b)


def poly_homogeneous_part(a: MultiPoly, d) -> MultiPoly:
    return a.homogeneous_part(d)


# -- truncated power series ------------------------------------------------

class TruncatedSeries:
    """Power series in u1..un truncated above a total-degree cap.

    The underlying poly stores uk-exponents as s-exponents doubled, so the
    Monomial machinery is reused unchanged and total degree = s-degree / 2.
    """

    __slots__ = ("poly", "cap")

    def __init__(self, poly: MultiPoly, cap: int):
        self.cap = cap
        trimmed = MultiPoly(poly.nvars)
        trimmed.terms = {
            m: c for m, c in poly.terms.items() if mono_sdeg(m) <= 2 * cap
        }
        self.poly = trimmed

    @classmethod
    def const(cls, nvars: int, c, cap: int) -> "TruncatedSeries":
        return cls(MultiPoly.const(nvars, c), cap)

    def _check(self, other: "TruncatedSeries") -> None:
        if self.cap != other.cap:
            raise UsageError(f"mixed series caps: {self.cap} vs {other.cap}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(self.poly + other.poly, self.cap)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        return TruncatedSeries(self.poly - other.poly, self.cap)

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(-self.poly, self.cap)

    def __mul__(self, other) -> "TruncatedSeries":
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries(self.poly * other, self.cap)
        self._check(other)
        return TruncatedSeries(self.poly * other.poly, self.cap)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.cap == other.cap and self.poly == other.poly

    def __hash__(self):
        return hash((self.cap, self.poly))

    def homogeneous_part(self, udeg: int) -> MultiPoly:
        return self.poly.homogeneous_part(udeg)

    def to_text(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            if self.poly.nvars == 1:
                names = ["u"]
            else:
                names = [f"u{k}" for k in range(1, self.poly.nvars + 1)]
        return self.poly.to_text(names)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.to_text()} + O(deg {self.cap + 1}))"


def _exp_series(nvars: int, var: int, coeff: Fraction, cap: int) -> TruncatedSeries:
    """exp(coeff * u_var) truncated at total degree cap."""
    terms: dict[Monomial, Fraction] = {}
    acc = Fraction(1)
    for j in range(cap + 1):
        if j:
            acc = acc * coeff / j
        terms[mono_make([(var, 2 * j)])] = acc
    return TruncatedSeries(MultiPoly(nvars, terms), cap)


def series_exp_substitute(a: MultiPoly, cap: int) -> TruncatedSeries:
    """Substitute tk := exp(uk) (so sk := exp(uk/2)) and truncate.

    Laurent and half-step exponents are fine: s-exponent e becomes
    exp(e*uk/2), a well-defined series for any integer e.
    """
    total = TruncatedSeries.const(a.nvars, 0, cap)
    for m, c in a.terms.items():
        term = TruncatedSeries.const(a.nvars, c, cap)
        for v, e in m:
            term = term * _exp_series(a.nvars, v, Fraction(e, 2), cap)
        total = total + term
    return total


# -- polynomial matrices ----------------------------------------------------

class PolyMatrix:
    """Sparse matrix over MultiPoly with labeled rows and columns."""

    __slots__ = ("nvars", "nrows", "ncols", "rows", "row_labels", "col_labels")

    def __init__(
        self,
        nvars: int,
        nrows: int,
        ncols: int,
        row_labels: Sequence[str] | None = None,
        col_labels: Sequence[str] | None = None,
    ):
        self.nvars = nvars
        self.nrows = nrows
        self.ncols = ncols
        self.rows: list[dict[int, MultiPoly]] = [dict() for _ in range(nrows)]
        self.row_labels = list(row_labels) if row_labels else [str(i) for i in range(nrows)]
        self.col_labels = list(col_labels) if col_labels else [str(j) for j in range(ncols)]
        if len(self.row_labels) != nrows or len(self.col_labels) != ncols:
            raise UsageError("label count does not match matrix shape")

    def add_at(self, i: int, j: int, p: MultiPoly) -> None:
        if not 0 <= j < self.ncols:
            raise UsageError(f"column {j} outside 0..{self.ncols - 1}")
        cur = self.rows[i].get(j)
        new = p if cur is None else cur + p
        if new.is_zero():
            self.rows[i].pop(j, None)
        else:
            self.rows[i][j] = new

    def entry(self, i: int, j: int) -> MultiPoly:
        return self.rows[i].get(j, MultiPoly.zero(self.nvars))

    def row_index(self, label: str) -> int:
        return self.row_labels.index(label)

    def col_index(self, label: str) -> int:
        return self.col_labels.index(label)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "PolyMatrix":
        out = PolyMatrix(
            self.nvars,
            len(rows),
            len(cols),
            [self.row_labels[i] for i in rows],
            [self.col_labels[j] for j in cols],
        )
        colmap = {j: jj for jj, j in enumerate(cols)}
        for ii, i in enumerate(rows):
            for j, p in self.rows[i].items():
                if j in colmap:
                    out.rows[ii][colmap[j]] = p
        return out

    def delete(self, row: int, col: int) -> "PolyMatrix":
        return self.submatrix(
            [i for i in range(self.nrows) if i != row],
            [j for j in range(self.ncols) if j != col],
        )

    def transpose(self) -> "PolyMatrix":
        out = PolyMatrix(self.nvars, self.ncols, self.nrows, self.col_labels, self.row_labels)
        for i, row in enumerate(self.rows):
            for j, p in row.items():
                out.rows[j][i] = p
        return out

    def scale_row(self, i: int, c) -> "PolyMatrix":
        out = self.submatrix(range(self.nrows), range(self.ncols))
        out.rows[i] = {j: p * c for j, p in out.rows[i].items()}
        return out

    def swap_rows(self, i: int, k: int) -> "PolyMatrix":
        out = self.submatrix(range(self.nrows), range(self.ncols))
        out.rows[i], out.rows[k] = out.rows[k], out.rows[i]
        out.row_labels[i], out.row_labels[k] = out.row_labels[k], out.row_labels[i]
        return out

    # -- determinants ---------------------------------------------------

    def det(self, method: str = "expansion") -> MultiPoly:
        if self.nrows != self.ncols:
            raise UsageError(f"determinant of {self.nrows}x{self.ncols} matrix")
        if method == "expansion":
            return self._det_expansion()
        if method == "bareiss":
            return self._det_bareiss()
        raise UsageError(f"unknown determinant method {method!r}")

    def _det_expansion(self) -> MultiPoly:
        if self.nrows == 0:
            return MultiPoly.one(self.nvars)
        memo: dict[tuple[int, int], MultiPoly] = {}
        return self._det_rec(
            sum(1 << i for i in range(self.nrows)),
            sum(1 << j for j in range(self.ncols)),
            memo,
        )

    def _det_rec(self, rowmask: int, colmask: int, memo) -> MultiPoly:
        # Memoized cofactor expansion along the sparsest remaining row.
        if rowmask == 0:
            return MultiPoly.one(self.nvars)
        key = (rowmask, colmask)
        hit = memo.get(key)
        if hit is not None:
            return hit
        rows = [i for i in range(self.nrows) if rowmask >> i & 1]
        best, best_cnt = rows[0], None
        for i in rows:
            cnt = sum(1 for j in self.rows[i] if colmask >> j & 1)
            if best_cnt is None or cnt < best_cnt:
                best, best_cnt = i, cnt
        result = MultiPoly.zero(self.nvars)
        if best_cnt:
            rpos = rows.index(best)
            cols = [j for j in range(self.ncols) if colmask >> j & 1]
            pos = {j: k for k, j in enumerate(cols)}
            for j, p in self.rows[best].items():
                if not colmask >> j & 1:
                    continue
                sub = self._det_rec(rowmask & ~(1 << best), colmask & ~(1 << j), memo)
                if (rpos + pos[j]) % 2:
                    result = result - p * sub
                else:
                    result = result + p * sub
        memo[key] = result
        return result

    def _det_bareiss(self) -> MultiPoly:
        # Fraction-free elimination; every division is exact by the
        # Sylvester identity, so the arithmetic stays in the polynomial ring.
        n = self.nrows
        if n == 0:
            return MultiPoly.one(self.nvars)
        a = [
            [self.entry(i, j) for j in range(n)]
            for i in range(n)
        ]
        sign = 1
        prev = MultiPoly.one(self.nvars)
        for k in range(n - 1):
            if a[k][k].is_zero():
                for i in range(k + 1, n):
                    if not a[i][k].is_zero():
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return MultiPoly.zero(self.nvars)
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                    a[i][j] = num.div_exact(prev)
            prev = a[k][k]
        result = a[n - 1][n - 1]
        return result if sign > 0 else -result

    # -- minors ----------------------------------------------------------

    def all_minors(self, k: int) -> list[MultiPoly]:
        """Order-k minors of the first k rows, column subsets in lex order."""
        if k > self.nrows or k > self.ncols:
            raise UsageError(f"minor order {k} exceeds {self.nrows}x{self.ncols}")
        return [m for _, m in self.minors_with_subsets(k)]

    def minors_with_subsets(self, k: int) -> list[tuple[tuple[int, ...], MultiPoly]]:
        if k > self.nrows or k > self.ncols:
            raise UsageError(f"minor order {k} exceeds {self.nrows}x{self.ncols}")
        top = self.submatrix(range(k), range(self.ncols))
        memo: dict[tuple[int, int], MultiPoly] = {}
        rowmask = (1 << k) - 1
        out = []
        for subset in itertools.combinations(range(self.ncols), k):
            colmask = sum(1 << j for j in subset)
            out.append((subset, top._det_rec(rowmask, colmask, memo)))
        return out

    # -- rendering ---------------------------------------------------------

    def to_text(self, names: Sequence[str] | None = None) -> str:
        cells = [
            [self.entry(i, j).to_text(names) for j in range(self.ncols)]
            for i in range(self.nrows)
        ]
        widths = [
            max([len(self.col_labels[j])] + [len(cells[i][j]) for i in range(self.nrows)])
            for j in range(self.ncols)
        ]
        lwidth = max((len(l) for l in self.row_labels), default=0)
        lines = [
            " " * lwidth
            + " | "
            + "  ".join(self.col_labels[j].rjust(widths[j]) for j in range(self.ncols))
        ]
        for i in range(self.nrows):
            lines.append(
                self.row_labels[i].rjust(lwidth)
                + " | "
                + "  ".join(cells[i][j].rjust(widths[j]) for j in range(self.ncols))
            )
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"PolyMatrix({self.nrows}x{self.ncols})"


def det(m: PolyMatrix, method: str = "expansion") -> MultiPoly:
    return m.det(method)


def all_minors(m: PolyMatrix, k: int) -> list[MultiPoly]:
    return m.all_minors(k)


# -- polynomial expression parser -------------------------------------------

class _PolyParser:
    """Recursive-descent parser for expressions over declared variables.

    Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
    factor := atom ('^' signed-int)?; atom := rational | name | '(' expr ')'.
    Division is supported by rational constants only.
    """

    def __init__(self, text: str, names: Sequence[str]):
        self.text = text
        self.pos = 0
        self.names = list(names)
        self.nvars = len(names)

    def parse(self) -> MultiPoly:
        value = self._expr()
        self._skip()
        if self.pos != len(self.text):
            raise UsageError(
                f"trailing input at position {self.pos} in polynomial {self.text!r}"
            )
        return value

    def _skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def _expr(self) -> MultiPoly:
        sign = 1
        while self._peek() and self._peek() in "+-":
            if self.text[self.pos] == "-":
                sign = -sign
            self.pos += 1
        value = self._term() * sign
        while self._peek() and self._peek() in "+-":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self) -> MultiPoly:
        value = self._factor()
        while self._peek() and self._peek() in "*/":
            op = self.text[self.pos]
            self.pos += 1
            rhs = self._factor()
            if op == "*":
                value = value * rhs
            else:
                if not rhs.is_monomial() or next(iter(rhs.terms)) != MONO_ONE:
                    raise UsageError("division only by rational constants")
                value = value * (1 / next(iter(rhs.terms.values())))
        return value

    def _factor(self) -> MultiPoly:
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            self._skip()
            start = self.pos
            if self._peek() and self._peek() in "+-":
                self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if start == self.pos:
                raise UsageError(f"missing exponent at {start} in {self.text!r}")
            n = int(self.text[start : self.pos])
            if n >= 0:
                return base ** n
            if not base.is_monomial():
                raise UsageError("negative power of a non-monomial")
            m, c = next(iter(base.terms.items()))
            if abs(c) != 1:
                raise UsageError("negative power with non-unit coefficient")
            inv = MultiPoly.monomial(self.nvars, c, [(v, -e) for v, e in m])
            return inv ** (-n)
        return base

    def _atom(self) -> MultiPoly:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            value = self._expr()
            if self._peek() != ")":
                raise UsageError(f"unbalanced parenthesis in {self.text!r}")
            self.pos += 1
            return value
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isdigit() or self.text[self.pos] == "/"
            ):
                self.pos += 1
            return MultiPoly.const(self.nvars, Fraction(self.text[start : self.pos]))
        if ch.isalpha() or ch == "_":
            start = self.pos
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
            name = self.text[start : self.pos]
            if name not in self.names:
                raise UsageError(f"unknown variable {name!r} (declared: {self.names})")
            return MultiPoly.var(self.names.index(name) + 1, self.nvars)
        raise UsageError(f"unexpected character {ch!r} at {self.pos} in {self.text!r}")


def parse_poly(text: str, names: Sequence[str]) -> MultiPoly:
    return _PolyParser(text, names).parse()
