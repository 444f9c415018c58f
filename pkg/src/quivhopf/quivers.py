"""Quivers on Z_n^t, path and free algebras, and the presented algebras.

The quiver has one vertex per element of Z_n^t and arrows a(x,i) from
x - c^i to x (c^i the i-th Cartan column); the double quiver adds the
reversed arrow a(x,i)* for each.  Words are either paths (concatenation is
zero when endpoints mismatch) or free words over the symbols
F_i, Kinv_i, K_i, E_i.  An AlgebraElement is a finite linear combination
of words with CycNumber coefficients.

Written products apply the right factor first: in a stored word the
leftmost letter is the last arrow travelled, so the target of a path is
the target of its first letter.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .scalars import CycField, CycNumber, ResidueVector, ell


class CartanError(ValueError):
    pass


class CartanMatrix:
    """Symmetric ADE-type Cartan matrix: 2 on the diagonal, 0/-1 off it,
    positive definite (checked by exact leading principal minors)."""

    def __init__(self, rows):
        rows = tuple(tuple(int(a) for a in r) for r in rows)
        t = len(rows)
        if any(len(r) != t for r in rows):
            raise CartanError("matrix is not square")
        for i in range(t):
            if rows[i][i] != 2:
                raise CartanError("diagonal entry a_%d%d = %d, must be 2" % (i + 1, i + 1, rows[i][i]))
            for j in range(t):
                if i != j:
                    if rows[i][j] not in (0, -1):
                        raise CartanError(
                            "off-diagonal entry a_%d%d = %d, must be 0 or -1" % (i + 1, j + 1, rows[i][j])
                        )
                    if rows[i][j] != rows[j][i]:
                        raise CartanError("matrix is not symmetric at (%d,%d)" % (i + 1, j + 1))
        for k in range(1, t + 1):
            if _det([r[:k] for r in rows[:k]]) <= 0:
                raise CartanError("leading principal minor of order %d is not positive" % k)
        self.entries = rows
        self.t = t

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i - 1][j - 1]

    def column(self, i: int, n: int) -> ResidueVector:
        """The i-th column c^i as a residue vector mod n (i is 1-based)."""
        return ResidueVector(tuple(r[i - 1] for r in self.entries), n)

    def num_positive_roots(self) -> int:
        """Count positive roots via reflection closure of the simple roots."""
        t = self.t
        roots = {tuple(1 if k == j else 0 for k in range(t)) for j in range(t)}
        # s_j(v) = v - <v, alpha_j> alpha_j; keep the reflections that stay
        # nonnegative, which reaches every positive root in finite type
        frontier = set(roots)
        while frontier:
            nxt = set()
            for v in frontier:
                for j in range(t):
                    pair = sum(v[k] * self.entries[k][j] for k in range(t))
                    w = tuple(v[k] - pair * (1 if k == j else 0) for k in range(t))
                    if all(c >= 0 for c in w) and any(w) and w not in roots:
                        nxt.add(w)
            roots |= nxt
            frontier = nxt
        return len(roots)

    def __eq__(self, other):
        return isinstance(other, CartanMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "CartanMatrix(%s)" % (self.entries,)


def _det(rows) -> int:
    if len(rows) == 1:
        return rows[0][0]
    out = 0
    for j in range(len(rows)):
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        term = rows[0][j] * _det(minor)
        out += term if j % 2 == 0 else -term
    return out


A1 = CartanMatrix([[2]])
A2 = CartanMatrix([[2, -1], [-1, 2]])


class Arrow:
    """a(x,i): x - c^i -> x, or its reverse a(x,i)*: x -> x - c^i."""

    __slots__ = ("x", "i", "starred", "source", "target", "_key", "_hash")

    def __init__(self, x: ResidueVector, i: int, starred: bool, column: ResidueVector):
        self.x = x
        self.i = i
        self.starred = starred
        tail = x - column
        if starred:
            self.source, self.target = x, tail
        else:
            self.source, self.target = tail, x
        # unstarred letters rank above starred; ties by (index, base vertex)
        self._key = (0 if starred else 1, i, x.entries)
        self._hash = hash((x.entries, i, starred))

    @property
    def key(self):
        return self._key

    def star(self, column: ResidueVector) -> "Arrow":
        return Arrow(self.x, self.i, not self.starred, column)

    def __eq__(self, other):
        return (
            isinstance(other, Arrow)
            and self.x == other.x
            and self.i == other.i
            and self.starred == other.starred
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return "a%s(%s;%d)" % ("*" if self.starred else "", ",".join(map(str, self.x.entries)), self.i)


class Path:
    """A composable word of arrows; length 0 means the trivial path e_base."""

    __slots__ = ("base", "arrows", "_hash")

    def __init__(self, base: ResidueVector, arrows: tuple = ()):
        if arrows:
            base = arrows[0].target
            for left, right in zip(arrows, arrows[1:]):
                if left.source != right.target:
                    raise ValueError("non-composable letters %r | %r" % (left, right))
        self.base = base
        self.arrows = arrows
        self._hash = None

    @property
    def target(self) -> ResidueVector:
        return self.base

    @property
    def source(self) -> ResidueVector:
        return self.arrows[-1].source if self.arrows else self.base

    @property
    def degree(self) -> int:
        return len(self.arrows)

    def vertex_at(self, pos: int) -> ResidueVector:
        """Vertex between letters pos-1 and pos (0 = target, degree = source)."""
        return self.arrows[pos - 1].source if pos else self.base

    def slice(self, i: int, j: int) -> "Path":
        if i == j:
            return Path(self.vertex_at(i))
        return Path(self.arrows[i].target, self.arrows[i:j])

    def key(self):
        if not self.arrows:
            return (0, ((-1, 0, self.base.entries),))
        return (len(self.arrows), tuple(a._key for a in self.arrows))

    def __eq__(self, other):
        return (
            isinstance(other, Path)
            and self.base == other.base
            and self.arrows == other.arrows
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.base, self.arrows))
        return self._hash

    def __repr__(self):
        if not self.arrows:
            return "e(%s)" % ",".join(map(str, self.base.entries))
        return " ".join(map(repr, self.arrows))


def compose(p: Path, r: Path):
    """p . r (r applied first); None is the zero marker for endpoint mismatch."""
    if p.source != r.target:
        return None
    if not p.arrows:
        return r
    if not r.arrows:
        return p
    return Path(p.base, p.arrows + r.arrows)


def star(p: Path, quiver: "DoubleQuiver") -> Path:
    """Reverse a path, starring every letter; trivial paths are fixed."""
    if not p.arrows:
        return p
    cols = quiver.columns
    letters = tuple(Arrow(a.x, a.i, not a.starred, cols[a.i]) for a in reversed(p.arrows))
    return Path(letters[0].target, letters)


class DoubleQuiver:
    """Q(C, Z_n) together with its reversed arrows."""

    def __init__(self, cartan: CartanMatrix, n: int):
        self.cartan = cartan
        self.n = n
        self.t = cartan.t
        self.field = CycField(n)
        self.columns = {i: cartan.column(i, n) for i in range(1, self.t + 1)}
        self.vertices = [
            ResidueVector(v, n) for v in itertools.product(range(n), repeat=self.t)
        ]
        self.arrows = []
        for x in self.vertices:
            for i in range(1, self.t + 1):
                self.arrows.append(Arrow(x, i, False, self.columns[i]))
        for x in self.vertices:
            for i in range(1, self.t + 1):
                self.arrows.append(Arrow(x, i, True, self.columns[i]))
        self._by_target = {}
        self._by_source = {}
        for a in self.arrows:
            self._by_target.setdefault(a.target, []).append(a)
            self._by_source.setdefault(a.source, []).append(a)

    def arrow(self, x: ResidueVector, i: int, starred: bool = False) -> Arrow:
        return Arrow(x, i, starred, self.columns[i])

    def arrows_into(self, v: ResidueVector):
        return self._by_target.get(v, ())

    def arrows_from(self, v: ResidueVector):
        return self._by_source.get(v, ())

    def vertex(self, entries) -> ResidueVector:
        if len(entries) != self.t:
            raise ValueError("vertex needs %d components, got %d" % (self.t, len(entries)))
        return ResidueVector(entries, self.n)


def build_double_quiver(cartan: CartanMatrix, n: int, allow_small_n: bool = False) -> DoubleQuiver:
    """Construct Q(C, Z_n); n >= 5 unless explicitly overridden."""
    if not isinstance(cartan, CartanMatrix):
        cartan = CartanMatrix(cartan)
    if n < 5 and not allow_small_n:
        raise ValueError("n = %d unsupported: the construction assumes n >= 5" % n)
    return DoubleQuiver(cartan, n)


def path_power(quiver: DoubleQuiver, x: ResidueVector, i: int, s: int, starred: bool = False) -> Path:
    """The telescoped path a(x, i^s), or its star."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    col = quiver.columns[i]
    plain = Path(x, tuple(Arrow(x - k * col, i, False, col) for k in range(s)))
    return star(plain, quiver) if starred else plain


def path_from_indices(quiver: DoubleQuiver, x: ResidueVector, indices, starred: bool = False) -> Path:
    """a(x, i_1 i_2 ... i_s): left letter targets x; or the starred reverse."""
    letters = []
    v = x
    for i in indices:
        col = quiver.columns[i]
        letters.append(Arrow(v, i, False, col))
        v = v - col
    plain = Path(x, tuple(letters))
    return star(plain, quiver) if starred else plain


# ---------------------------------------------------------------------------
# word models and algebra elements


class PathModel:
    """Word model for the path algebra of a quiver (double or plain)."""

    kind = "path"

    def __init__(self, quiver: DoubleQuiver, with_starred: bool = True):
        self.quiver = quiver
        self.field = quiver.field
        self.with_starred = with_starred
        self.letters = [a for a in quiver.arrows if with_starred or not a.starred]

    def mul(self, p: Path, r: Path):
        return compose(p, r)

    def degree(self, w: Path) -> int:
        return w.degree

    def key(self, w: Path):
        return w.key()

    def unit_words(self):
        return [Path(v) for v in self.quiver.vertices]

    def right_extensions(self, w: Path):
        for a in self.quiver.arrows_into(w.source):
            if self.with_starred or not a.starred:
                yield a

    def append(self, w: Path, a: Arrow) -> Path:
        return Path(w.base if w.arrows else a.target, w.arrows + (a,))

    def word_letters(self, w: Path):
        return w.arrows

    def word_from_letters(self, letters, context_word: Path, pos: int) -> Path:
        if letters:
            return Path(letters[0].target, tuple(letters))
        return Path(context_word.vertex_at(pos))

    def render_word(self, w: Path) -> str:
        if not w.arrows:
            return "e(%s)" % ",".join(map(str, w.base.entries))
        return " ".join(
            "a%s(%s;%d)" % ("*" if a.starred else "", ",".join(map(str, a.x.entries)), a.i)
            for a in w.arrows
        )

    def __repr__(self):
        return "PathModel(t=%d, n=%d, %s)" % (
            self.quiver.t,
            self.quiver.n,
            "double" if self.with_starred else "plain",
        )


FAMILY_F, FAMILY_KINV, FAMILY_K, FAMILY_E = 0, 1, 2, 3
_FAMILY_NAMES = {FAMILY_F: "F", FAMILY_KINV: "Kinv", FAMILY_K: "K", FAMILY_E: "E"}


class FreeModel:
    """Word model for the free algebra on F_i < Kinv_i < K_i < E_i.

    A subset of the four families can be selected, which gives small free
    algebras for toy presentations and tests."""

    kind = "free"

    def __init__(self, t: int, n: int, families=(FAMILY_F, FAMILY_KINV, FAMILY_K, FAMILY_E)):
        self.t = t
        self.n = n
        self.field = CycField(n)
        self.letters = [f * t + i for f in sorted(families) for i in range(t)]

    def code(self, family: int, i: int) -> int:
        if not 1 <= i <= self.t:
            raise ValueError("generator index %d out of 1..%d" % (i, self.t))
        return family * self.t + (i - 1)

    def letter_name(self, code: int) -> str:
        family, idx = divmod(code, self.t)
        return "%s_%d" % (_FAMILY_NAMES[family], idx + 1)

    def mul(self, w1: tuple, w2: tuple):
        return w1 + w2

    def degree(self, w: tuple) -> int:
        return len(w)

    def key(self, w: tuple):
        return (len(w), w)

    def unit_words(self):
        return [()]

    def right_extensions(self, w: tuple):
        return self.letters

    def append(self, w: tuple, g: int) -> tuple:
        return w + (g,)

    def word_letters(self, w: tuple):
        return w

    def word_from_letters(self, letters, context_word=None, pos: int = 0) -> tuple:
        return tuple(letters)

    def render_word(self, w: tuple) -> str:
        if not w:
            return "1"
        parts = []
        k = 0
        while k < len(w):
            j = k
            while j < len(w) and w[j] == w[k]:
                j += 1
            name = self.letter_name(w[k])
            parts.append(name if j - k == 1 else "%s^%d" % (name, j - k))
            k = j
        return " ".join(parts)

    def __repr__(self):
        return "FreeModel(t=%d, n=%d)" % (self.t, self.n)


class AlgebraElement:
    """A finite linear combination of basis words with CycNumber coefficients."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms: dict | None = None):
        self.model = model
        self.terms = terms or {}

    @classmethod
    def zero(cls, model):
        return cls(model)

    @classmethod
    def from_word(cls, model, word, coeff=1):
        c = coeff if isinstance(coeff, CycNumber) else model.field.from_rational(coeff)
        return cls(model, {word: c}) if c else cls(model)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        out = dict(self.terms)
        for w, c in other.terms.items():
            acc = out.get(w)
            s = c if acc is None else acc + c
            if s:
                out[w] = s
            elif acc is not None:
                del out[w]
        return AlgebraElement(self.model, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return AlgebraElement(self.model, {w: -c for w, c in self.terms.items()})

    def scaled(self, c) -> "AlgebraElement":
        if not isinstance(c, CycNumber):
            c = self.model.field.from_rational(c)
        if not c:
            return AlgebraElement(self.model)
        return AlgebraElement(self.model, {w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            return self.scaled(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        mul = self.model.mul
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = mul(w1, w2)
                if w is None:
                    continue
                c = c1 * c2
                acc = out.get(w)
                s = c if acc is None else acc + c
                if s:
                    out[w] = s
                elif acc is not None:
                    del out[w]
        return AlgebraElement(self.model, out)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycNumber)):
            return self.scaled(other)
        return NotImplemented

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.model is other.model
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def degree(self) -> int:
        deg = self.model.degree
        return max((deg(w) for w in self.terms), default=0)

    def leading_word(self):
        key = self.model.key
        return max(self.terms, key=key)

    def sorted_terms(self):
        key = self.model.key
        return sorted(self.terms.items(), key=lambda item: key(item[0]))

    def __str__(self):
        from .expressions import format_element

        return format_element(self)

    def __repr__(self):
        return "<%s>" % self


class Relation:
    """A tagged relation instance; the tag is the paper-style label."""

    __slots__ = ("tag", "element", "about")

    def __init__(self, tag: str, element: AlgebraElement, about: str = ""):
        self.tag = tag
        self.element = element
        self.about = about

    def __repr__(self):
        return "Relation(%s%s)" % (self.tag, " " + self.about if self.about else "")


class Presentation:
    """A finitely presented algebra: a word model plus tagged relations."""

    def __init__(self, model, relations: list, name: str):
        self.model = model
        self.relations = relations
        self.name = name

    def max_degree(self) -> int:
        return max((r.element.degree() for r in self.relations), default=0)

    def tags(self):
        return sorted({r.tag for r in self.relations})

    def __repr__(self):
        return "Presentation(%s, %d relations)" % (self.name, len(self.relations))


def default_cap(cartan: CartanMatrix, n: int) -> int:
    """Default degree cap: twice the nilpotent block length per positive
    root plus the torus word length, the longest plausible PBW word."""
    return 2 * cartan.num_positive_roots() * (ell(n) - 1) + cartan.t * (n - 1)


def serre_element(
    quiver: DoubleQuiver, x: ResidueVector, i: int, j: int, starred: bool = False
) -> AlgebraElement:
    """omega_ij(x): the alternating Serre sum with [kappa t]_q coefficients."""
    if i == j:
        raise ValueError("serre element needs i != j")
    field = quiver.field
    kappa = 1 - quiver.cartan[i, j]
    model = PathModel(quiver)
    out = AlgebraElement.zero(model)
    for tt in range(kappa + 1):
        coeff = field.quantum_binomial_sym(kappa, tt, 1)
        if tt % 2:
            coeff = -coeff
        word = path_from_indices(quiver, x, [i] * (kappa - tt) + [j] + [i] * tt, starred)
        out = out + AlgebraElement.from_word(model, word, coeff)
    return out


def relations_restricted(cartan: CartanMatrix, n: int, algebra: str = "uqC") -> Presentation:
    """Relations of Pi^C (ideal I) or of u_q^C (I together with J)."""
    if algebra not in ("PiC", "uqC"):
        raise ValueError("algebra must be 'PiC' or 'uqC'")
    quiver = build_double_quiver(cartan, n)
    model = PathModel(quiver)
    field = quiver.field
    t = quiver.t
    L = ell(n)
    rels = []

    def path_elem(word, coeff=1):
        return AlgebraElement.from_word(model, word, coeff)

    for x in quiver.vertices:
        for i in range(1, t + 1):
            ci = quiver.columns[i]
            w1 = compose(Path(x, (quiver.arrow(x, i),)), Path(x, (quiver.arrow(x, i, True),)))
            a_up = quiver.arrow(x + ci, i)
            w2 = compose(Path(x + ci, (a_up.star(ci),)), Path(x + ci, (a_up,)))
            elem = (
                path_elem(w1)
                - path_elem(w2)
                - path_elem(Path(x), field.quantum_integer(x[i - 1], 1))
            )
            rels.append(Relation("(2.1)", elem, "x=%s i=%d" % (x.entries, i)))
    for x in quiver.vertices:
        for i in range(1, t + 1):
            for j in range(1, t + 1):
                if i == j:
                    continue
                ci, cj = quiver.columns[i], quiver.columns[j]
                w1 = compose(
                    Path(x - cj, (quiver.arrow(x, j, True),)),
                    Path(x, (quiver.arrow(x, i),)),
                )
                w2 = compose(
                    Path(x - cj, (quiver.arrow(x - cj, i),)),
                    Path(x - ci, (quiver.arrow(x - ci, j, True),)),
                )
                rels.append(
                    Relation("(2.2)", path_elem(w1) - path_elem(w2), "x=%s i=%d j=%d" % (x.entries, i, j))
                )
    if algebra == "uqC":
        for x in quiver.vertices:
            for i in range(1, t + 1):
                rels.append(
                    Relation("(J-power)", path_elem(path_power(quiver, x, i, L)), "x=%s i=%d" % (x.entries, i))
                )
        for x in quiver.vertices:
            for i in range(1, t + 1):
                rels.append(
                    Relation(
                        "(J-power-star)",
                        path_elem(path_power(quiver, x, i, L, starred=True)),
                        "x=%s i=%d" % (x.entries, i),
                    )
                )
        for x in quiver.vertices:
            for i in range(1, t + 1):
                for j in range(1, t + 1):
                    if i == j:
                        continue
                    rels.append(
                        Relation("(J-serre)", serre_element(quiver, x, i, j), "x=%s i=%d j=%d" % (x.entries, i, j))
                    )
        for x in quiver.vertices:
            for i in range(1, t + 1):
                for j in range(1, t + 1):
                    if i == j:
                        continue
                    rels.append(
                        Relation(
                            "(J-serre-star)",
                            serre_element(quiver, x, i, j, starred=True),
                            "x=%s i=%d j=%d" % (x.entries, i, j),
                        )
                    )
    return Presentation(model, rels, algebra)


def uq_presentation(cartan: CartanMatrix, n: int) -> Presentation:
    """u_q(C) on the 4t symbols K_i, Kinv_i, E_i, F_i, with inverses explicit.

    The commutator relation carries the exact scalar 1/(q - q^-1), which is
    invertible in Q(zeta_n)."""
    if not isinstance(cartan, CartanMatrix):
        cartan = CartanMatrix(cartan)
    if n < 5:
        raise ValueError("n = %d unsupported: the construction assumes n >= 5" % n)
    t = cartan.t
    model = FreeModel(t, n)
    field = model.field
    L = ell(n)
    K = lambda i: model.code(FAMILY_K, i)
    Kv = lambda i: model.code(FAMILY_KINV, i)
    E = lambda i: model.code(FAMILY_E, i)
    Fg = lambda i: model.code(FAMILY_F, i)

    def word(*codes):
        return AlgebraElement.from_word(model, tuple(codes))

    one = AlgebraElement.from_word(model, ())
    rels = []
    for i in range(1, t + 1):
        rels.append(Relation("(uq-1)", word(*([K(i)] * n)) - one, "K_%d^n = 1" % i))
    for i in range(1, t + 1):
        for j in range(i + 1, t + 1):
            rels.append(Relation("(uq-1)", word(K(i), K(j)) - word(K(j), K(i)), "K_%d K_%d commute" % (i, j)))
    for i in range(1, t + 1):
        rels.append(Relation("(uq-inv)", word(K(i), Kv(i)) - one, "K_%d Kinv_%d = 1" % (i, i)))
        rels.append(Relation("(uq-inv)", word(Kv(i), K(i)) - one, "Kinv_%d K_%d = 1" % (i, i)))
    for i in range(1, t + 1):
        for j in range(1, t + 1):
            a = cartan[i, j]
            rels.append(
                Relation(
                    "(uq-2)",
                    word(K(i), E(j), Kv(i)) - word(E(j)).scaled(field.q_power(a)),
                    "K_%d E_%d conjugation" % (i, j),
                )
            )
            rels.append(
                Relation(
                    "(uq-2)",
                    word(K(i), Fg(j), Kv(i)) - word(Fg(j)).scaled(field.q_power(-a)),
                    "K_%d F_%d conjugation" % (i, j),
                )
            )
    inv_qdiff = (field.q_power(1) - field.q_power(-1)).inverse()
    for i in range(1, t + 1):
        for j in range(1, t + 1):
            elem = word(E(i), Fg(j)) - word(Fg(j), E(i))
            if i == j:
                elem = elem - (word(K(i)) - word(Kv(i))).scaled(inv_qdiff)
            rels.append(Relation("(uq-3)", elem, "E_%d F_%d commutator" % (i, j)))
    for i in range(1, t + 1):
        rels.append(Relation("(uq-4)", word(*([E(i)] * L)), "E_%d^ell = 0" % i))
        rels.append(Relation("(uq-4)", word(*([Fg(i)] * L)), "F_%d^ell = 0" % i))
    for tag, gen in (("(uq-5)", E), ("(uq-6)", Fg)):
        for i in range(1, t + 1):
            for j in range(1, t + 1):
                if i == j:
                    continue
                kappa = 1 - cartan[i, j]
                elem = AlgebraElement.zero(model)
                for s in range(kappa + 1):
                    coeff = field.quantum_binomial_sym(kappa, s, 1)
                    if s % 2:
                        coeff = -coeff
                    w = tuple([gen(i)] * (kappa - s) + [gen(j)] + [gen(i)] * s)
                    elem = elem + AlgebraElement.from_word(model, w, coeff)
                rels.append(Relation(tag, elem, "%s quantum Serre (%d,%d)" % (tag, i, j)))
    return Presentation(model, rels, "uq")
