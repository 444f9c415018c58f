"""Quotients of path and free algebras: completion, normal forms, bases,
and an independent linear-algebra route for dimensions and membership.

The rewriting route orients relations in the degree-lexicographic order,
resolves every critical pair of total degree within the cap, and verifies
the resulting rule set once more against all of its overlaps; the closure
certificate is only set after that final check, so a certified system is
globally confluent and its normal forms are canonical.

The linear route never looks at oriented rules.  It spans the ideal slice
{l * r * v : total degree <= cap} literally and row-reduces it with exact
arithmetic, pivoting on the smallest word of each row (rows stay inside one
source/target block for path algebras, so elimination never mixes blocks).
For free algebras whose word count explodes, the dimension falls back to a
capped linear closure enumeration of the regular module, which is exact
whenever it closes.
"""

from __future__ import annotations

import heapq
import itertools
from .quivers import AlgebraElement, Path, Presentation, compose
from .scalars import CycNumber


class CapInsufficientError(RuntimeError):
    """A computation hit the degree cap; carries the offending word."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResourceBudgetError(RuntimeError):
    """A bounded computation would exceed its configured size budget."""


class DegeneratePresentationError(RuntimeError):
    """The relations force an identification among degree-zero words."""


class Rule:
    __slots__ = ("lhs", "letters", "rhs", "rid", "alive")

    def __init__(self, lhs, letters, rhs: AlgebraElement, rid: int):
        self.lhs = lhs
        self.letters = letters
        self.rhs = rhs
        self.rid = rid
        self.alive = True

    def element(self, model) -> AlgebraElement:
        return AlgebraElement.from_word(model, self.lhs) - self.rhs

    def __repr__(self):
        return "Rule(%r -> %d terms)" % (self.lhs, len(self.rhs.terms))


def _replace(model, word, pos: int, width: int, rhs: AlgebraElement) -> AlgebraElement:
    """The element obtained by rewriting word[pos:pos+width] via lhs -> rhs."""
    letters = model.word_letters(word)
    out: dict = {}
    if model.kind == "path":
        prefix = word.slice(0, pos)
        suffix = word.slice(pos + width, len(letters))
        for u, cu in rhs.terms.items():
            mid = compose(u, suffix)
            res = compose(prefix, mid) if mid is not None else None
            assert res is not None, "rule replacement broke path composability"
            acc = out.get(res)
            s = cu if acc is None else acc + cu
            if s:
                out[res] = s
            elif acc is not None:
                del out[res]
    else:
        pre, post = word[:pos], word[pos + width :]
        for u, cu in rhs.terms.items():
            res = pre + u + post
            acc = out.get(res)
            s = cu if acc is None else acc + cu
            if s:
                out[res] = s
            elif acc is not None:
                del out[res]
    return AlgebraElement(model, out)


class RuleIndex:
    """Rules indexed by first and last letter for subword matching."""

    def __init__(self, model):
        self.model = model
        self.by_first: dict = {}
        self.by_last: dict = {}

    def add(self, rule: Rule):
        first, last = rule.letters[0], rule.letters[-1]
        self.by_first.setdefault(first, []).append(rule)
        self.by_first[first].sort(key=lambda r: (len(r.letters), self.model.key(r.lhs)))
        self.by_last.setdefault(last, []).append(rule)
        self.by_last[last].sort(key=lambda r: (len(r.letters), self.model.key(r.lhs)))

    def discard_dead(self):
        for index in (self.by_first, self.by_last):
            for k in list(index):
                index[k] = [r for r in index[k] if r.alive]
                if not index[k]:
                    del index[k]

    def find(self, letters):
        """Leftmost, then shortest, matching rule occurrence."""
        n = len(letters)
        for pos in range(n):
            cands = self.by_first.get(letters[pos])
            if not cands:
                continue
            for rule in cands:
                k = len(rule.letters)
                if pos + k <= n and tuple(letters[pos : pos + k]) == rule.letters:
                    return pos, rule
        return None

    def reducible_by_suffix(self, letters) -> bool:
        """Whether some rule lhs is a suffix of letters (last letter anchored)."""
        n = len(letters)
        cands = self.by_last.get(letters[-1])
        if not cands:
            return False
        for rule in cands:
            k = len(rule.letters)
            if k <= n and tuple(letters[n - k :]) == rule.letters:
                return True
        return False


def _reduce_element(model, index: RuleIndex, elem: AlgebraElement) -> AlgebraElement:
    """Full reduction, leading term first; sound ideal subtractions only."""
    work = dict(elem.terms)
    done: dict = {}
    key = model.key
    letters_of = model.word_letters
    while work:
        w = max(work, key=key)
        c = work.pop(w)
        hit = index.find(letters_of(w))
        if hit is None:
            acc = done.get(w)
            s = c if acc is None else acc + c
            if s:
                done[w] = s
            elif acc is not None:
                del done[w]
            continue
        pos, rule = hit
        repl = _replace(model, w, pos, len(rule.letters), rule.rhs)
        for w2, c2 in repl.terms.items():
            cc = c * c2
            acc = work.get(w2)
            s = cc if acc is None else acc + cc
            if s:
                work[w2] = s
            elif acc is not None:
                del work[w2]
    return AlgebraElement(model, done)


class RewriteSystem:
    """A completed, inter-reduced rule set with memoized normal forms."""

    def __init__(self, model, rules: list, cap: int, closed: bool, presentation=None):
        self.model = model
        self.rules = sorted(rules, key=lambda r: model.key(r.lhs))
        self.cap = cap
        self.closed = closed
        self.presentation = presentation
        self.index = RuleIndex(model)
        for r in self.rules:
            self.index.add(r)
        self._nf_cache: dict = {}

    def rule_list(self):
        return [(r.lhs, r.rhs) for r in self.rules]

    def nf_word(self, w) -> AlgebraElement:
        cache = self._nf_cache
        got = cache.get(w)
        if got is not None:
            return got
        model = self.model
        letters_of = model.word_letters
        pending: dict = {}
        stack = [w]
        while stack:
            u = stack[-1]
            if u in cache:
                stack.pop()
                continue
            exp = pending.get(u)
            if exp is None:
                hit = self.index.find(letters_of(u))
                if hit is None:
                    cache[u] = AlgebraElement.from_word(model, u)
                    stack.pop()
                    continue
                pos, rule = hit
                exp = _replace(model, u, pos, len(rule.letters), rule.rhs)
                pending[u] = exp
            missing = [v for v in exp.terms if v not in cache]
            if missing:
                stack.extend(missing)
                continue
            acc: dict = {}
            for v, cv in exp.terms.items():
                for ww, cc in cache[v].terms.items():
                    c = cv * cc
                    prev = acc.get(ww)
                    s = c if prev is None else prev + c
                    if s:
                        acc[ww] = s
                    elif prev is not None:
                        del acc[ww]
            cache[u] = AlgebraElement(model, acc)
            del pending[u]
            stack.pop()
        return cache[w]

    def normal_form(self, elem: AlgebraElement) -> AlgebraElement:
        if not self.closed and elem.degree() > self.cap:
            raise CapInsufficientError(
                "element degree %d exceeds the cap %d of an uncertified system" % (elem.degree(), self.cap)
            )
        out = AlgebraElement.zero(self.model)
        for w, c in elem.terms.items():
            out = out + self.nf_word(w).scaled(c)
        return out

    def is_zero(self, elem: AlgebraElement) -> bool:
        return self.normal_form(elem).is_zero()

    def __repr__(self):
        return "RewriteSystem(%d rules, cap=%d, closed=%s)" % (len(self.rules), self.cap, self.closed)


def _orient(model, elem: AlgebraElement, counter) -> Rule:
    lw = elem.leading_word()
    if model.degree(lw) == 0:
        raise DegeneratePresentationError(
            "relations identify degree-zero words; leading word %r" % (lw,)
        )
    monic = elem.scaled(elem.terms[lw].inverse())
    rhs = AlgebraElement.from_word(model, lw) - monic
    return Rule(lw, tuple(model.word_letters(lw)), rhs, next(counter))


def _overlaps(model, ra: Rule, rb: Rule):
    """Proper overlaps: a suffix of ra.lhs equals a prefix of rb.lhs."""
    u, v = ra.letters, rb.letters
    for k in range(1, min(len(u), len(v))):
        if u[len(u) - k :] == v[:k]:
            yield k


def _overlap_word(model, ra: Rule, rb: Rule, k: int):
    if model.kind == "path":
        tail = rb.lhs.slice(k, len(rb.letters))
        w = compose(ra.lhs, tail)
        assert w is not None
        return w
    return ra.lhs + rb.lhs[k:]


def complete(pres: Presentation, cap: int) -> RewriteSystem:
    """Degree-capped two-sided completion; deterministic for fixed input.

    Every critical pair of total degree <= cap is resolved; an overlap that
    exceeds the cap raises CapInsufficientError rather than being skipped.
    The returned system has passed a final confluence re-check of all its
    overlaps, so its closure certificate is trustworthy.
    """
    model = pres.model
    maxdeg = pres.max_degree()
    if cap < maxdeg:
        raise CapInsufficientError("cap %d below maximal relation degree %d" % (cap, maxdeg))
    counter = itertools.count()
    index = RuleIndex(model)
    rules: list[Rule] = []
    by_id: dict[int, Rule] = {}
    key = model.key

    pending = [r.element for r in pres.relations if not r.element.is_zero()]
    pending.sort(key=lambda e: key(e.leading_word()))
    pair_heap: list = []
    seen_pairs = set()

    def queue_pairs(rule):
        # over-cap overlaps are queued too: the heap pops by degree, so they
        # only surface after everything below the cap, and they raise only
        # if both their rules are still alive by then
        for other in rules:
            if not other.alive:
                continue
            for a, b in ((rule, other), (other, rule)):
                for k in _overlaps(model, a, b):
                    sig = (a.rid, b.rid, k)
                    if sig in seen_pairs:
                        continue
                    seen_pairs.add(sig)
                    deg = len(a.letters) + len(b.letters) - k
                    wkey = key(_overlap_word(model, a, b, k))
                    heapq.heappush(pair_heap, (deg, wkey, a.rid, b.rid, k))

    def add_rule(elem):
        elem = _reduce_element(model, index, elem)
        if elem.is_zero():
            return
        rule = _orient(model, elem, counter)
        # retire rules whose lhs contains the new lhs as a subword
        stale = []
        k = len(rule.letters)
        for other in rules:
            if not other.alive:
                continue
            letters = other.letters
            if any(letters[p : p + k] == rule.letters for p in range(len(letters) - k + 1)):
                other.alive = False
                stale.append(other)
        if stale:
            index.discard_dead()
        rules.append(rule)
        by_id[rule.rid] = rule
        index.add(rule)
        queue_pairs(rule)
        for other in stale:
            pending.append(other.element(model))
        pending.sort(key=lambda e: key(e.leading_word()))

    while pending or pair_heap:
        while pending:
            add_rule(pending.pop(0))
        if pair_heap:
            deg, _, rida, ridb, k = heapq.heappop(pair_heap)
            ra, rb = by_id[rida], by_id[ridb]
            if not (ra.alive and rb.alive):
                continue
            if deg > cap:
                raise CapInsufficientError(
                    "overlap of degree %d exceeds cap %d" % (deg, cap),
                    witness=_overlap_word(model, ra, rb, k),
                )
            w = _overlap_word(model, ra, rb, k)
            e1 = _replace(model, w, 0, len(ra.letters), ra.rhs)
            e2 = _replace(model, w, len(ra.letters) - k, len(rb.letters), rb.rhs)
            diff = _reduce_element(model, index, e1 - e2)
            if not diff.is_zero():
                pending.append(diff)

    live = [r for r in rules if r.alive]
    # canonical output: fully reduce right-hand sides against the final set
    for r in live:
        r.rhs = _reduce_element(model, index, r.rhs)
    # final confluence audit: every overlap of the final rules reduces to zero
    for ra in live:
        for rb in live:
            for k in _overlaps(model, ra, rb):
                w = _overlap_word(model, ra, rb, k)
                e1 = _replace(model, w, 0, len(ra.letters), ra.rhs)
                e2 = _replace(model, w, len(ra.letters) - k, len(rb.letters), rb.rhs)
                if not _reduce_element(model, index, e1 - e2).is_zero():
                    raise CapInsufficientError("final confluence audit failed", witness=w)
    return RewriteSystem(model, live, cap, closed=True, presentation=pres)


def normal_form(rs: RewriteSystem, elem: AlgebraElement) -> AlgebraElement:
    return rs.normal_form(elem)


class QuotientBasis:
    """Irreducible words of a completed system, sorted by the monomial order."""

    def __init__(self, words: list, closed: bool):
        self.words = words
        self.index = {w: i for i, w in enumerate(words)}
        self.closed = closed

    @property
    def dimension(self) -> int:
        return len(self.words)

    def __contains__(self, w):
        return w in self.index

    def __iter__(self):
        return iter(self.words)

    def __repr__(self):
        return "QuotientBasis(%d words, closed=%s)" % (len(self.words), self.closed)


def enumerate_basis(rs: RewriteSystem, require_closure: bool = True) -> QuotientBasis:
    """All irreducible words by breadth-first extension.

    An empty degree level certifies finiteness (every longer word contains a
    reducible prefix).  Reaching the cap with live words raises the
    cap-insufficient error unless require_closure is off.
    """
    model = rs.model
    words = sorted(model.unit_words(), key=model.key)
    current = list(words)
    letters_of = model.word_letters
    degree = 0
    closed = False
    while current:
        if degree >= rs.cap:
            if require_closure:
                raise CapInsufficientError(
                    "basis enumeration still alive at cap %d" % rs.cap, witness=current[0]
                )
            break
        nxt = []
        for w in current:
            for g in model.right_extensions(w):
                w2 = model.append(w, g)
                if not rs.index.reducible_by_suffix(letters_of(w2)):
                    nxt.append(w2)
        nxt.sort(key=model.key)
        words.extend(nxt)
        current = nxt
        degree += 1
    else:
        closed = True
    if closed and rs.closed:
        # literal multiplicative closure audit over the enumerated span
        basis_set = set(words)
        for w in words:
            for g in model.right_extensions(w):
                nf = rs.nf_word(model.append(w, g))
                if any(u not in basis_set for u in nf.terms):
                    raise CapInsufficientError("closure audit failed", witness=w)
    return QuotientBasis(words, closed and rs.closed)


# ---------------------------------------------------------------------------
# linear-algebra route


def _count_words(model, cap: int) -> int:
    if model.kind == "free":
        a = len(model.letters)
        return (a ** (cap + 1) - 1) // (a - 1) if a > 1 else cap + 1
    quiver = model.quiver
    arrows_from = {
        v: [a for a in quiver.arrows_from(v) if model.with_starred or not a.starred]
        for v in quiver.vertices
    }
    counts = {v: 1 for v in quiver.vertices}
    total = len(quiver.vertices)
    for _ in range(cap):
        counts = {
            v: sum(counts[a.target] for a in arrows_from[v]) for v in quiver.vertices
        }
        total += sum(counts.values())
    return total


class LinearIdealSpan:
    """Row-echelon span of {l * r * v}, extended lazily degree by degree.

    Pivots sit on the smallest word of each row and rows are kept monic, so
    reduction against the span is canonical for a fixed build order.
    """

    def __init__(self, pres: Presentation, row_budget: int = 400_000):
        self.pres = pres
        self.model = pres.model
        self.row_budget = row_budget
        self.pivots: dict = {}
        self.built_degree = -1
        self._rows_seen = 0
        self._levels: dict = {"left": {}, "right": {}}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _insert(self, row: dict):
        key = self.model.key
        while row:
            w = min(row, key=key)
            pivot = self.pivots.get(w)
            if pivot is None:
                c = row[w].inverse()
                self.pivots[w] = {u: cv * c for u, cv in row.items()}
                return
            c = row[w]
            for u, cv in pivot.items():
                x = c * cv
                acc = row.get(u)
                s = -x if acc is None else acc - x
                if s:
                    row[u] = s
                elif acc is not None:
                    del row[u]

    def reduce(self, elem: AlgebraElement) -> AlgebraElement:
        key = self.model.key
        row = dict(elem.terms)
        out: dict = {}
        while row:
            w = min(row, key=key)
            pivot = self.pivots.get(w)
            if pivot is None:
                out[w] = row.pop(w)
                continue
            c = row[w]
            for u, cv in pivot.items():
                x = c * cv
                acc = row.get(u)
                s = -x if acc is None else acc - x
                if s:
                    row[u] = s
                elif acc is not None:
                    del row[u]
        return AlgebraElement(self.model, out)

    def _level(self, side: str, v, deg: int):
        """Words of one degree: source = v for 'left', target = v for 'right'.

        Levels are grown lazily and cached; a level larger than the row
        budget aborts before materializing anything bigger."""
        model = self.model
        cache_key = None if model.kind == "free" else v
        levels = self._levels[side].setdefault(cache_key, None)
        if levels is None:
            root = [()] if model.kind == "free" else [Path(v)]
            levels = [root]
            self._levels[side][cache_key] = levels
        while len(levels) <= deg:
            prev = levels[-1]
            nxt = []
            if model.kind == "free":
                for w in prev:
                    for g in model.letters:
                        nxt.append(w + (g,))
            elif side == "left":
                for p in prev:
                    for a in model.quiver.arrows_from(p.target):
                        if model.with_starred or not a.starred:
                            nxt.append(Path(a.target, (a,) + p.arrows))
            else:
                for p in prev:
                    for a in model.quiver.arrows_into(p.source):
                        if model.with_starred or not a.starred:
                            nxt.append(Path(p.base if p.arrows else a.target, p.arrows + (a,)))
            if len(nxt) > self.row_budget:
                raise ResourceBudgetError(
                    "cofactor level of size %d exceeds the %d-row budget" % (len(nxt), self.row_budget)
                )
            levels.append(nxt)
        return levels[deg]

    def extend_to(self, cap: int):
        """Insert all rows l * r * v of total degree <= cap (new ones only)."""
        if cap <= self.built_degree:
            return
        model = self.model
        rels = sorted(
            (r for r in self.pres.relations if not r.element.is_zero()),
            key=lambda r: model.key(r.element.leading_word()),
        )
        for total in range(self.built_degree + 1, cap + 1):
            for rel in rels:
                e = rel.element
                dr = e.degree()
                if dr > total:
                    continue
                some_word = next(iter(e.terms))
                tv = some_word.target if model.kind == "path" else None
                sv = some_word.source if model.kind == "path" else None
                for a in range(total - dr + 1):
                    b = total - dr - a
                    lv = self._level("left", tv, a)
                    rv = self._level("right", sv, b)
                    self._rows_seen += len(lv) * len(rv)
                    if self._rows_seen > self.row_budget:
                        raise ResourceBudgetError(
                            "ideal span exceeds %d rows at degree %d; "
                            "use a smaller cap or bounded membership" % (self.row_budget, total)
                        )
                    for l in lv:
                        le = AlgebraElement.from_word(model, l) * e
                        for v in rv:
                            row = le * AlgebraElement.from_word(model, v)
                            if row.terms:
                                self._insert(dict(row.terms))
        self.built_degree = cap


def _estimate_rows(pres: Presentation, cap: int) -> int:
    """Exact count of the cofactor pairs (l, v) the literal span would use."""
    model = pres.model
    if model.kind == "free":
        alpha = len(model.letters)
        total = 0
        for rel in pres.relations:
            dr = rel.element.degree()
            for m in range(cap - dr + 1):
                total += (m + 1) * (alpha ** m)
        return total
    quiver = model.quiver
    arrows_ok = lambda a: model.with_starred or not a.starred
    # f_src[v][d]: paths of degree d with source v; f_tgt likewise by target
    f_src = {v: [1] for v in quiver.vertices}
    f_tgt = {v: [1] for v in quiver.vertices}
    for _ in range(cap):
        nxt_s = {v: sum(f_src[a.target][-1] for a in quiver.arrows_from(v) if arrows_ok(a)) for v in quiver.vertices}
        nxt_t = {v: sum(f_tgt[a.source][-1] for a in quiver.arrows_into(v) if arrows_ok(a)) for v in quiver.vertices}
        for v in quiver.vertices:
            f_src[v].append(nxt_s[v])
            f_tgt[v].append(nxt_t[v])
    total = 0
    for rel in pres.relations:
        e = rel.element
        if e.is_zero():
            continue
        dr = e.degree()
        w = next(iter(e.terms))
        for a in range(cap - dr + 1):
            for b in range(cap - dr - a + 1):
                total += f_src[w.target][a] * f_tgt[w.source][b]
    return total


def dimension_oracle(
    pres: Presentation,
    cap: int,
    word_budget: int = 120_000,
    row_budget: int = 400_000,
    row_gate: int = 60_000,
    label_budget: int = 20_000,
) -> int:
    """dim(span of words <= cap) / (span of l*r*v of total degree <= cap).

    Uses literal exact elimination whenever the instance fits the budgets;
    bigger instances fall back to the capped linear closure enumeration of
    the regular module, which returns the exact dimension when the action
    table closes below the cap.
    """
    n_words = _count_words(pres.model, cap)
    small = n_words <= word_budget and _estimate_rows(pres, cap) <= row_gate
    if small:
        span = LinearIdealSpan(pres, row_budget=row_budget)
        span.extend_to(cap)
        return n_words - span.rank
    return _closure_dimension(pres, cap, label_budget)


def ideal_membership(
    pres: Presentation,
    elem: AlgebraElement,
    cap: int,
    row_budget: int = 400_000,
    _span_cache: dict = {},
) -> bool:
    """Whether elem lies in span{l*r*v : total degree <= cap}.

    Sound and complete up to the cap: True answers carry an implicit exact
    witness (the reduction), False means not witnessed at this cap.  The
    span is deepened degree by degree so memberships witnessed at low degree
    stay cheap; if completing a level would exceed the row budget before the
    cap is reached, a resource error is raised instead of a premature False.
    """
    if elem.is_zero():
        return True
    if elem.degree() > cap:
        raise CapInsufficientError("element degree %d exceeds cap %d" % (elem.degree(), cap))
    key = id(pres)
    span = _span_cache.get(key)
    if span is None or span.row_budget != row_budget:
        span = LinearIdealSpan(pres, row_budget=row_budget)
        _span_cache[key] = span
    for depth in range(elem.degree(), cap + 1):
        span.extend_to(depth)
        if span.reduce(elem).is_zero():
            return True
    return False


# ---------------------------------------------------------------------------
# capped linear closure enumeration (regular-module route for free algebras)


class _ClosureEnumerator:
    """Builds the right regular module of a finitely presented algebra by
    defining word actions freely and imposing every relation on every basis
    label; collapses are processed as exact linear substitutions."""

    def __init__(self, pres: Presentation, cap: int, label_budget: int):
        self.model = pres.model
        self.field = pres.model.field
        self.relations = [r.element for r in pres.relations if not r.element.is_zero()]
        self.cap = cap
        self.label_budget = label_budget
        self.rep: dict[int, tuple] = {}
        self.live: set[int] = set()
        self.act: dict = {}
        self.subs: dict = {}
        self.deductions: list = []
        self.deferred: list = []
        self.next_id = 0

    def _new_label(self, word) -> int:
        if len(self.live) >= self.label_budget:
            raise ResourceBudgetError("closure enumeration exceeds %d labels" % self.label_budget)
        lid = self.next_id
        self.next_id += 1
        self.rep[lid] = word
        self.live.add(lid)
        return lid

    def _extend_word(self, word, g):
        """word * g, or None when the path product is zero."""
        if self.model.kind == "free":
            return word + (g,)
        if word.source != g.target:
            return None
        return self.model.append(word, g)

    def _resolve(self, vec: dict) -> dict:
        while True:
            dead = [l for l in vec if l in self.subs]
            if not dead:
                return vec
            out = dict(vec)
            for l in dead:
                c = out.pop(l, None)
                if c is None:
                    continue
                for m, cm in self.subs[l].items():
                    x = c * cm
                    acc = out.get(m)
                    s = x if acc is None else acc + x
                    if s:
                        out[m] = s
                    elif acc is not None:
                        del out[m]
            vec = out

    def _apply_letter(self, vec: dict, g) -> dict:
        out: dict = {}
        for lid, c in self._resolve(vec).items():
            cell = self.act.get((lid, g))
            if cell is None:
                word = self._extend_word(self.rep[lid], g)
                if word is None:
                    cell = {}
                    self.act[(lid, g)] = cell
                    continue
                if self.model.degree(word) > self.cap:
                    raise CapInsufficientError("closure walk exceeds cap", witness=word)
                nid = self._new_label(word)
                cell = {nid: self.field.one}
                self.act[(lid, g)] = cell
            for m, cm in self._resolve(cell).items():
                x = c * cm
                acc = out.get(m)
                s = x if acc is None else acc + x
                if s:
                    out[m] = s
                elif acc is not None:
                    del out[m]
        return out

    def _collapse(self, vec: dict):
        vec = self._resolve(vec)
        if not vec:
            return
        pivot = max(vec)
        c = vec[pivot].inverse()
        sub = {m: -(cm * c) for m, cm in vec.items() if m != pivot}
        self.subs[pivot] = sub
        self.live.discard(pivot)
        for g in self.model.letters:
            cell = self.act.pop((pivot, g), None)
            if cell is not None:
                # the dead label's action row becomes a deduction
                self.deductions.append((dict(sub), g, cell))

    def _process_deductions(self):
        while self.deductions:
            base, g, expected = self.deductions.pop()
            try:
                got = self._apply_letter(base, g)
            except CapInsufficientError:
                # may become evaluable after further collapses; retry later
                self.deferred.append((base, g, expected))
                continue
            diff = dict(self._resolve(expected))
            for m, cm in got.items():
                acc = diff.get(m)
                s = -cm if acc is None else acc - cm
                if s:
                    diff[m] = s
                elif acc is not None:
                    del diff[m]
            self._collapse(diff)

    def _impose(self, lid: int, rel) -> bool:
        vec: dict = {}
        try:
            for word, coeff in rel.sorted_terms():
                letters = self.model.word_letters(word)
                if not letters and self.model.kind == "path":
                    # a trivial path acts as the local unit: b * e_x is b or 0
                    if self.rep[lid].source != word.base:
                        continue
                cur = {lid: self.field.one}
                for g in letters:
                    cur = self._apply_letter(cur, g)
                for m, cm in cur.items():
                    x = cm * coeff
                    acc = vec.get(m)
                    s = x if acc is None else acc + x
                    if s:
                        vec[m] = s
                    elif acc is not None:
                        del vec[m]
        except CapInsufficientError:
            return False
        self._collapse(vec)
        self._process_deductions()
        return True

    def run(self) -> tuple[int, bool]:
        """Degree-ordered closure: relations are fully imposed on all labels
        of representative degree <= d before actions at degree d+1 are
        defined, so out-of-basis labels die before they can breed."""
        for w in self.model.unit_words():
            self._new_label(w)
        imposed: set = set()
        depth = 0
        while True:
            changed = True
            while changed:
                changed = False
                if self.deferred:
                    self.deductions.extend(self.deferred)
                    self.deferred = []
                    before = (len(self.live), self.next_id)
                    self._process_deductions()
                    changed = (len(self.live), self.next_id) != before
                for lid in sorted(self.live):
                    if lid not in self.live or self.model.degree(self.rep[lid]) > depth:
                        continue
                    for ridx, rel in enumerate(self.relations):
                        sig = (lid, ridx)
                        if sig in imposed:
                            continue
                        if lid not in self.live:
                            break
                        if self._impose(lid, rel):
                            imposed.add(sig)
                            changed = True
            for lid in sorted(self.live):
                if self.model.degree(self.rep[lid]) > depth:
                    continue
                for g in self.model.letters:
                    if (lid, g) not in self.act:
                        word = self._extend_word(self.rep[lid], g)
                        if word is None:
                            self.act[(lid, g)] = {}
                        elif self.model.degree(word) <= self.cap:
                            self.act[(lid, g)] = {self._new_label(word): self.field.one}
            all_defined = all(
                (lid, g) in self.act for lid in self.live for g in self.model.letters
            )
            all_imposed = all(
                (lid, ridx) in imposed
                for lid in self.live
                for ridx in range(len(self.relations))
            )
            if all_defined and all_imposed and not self.deferred:
                return len(self.live), True
            if depth >= self.cap:
                return len(self.live), False
            depth += 1


def _closure_dimension(pres: Presentation, cap: int, label_budget: int) -> int:
    # labels carry representative words that need not be normal-form shaped,
    # so the enumeration is given headroom above the requested cap; a closed
    # table is exact at any sufficient cap
    slack = max(pres.max_degree(), 2)
    for attempt in range(4):
        dim, closed = _ClosureEnumerator(pres, cap + attempt * slack, label_budget).run()
        if closed:
            return dim
    raise ResourceBudgetError(
        "closure enumeration did not close below cap %d (+%d slack); use ideal_membership"
        % (cap, 3 * slack)
    )
