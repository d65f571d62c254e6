"""Todd-Coxeter coset enumeration (HLT with lookahead) and low-index
subgroup search by canonical backtracking.

Table columns are 0: a, 1: a^-1, 2: b, 3: b^-1; column c's inverse is c ^ 1.
Cosets are 0-based internally; coset 0 is the subgroup H.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, EnumerationOverflow
from .textio import PermutationInput
from .words import Presentation, SubgroupSpec, Word

DEFAULT_MAX_COSETS = 2_000_000


def letter_to_col(l):
    return 2 * (abs(l) - 1) + (0 if l > 0 else 1)


def col_to_letter(c):
    gen = c // 2 + 1
    return gen if c % 2 == 0 else -gen


def word_cols(w: Word):
    return [letter_to_col(l) for l in w.letters]


@dataclass(frozen=True)
class CosetTable:
    n: int
    action: tuple                 # 4 tuples mapping coset -> coset (a, A, b, B)
    representatives: tuple        # Word tracing coset 0 to each coset
    presentation: Presentation
    subgroup: SubgroupSpec | None = None

    def trace(self, start, word: Word):
        x = start
        for l in word.letters:
            x = self.action[letter_to_col(l)][x]
        return x

    def verify(self):
        """Internal consistency: inverse columns, relator and subgroup closure,
        representative paths.  Raises AssertionError on violation."""
        n = self.n
        for g in (0, 2):
            fwd, bwd = self.action[g], self.action[g + 1]
            assert sorted(fwd) == list(range(n)) and sorted(bwd) == list(range(n))
            assert all(bwd[fwd[i]] == i for i in range(n))
        for r in self.presentation.relators:
            for i in range(n):
                assert self.trace(i, r) == i, "relator does not close"
        if self.subgroup is not None:
            for w in self.subgroup.generators:
                assert self.trace(0, w) == 0, "subgroup word leaves coset 0"
        for i, w in enumerate(self.representatives):
            assert self.trace(0, w) == i, "representative traces wrong coset"


class _Enumerator:
    def __init__(self, pres: Presentation, sub: SubgroupSpec, max_cosets):
        self.pres = pres
        self.sub = sub
        self.max_cosets = max_cosets
        self.rel_cols = [word_cols(r.cyclically_reduced()) for r in pres.relators
                         if not r.cyclically_reduced().is_identity]
        self.sub_cols = [word_cols(w) for w in sub.generators if not w.is_identity]
        self.table = [[None, None, None, None]]
        self.p = [0]
        self.defs = [None]
        self.overflowed = False

    # -- union-find --------------------------------------------------------

    def rep(self, k):
        p = self.p
        r = k
        while p[r] != r:
            r = p[r]
        while p[k] != r:
            p[k], k = r, p[k]
        return r

    def _merge(self, k, lam, queue):
        a, b = self.rep(k), self.rep(lam)
        if a != b:
            if a > b:
                a, b = b, a
            self.p[b] = a
            queue.append(b)

    def _coincidence(self, a, b):
        queue = []
        self._merge(a, b, queue)
        qi = 0
        table = self.table
        while qi < len(queue):
            gamma = queue[qi]
            qi += 1
            for c in range(4):
                delta = table[gamma][c]
                if delta is None:
                    continue
                table[delta][c ^ 1] = None
                mu = self.rep(gamma)
                nu = self.rep(delta)
                if table[mu][c] is not None:
                    self._merge(nu, table[mu][c], queue)
                elif table[nu][c ^ 1] is not None:
                    self._merge(mu, table[nu][c ^ 1], queue)
                else:
                    table[mu][c] = nu
                    table[nu][c ^ 1] = mu

    # -- definitions and scanning -------------------------------------------

    def _define(self, alpha, c):
        if len(self.table) >= self.max_cosets:
            self.overflowed = True
            raise _TableFull
        n = len(self.table)
        self.table.append([None, None, None, None])
        self.p.append(n)
        self.defs.append((alpha, c))
        self.table[alpha][c] = n
        self.table[n][c ^ 1] = alpha
        return n

    def _scan(self, alpha, w, fill):
        """Scan relator w (column list) from alpha; fill gaps when fill=True."""
        table = self.table
        while True:
            f = alpha
            i = 0
            L = len(w)
            while i < L and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i == L:
                if f != alpha:
                    self._coincidence(f, alpha)
                return
            b = alpha
            j = L - 1
            while j >= i and table[b][w[j] ^ 1] is not None:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                if f != b:
                    self._coincidence(f, b)
                return
            if j == i:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            if not fill:
                return
            self._define(f, w[i])

    def _lookahead(self):
        """Deduce and collapse without defining; True if any coset died."""
        before_dead = sum(1 for i, r in enumerate(self.p) if r != i)
        alpha = 0
        while alpha < len(self.table):
            if self.rep(alpha) == alpha:
                for w in self.rel_cols:
                    if self.rep(alpha) != alpha:
                        break
                    self._scan(alpha, w, fill=False)
            alpha += 1
        after_dead = sum(1 for i, r in enumerate(self.p) if r != i)
        return after_dead > before_dead

    def _compress(self):
        """Reclaim dead rows; returns nothing.  defs are remapped."""
        live = [i for i in range(len(self.table)) if self.rep(i) == i]
        remap = {old: new for new, old in enumerate(live)}
        table = []
        defs = []
        for old in live:
            row = [None if x is None else remap[self.rep(x)] for x in self.table[old]]
            table.append(row)
            d = self.defs[old]
            defs.append(None if d is None else (remap[self.rep(d[0])], d[1]))
        self.table = table
        self.defs = defs
        self.p = list(range(len(table)))

    def run(self):
        for w in self.sub_cols:
            self._scan(0, w, fill=True)
        while True:
            try:
                alpha = 0
                while alpha < len(self.table):
                    if self.rep(alpha) != alpha:
                        alpha += 1
                        continue
                    for w in self.rel_cols:
                        if self.rep(alpha) != alpha:
                            break
                        self._scan(alpha, w, fill=True)
                    if self.rep(alpha) == alpha:
                        for c in range(4):
                            if self.table[alpha][c] is None:
                                self._define(alpha, c)
                    alpha += 1
                break
            except _TableFull:
                if self._lookahead():
                    self._compress()
                    continue
                raise EnumerationOverflow(
                    f"enumeration needs more than {self.max_cosets} cosets")
        self._compress()
        return self._to_table()

    def _to_table(self):
        n = len(self.table)
        action = tuple(tuple(self.table[i][c] for i in range(n)) for c in range(4))
        reps = _definition_words(self.defs)
        t = CosetTable(n=n, action=action, representatives=reps,
                       presentation=self.pres, subgroup=self.sub)
        t.verify()
        return t


class _TableFull(Exception):
    pass


def _definition_words(defs):
    words = [Word()]
    for d in defs[1:]:
        parent, c = d
        words.append(words[parent] * Word((col_to_letter(c),)))
    return tuple(words)


def todd_coxeter(p: Presentation, h: SubgroupSpec,
                 max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """Enumerate cosets of <h> in the group presented by p (HLT strategy)."""
    if max_cosets < 1:
        raise ValueError("max_cosets must be >= 1")
    return _Enumerator(p, h, max_cosets).run()


def table_to_permutations(t: CosetTable) -> PermutationInput:
    return PermutationInput(degree=t.n, images=(t.action[0], t.action[2]))


# -- low-index subgroup search ------------------------------------------------
#
# The search table uses a reduced column layout: a generator with relator x^2
# is involutory and gets a single self-inverse column, which both shrinks the
# branching and makes its square relator vacuous.  The traversal itself lives
# in _lowindex_kernel so it can be JIT-compiled when numba is available.


def _column_layout(p: Presentation):
    invol = [False, False]
    for r in p.relators:
        ls = r.cyclically_reduced().letters
        if len(ls) == 2 and ls[0] == ls[1]:
            invol[abs(ls[0]) - 1] = True
    col_of = {}
    inv_col = []
    letter_of = []
    for k in (1, 2):
        if invol[k - 1]:
            col_of[k] = col_of[-k] = len(inv_col)
            inv_col.append(len(inv_col))
            letter_of.append(k)
        else:
            c = len(inv_col)
            col_of[k], col_of[-k] = c, c + 1
            inv_col.extend((c + 1, c))
            letter_of.extend((k, -k))
    return col_of, tuple(inv_col), tuple(letter_of)


def _reduced_relators(p: Presentation, col_of):
    out = []
    for r in p.relators:
        cr = r.cyclically_reduced()
        ls = cr.letters
        if not ls:
            continue
        if len(ls) == 2 and ls[0] == ls[1] and col_of[ls[0]] == col_of[-ls[0]]:
            continue  # absorbed into the self-inverse column
        out.append(tuple(col_of[l] for l in ls))
    return out


def _rotation_arrays(rel_cols, ncols):
    rotations = []
    seen = set()
    for w in sorted(rel_cols, key=len):
        for k in range(len(w)):
            rot = w[k:] + w[:k]
            if rot not in seen:
                seen.add(rot)
                rotations.append(rot)
    rot_data = []
    rot_start = []
    rot_len = []
    for rot in rotations:
        rot_start.append(len(rot_data))
        rot_len.append(len(rot))
        rot_data.extend(rot)
    by_col = [[] for _ in range(ncols)]
    for rid, rot in enumerate(rotations):
        by_col[rot[0]].append(rid)
    rbc_ids = []
    rbc_start = []
    rbc_count = []
    for ids in by_col:
        rbc_start.append(len(rbc_ids))
        rbc_count.append(len(ids))
        rbc_ids.extend(ids)
    import numpy as np
    i64 = lambda xs: np.asarray(xs, dtype=np.int64)
    return (i64(rot_data), i64(rot_start), i64(rot_len),
            i64(rbc_ids), i64(rbc_start), i64(rbc_count))


def low_index_subgroups(p: Presentation, max_index: int,
                        node_budget: int | None = None):
    """One closed coset table per conjugacy class of subgroups of index
    <= max_index, ordered by index then lexicographic table."""
    import numpy as np

    from . import _lowindex_kernel as K

    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    col_of, inv_col, letter_of = _column_layout(p)
    nc = len(inv_col)
    arrays = _rotation_arrays(_reduced_relators(p, col_of), nc)
    inv_arr = np.asarray(inv_col, dtype=np.int64)
    cap = 1 << 16
    while True:
        out = np.empty(cap, dtype=np.int64)
        out_len, _nodes, status = K.search(
            nc, inv_arr, *arrays, max_index,
            0 if node_budget is None else node_budget, out)
        if status == 0:
            break
        if status == 1:
            if cap >= (1 << 26):
                raise BudgetExceeded("low-index output exceeds buffer limits")
            cap <<= 2
            continue
        if status == 2:
            raise BudgetExceeded(f"low-index search exceeded {node_budget} nodes")
        raise RuntimeError("low-index kernel stack overflow")

    results = []
    pos = 0
    while pos < out_len:
        n = int(out[pos])
        pos += 1
        defs_a = [int(x) for x in out[pos:pos + n - 1]]
        defs_c = [int(x) for x in out[pos + n - 1:pos + 2 * (n - 1)]]
        pos += 2 * (n - 1)
        flat = out[pos:pos + n * nc]
        pos += n * nc
        action = tuple(tuple(int(flat[i * nc + col_of[k]]) for i in range(n))
                       for k in (1, -1, 2, -2))
        words = [Word()]
        for a, c in zip(defs_a, defs_c):
            words.append(words[a] * Word((letter_of[c],)))
        results.append(CosetTable(n=n, action=action,
                                  representatives=tuple(words),
                                  presentation=p, subgroup=None))
    for t in results:
        t.verify()
    results.sort(key=lambda t: (t.n, t.action))
    return results
