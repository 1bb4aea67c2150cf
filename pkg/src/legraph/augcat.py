"""Augmentations and the A-infinity augmentation category.

Objects are augmentations of the 1-copy CE DGA; hom spaces are duals of
the grade-(1,2) chords of the 2-copy; m_k pairs dual inputs against the
diagonally twisted differential of grade-(1,k+1) chords of the
(k+1)-copy:

    <m_k(x_k (x) ... (x) x_1), G> = (-1)^sigma <x_k (x) ... (x) x_1, d_e G>

with sigma = k(k-1)/2 + sum_{i<j}|x_i||x_j| + sum_j (j-1)|x_j| on dual
degrees (|dual| = |chord| + 1) and x_1 in hom(eps_k, eps_{k+1}).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .field import PrimeField, nullspace, rank, row_echelon, solve
from .frontdiag import FrontDiagram
from .dga import DGA, FormalSum, border_dga, ce_dga, ce_dga_closed
from .resolution import m_copy, ng_resolve


# ---------------------------------------------------------------------------
# Augmentations


@dataclass
class Augmentation:
    values: Dict[str, int]      # generator id -> field value
    F: PrimeField

    def __call__(self, gid):
        if gid.startswith("t:"):
            return self.values[gid]
        if gid.startswith("ti:"):
            return self.F.inv(self.values["t:" + gid[3:]])
        return self.values.get(gid, 0)

    def eval_sum(self, s: FormalSum):
        out = 0
        for word, c in s.items():
            term = c
            for let in word:
                term = (term * self(let)) % self.F.p
                if term == 0:
                    break
            out = (out + term) % self.F.p
        return out

    def key(self):
        return tuple(sorted(self.values.items()))

    def border_left(self, A: DGA):
        return {f"k:{g[3:]}" if g.startswith("kl:") else g: self(g)
                for g in A.gens if g.startswith("kl:")}

    def border_right(self, A: DGA):
        return {g: self.eval_sum(s) for g, s in A.phi_R.items()}


def enumerate_augs(A: DGA, fix_left=None, fix_right=None):
    """All augmentations of A, optionally with border restrictions.

    fix_left maps border generator ids 'k:a:b' to required values of the
    K_L generators; fix_right constrains eps(phi_R(k)) likewise.
    """
    F = A.F
    unit_vars = sorted({g for g in A.gens if g.startswith("t:")})
    deg0 = [g for g, info in A.gens.items()
            if info.degree == 0 and not g.startswith(("t:", "ti:"))]
    deg0.sort()
    variables = unit_vars + deg0
    var_index = {v: i for i, v in enumerate(variables)}

    fixed = {}
    if fix_left:
        for k, val in fix_left.items():
            kl = "kl" + k[1:]
            deg = A.gens[kl].degree if kl in A.gens else None
            if deg != 0:
                if val % F.p:
                    return []
                continue
            fixed[kl] = val % F.p

    # constraints: eps(d g) = 0 for every degree-1 generator
    constraints = []
    for gid, s in A.diff.items():
        if A.degree(gid) != 1 or not s:
            continue
        words = []
        for word, c in s.items():
            if all(A.degree(let) == 0 for let in word):
                words.append((c, word))
        constraints.append(words)
    if fix_right:
        for k, val in fix_right.items():
            s = A.phi_R.get(k)
            if s is None:
                continue
            words = [(c, w) for w, c in s.items()
                     if all(A.degree(let) == 0 for let in w)]
            words.append(((-val) % F.p, ()))
            constraints.append(words)

    # evaluate constraints as soon as their variables are assigned
    def letters_of(words):
        out = set()
        for _c, w in words:
            for let in w:
                if let.startswith("ti:"):
                    out.add("t:" + let[3:])
                elif let in var_index or let in fixed:
                    out.add(let)
        return out

    con_vars = [letters_of(w) for w in constraints]
    by_last = {}
    for ci, vs in enumerate(con_vars):
        pending = [v for v in vs if v in var_index]
        last = max((var_index[v] for v in pending), default=-1)
        by_last.setdefault(last, []).append(ci)

    results = []
    values = {g: v for g, v in fixed.items()}

    def eval_constraint(ci):
        total = 0
        for c, word in constraints[ci]:
            term = c
            for let in word:
                if let.startswith("t:"):
                    term = term * values[let]
                elif let.startswith("ti:"):
                    term = term * F.inv(values["t:" + let[3:]])
                else:
                    term = term * values.get(let, 0)
                term %= F.p
                if term == 0:
                    break
            total = (total + term) % F.p
        return total == 0

    def dfs(i):
        for ci in by_last.get(i - 1, []):
            if not eval_constraint(ci):
                return
        if i == len(variables):
            results.append(Augmentation(
                {v: values[v] for v in variables} | dict(fixed), F))
            return
        v = variables[i]
        if v in fixed:
            dom = [fixed[v]]
        elif v.startswith("t:"):
            dom = F.units()
        else:
            dom = F.elements()
        for val in dom:
            values[v] = val
            dfs(i + 1)
        values.pop(v, None)

    dfs(0)
    return results


# ---------------------------------------------------------------------------
# Twisted differential machinery


def twist_linearize(A: DGA, s: FormalSum, eps_of_copy, pattern):
    """Coefficient extraction from the diagonally twisted differential.

    eps_of_copy: copy index (1-based) -> Augmentation of the 1-copy DGA.
    Diagonal letters are replaced by (letter + eps(letter)); the result
    keeps only words whose surviving letters have grades exactly
    `pattern` (a list of (i, j) pairs, in order).  Returns a dict mapping
    such letter tuples to coefficients.
    """
    F = A.F
    out: Dict[Tuple[str, ...], int] = {}

    def rec(word, pos, kept, coeff):
        if coeff == 0:
            return
        if pos == len(word):
            if len(kept) == len(pattern):
                key = tuple(kept)
                out[key] = (out.get(key, 0) + coeff) % F.p
                if out[key] == 0:
                    del out[key]
            return
        let = word[pos]
        gr = A.grade(let)
        if gr[0] == gr[1]:
            eps = eps_of_copy[gr[0]]
            base = let
            if let.startswith("t:"):
                val = eps(f"t:{_strip_copy(let[2:])}")
            elif let.startswith("ti:"):
                val = F.inv(eps(f"t:{_strip_copy(let[3:])}"))
            else:
                val = eps(_base_gen(let))
            # scalar branch
            rec(word, pos + 1, kept, (coeff * val) % F.p)
            # the surviving-letter branch never matches a mixed pattern
        else:
            if len(kept) < len(pattern) and pattern[len(kept)] == gr:
                rec(word, pos + 1, kept + [let], coeff)
            # otherwise the word cannot match; prune
            return

    for word, c in s.items():
        rec(word, 0, [], c)
    return out


def _strip_copy(bid):
    return bid.split("^")[0]


def _base_gen(gid):
    """1-copy generator name of a diagonal m-copy generator."""
    if ":" in gid:
        head, rest = gid.split(":", 1)
        if "^" in head:
            return head.split("^")[0] + ":" + rest
        parts = gid.split(":")
        if len(parts) >= 3 and parts[-1] == parts[-2]:
            # diagonal block copy like 'q2:1:1' -> 'q2'
            return ":".join(parts[:-2])
        return gid
    if "^" in gid:
        return gid.split("^")[0]
    return gid


# ---------------------------------------------------------------------------
# The category


def _diag_eps(eps_list, m):
    if len(eps_list) != m:
        raise ValueError("need one augmentation per copy")
    return {i + 1: eps_list[i] for i in range(m)}


def _pattern(k):
    return [(t, t + 1) for t in range(1, k + 1)]


class AugCategory:
    """Hom spaces and compositions for one closed front diagram."""

    def __init__(self, front: FrontDiagram, q, budget=2, lmax=None):
        front.validate()
        if front.n_left or front.n_right:
            raise ValueError("AugCategory needs a closed diagram")
        self.front = front
        self.F = PrimeField(q)
        self.q = q
        self.budget = budget
        self.L1 = ng_resolve(front)
        self.A1 = ce_dga(front, q)
        self._copies: Dict[int, DGA] = {1: self.A1}
        self._augs = None

    def mcopy_dga(self, m):
        if m not in self._copies:
            Lm = m_copy(self.L1, m)
            self._copies[m] = ce_dga_closed(
                Lm, self.q, budget=self.budget, mixed_only=True,
                upper_only=True, check=False, grades=[(1, m)],
                consecutive=True)
        return self._copies[m]

    def augmentations(self):
        if self._augs is None:
            self._augs = enumerate_augs(self.A1)
        return self._augs

    # -- hom spaces -----------------------------------------------------

    def hom_basis(self, m=2):
        """Grade-(1,m) chords of the m-copy, sorted by (degree, id)."""
        Am = self.mcopy_dga(m)
        gens = [g for g in Am.gens.values()
                if g.grade == (1, m) and g.kind == "crossing"]
        gens.sort(key=lambda g: (g.degree, g.gid))
        return gens

    def chord_degree(self, name):
        """Degree of a (1,2)-basis chord given by its one-copy name."""
        if not hasattr(self, "_deg12"):
            self._deg12 = {_to_one_copy(g.gid): g.degree
                           for g in self.hom_basis(2)}
        return self._deg12[name]

    def base_name(self, gid):
        """Map an m-copy chord id to its 1-copy name plus kind tag."""
        return _base_gen(gid)

    def m1_matrix(self, eps1, eps2):
        """m1 on duals of the (1,2)-basis: returns (basis, matrix) where
        matrix[j][i] = <m1(basis_i dual), basis_j>."""
        A2 = self.mcopy_dga(2)
        basis = self.hom_basis(2)
        index = {g.gid: t for t, g in enumerate(basis)}
        eps_of = _diag_eps([eps1, eps2], 2)
        n = len(basis)
        mat = [[0] * n for _ in range(n)]
        for j, g in enumerate(basis):
            lin = twist_linearize(A2, A2.diff[g.gid], eps_of, _pattern(1))
            for (letter,), c in lin.items():
                i = index[letter]
                # sigma_1 = 0
                mat[j][i] = (mat[j][i] + c) % self.F.p
        return basis, mat

    def m_k(self, eps_seq, dual_inputs):
        """m_k of dual basis elements.

        eps_seq = (eps_1, ..., eps_{k+1}); dual_inputs = (x_k, ..., x_1)
        with x_j a chord id (of the (1,2)-basis naming) in
        hom(eps_j, eps_{j+1}); x_k comes first.  Returns a dict mapping
        output chord ids (grade-(1,2) names) to coefficients.
        """
        k = len(dual_inputs)
        if len(eps_seq) != k + 1:
            raise ValueError("need k+1 augmentations for m_k")
        m = k + 1
        Am = self.mcopy_dga(m)
        eps_of = _diag_eps(list(eps_seq), m)
        pattern = _pattern(k)
        # dual_inputs[0] = x_k pairs with the last letter (grade (k, k+1));
        # the letter of grade (t, t+1) pairs with dual_inputs[k - t].
        F = self.F
        sigma = (k * (k - 1)) // 2
        degs = [self.chord_degree(x) + 1 for x in dual_inputs]
        for i in range(k):
            for j in range(i + 1, k):
                sigma += degs[i] * degs[j]
            sigma += i * degs[i]
        sgn = F.sign(sigma)
        out = {}
        for G in self.hom_basis(m):
            lin = twist_linearize(Am, Am.diff[G.gid], eps_of, pattern)
            total = 0
            for letters, c in lin.items():
                ok = True
                for t, let in enumerate(letters, start=1):
                    if _to_one_copy(let) != dual_inputs[k - t]:
                        ok = False
                        break
                if ok:
                    total = (total + c) % F.p
            if total:
                out[_to_two_copy_name(G.gid)] = (total * sgn) % F.p
        return out


def _to_one_copy(gid):
    """Strip copy decorations: 'q2:1:3' -> 'q2', 'v1:4:-1:1:3' -> 'v1:4:-1',
    'x:max1:1:2' -> 'x:max1', 'y:min1:2:3' -> 'y:min1'."""
    parts = gid.split(":")
    if gid.startswith(("x:", "y:")):
        return ":".join(parts[:2])
    if len(parts) >= 3:
        return ":".join(parts[:-2])
    return gid


def _to_two_copy_name(gid):
    """Rename a grade-(1,m) chord to its (1,2)-basis name."""
    return _to_one_copy(gid)


# ---------------------------------------------------------------------------
# Cohomology and classes


@dataclass
class HomSpace:
    basis: list                 # GenInfo of the 2-copy (1,2) chords
    m1: list                    # matrix, m1(dual_i) = sum_j m1[j][i] dual_j
    F: PrimeField
    eps_pair: tuple

    def dual_degree(self, t):
        return self.basis[t].degree + 1

    def degrees(self):
        return sorted({self.dual_degree(t) for t in range(len(self.basis))})

    def m1_on_vector(self, vec):
        out = [0] * len(vec)
        for i, c in enumerate(vec):
            if c:
                for j in range(len(vec)):
                    out[j] = (out[j] + c * self.m1[j][i]) % self.F.p
        return out

    def cohomology(self):
        """dict degree -> (dim, list of representative coordinate vectors,
        projection data for class identification)."""
        F = self.F
        n = len(self.basis)
        by_deg: Dict[int, List[int]] = {}
        for t in range(n):
            by_deg.setdefault(self.dual_degree(t), []).append(t)
        out = {}
        for d, idxs in sorted(by_deg.items()):
            prev = by_deg.get(d - 1, [])
            # m1 raises dual degree by 1 (m1 has degree 2 - k = 1)
            mat_out = [[self.m1[j][i] for i in idxs]
                       for j in by_deg.get(d + 1, [])]
            kernel = nullspace(F, mat_out) if mat_out else \
                [[1 if a == b else 0 for a in range(len(idxs))]
                 for b in range(len(idxs))]
            img = []
            for i in prev:
                img.append([self.m1[j][i] for j in idxs])
            img_rank = rank(F, img) if img else 0
            dim = len(kernel) - img_rank
            out[d] = {
                "dim": dim,
                "indices": idxs,
                "kernel": kernel,
                "image": img,
            }
        return out

    def class_of(self, vec, coh):
        """Reduce a cocycle vector (full coordinates) mod the image within
        its degree block; returns (degree, reduced tuple) or None for 0."""
        F = self.F
        for d, data in coh.items():
            idxs = data["indices"]
            sub = [vec[t] for t in idxs]
            if any(sub):
                deg = d
                break
        else:
            return None
        data = coh[deg]
        idxs = data["indices"]
        sub = [vec[t] for t in idxs]
        img = data["image"]
        red = _reduce_mod(F, sub, img)
        if not any(red):
            return None
        return (deg, tuple(red))


def _reduce_mod(F, vec, basis_rows):
    if not basis_rows:
        return [x % F.p for x in vec]
    R, pivots = row_echelon(F, basis_rows)
    v = [x % F.p for x in vec]
    for r, pc in enumerate(pivots):
        if v[pc]:
            f = v[pc]
            v = [(a - f * b) % F.p for a, b in zip(v, R[r])]
    return v


def hom_space(cat: AugCategory, eps1, eps2) -> HomSpace:
    basis, mat = cat.m1_matrix(eps1, eps2)
    hs = HomSpace(basis, mat, cat.F, (eps1, eps2))
    # m1 squared must vanish
    n = len(basis)
    for i in range(n):
        vec = [mat[j][i] for j in range(n)]
        out = hs.m1_on_vector(vec)
        assert not any(out), "m1^2 != 0"
    return hs


# ---------------------------------------------------------------------------
# Units, cohomological products, isomorphism classes


def strict_unit_vector(cat: AugCategory, hs: HomSpace):
    """-sum of y duals, as a coordinate vector in hs."""
    F = cat.F
    vec = [0] * len(hs.basis)
    found = False
    for t, g in enumerate(hs.basis):
        if g.gid.startswith("y:"):
            vec[t] = F.p - 1
            found = True
    return vec if found else None


def m2_class_table(cat: AugCategory, eps_triple, hs_pairs, coh_maps):
    """Multiplication table of cohomology classes.

    eps_triple = (e1, e2, e3); hs_pairs = (hom(e2,e3), hom(e1,e2),
    hom(e1,e3)); coh_maps = their cohomology() dicts.  Returns a dict
    ((deg_x, x_red), (deg_y, y_red)) -> class in hom(e1,e3) or None.
    """
    hs23, hs12, hs13 = hs_pairs
    coh23, coh12, coh13 = coh_maps
    F = cat.F
    out = {}
    reps23 = _class_reps(F, hs23, coh23)
    reps12 = _class_reps(F, hs12, coh12)
    for (c23, v23) in reps23:
        for (c12, v12) in reps12:
            prod = m2_vector(cat, eps_triple, hs23, hs12, hs13, v23, v12)
            out[(c23, c12)] = hs13.class_of(prod, coh13)
    return out


def m2_vector(cat: AugCategory, eps_triple, hs23, hs12, hs13, v23, v12):
    """Chain-level m2 of two coordinate vectors."""
    F = cat.F
    out = [0] * len(hs13.basis)
    pos13 = {_to_one_copy(g.gid): t for t, g in enumerate(hs13.basis)}
    for i, ci in enumerate(v23):
        if not ci:
            continue
        for j, cj in enumerate(v12):
            if not cj:
                continue
            res = cat.m_k(eps_triple,
                          (_to_one_copy(hs23.basis[i].gid),
                           _to_one_copy(hs12.basis[j].gid)))
            for name, c in res.items():
                t = pos13.get(name)
                if t is not None:
                    out[t] = (out[t] + ci * cj * c) % F.p
    return out


def _class_reps(F, hs, coh):
    """All nonzero cohomology classes with one representative vector."""
    reps = []
    for d, data in coh.items():
        idxs = data["indices"]
        img = data["image"]
        seen = set()
        vecs = data["kernel"]
        # span of kernel vectors: enumerate (desk scale)
        for coeffs in itertools.product(F.elements(), repeat=len(vecs)):
            v = [0] * len(idxs)
            for c, kv in zip(coeffs, vecs):
                if c:
                    v = [(a + c * b) % F.p for a, b in zip(v, kv)]
            red = tuple(_reduce_mod(F, v, img))
            if not any(red) or red in seen:
                continue
            seen.add(red)
            full = [0] * len(hs.basis)
            for a, t in enumerate(idxs):
                full[t] = v[a]
            reps.append(((d, red), full))
    return reps


def homological_unit(cat: AugCategory, eps, hs=None, coh=None):
    """Find the H^0 class acting as a two-sided identity; returns
    ((0, red), vector) or None."""
    if hs is None:
        hs = hom_space(cat, eps, eps)
    if coh is None:
        coh = hs.cohomology()
    F = cat.F
    candidates = [(cls, vec) for cls, vec in _class_reps(F, hs, coh)
                  if cls[0] == 0]
    for cls, vec in candidates:
        prod = m2_vector(cat, (eps, eps, eps), hs, hs, hs, vec, vec)
        if hs.class_of(prod, coh) != cls:
            continue
        good = True
        for other, ovec in _class_reps(F, hs, coh):
            left = m2_vector(cat, (eps, eps, eps), hs, hs, hs, vec, ovec)
            right = m2_vector(cat, (eps, eps, eps), hs, hs, hs, ovec, vec)
            if hs.class_of(left, coh) != other or \
                    hs.class_of(right, coh) != other:
                good = False
                break
        if good:
            return cls, vec
    return None


def iso_classes(cat: AugCategory, augs=None, progress=None):
    """Partition augmentations into isomorphism classes."""
    if augs is None:
        augs = cat.augmentations()
    n = len(augs)
    hs_cache = {}
    coh_cache = {}

    def hs_of(i, j):
        if (i, j) not in hs_cache:
            hs_cache[(i, j)] = hom_space(cat, augs[i], augs[j])
            coh_cache[(i, j)] = hs_cache[(i, j)].cohomology()
        return hs_cache[(i, j)], coh_cache[(i, j)]

    units = {}
    for i in range(n):
        hs, coh = hs_of(i, i)
        u = homological_unit(cat, augs[i], hs, coh)
        if u is None:
            raise RuntimeError(f"no homological unit for augmentation {i}")
        units[i] = u

    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            if _isomorphic(cat, augs, i, j, hs_of, units):
                parent[find(i)] = find(j)
    classes = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    return sorted(classes.values())


def _isomorphic(cat, augs, i, j, hs_of, units):
    F = cat.F
    hij, cij = hs_of(i, j)
    hji, cji = hs_of(j, i)
    hii, cii = hs_of(i, i)
    hjj, cjj = hs_of(j, j)
    fs = [(cls, v) for cls, v in _class_reps(F, hij, cij) if cls[0] == 0]
    gs = [(cls, v) for cls, v in _class_reps(F, hji, cji) if cls[0] == 0]
    for _cf, fv in fs:
        for _cg, gv in gs:
            gf = m2_vector(cat, (augs[i], augs[j], augs[i]),
                           hji, hij, hii, gv, fv)
            if hii.class_of(gf, cii) != units[i][0]:
                continue
            fg = m2_vector(cat, (augs[j], augs[i], augs[j]),
                           hij, hji, hjj, fv, gv)
            if hjj.class_of(fg, cjj) == units[j][0]:
                return True
    return False


def hom_dims(cat: AugCategory, eps1, eps2):
    hs = hom_space(cat, eps1, eps2)
    coh = hs.cohomology()
    return {d: data["dim"] for d, data in coh.items() if data["dim"]}


# ---------------------------------------------------------------------------
# Morse complex models for trivial tangles and vertices


@dataclass
class MorseComplex:
    mu: Tuple[int, ...]
    d: List[List[int]]   # d e_i = sum_j d[j][i] e_j (strictly lower-filtration)
    F: PrimeField

    def check(self):
        n = len(self.mu)
        for i in range(n):
            for j in range(n):
                if self.d[j][i]:
                    if j <= i:
                        return False
                    if -self.mu[j - 1] != -self.mu[i - 1] + 1:
                        return False
        sq = [[sum(self.d[i][k] * self.d[k][j] for k in range(n)) % self.F.p
               for j in range(n)] for i in range(n)]
        return not any(any(r) for r in sq)


def morse_model(mu, eps, q):
    """The Morse complex Xi(eps) of a trivial tangle: d e_i =
    (-1)^{mu(i)} eps(k_{ij}) e_j summed over j > i."""
    F = PrimeField(q)
    n = len(mu)
    d = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            v = eps.get(f"k:{i}:{j}", 0) if isinstance(eps, dict) \
                else eps(f"kl:{i}:{j}")
            d[j - 1][i - 1] = (F.sign(mu[i - 1]) * v) % F.p
    return MorseComplex(tuple(mu), d, F)


def enumerate_morse(mu, q):
    """Brute force over filtration-preserving degree-1 differentials with
    d^2 = 0."""
    F = PrimeField(q)
    n = len(mu)
    slots = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
             if -mu[j - 1] == -mu[i - 1] + 1]
    out = []
    for vals in itertools.product(F.elements(), repeat=len(slots)):
        d = [[0] * n for _ in range(n)]
        for (i, j), v in zip(slots, vals):
            d[j - 1][i - 1] = v
        mc = MorseComplex(tuple(mu), d, F)
        if mc.check():
            out.append(mc)
    return out


def h_functor_sign(mu, a, b):
    """(-1)^{s(a,b)} with s(a,b) = mu(a)(mu(b)+1)+1."""
    return 1 if (mu[a - 1] * (mu[b - 1] + 1) + 1) % 2 == 0 else -1


def h_on_dual(mu, q, coeffs):
    """Map a hom_+(eps1, eps2) vector (dual coords of k_{ab}^{12}, indexed
    by pairs (a,b), a <= b, with k_{aa} = y_a) to the endomorphism
    e_b (x) e_a^*, as a matrix M[b][a]."""
    F = PrimeField(q)
    n = len(mu)
    M = [[0] * n for _ in range(n)]
    for (a, b), c in coeffs.items():
        s = h_functor_sign(mu, a, b)
        M[b - 1][a - 1] = (M[b - 1][a - 1] + s * c) % F.p
    return M


@dataclass
class VertexMorse:
    """K[Z]-module differential at a vertex: entries eps(v_{a,s})."""
    mu_v: Tuple[int, ...]
    entries: Dict[Tuple[int, int], int]
    F: PrimeField


def enumerate_vertex_morse(mu_v, q, lmax=None):
    """Brute force d with d^2 + Z^2 = 0 on the vertex module; entries
    correspond to degree-0 chords v_{a, s}.  Returns the solution count
    (in bijection with vertex augmentations)."""
    from .resolution import VertexInfo, vertex_chord_degree, vertex_lmax
    F = PrimeField(q)
    n = len(mu_v)
    info = VertexInfo("w", n, n, 0, tuple(mu_v))
    if lmax is None:
        lmax = vertex_lmax(info)
    slots = [(a, s) for a in range(1, n + 1) for s in range(1, lmax + 1)
             if vertex_chord_degree(info, a, s) == 0]
    count = 0
    sols = []
    for vals in itertools.product(F.elements(), repeat=len(slots)):
        ent = {k: v for k, v in zip(slots, vals)}
        # d^2 + Z^2 = 0 <=> for all a, t >= 2:
        #   delta_{t, n-wrap...}: use the DGA relations: for every a and
        #   every s with deg(v_{a,s}) = 1, sum over splittings s1+s2=s of
        #   ent(a,s1) ent(a+s1,s2) = delta_{s,n}
        good = True
        for a in range(1, n + 1):
            for s in range(2, lmax + 1):
                if vertex_chord_degree(info, a, s) != 1:
                    continue
                tot = 0
                for s1 in range(1, s):
                    s2 = s - s1
                    b = (a + s1 - 1) % n + 1
                    tot += ent.get((a, s1), 0) * ent.get((b, s2), 0)
                want = 1 if s == n else 0
                if tot % F.p != want % F.p:
                    good = False
                    break
            if not good:
                break
        if good:
            count += 1
            sols.append(VertexMorse(tuple(mu_v), ent, F))
    return sols
