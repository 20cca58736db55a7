"""Category-O highest weight modules: Verma modules, contravariant forms,
irreducible quotients, and character comparison.

Both the quantum modules (exact scalars in Q(v)) and their classical
counterparts (exact rationals) are built by one engine.  A Verma module's
weight space at offset m is the quotient of the span of f-words of degree m
by the relation ideal, with the reduced basis and the rewriting of
eliminated words coming from the corresponding kernel engine (the Drinfeld
pairing at generic q, the indeterminate-weight contravariant form
classically).  Lowering operators act by word concatenation followed by
reduction; raising operators act by the straightening rule obtained from
the cross relations, with the Cartan contribution read off the weight.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cartan import CartanDatum, Weight, session_denominator, weight_form
from .classical import ShapovalovForm
from .freealg import TruncationError, enumerate_words, total_degree, unit_degree
from .linalg import nullspace_field, rref_field
from .qpairing import DrinfeldPairing, degrees_upto
from .scalars import LaurentPoly, QScalar, exponent_to_int


@dataclass
class WeightModule:
    """A weight-graded highest weight module, truncated at a depth.

    spaces maps each offset multidegree (|m| <= depth) to the tuple of
    basis labels (reduced f-words).  Action matrices are stored per
    generator and source offset; matrix[r][c] is the coefficient of target
    basis vector r in the image of source basis vector c.
    """

    kind: str                      # "quantum" or "classical"
    cd: CartanDatum
    highest: Weight
    depth: int
    D: int
    spaces: dict
    f_action: dict                 # (i, offset) -> matrix into offset + 1_i
    e_action: dict                 # (i, offset) -> matrix into offset - 1_i
    complete: bool
    scalar_one: object
    scalar_zero: object

    def dim(self, offset) -> int:
        return len(self.spaces.get(tuple(offset), ()))

    def offsets(self):
        return sorted(self.spaces, key=lambda m: (total_degree(m), m))

    def weight_at(self, offset) -> Weight:
        return Weight(self.highest.base, tuple(offset))

    def k_exponent(self, i: int, offset) -> Fraction:
        """(alpha_i, mu) for mu = highest - offset; the K_i eigenvalue is
        q to this power."""
        alpha = Weight(tuple(self.cd.alpha[i]), (0,) * self.cd.n)
        return weight_form(alpha, self.weight_at(offset), self.cd)

    def k_eigenvalue(self, i: int, offset) -> QScalar:
        e = exponent_to_int(self.k_exponent(i, offset), self.D)
        return QScalar(LaurentPoly.monomial(e))

    def h_eigenvalue(self, i: int, offset) -> Fraction:
        return self.weight_at(offset).value_on_coroot(self.cd, i)

    def _matrix(self, table, i, offset, target):
        key = (i, tuple(offset))
        mat = table.get(key)
        if mat is None:
            if tuple(target) not in self.spaces:
                raise TruncationError(
                    f"offset {target} lies beyond depth {self.depth}")
            return None
        return mat

    def apply_f(self, i: int, offset, vec):
        """Image of a coefficient vector at `offset` under F_i."""
        m = tuple(offset)
        target = tuple(a + b for a, b in zip(m, unit_degree(self.cd.n, i)))
        mat = self._matrix(self.f_action, i, m, target)
        tdim = self.dim(target)
        if mat is None or tdim == 0:
            return target, [self.scalar_zero] * tdim
        return target, _mat_vec(mat, vec, self.scalar_zero)

    def apply_e(self, i: int, offset, vec):
        m = tuple(offset)
        target = tuple(a - b for a, b in zip(m, unit_degree(self.cd.n, i)))
        if any(x < 0 for x in target):
            return target, []
        mat = self.e_action.get((i, m))
        tdim = self.dim(target)
        if mat is None or tdim == 0:
            return target, [self.scalar_zero] * tdim
        return target, _mat_vec(mat, vec, self.scalar_zero)

    def apply_e_word(self, word, offset, vec):
        """Act by the algebra element E_{w_1} ... E_{w_k} (rightmost first)."""
        word = tuple(word)
        final = list(offset)
        for letter in word:
            final[letter] -= 1
        final = tuple(final)
        m = tuple(offset)
        for letter in reversed(word):
            m, vec = self.apply_e(letter, m, vec)
            if not vec or all(not c for c in vec):
                return final, [self.scalar_zero] * self.dim(final)
        return final, vec

    def apply_f_word(self, word, offset, vec):
        word = tuple(word)
        final = list(offset)
        for letter in word:
            final[letter] += 1
        final = tuple(final)
        m = tuple(offset)
        for letter in reversed(word):
            m, vec = self.apply_f(letter, m, vec)
            if not vec or all(not c for c in vec):
                return final, [self.scalar_zero] * self.dim(final)
        return final, vec


def _mat_vec(mat, vec, zero):
    out = []
    for row in mat:
        acc = zero
        for a, b in zip(row, vec):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


class _QuantumTheory:
    kind = "quantum"

    def __init__(self, cd: CartanDatum, hw: Weight, D: int, pairing: DrinfeldPairing):
        self.cd = cd
        self.hw = hw
        self.D = D
        self.pairing = pairing
        self.one = QScalar.one()
        self.zero = QScalar.zero()
        self._coeff_memo = {}

    def reduction(self, m):
        return self.pairing.reduction_table(m)

    def e_coefficient(self, i: int, tail_offset):
        """Scalar from (K_i - K_i^{-1})/(q_i - q_i^{-1}) on the weight below
        the struck letter; tail_offset is the multidegree of the letters
        after it."""
        key = (i, tail_offset)
        val = self._coeff_memo.get(key)
        if val is None:
            mu = Weight(self.hw.base, tail_offset)
            alpha = Weight(tuple(self.cd.alpha[i]), (0,) * self.cd.n)
            e = exponent_to_int(weight_form(alpha, mu, self.cd), self.D)
            di = exponent_to_int(self.cd.d[i], self.D)
            num = LaurentPoly.monomial(e) - LaurentPoly.monomial(-e)
            den = LaurentPoly.monomial(di) - LaurentPoly.monomial(-di)
            val = QScalar(num, den)
            self._coeff_memo[key] = val
        return val


class _ClassicalTheory:
    kind = "classical"

    def __init__(self, cd: CartanDatum, hw: Weight, form: ShapovalovForm):
        self.cd = cd
        self.hw = hw
        self.D = 1
        self.form = form
        self.one = Fraction(1)
        self.zero = Fraction(0)
        self._coeff_memo = {}

    def reduction(self, m):
        return self.form.reduction_table(m)

    def e_coefficient(self, i: int, tail_offset):
        key = (i, tail_offset)
        val = self._coeff_memo.get(key)
        if val is None:
            mu = Weight(self.hw.base, tail_offset)
            val = mu.value_on_coroot(self.cd, i)
            self._coeff_memo[key] = val
        return val


def _build_verma(theory, depth: int) -> WeightModule:
    cd = theory.cd
    n = cd.n
    offsets = degrees_upto(n, depth, include_zero=True)
    spaces = {}
    reducers = {}
    for m in offsets:
        pivots, table = theory.reduction(m)
        words = enumerate_words(m)
        spaces[m] = tuple(words[p] for p in pivots)
        windex = {w: k for k, w in enumerate(words)}
        reducers[m] = (pivots, {p: r for r, p in enumerate(pivots)}, table, windex)

    def reduce_word(m, word):
        """Coefficients of a free word over the reduced basis at degree m."""
        pivots, pos, table, windex = reducers[m]
        c = windex[word]
        if c in pos:
            return {pos[c]: theory.one}
        return {r: coeff for r, coeff in enumerate(table[c]) if coeff}

    f_action = {}
    e_action = {}
    for m in offsets:
        basis = spaces[m]
        for i in range(n):
            up = tuple(a + b for a, b in zip(m, unit_degree(n, i)))
            if up in spaces:
                mat = [[theory.zero] * len(basis) for _ in spaces[up]]
                for c, w in enumerate(basis):
                    for r, coeff in reduce_word(up, (i,) + w).items():
                        mat[r][c] = coeff
                f_action[(i, m)] = mat
            down = tuple(a - b for a, b in zip(m, unit_degree(n, i)))
            if all(x >= 0 for x in down):
                mat = [[theory.zero] * len(basis) for _ in spaces[down]]
                for c, w in enumerate(basis):
                    for t, letter in enumerate(w):
                        if letter != i:
                            continue
                        tail = [0] * n
                        for u in range(t + 1, len(w)):
                            tail[w[u]] += 1
                        coeff = theory.e_coefficient(i, tuple(tail))
                        if not coeff:
                            continue
                        for r, rc in reduce_word(down, w[:t] + w[t + 1:]).items():
                            mat[r][c] = mat[r][c] + coeff * rc
                e_action[(i, m)] = mat
    complete = all(len(spaces[m]) == 0 for m in offsets if total_degree(m) == depth)
    return WeightModule(kind=theory.kind, cd=cd, highest=theory.hw, depth=depth,
                        D=theory.D, spaces=spaces, f_action=f_action,
                        e_action=e_action, complete=complete,
                        scalar_one=theory.one, scalar_zero=theory.zero)


def verma(hw, depth: int, cd: CartanDatum, D: int | None = None,
          pairing: DrinfeldPairing | None = None) -> WeightModule:
    """The quantum Verma module at formal q, truncated at `depth`."""
    hw = hw if isinstance(hw, Weight) else Weight.highest(hw, cd.n)
    if D is None:
        D = session_denominator(cd, [hw])
    if pairing is None:
        pairing = DrinfeldPairing(cd, D=D, degree_cap=max(depth, 1))
    elif pairing.D != D:
        raise ValueError("pairing engine uses a different session denominator")
    return _build_verma(_QuantumTheory(cd, hw, D, pairing), depth)


def classical_module(hw, kind: str, depth: int, cd: CartanDatum,
                     form: ShapovalovForm | None = None) -> WeightModule:
    """Classical Verma or irreducible module with exact rational actions."""
    hw = hw if isinstance(hw, Weight) else Weight.highest(hw, cd.n)
    if form is None:
        form = ShapovalovForm(cd, degree_cap=max(depth, 1))
    base = _build_verma(_ClassicalTheory(cd, hw, form), depth)
    if kind == "verma":
        return base
    if kind == "irreducible":
        return _radical_quotient(base)
    raise ValueError("kind must be 'verma' or 'irreducible'")


def contravariant_form(module: WeightModule):
    """Per-offset Gram matrices of the contravariant form on a Verma module.

    <F_x v, F_z v> is the coefficient of the highest weight vector in
    omega(F_x) F_z v, for the involution swapping E_i and F_j; the form is
    normalized by <v, v> = 1.
    """
    blocks = {}
    for m in module.offsets():
        basis = module.spaces[m]
        size = len(basis)
        mat = [[module.scalar_zero] * size for _ in range(size)]
        for b in range(size):
            vec = [module.scalar_one if k == b else module.scalar_zero
                   for k in range(size)]
            for a, word in enumerate(basis):
                target, out = module.apply_e_word(tuple(reversed(word)), m, vec)
                mat[a][b] = out[0] if out else module.scalar_zero
        blocks[m] = mat
    return blocks


def radical_dimensions(module: WeightModule):
    blocks = contravariant_form(module)
    return {m: len(nullspace_field(blocks[m], module.scalar_one)) if blocks[m] else 0
            for m in blocks}


def _radical_quotient(base: WeightModule) -> WeightModule:
    """Quotient a Verma module by the radical of its contravariant form."""
    blocks = contravariant_form(base)
    one = base.scalar_one
    zero = base.scalar_zero
    keep = {}
    reducers = {}
    for m, mat in blocks.items():
        size = len(base.spaces[m])
        rad = nullspace_field(mat, one) if size else []
        if not rad:
            keep[m] = list(range(size))
            reducers[m] = ([], [])
            continue
        red, pivots = rref_field(rad)
        keep[m] = [c for c in range(size) if c not in pivots]
        reducers[m] = (pivots, red)

    def reduce_mod_radical(m, vec):
        pivots, rows = reducers[m]
        vec = list(vec)
        for r, p in enumerate(pivots):
            c = vec[p]
            if c:
                vec = [a - c * b for a, b in zip(vec, rows[r])]
        return [vec[k] for k in keep[m]]

    spaces = {m: tuple(base.spaces[m][k] for k in keep[m]) for m in base.spaces}
    f_action = {}
    e_action = {}
    for (i, m), mat in base.f_action.items():
        up = tuple(a + b for a, b in zip(m, unit_degree(base.cd.n, i)))
        cols = []
        for c in keep[m]:
            img = [row[c] for row in mat]
            cols.append(reduce_mod_radical(up, img))
        f_action[(i, m)] = _transpose(cols, len(spaces[up]), zero)
    for (i, m), mat in base.e_action.items():
        down = tuple(a - b for a, b in zip(m, unit_degree(base.cd.n, i)))
        cols = []
        for c in keep[m]:
            img = [row[c] for row in mat]
            cols.append(reduce_mod_radical(down, img))
        e_action[(i, m)] = _transpose(cols, len(spaces[down]), zero)
    complete = all(len(spaces[m]) == 0 for m in spaces
                   if total_degree(m) == base.depth)
    return WeightModule(kind=base.kind, cd=base.cd, highest=base.highest,
                        depth=base.depth, D=base.D, spaces=spaces,
                        f_action=f_action, e_action=e_action,
                        complete=complete, scalar_one=one, scalar_zero=zero)


def _transpose(cols, nrows, zero):
    return [[col[r] if r < len(col) else zero for col in cols]
            for r in range(nrows)]


def irreducible(hw, depth: int, cd: CartanDatum, D: int | None = None,
                pairing: DrinfeldPairing | None = None) -> WeightModule:
    """The irreducible quotient of the quantum Verma module."""
    return _radical_quotient(verma(hw, depth, cd, D=D, pairing=pairing))


def character(module: WeightModule):
    """Offset multidegree -> weight space dimension, within the depth cone."""
    return {m: len(module.spaces[m]) for m in module.offsets()}


def _cross_commutator_scalar(M: WeightModule, i: int, offset):
    """(K_i - K_i^{-1})/(q_i - q_i^{-1}) on a weight space, or h_i classically."""
    if M.kind == "quantum":
        ei = exponent_to_int(M.k_exponent(i, offset), M.D)
        di = exponent_to_int(M.cd.d[i], M.D)
        return QScalar(LaurentPoly.monomial(ei) - LaurentPoly.monomial(-ei),
                       LaurentPoly.monomial(di) - LaurentPoly.monomial(-di))
    return M.h_eigenvalue(i, offset)


def check_module_relations(M: WeightModule) -> bool:
    """Exact blockwise verification of the defining relations.

    [E_i, F_j] = delta_ij (K_i - K_i^{-1})/(q_i - q_i^{-1}) on every weight
    space (the classical analogue uses h_i), and the K-conjugation
    K_i E_j K_i^{-1} = q^{(alpha_i, alpha_j)} E_j as an eigenvalue identity.
    Raises AssertionError at the first violated block."""
    cd = M.cd
    n = cd.n
    for m in M.offsets():
        dim_m = M.dim(m)
        if dim_m == 0:
            continue
        for i in range(n):
            for j in range(n):
                up = tuple(a + int(k == j) for k, a in enumerate(m))
                if up not in M.spaces:
                    continue
                target = tuple(a - int(k == i) for k, a in enumerate(up))
                tdim = M.dim(target) if all(x >= 0 for x in target) else 0
                down = tuple(a - int(k == i) for k, a in enumerate(m))
                for c in range(dim_m):
                    e_c = [M.scalar_one if r == c else M.scalar_zero
                           for r in range(dim_m)]
                    _, fv = M.apply_f(j, m, e_c)
                    _, efv = M.apply_e(i, up, fv)
                    if all(x >= 0 for x in down):
                        _, ev = M.apply_e(i, m, e_c)
                        _, fev = M.apply_f(j, down, ev)
                    else:
                        fev = []
                    efv = list(efv) + [M.scalar_zero] * (tdim - len(efv))
                    fev = list(fev) + [M.scalar_zero] * (tdim - len(fev))
                    comm = [a - b for a, b in zip(efv, fev)]
                    if i == j:
                        scalar = _cross_commutator_scalar(M, i, m)
                        expected = [scalar if r == c else M.scalar_zero
                                    for r in range(tdim)]
                    else:
                        expected = [M.scalar_zero] * tdim
                    if comm != expected:
                        raise AssertionError(
                            f"cross relation fails at offset {m}, generators "
                            f"({i + 1}, {j + 1})")
    if M.kind == "quantum":
        from .scalars import q_power
        for (j, m) in list(M.e_action):
            down = tuple(a - int(k == j) for k, a in enumerate(m))
            if M.dim(m) == 0 or M.dim(down) == 0:
                continue
            for i in range(n):
                ratio = M.k_eigenvalue(i, down) / M.k_eigenvalue(i, m)
                if ratio != q_power(cd.alpha_form(i, j), M.D):
                    raise AssertionError(
                        f"K-conjugation fails at offset {m}, pair "
                        f"({i + 1}, {j + 1})")
    return True


@dataclass(frozen=True)
class CharacterComparison:
    equal: bool
    first_discrepancy: tuple | None
    left_dim: int | None
    right_dim: int | None


def compare_characters(left: WeightModule, right: WeightModule) -> CharacterComparison:
    """Entrywise comparison of two character tables on the common depth."""
    depth = min(left.depth, right.depth)
    for m in degrees_upto(left.cd.n, depth, include_zero=True):
        a = left.dim(m)
        b = right.dim(m)
        if a != b:
            return CharacterComparison(False, m, a, b)
    return CharacterComparison(True, None, None, None)
