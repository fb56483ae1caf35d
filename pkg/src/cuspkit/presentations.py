"""Group presentations, abelian peripheral structure, and word-problem oracles.

Supported oracle classes: finitely generated abelian groups (Smith normal
form coordinates), free groups, free products of abelian groups (syllable
normal form), and user-supplied confluent rewriting systems.  Oracles are
immutable after construction and every operation here is pure.
"""

import json
from dataclasses import dataclass

from . import intmat, words
from .words import free_reduce, inverse, concat, parse_word, format_word


class OracleUndecided(Exception):
    """The oracle cannot decide this input (e.g. rewriting budget exceeded)."""


class StructureError(ValueError):
    """Malformed presentation / relative structure input."""

    def __init__(self, message, field_name=None):
        super().__init__(message)
        self.field_name = field_name


def exponent_vector(word, n_gens):
    v = [0] * n_gens
    for x in word:
        if not 1 <= abs(x) <= n_gens:
            raise StructureError(f"letter {x} out of range for {n_gens} generators")
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


@dataclass(frozen=True)
class FinitePresentation:
    gen_names: tuple
    relators: tuple

    def __post_init__(self):
        n = len(self.gen_names)
        for r in self.relators:
            if free_reduce(r) != r:
                raise StructureError("relators must be freely reduced")
            for x in r:
                if not 1 <= abs(x) <= n:
                    raise StructureError(f"relator letter {x} out of range")

    @property
    def generator_count(self):
        return len(self.gen_names)

    def parse(self, text):
        return parse_word(text, self.gen_names)

    def format(self, word):
        return format_word(word, self.gen_names)

    def canonical_key(self):
        """Dedup key: generator count plus sorted canonical cyclic relators."""
        rels = sorted(
            {words.shortlex_min_cyclic(r) for r in self.relators if words.cyclic_reduce(r)},
            key=words.shortlex_key,
        )
        return (len(self.gen_names), tuple(rels))


def presentation(gen_names, relator_texts=()):
    gens = tuple(gen_names)
    rels = []
    for r in relator_texts:
        w = r if isinstance(r, tuple) else parse_word(r, gens)
        rels.append(free_reduce(w))
    return FinitePresentation(gens, tuple(rels))


# ---------------------------------------------------------------------------
# word-problem oracles


class WordProblemOracle:
    """Common interface: canonical keys for group elements, with
    multiplication, inversion and a word realizing each key."""

    kind = None

    def normal_key(self, word):
        raise NotImplementedError

    def is_trivial(self, word):
        return self.normal_key(word) == self.identity_key

    def mul_gen(self, key, letter):
        """Right-multiply the element `key` by a single generator letter."""
        raise NotImplementedError

    def mul(self, k1, k2):
        raise NotImplementedError

    def inv(self, key):
        raise NotImplementedError

    def key_word(self, key):
        """Some word representing `key` (canonical for the oracle's class)."""
        raise NotImplementedError


class FreeOracle(WordProblemOracle):
    kind = "free"

    def __init__(self, n_gens):
        self.n_gens = n_gens
        self.identity_key = ()

    def normal_key(self, word):
        return free_reduce(word)

    def mul_gen(self, key, letter):
        return concat(key, (letter,))

    def mul(self, k1, k2):
        return concat(k1, k2)

    def inv(self, key):
        return inverse(key)

    def key_word(self, key):
        return key


class AbelianOracle(WordProblemOracle):
    """Finitely generated abelian group given by a relator matrix.

    Keys are coordinate tuples in the Smith basis: torsion coordinates reduced
    into [0, d), free coordinates unreduced.
    """

    kind = "abelian"

    def __init__(self, n_gens, relator_rows):
        self.n_gens = n_gens
        rows = [row[:] for row in relator_rows]
        if rows:
            d, _, v = intmat.smith_normal_form(rows, rows=len(rows), cols=n_gens)
        else:
            d, v = [], intmat.identity_matrix(n_gens)
        self.v = v
        self.v_inv = intmat.mat_inverse_unimodular(v)
        # per Smith coordinate: 0 = free, 1 = collapsed, d > 1 = torsion
        self.moduli = []
        for i in range(n_gens):
            if i < len(d) and d[i] != 0:
                self.moduli.append(d[i])
            else:
                self.moduli.append(0)
        self.live = [i for i in range(n_gens) if self.moduli[i] != 1]
        self.identity_key = tuple(0 for _ in self.live)
        self.torsion_orders = tuple(self.moduli[i] for i in self.live if self.moduli[i] > 1)
        self.free_rank = sum(1 for i in self.live if self.moduli[i] == 0)

    def _reduce(self, full):
        out = []
        for i in self.live:
            m = self.moduli[i]
            out.append(full[i] % m if m else full[i])
        return tuple(out)

    def key_of_exponents(self, evec):
        return self._reduce(intmat.vec_mat(evec, self.v))

    def normal_key(self, word):
        return self.key_of_exponents(exponent_vector(word, self.n_gens))

    def mul_gen(self, key, letter):
        g = abs(letter) - 1
        step = self.v[g]
        full = list(key)
        out = []
        for pos, i in enumerate(self.live):
            m = self.moduli[i]
            x = full[pos] + (step[i] if letter > 0 else -step[i])
            out.append(x % m if m else x)
        return tuple(out)

    def mul(self, k1, k2):
        out = []
        for pos, i in enumerate(self.live):
            m = self.moduli[i]
            x = k1[pos] + k2[pos]
            out.append(x % m if m else x)
        return tuple(out)

    def inv(self, key):
        out = []
        for pos, i in enumerate(self.live):
            m = self.moduli[i]
            out.append((-key[pos]) % m if m else -key[pos])
        return tuple(out)

    def key_word(self, key):
        # lift Smith coordinates back to an exponent vector, then spell out
        full = [0] * self.n_gens
        for pos, i in enumerate(self.live):
            full[i] = key[pos]
        evec = intmat.vec_mat(full, self.v_inv)
        out = []
        for g, e in enumerate(evec, start=1):
            out.extend([g if e > 0 else -g] * abs(e))
        return tuple(out)


class FreeProductOracle(WordProblemOracle):
    """Free product of abelian groups.  Keys are canonical words: the
    concatenation of canonical factor words of the syllables."""

    kind = "free-product-of-abelians"

    def __init__(self, n_gens, factor_of_gen, factor_oracles, gen_local):
        # factor_of_gen[g-1] = factor index, gen_local[g-1] = local letter
        self.n_gens = n_gens
        self.factor_of_gen = factor_of_gen
        self.factors = factor_oracles
        self.gen_local = gen_local
        self.identity_key = ()
        # global spelling of each factor's local letters
        self.local_to_global = [dict() for _ in factor_oracles]
        for g in range(1, n_gens + 1):
            f = factor_of_gen[g - 1]
            self.local_to_global[f][gen_local[g - 1]] = g
            self.local_to_global[f][-gen_local[g - 1]] = -g

    def syllables(self, word):
        """Alternating (factor, factor_key) list with no trivial syllable."""
        stack = []
        for x in word:
            f = self.factor_of_gen[abs(x) - 1]
            loc = self.gen_local[abs(x) - 1] * (1 if x > 0 else -1)
            if stack and stack[-1][0] == f:
                k = self.factors[f].mul_gen(stack[-1][1], loc)
                if k == self.factors[f].identity_key:
                    stack.pop()
                else:
                    stack[-1] = (f, k)
            else:
                k = self.factors[f].normal_key((loc,))
                if k != self.factors[f].identity_key:
                    stack.append((f, k))
        return stack

    def _spell(self, syls):
        out = []
        for f, k in syls:
            table = self.local_to_global[f]
            out.extend(table[x] for x in self.factors[f].key_word(k))
        return tuple(out)

    def normal_key(self, word):
        return self._spell(self.syllables(word))

    def mul_gen(self, key, letter):
        return self.normal_key(key + (letter,))

    def mul(self, k1, k2):
        return self.normal_key(k1 + k2)

    def inv(self, key):
        return self.normal_key(inverse(key))

    def key_word(self, key):
        return key

    def strip_trailing_factor(self, key, f):
        """Split key = t * p with p the trailing syllable in factor f (or
        trivial).  Returns (t_key, p_factor_key)."""
        syls = self.syllables(key)
        if syls and syls[-1][0] == f:
            p = syls[-1][1]
            t = self._spell(syls[:-1])
        else:
            p = self.factors[f].identity_key
            t = key
        return t, p


class RewritingOracle(WordProblemOracle):
    """Length-reducing/confluent rewriting system supplied by the user.

    Free cancellation x x^-1 -> 1 is built in.  A step budget guards against
    non-terminating rule sets: exceeding it raises OracleUndecided instead of
    guessing.
    """

    kind = "rewriting-system"

    def __init__(self, n_gens, rules, max_steps=10000):
        self.n_gens = n_gens
        self.rules = [(tuple(l), tuple(r)) for l, r in rules]
        for lhs, rhs in self.rules:
            if not lhs:
                raise StructureError("rewriting rule with empty left side")
        self.max_steps = max_steps
        self.identity_key = ()

    def rewrite(self, word):
        w = list(free_reduce(word))
        steps = 0
        changed = True
        while changed:
            changed = False
            for i in range(len(w)):
                for lhs, rhs in self.rules:
                    if tuple(w[i:i + len(lhs)]) == lhs:
                        w = list(free_reduce(tuple(w[:i]) + rhs + tuple(w[i + len(lhs):])))
                        steps += 1
                        if steps > self.max_steps:
                            raise OracleUndecided("rewriting budget exceeded")
                        changed = True
                        break
                if changed:
                    break
        return tuple(w)

    def normal_key(self, word):
        return self.rewrite(word)

    def mul_gen(self, key, letter):
        return self.rewrite(key + (letter,))

    def mul(self, k1, k2):
        return self.rewrite(k1 + k2)

    def inv(self, key):
        return self.rewrite(inverse(key))

    def key_word(self, key):
        return key


def is_trivial(word, oracle):
    """True iff `word` represents the identity, per the oracle."""
    return oracle.is_trivial(word)


def free_product_normal_form(word, structure):
    """Alternating syllable list [(factor index, canonical factor word)].

    The ambient group must be declared a free product of abelian groups.
    """
    oracle = structure.oracle if hasattr(structure, "oracle") else structure
    if not isinstance(oracle, FreeProductOracle):
        raise StructureError("ambient group is not a declared free product of abelians")
    out = []
    for f, k in oracle.syllables(word):
        table = oracle.local_to_global[f]
        out.append((f, tuple(table[x] for x in oracle.factors[f].key_word(k))))
    return out


# ---------------------------------------------------------------------------
# abelian parabolics


@dataclass(frozen=True)
class SensibleGeneratingSet:
    a1: tuple            # generator positions (into the parabolic's gen list)
    a2: tuple
    torsion_orders: tuple


class AbelianParabolic:
    """An abelian peripheral subgroup, declared by the ambient generators it
    is generated by, split into a free-abelian basis A1 and torsion
    generators A2.

    The subgroup's structure (rank and invariant factors) is inferred from the
    ambient relators supported on its generators.  Elements are handled in
    canonical coordinates: a free vector over the A1 basis plus one cyclic
    coordinate per A2 generator.  A2 generators must be independent standard
    torsion generators (each spanning its own invariant factor).
    """

    def __init__(self, gen_indices, a1_positions, a2_positions, relator_rows):
        self.gen_indices = tuple(gen_indices)        # ambient letters (1-based)
        self.a1 = tuple(a1_positions)                # positions into gen_indices
        self.a2 = tuple(a2_positions)
        n = len(self.gen_indices)
        if set(self.a1) & set(self.a2):
            raise StructureError("A1 and A2 overlap")
        if sorted(self.a1 + self.a2) != list(range(n)):
            raise StructureError("A1 and A2 must partition the parabolic generators")
        self._group = AbelianOracle(n, relator_rows)
        self.rank = self._group.free_rank

        live = self._group.live
        moduli = self._group.moduli
        free_pos = [p for p, i in enumerate(live) if moduli[i] == 0]
        tors_pos = [p for p, i in enumerate(live) if moduli[i] > 1]

        def smith(position):
            return self._group.key_of_exponents(
                [1 if j == position else 0 for j in range(n)])

        a1_keys = [smith(p) for p in self.a1]
        a2_keys = [smith(p) for p in self.a2]

        basis = [[k[p] for p in free_pos] for k in a1_keys]
        if len(self.a1) != len(free_pos):
            raise StructureError("A1 size differs from the free rank")
        if basis and abs(intmat.det(basis)) != 1:
            raise StructureError("A1 does not map to a basis of the free part")
        self._basis_inv = intmat.mat_inverse_unimodular(basis) if basis else []

        # A2 generators: pure torsion, one standard cyclic factor each
        if len(self.a2) != len(tors_pos):
            raise StructureError("A2 size differs from the number of invariant factors")
        owner = []
        for k in a2_keys:
            if any(k[p] for p in free_pos):
                raise StructureError("A2 generator has infinite order")
            hot = [(j, k[p]) for j, p in enumerate(tors_pos) if k[p] != 0]
            d = [self._group.moduli[live[p]] for p in tors_pos]
            if len(hot) != 1 or hot[0][1] not in (1, d[hot[0][0]] - 1):
                raise StructureError(
                    "A2 generators must be independent standard torsion generators")
            owner.append((hot[0][0], 1 if hot[0][1] == 1 else -1))
        if len({j for j, _ in owner}) != len(owner):
            raise StructureError("two A2 generators span the same cyclic factor")
        self._tors_pos = tors_pos
        self._a2_owner = owner
        self._a1_tors = [[k[p] for p in tors_pos] for k in a1_keys]
        self._free_pos = free_pos
        self.torsion_orders = tuple(
            self._group.moduli[live[tors_pos[j]]] for j, _ in owner)
        self.sensible_set = SensibleGeneratingSet(self.a1, self.a2, self.torsion_orders)

    @property
    def n_gens(self):
        return len(self.gen_indices)

    def coords_of_local_word(self, word):
        """Canonical coordinates (free tuple, torsion tuple) of a word in the
        parabolic's own generators (local letters)."""
        evec = exponent_vector(word, self.n_gens)
        return self.coords_of_exponents(evec)

    def coords_of_exponents(self, evec):
        k = self._group.key_of_exponents(evec)
        yfree = [k[p] for p in self._free_pos]
        x = intmat.vec_mat(yfree, self._basis_inv) if self._basis_inv else []
        ytors = [k[p] for p in self._tors_pos]
        # subtract the torsion carried by the A1 letters
        for i, xi in enumerate(x):
            for j in range(len(ytors)):
                ytors[j] -= xi * self._a1_tors[i][j]
        t = []
        for j, (pos, sign) in enumerate(self._a2_owner):
            d = self.torsion_orders[j]
            t.append((sign * ytors[pos]) % d)
        return tuple(x), tuple(t)

    def local_word_of_coords(self, free_vec, tors_vec):
        out = []
        for i, e in enumerate(free_vec):
            g = self.a1[i] + 1
            out.extend([g if e > 0 else -g] * abs(e))
        for j, e in enumerate(tors_vec):
            g = self.a2[j] + 1
            out.extend([g] * (e % self.torsion_orders[j]))
        return tuple(out)

    def ambient_word(self, local_word):
        return tuple(
            (1 if x > 0 else -1) * self.gen_indices[abs(x) - 1] for x in local_word)

    def is_virtually_cyclic(self):
        # abelian: virtually cyclic exactly when the free rank is <= 1
        return self.rank <= 1


def normal_form_abelian(word, parabolic):
    """Canonical coordinates of a word in the parabolic's generators:
    an integer vector over the A1 basis plus one cyclic coordinate per A2
    generator.  Two words get equal coordinates iff they agree in the group."""
    return parabolic.coords_of_local_word(word)


def validate_sensible(relator_rows, n_gens, a1_vectors, a2_vectors):
    """Check the sensible-set conditions for candidate generators given as
    exponent vectors: A1 maps to a basis of the free part of the presented
    abelian group, and |A2| is minimal (= the number of invariant factors
    bigger than 1).  Returns False on malformed input rather than raising."""
    try:
        group = AbelianOracle(n_gens, [list(r) for r in relator_rows])
        free_pos = [p for p, i in enumerate(group.live) if group.moduli[i] == 0]
        tors_count = sum(1 for i in group.live if group.moduli[i] > 1)
        if len(a1_vectors) != len(free_pos):
            return False
        basis = []
        for v in a1_vectors:
            k = group.key_of_exponents(list(v))
            basis.append([k[p] for p in free_pos])
        if basis and abs(intmat.det(basis)) != 1:
            return False
        if len(a2_vectors) != tors_count:
            return False
        for v in a2_vectors:
            k = group.key_of_exponents(list(v))
            if any(k[p] for p in free_pos):
                return False
        # A2 must generate the torsion part: close under addition
        if tors_count:
            tors_pos = [p for p, i in enumerate(group.live) if group.moduli[i] > 1]
            moduli = [group.moduli[group.live[p]] for p in tors_pos]
            gens = []
            for v in a2_vectors:
                k = group.key_of_exponents(list(v))
                gens.append(tuple(k[p] for p in tors_pos))
            seen = {tuple([0] * len(tors_pos))}
            frontier = [tuple([0] * len(tors_pos))]
            while frontier:
                cur = frontier.pop()
                for g in gens:
                    nxt = tuple((c + x) % m for c, x, m in zip(cur, g, moduli))
                    if nxt not in seen:
                        seen.add(nxt)
                        frontier.append(nxt)
            total = 1
            for m in moduli:
                total *= m
            if len(seen) != total:
                return False
        return True
    except (StructureError, ValueError):
        return False


# ---------------------------------------------------------------------------
# relative structures


class RelativeStructure:
    """A finite presentation plus its abelian peripheral structure and a
    word-problem oracle.  Immutable once built."""

    def __init__(self, pres, parabolics, oracle, delta=None, isoperimetric_K=None,
                 estimate_only=False, check=True):
        self.presentation = pres
        self.parabolics = tuple(parabolics)
        self.oracle = oracle
        self.delta = delta
        self.isoperimetric_K = isoperimetric_K
        self.estimate_only = estimate_only
        if delta is None and isoperimetric_K is None and not estimate_only:
            raise StructureError(
                "supply delta or isoperimetric_K, or flag the structure estimate-only")
        if check:
            self._check()

    def _check(self):
        n = self.presentation.generator_count
        all_gens = set(range(1, n + 1))
        for p in self.parabolics:
            if not set(p.gen_indices) <= all_gens:
                raise StructureError("parabolic generator outside the ambient generators")
            if set(p.gen_indices) == all_gens and self.parabolics:
                raise StructureError(
                    "a parabolic equal to the whole group is not allowed")
            for i, g in enumerate(p.gen_indices):
                for h in p.gen_indices[i + 1:]:
                    if not self.oracle.is_trivial((g, h, -g, -h)):
                        raise StructureError(
                            f"parabolic generators {g},{h} do not commute")

    def with_parabolics(self, parabolics):
        return RelativeStructure(
            self.presentation, parabolics, self.oracle, self.delta,
            self.isoperimetric_K, self.estimate_only, check=False)


def drop_virtually_cyclic(structure):
    """Remove finite and virtually cyclic parabolics (for abelian groups:
    free rank <= 1); relative hyperbolicity is unaffected."""
    keep = [p for p in structure.parabolics if not p.is_virtually_cyclic()]
    return structure.with_parabolics(keep)


def cayley_ball(structure, radius):
    """BFS ball of the Cayley graph: dict key -> distance, plus labelled
    adjacency {key: [(letter, key), ...]}.  Vertices are oracle normal keys."""
    oracle = structure.oracle
    n = structure.presentation.generator_count
    letters = []
    for g in range(1, n + 1):
        letters.extend([g, -g])
    dist = {oracle.identity_key: 0}
    adjacency = {}
    frontier = [oracle.identity_key]
    for d in range(radius):
        nxt = []
        for v in frontier:
            for letter in letters:
                w = oracle.mul_gen(v, letter)
                if w == v:
                    continue
                adjacency.setdefault(v, []).append((letter, w))
                if w not in dist:
                    dist[w] = d + 1
                    nxt.append(w)
        frontier = sorted(nxt)
    # edges from the last shell still get recorded towards known vertices
    for v in frontier:
        for letter in letters:
            w = oracle.mul_gen(v, letter)
            if w != v and w in dist:
                adjacency.setdefault(v, []).append((letter, w))
    return dist, adjacency


# ---------------------------------------------------------------------------
# JSON input

_TOP_FIELDS = {"generators", "relators", "parabolics", "delta",
               "isoperimetric_K", "oracle"}
_PARA_FIELDS = {"generators", "A1", "A2"}
_ORACLE_FIELDS = {"kind", "rules"}


def _reject_unknown(obj, allowed, where):
    unknown = set(obj) - allowed
    if unknown:
        raise StructureError(
            f"unknown field(s) {sorted(unknown)} in {where}", sorted(unknown)[0])


def structure_from_dict(doc):
    if not isinstance(doc, dict):
        raise StructureError("structure document must be a JSON object")
    _reject_unknown(doc, _TOP_FIELDS, "structure document")
    try:
        gens = tuple(doc["generators"])
    except KeyError:
        raise StructureError("missing field 'generators'", "generators")
    if len(set(gens)) != len(gens) or not gens:
        raise StructureError("generator names must be distinct and nonempty", "generators")
    pres = presentation(gens, doc.get("relators", []))

    oracle_doc = doc.get("oracle")
    if oracle_doc is None:
        if pres.relators:
            raise StructureError(
                "an oracle must be declared when relators are present", "oracle")
        oracle_doc = {"kind": "free"}
    _reject_unknown(oracle_doc, _ORACLE_FIELDS, "oracle")
    oracle = _build_oracle(pres, oracle_doc)

    n = pres.generator_count
    relator_vectors = [exponent_vector(r, n) for r in pres.relators]
    parabolics = []
    for k, pdoc in enumerate(doc.get("parabolics", [])):
        _reject_unknown(pdoc, _PARA_FIELDS, f"parabolics[{k}]")
        try:
            pgens = [gens.index(name) + 1 for name in pdoc["generators"]]
        except ValueError as e:
            raise StructureError(f"parabolics[{k}]: {e}", "parabolics")
        except KeyError:
            raise StructureError(f"parabolics[{k}] missing 'generators'", "parabolics")
        local = {g: i for i, g in enumerate(pgens)}
        a1 = [local[gens.index(name) + 1] for name in pdoc.get("A1", [])]
        a2 = [local[gens.index(name) + 1] for name in pdoc.get("A2", [])]
        rows = [
            [vec[g - 1] for g in pgens]
            for vec, rel in zip(relator_vectors, pres.relators)
            if set(abs(x) for x in rel) <= set(pgens)
        ]
        parabolics.append(AbelianParabolic(pgens, a1, a2, rows))

    delta = doc.get("delta")
    iso = doc.get("isoperimetric_K")
    if delta is not None and (not isinstance(delta, int) or delta < 1):
        raise StructureError("delta must be a positive integer", "delta")
    if iso is not None and (not isinstance(iso, int) or iso < 1):
        raise StructureError("isoperimetric_K must be a positive integer",
                             "isoperimetric_K")
    return RelativeStructure(
        pres, parabolics, oracle, delta=delta, isoperimetric_K=iso,
        estimate_only=(delta is None and iso is None))


def _build_oracle(pres, oracle_doc):
    kind = oracle_doc.get("kind")
    rules = oracle_doc.get("rules")
    n = pres.generator_count
    if kind == "free":
        return FreeOracle(n)
    if kind == "abelian":
        rows = [exponent_vector(r, n) for r in pres.relators]
        return AbelianOracle(n, rows)
    if kind == "free-product-of-abelians":
        if not rules:
            raise StructureError("free-product oracle needs factor lists", "oracle")
        factor_of_gen = [None] * n
        gen_local = [None] * n
        factors = []
        for f, factor_names in enumerate(rules):
            members = []
            for name in factor_names:
                if name not in pres.gen_names:
                    raise StructureError(f"unknown factor generator {name!r}", "oracle")
                g = pres.gen_names.index(name) + 1
                if factor_of_gen[g - 1] is not None:
                    raise StructureError(f"generator {name!r} in two factors", "oracle")
                factor_of_gen[g - 1] = f
                gen_local[g - 1] = len(members) + 1
                members.append(g)
            rows = []
            for rel in pres.relators:
                support = set(abs(x) for x in rel)
                if support and support <= set(members):
                    vec = exponent_vector(rel, n)
                    rows.append([vec[g - 1] for g in members])
            factors.append(AbelianOracle(len(members), rows))
        if any(f is None for f in factor_of_gen):
            raise StructureError("every generator must belong to a factor", "oracle")
        for rel in pres.relators:
            support = {factor_of_gen[abs(x) - 1] for x in rel}
            if len(support) > 1:
                raise StructureError(
                    "a relator crosses factors: not a free product presentation",
                    "oracle")
        return FreeProductOracle(n, factor_of_gen, factors, gen_local)
    if kind == "rewriting-system":
        if rules is None:
            raise StructureError("rewriting-system oracle needs rules", "oracle")
        parsed = [(pres.parse(l), pres.parse(r)) for l, r in rules]
        return RewritingOracle(n, parsed)
    raise StructureError(f"unknown oracle kind {kind!r}", "oracle")


def load_structure(path):
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as e:
            raise StructureError(f"invalid JSON: {e}")
    return structure_from_dict(doc)
