"""Decision procedures for best unbiased estimation on finite models.

A statistic ``T`` is a UMVUE exactly when, choosing a basis ``B_t`` of the
likelihoods on each level set ``{T = t}``, the union of all the bases is
linearly independent. Everything here is built on that test, plus two
independent checks used as oracles: the product rule on unbiased estimators
of zero, and brute-force enumeration of events.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .linalg import Matrix
from .model import as_clean, e0_basis, in_e0, likelihoods, null_samples


class NotUMVUEError(ValueError):
    """No eigen-certificate exists because the statistic is not a UMVUE."""


@dataclass(frozen=True)
class Decision:
    """Outcome of a yes/no check, with the samples that witness a "no"."""

    holds: bool
    witness: tuple = ()
    detail: str = ""

    def __bool__(self):
        return self.holds

    def to_json(self, sample_labels=None) -> dict:
        out = {"decision": "yes" if self.holds else "no"}
        if self.witness:
            out["witness"] = [
                sample_labels[i] if sample_labels is not None else i for i in self.witness
            ]
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class LevelSetDecomposition:
    levels: tuple
    members: tuple
    bases: tuple

    def basis_sizes(self) -> dict:
        return {t: len(b) for t, b in zip(self.levels, self.bases)}


@dataclass(frozen=True)
class Sigma0Partition:
    blocks: tuple
    null_singletons: tuple = ()

    def block_of(self) -> dict:
        return {x: i for i, b in enumerate(self.blocks) for x in b}

    def events(self):
        """All unions of blocks: the generated sigma-algebra."""
        out = set()
        for r in range(len(self.blocks) + 1):
            for combo in combinations(self.blocks, r):
                out.add(frozenset().union(*combo))
        return out

    def to_json(self, sample_labels) -> dict:
        return {
            "decision": "yes",
            "blocks": [[sample_labels[x] for x in b] for b in self.blocks],
            "null_samples": [sample_labels[b[0]] for b in self.null_singletons],
        }


@dataclass(frozen=True)
class Certificate:
    """Matrix over the kept parameters with ``lambda_ @ l_x == T(x) * l_x`` for all x."""

    lambda_: Matrix
    statistic: tuple
    theta0: tuple = field(default=())


def group_levels(values, arithmetic) -> list[list[int]]:
    """Sample indices grouped by statistic value, ordered by increasing value.

    Exact mode groups by equality. Float mode sorts the values and chains
    neighbours closer than the tolerance, so grouping is transitive.
    """
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    groups = []
    for i in order:
        if groups:
            prev = values[groups[-1][-1]]
            same = values[i] == prev if arithmetic.exact else abs(values[i] - prev) <= arithmetic.tolerance
            if same:
                groups[-1].append(i)
                continue
        groups.append([i])
    return [sorted(g) for g in groups]


def decompose(m, T) -> LevelSetDecomposition:
    cm = as_clean(m)
    T = cm.statistic(T)
    cols = likelihoods(cm)
    levels, members, bases = [], [], []
    for g in group_levels(T, cm.arithmetic):
        keep = linalg.extract_basis([cols[x] for x in g], cm.arithmetic)
        levels.append(T[g[0]])
        members.append(tuple(g))
        bases.append(tuple(g[k] for k in keep))
    return LevelSetDecomposition(tuple(levels), tuple(members), tuple(bases))


def is_umvue(m, T) -> Decision:
    """UMVUE test: the union of the per-level likelihood bases is independent.

    On failure the witness is a minimal dependent set of samples drawn from
    that union.
    """
    cm = as_clean(m)
    dec = decompose(cm, T)
    union = [x for b in dec.bases for x in b]
    cols = likelihoods(cm)
    vecs = [cols[x] for x in union]
    if not vecs or linalg.is_independent(vecs, cm.arithmetic):
        return Decision(True)
    circ = linalg.find_circuit(vecs, cm.arithmetic)
    return Decision(False, tuple(sorted(union[i] for i in circ)),
                    "likelihood bases of the level sets are linearly dependent")


def is_umvue_oracle(m, T) -> Decision:
    """UMVUE test by the product rule: ``H`` unbiased for 0 implies ``T*H`` is too."""
    base = m.base
    T = base.statistic(T)
    for H in e0_basis(base):
        TH = tuple(t * h for t, h in zip(T, H))
        if not in_e0(base, TH):
            return Decision(False, tuple(x for x, h in enumerate(H) if h != 0),
                            "T*H is not unbiased for zero for some H in E0")
    return Decision(True)


def level_masses(m, T) -> tuple[list[list[int]], list[tuple]]:
    """Level sets of ``T`` and the summed likelihood column of each level."""
    base = m.base
    T = base.statistic(T)
    cols = likelihoods(base)
    groups = group_levels(T, base.arithmetic)
    masses = []
    for g in groups:
        acc = [base.zero()] * base.n_theta
        for x in g:
            acc = [a + v for a, v in zip(acc, cols[x])]
        masses.append(tuple(acc))
    return groups, masses


def is_complete(m, T) -> Decision:
    """Completeness: the nonzero level masses are linearly independent."""
    base = m.base
    groups, masses = level_masses(base, T)
    arith = base.arithmetic
    scale = base.P.scale()
    nonzero = [i for i, v in enumerate(masses) if not all(arith.is_zero(a, scale) for a in v)]
    vecs = [masses[i] for i in nonzero]
    if not vecs or linalg.is_independent(vecs, arith):
        return Decision(True)
    circ = linalg.find_circuit(vecs, arith)
    witness = tuple(sorted(x for i in circ for x in groups[nonzero[i]]))
    return Decision(False, witness, "level masses of T are linearly dependent")


def is_sufficient(m, T) -> Decision:
    """Sufficiency: likelihoods on each level span at most one dimension."""
    base = m.base
    T = base.statistic(T)
    cols = likelihoods(base)
    for g in group_levels(T, base.arithmetic):
        keep = linalg.extract_basis([cols[x] for x in g], base.arithmetic)
        if len(keep) > 1:
            return Decision(False, tuple(g[k] for k in keep[:2]),
                            "two non-proportional likelihoods share a level")
    return Decision(True)


def conditional_ratios(m, T):
    """Yield ``(level, theta, ratios)`` with the conditional pmf on each level.

    Only parameters giving the level positive probability are reported.
    """
    base = m.base
    T = base.statistic(T)
    arith = base.arithmetic
    for g in group_levels(T, arith):
        for th, row in enumerate(base.rows):
            denom = sum((row[x] for x in g), base.zero())
            if arith.is_zero(denom, 1):
                continue
            yield g, th, tuple(row[x] / denom for x in g)


def check_sufficiency_definition(m, T) -> Decision:
    """Brute-force sufficiency: conditional probabilities given ``T`` are θ-free."""
    base = m.base
    arith = base.arithmetic
    seen = {}
    for g, th, ratios in conditional_ratios(base, T):
        key = tuple(g)
        if key not in seen:
            seen[key] = (th, ratios)
            continue
        th0, ref = seen[key]
        if any(not arith.equal(a, b, 1) for a, b in zip(ratios, ref)):
            return Decision(False, key,
                            f"conditional pmf differs between theta {base.theta_labels[th0]!r} "
                            f"and {base.theta_labels[th]!r}")
    return Decision(True)


def sigma0(m) -> Sigma0Partition:
    """Finest partition of the samples such that block-constant statistics are UMVUEs.

    Null samples are singleton blocks. The rest start as singletons; while
    the union of per-block likelihood bases is dependent, a circuit of that
    union is found and every block it touches is merged.
    """
    cm = as_clean(m)
    arith = cm.arithmetic
    cols = likelihoods(cm)
    nulls = null_samples(cm)
    blocks = [[x] for x in range(cm.n_samples) if x not in nulls]
    while True:
        union, owner = [], []
        for bi, b in enumerate(blocks):
            for k in linalg.extract_basis([cols[x] for x in b], arith):
                union.append(b[k])
                owner.append(bi)
        vecs = [cols[x] for x in union]
        if not vecs or linalg.is_independent(vecs, arith):
            break
        touched = sorted({owner[i] for i in linalg.find_circuit(vecs, arith)})
        merged = sorted(x for bi in touched for x in blocks[bi])
        blocks = [b for bi, b in enumerate(blocks) if bi not in touched] + [merged]
    null_blocks = [(x,) for x in sorted(nulls)]
    all_blocks = sorted([tuple(b) for b in blocks] + null_blocks)
    return Sigma0Partition(tuple(all_blocks), tuple(null_blocks))


def indicator(n, subset, arithmetic):
    one = Fraction(1) if arithmetic.exact else 1.0
    return tuple(one if x in subset else one * 0 for x in range(n))


def sigma0_bruteforce(m, cap: int = 16) -> set:
    """All events whose indicator is a UMVUE, by enumeration of the ``2^|X|`` subsets."""
    cm = as_clean(m)
    n = cm.n_samples
    if n > cap:
        raise ValueError(f"{n} samples exceeds the enumeration cap {cap}")
    family = set()
    for mask in range(1 << n):
        A = frozenset(x for x in range(n) if mask >> x & 1)
        if is_umvue(cm, indicator(n, A, cm.arithmetic)):
            family.add(A)
    full = frozenset(range(n))
    for A in family:
        if full - A not in family:
            raise AssertionError(f"UMVUE events not closed under complement at {sorted(A)}")
        for B in family:
            if A | B not in family:
                raise AssertionError("UMVUE events not closed under union")
    return family


def atoms(family, n) -> list[tuple]:
    """Atoms of a finite family of events: samples grouped by membership pattern."""
    fam = sorted(family, key=lambda s: (len(s), sorted(s)))
    groups = {}
    for x in range(n):
        key = tuple(x in A for A in fam)
        groups.setdefault(key, []).append(x)
    return sorted(tuple(g) for g in groups.values())


def certificate(m, T) -> Certificate:
    """Build the eigen-certificate of a UMVUE.

    Kept basis likelihoods are completed to a basis of the parameter space by
    unit vectors (in label order); the operator scales each level's basis
    vectors by the level value and sends the completion to zero.
    """
    cm = as_clean(m)
    T = cm.statistic(T)
    verdict = is_umvue(cm, T)
    if not verdict:
        raise NotUMVUEError("not a UMVUE: no certificate exists")
    arith = cm.arithmetic
    one = Fraction(1) if arith.exact else 1.0
    zero = one * 0
    k = len(cm.theta0)
    cols = likelihoods(cm)
    dec = decompose(cm, T)
    vecs, eig = [], []
    for t, b in zip(dec.levels, dec.bases):
        for x in b:
            vecs.append(cols[x])
            eig.append(t)
    units = [tuple(one if i == j else zero for i in range(k)) for j in range(k)]
    keep = linalg.extract_basis(vecs + units, arith)
    basis = [(vecs + units)[i] for i in keep]
    values = [eig[i] if i < len(eig) else zero for i in keep]
    B = Matrix.from_columns(basis, arith, nrows=k)
    BD = Matrix.from_columns([tuple(v * val for v in vec) for vec, val in zip(basis, values)],
                             arith, nrows=k)
    lam = linalg.matmul(BD, linalg.inverse(B))
    return Certificate(lam, T, cm.theta0)


def verify_certificate(m, cert: Certificate) -> Decision:
    """Check every eigen-equation ``Λ l_x = T(x) l_x`` over the certificate's parameters."""
    base = m.base
    theta0 = tuple(cert.theta0) or as_clean(m).theta0
    arith = base.arithmetic
    lam = cert.lambda_
    if lam.shape != (len(theta0), len(theta0)):
        return Decision(False, (), "certificate dimension does not match the kept parameters")
    P0 = base.P.select_rows(theta0)
    T = base.statistic(cert.statistic)
    scale = 1
    if not arith.exact:
        scale = max(lam.scale(), max((abs(t) for t in T), default=0), 1) * max(P0.scale(), 1) * len(theta0)
    bad = []
    for x, col in enumerate(P0.columns()):
        lhs = linalg.matvec(lam, col)
        if any(not arith.equal(a, T[x] * v, scale) for a, v in zip(lhs, col)):
            bad.append(x)
    if bad:
        return Decision(False, tuple(bad), "eigen-equation fails")
    return Decision(True)


__all__ = [
    "Certificate",
    "Decision",
    "LevelSetDecomposition",
    "NotUMVUEError",
    "Sigma0Partition",
    "atoms",
    "certificate",
    "check_sufficiency_definition",
    "decompose",
    "group_levels",
    "indicator",
    "is_complete",
    "is_sufficient",
    "is_umvue",
    "is_umvue_oracle",
    "level_masses",
    "sigma0",
    "sigma0_bruteforce",
    "verify_certificate",
]
