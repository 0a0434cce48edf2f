"""Exact additive combinatorics over the cyclic group Z_eta.

Sets are Python-int bitsets (bit ``x`` set iff ``x`` is a member), so sumsets
and Bohr sets are exact.  Only Fourier magnitudes go through floating point,
and threshold decisions there carry a guard band with ties reported.
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Iterable
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

SPEC_TOL = 1e-9


@dataclass(frozen=True)
class ResidueSet:
    """Subset of Z_eta stored as a bitset."""

    eta: int
    bits: int = 0

    def __post_init__(self) -> None:
        if self.eta < 1:
            raise ValueError("modulus must be >= 1")
        if self.bits < 0 or self.bits >> self.eta:
            raise ValueError("members must lie in [0, eta)")

    @classmethod
    def of(cls, eta: int, members: Iterable[int]) -> ResidueSet:
        bits = 0
        for x in members:
            bits |= 1 << (x % eta)
        return cls(eta, bits)

    @classmethod
    def full(cls, eta: int) -> ResidueSet:
        return cls(eta, (1 << eta) - 1)

    @classmethod
    def zero(cls, eta: int) -> ResidueSet:
        return cls(eta, 1)

    def __contains__(self, x: int) -> bool:
        return bool(self.bits >> (x % self.eta) & 1)

    def __iter__(self):
        bits, x = self.bits, 0
        while bits:
            if bits & 1:
                yield x
            bits >>= 1
            x += 1

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def members(self) -> list[int]:
        return list(self)

    def is_full(self) -> bool:
        return self.bits == (1 << self.eta) - 1

    def _same_modulus(self, other: ResidueSet) -> None:
        if self.eta != other.eta:
            raise ValueError(f"modulus mismatch: {self.eta} vs {other.eta}")

    def shift(self, a: int) -> ResidueSet:
        a %= self.eta
        mask = (1 << self.eta) - 1
        return ResidueSet(self.eta, ((self.bits << a) | (self.bits >> (self.eta - a))) & mask)

    def __neg__(self) -> ResidueSet:
        return ResidueSet.of(self.eta, ((-x) % self.eta for x in self))

    def __add__(self, other: ResidueSet) -> ResidueSet:
        return sumset(self, other)

    def __sub__(self, other: ResidueSet) -> ResidueSet:
        return sumset(self, -other)

    def __or__(self, other: ResidueSet) -> ResidueSet:
        self._same_modulus(other)
        return ResidueSet(self.eta, self.bits | other.bits)

    def __le__(self, other: ResidueSet) -> bool:
        self._same_modulus(other)
        return self.bits & ~other.bits == 0

    def dilate(self, c: int) -> ResidueSet:
        """``c . A = {c a}`` (not the iterated sumset)."""
        return ResidueSet.of(self.eta, (c * x for x in self))

    def indicator(self) -> np.ndarray:
        out = np.zeros(self.eta, dtype=np.int64)
        out[self.members()] = 1
        return out

    def __repr__(self) -> str:
        body = self.members()
        if len(body) > 12:
            body = body[:12] + ["..."]
        return f"ResidueSet(eta={self.eta}, {{{', '.join(map(str, body))}}})"


def sumset(a: ResidueSet, b: ResidueSet) -> ResidueSet:
    """``A + B`` by OR-ing rotated copies of the larger set."""
    a._same_modulus(b)
    if len(a) > len(b):
        a, b = b, a
    bits = 0
    for x in a:
        bits |= b.shift(x).bits
    return ResidueSet(a.eta, bits)


def iterated_sumset(a: ResidueSet, kappa: int) -> ResidueSet:
    """``kappa A`` for ``kappa >= 1``."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    out = a
    for _ in range(kappa - 1):
        out = out + a
    return out


def cover_kappa(a: ResidueSet, kappa_max: int) -> int | None:
    """Smallest ``kappa <= kappa_max`` with ``kappa A = Z_eta``, else ``None``."""
    if 0 not in a:
        raise ValueError("cover_kappa needs 0 in A")
    s = a
    for kappa in range(1, kappa_max + 1):
        if s.is_full():
            return kappa
        nxt = s + a
        if nxt == s:
            return None
        s = nxt
    return None


def frac_norm(x: int, eta: int) -> Fraction:
    """Distance of ``x / eta`` to the nearest integer, as an exact fraction."""
    x %= eta
    return Fraction(min(x, eta - x), eta)


def _bohr_members(s: ResidueSet, within) -> list[int]:
    eta = s.eta
    cand = np.arange(eta, dtype=np.int64)
    for x in s:
        r = (x * cand) % eta
        cand = cand[within(np.minimum(r, eta - r))]
        if cand.size == 0:
            break
    return cand.tolist()


def bohr_set(s: ResidueSet, alpha) -> ResidueSet:
    """``{xi : ||s xi|| <= alpha for all s in S}`` with exact comparison."""
    alpha = Fraction(alpha)
    if not 0 <= alpha <= Fraction(1, 2):
        raise ValueError("alpha must lie in [0, 1/2]")
    num, den, eta = alpha.numerator, alpha.denominator, s.eta
    # ||y|| <= num/den  <=>  min(r, eta-r) * den <= num * eta
    return ResidueSet.of(eta, _bohr_members(s, lambda d: d * den <= num * eta))


def bohr_set_sqrt(s: ResidueSet, alpha_squared) -> ResidueSet:
    """Bohr set whose radius is ``sqrt(alpha_squared)``; exact via squaring."""
    a2 = Fraction(alpha_squared)
    if a2 < 0:
        raise ValueError("alpha_squared must be >= 0")
    if a2 >= Fraction(1, 4):
        return ResidueSet.full(s.eta)
    num, den, eta = a2.numerator, a2.denominator, s.eta
    return ResidueSet.of(eta, _bohr_members(s, lambda d: d * d * den <= num * eta * eta))


def fourier_magnitudes(a: ResidueSet) -> np.ndarray:
    """``|A^(j)|`` for ``j in [0, eta)``, normalised so that ``A^(0) = 1``."""
    if len(a) == 0:
        raise ValueError("empty set has no normalised transform")
    coeff = np.abs(np.fft.fft(a.indicator().astype(float))) / len(a)
    assert abs(coeff[0] - 1.0) < 1e-12
    coeff[0] = 1.0
    return coeff


@dataclass(frozen=True)
class SpectrumReport:
    coefficients: np.ndarray = field(repr=False)
    alpha: float
    spec: ResidueSet
    ties: tuple[int, ...] = ()

    @property
    def trivial(self) -> bool:
        return self.spec.bits == 1 and not self.ties


def spectrum(a: ResidueSet, alpha) -> SpectrumReport:
    """``Spec_alpha(A) = {j : |A^(j)| > alpha}``.

    Frequencies within ``SPEC_TOL`` of the threshold are listed in ``ties``
    and left out of ``spec``.
    """
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    coeff = fourier_magnitudes(a)
    above = coeff > alpha + SPEC_TOL
    tie = np.abs(coeff - alpha) <= SPEC_TOL
    above[0] = True
    tie[0] = False
    return SpectrumReport(
        coefficients=coeff,
        alpha=alpha,
        spec=ResidueSet.of(a.eta, np.flatnonzero(above).tolist()),
        ties=tuple(np.flatnonzero(tie).tolist()),
    )


def _cyclic_power(a: ResidueSet, kappa: int) -> list[int]:
    """Representation counts of every residue in ``kappa A`` (exact ints)."""
    eta = a.eta
    base = a.members()
    counts = [0] * eta
    counts[0] = 1
    for _ in range(kappa):
        nxt = [0] * eta
        for x, c in enumerate(counts):
            if c:
                for y in base:
                    nxt[(x + y) % eta] += c
        counts = nxt
    return counts


def representation_counts(a: ResidueSet, kappa: int) -> list[int]:
    """``r(l)`` = number of ``2 kappa``-tuples with ``sum a_i - sum b_i = l``."""
    if kappa < 1:
        raise ValueError("kappa must be >= 1")
    c = _cyclic_power(a, kappa)
    eta = a.eta
    return [sum(c[x] * c[(x - l) % eta] for x in range(eta) if c[x]) for l in range(eta)]


def representation_count(a: ResidueSet, kappa: int, l: int) -> int:
    return representation_counts(a, kappa)[l % a.eta]


def representation_count_fourier(a: ResidueSet, kappa: int, l: int) -> float:
    """Fourier-side evaluation ``|A|^(2 kappa)/eta * sum_j |A^(j)|^(2 kappa) e(-j l/eta)``."""
    eta = a.eta
    coeff = fourier_magnitudes(a)
    total = sum(
        coeff[j] ** (2 * kappa) * cmath.exp(-2j * math.pi * j * l / eta) for j in range(eta)
    )
    return float(len(a)) ** (2 * kappa) / eta * total.real


# -- verifiers -----------------------------------------------------------------


@dataclass
class IntModReport:
    eta: int
    passed: bool
    witnesses: dict[int, int]
    violations: list[int]
    borderline: list[int]


def verify_int_mod(a: ResidueSet) -> IntModReport:
    """For every ``1 <= xi <= eta/6`` look for ``x in A`` with ``xi x`` in ``[eta/3, 2 eta/3]``.

    ``borderline`` lists the ``xi`` whose witnesses all sit exactly on an
    endpoint of the interval.
    """
    eta = a.eta
    members = np.asarray(a.members(), dtype=np.int64)
    witnesses: dict[int, int] = {}
    violations: list[int] = []
    borderline: list[int] = []
    for xi in range(1, eta // 6 + 1):
        r3 = 3 * ((xi * members) % eta)
        inside = (r3 >= eta) & (r3 <= 2 * eta)
        if not inside.any():
            violations.append(xi)
            continue
        strict = (r3 > eta) & (r3 < 2 * eta)
        pick = np.flatnonzero(strict if strict.any() else inside)[0]
        witnesses[xi] = int(members[pick])
        if not strict.any():
            borderline.append(xi)
    return IntModReport(eta, not violations, witnesses, violations, borderline)


@dataclass
class BohrReport:
    eta: int
    passed: bool
    bohr: ResidueSet


def verify_bohr_sumset(a: ResidueSet) -> BohrReport:
    """Check ``Bohr(A + A, 1/6) == {0}``."""
    b = bohr_set(a + a, Fraction(1, 6))
    return BohrReport(a.eta, b.bits == 1, b)


@dataclass
class ContainmentReport:
    eta: int
    hypothesis_met: bool
    passed: bool | None
    counterexample: int | None = None
    ratio: Fraction | None = None
    spectrum_ties: tuple[int, ...] = ()
    reason: str = ""


def verify_bohr_containment(a: ResidueSet, b: ResidueSet, k_param, eps) -> ContainmentReport:
    """Check ``A - A`` inside ``Bohr(Spec_{1-eps}(B - A), sqrt(8 eps K))``.

    ``passed`` is ``None`` when the hypotheses (``A <= B``, ``0 in A``,
    ``K >= 1``, ``0 < eps < 1``, ``|B - A| <= K |B|``) do not hold.
    """
    a._same_modulus(b)
    k_param, eps = Fraction(k_param), Fraction(eps)
    b_minus_a = b - a
    ratio = Fraction(len(b_minus_a), len(b)) if len(b) else None
    problems = []
    if not a <= b:
        problems.append("A not inside B")
    if 0 not in a:
        problems.append("0 not in A")
    if k_param < 1:
        problems.append("K < 1")
    if not 0 < eps < 1:
        problems.append("eps outside (0, 1)")
    if ratio is None or ratio > k_param:
        problems.append("|B - A| > K |B|")
    if problems:
        return ContainmentReport(a.eta, False, None, ratio=ratio, reason="; ".join(problems))

    spec = spectrum(b_minus_a, 1 - eps)
    # frequencies on the threshold are kept: the containment must hold for them too
    frequencies = spec.spec | ResidueSet.of(a.eta, spec.ties)
    bohr = bohr_set_sqrt(frequencies, 8 * eps * k_param)
    diff = a - a
    outside = diff.bits & ~bohr.bits
    counter = None
    if outside:
        counter = (outside & -outside).bit_length() - 1
    return ContainmentReport(
        a.eta, True, not outside, counter, ratio=ratio, spectrum_ties=spec.ties
    )


verify_prop_tao = verify_bohr_containment


@dataclass
class AnnihilationReport:
    eta: int
    s: Fraction
    kappa: int
    covered: bool


def verify_spectrum_annihilation(a: ResidueSet) -> AnnihilationReport | None:
    """If ``Spec_{1-1/s}(A) = {0}`` then ``kappa A - kappa A = Z_eta`` for ``kappa = ceil(s ln eta)``.

    Uses the smallest ``s`` for which the spectrum hypothesis holds.  Returns
    ``None`` when no finite ``s`` works (some nonzero frequency has magnitude 1).
    """
    coeff = fourier_magnitudes(a)
    top = float(coeff[1:].max()) if a.eta > 1 else 0.0
    if top >= 1 - SPEC_TOL:
        return None
    s = Fraction(1) / (1 - Fraction(top)) + Fraction(1, 10**6)
    kappa = max(1, math.ceil(float(s) * math.log(a.eta))) if a.eta > 1 else 1
    k_a = iterated_sumset(a, kappa)
    return AnnihilationReport(a.eta, s, kappa, (k_a - k_a).is_full())


@dataclass
class ChainReport:
    eta: int
    kappa: int | None
    sizes: list[int]


def difference_chain(a1: ResidueSet, max_iter: int | None = None) -> ChainReport:
    """Iterate ``A_{i+1} = A_i - A_1`` until ``Spec_{1-1/576}(A_i) = {0}``.

    ``kappa`` is the number of subtractions performed (so the final set is
    ``A_1 - kappa A_1``), or ``None`` if the budget runs out.
    """
    if 0 not in a1:
        raise ValueError("chain needs 0 in A_1")
    if max_iter is None:
        max_iter = 4 * max(1, a1.eta.bit_length())
    alpha = 1 - 1 / 576
    cur = a1
    sizes = [len(cur)]
    for kappa in range(1, max_iter + 1):
        cur = cur - a1
        sizes.append(len(cur))
        if spectrum(cur, alpha).trivial:
            return ChainReport(a1.eta, kappa, sizes)
    return ChainReport(a1.eta, None, sizes)
