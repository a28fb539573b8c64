"""Generalized W-class specifications, their realizations, mixtures with |0...0>, and purifications.

A W-class spec on ``n`` qudits of dimension ``d`` is a table ``coeffs[s-1, i-1]
= a_{si}`` for subsystem ``s`` in ``1..n`` and excitation level ``i`` in
``1..d-1``; the state is ``sum_{s,i} a_{si} |0..i..0>`` with level ``i`` on
subsystem ``s``. Subsystems and levels are 1-based in this module, matching
the JSON interchange format.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import config
from .errors import SpecError
from .linalg import StateVector


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class WClassSpec:
    """Coefficient table of an n-qudit W-class state.

    ``total`` is the squared norm of the coefficients as stored. Public
    constructors (:meth:`from_coeffs`, JSON parsing) normalize and keep the
    pre-normalization weight in ``original_total``.
    """

    n: int
    d: int
    coeffs: np.ndarray
    original_total: float | None = None
    total: float = field(init=False)

    def __post_init__(self):
        if self.n < 2:
            raise SpecError(f"need at least 2 subsystems, got n={self.n}")
        if self.d < 2:
            raise SpecError(f"local dimension must be >= 2, got d={self.d}")
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.n, self.d - 1):
            raise SpecError(f"coeffs shape {c.shape} does not match (n, d-1) = {(self.n, self.d - 1)}")
        if not np.all(np.isfinite(c)):
            raise SpecError("coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(c))
        object.__setattr__(self, "total", float(np.sum(np.abs(c) ** 2)))

    @classmethod
    def from_coeffs(cls, coeffs, d: int | None = None) -> "WClassSpec":
        """Normalize a coefficient table (shape (n, d-1), or length n for qubits)."""
        c = np.array(coeffs, dtype=complex)
        if c.ndim == 1:
            c = c[:, np.newaxis]
        if d is None:
            d = c.shape[1] + 1
        total = float(np.sum(np.abs(c) ** 2))
        if total <= 0.0:
            raise SpecError("all W-class coefficients are zero")
        return cls(c.shape[0], d, c / math.sqrt(total), original_total=total)

    @property
    def normalized(self) -> bool:
        return abs(self.total - 1.0) <= config.NORM_TOL

    @property
    def local_dims(self) -> tuple[int, ...]:
        return (self.d,) * self.n

    @property
    def alpha2(self) -> np.ndarray:
        """Per-subsystem excitation weights alpha_s^2 = sum_i |a_si|^2 (index s-1)."""
        return np.sum(np.abs(self.coeffs) ** 2, axis=1)

    def coeff(self, s: int, i: int) -> complex:
        return complex(self.coeffs[s - 1, i - 1])

    def __eq__(self, other):
        if not isinstance(other, WClassSpec):
            return NotImplemented
        return (self.n, self.d) == (other.n, other.d) and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.n, self.d, self.coeffs.tobytes()))

    def __repr__(self):
        return f"WClassSpec(n={self.n}, d={self.d}, total={self.total:.12g})"


@dataclass(frozen=True, eq=False)
class MixtureSpec:
    """``p |W><W| + (1-p) |0...0><0...0|``, with an optional ancilla level vector for purification."""

    w: WClassSpec
    p: float = 1.0
    ancilla_coeffs: np.ndarray | None = None

    def __post_init__(self):
        p = float(self.p)
        if not (0.0 <= p <= 1.0) or math.isnan(p):
            raise SpecError(f"mixing weight p must lie in [0, 1], got {self.p}")
        object.__setattr__(self, "p", p)
        if not self.w.normalized:
            raise SpecError("mixture requires a normalized W-class spec")
        if self.ancilla_coeffs is not None:
            a = np.array(self.ancilla_coeffs, dtype=complex).reshape(-1)
            if a.size != self.w.d - 1:
                raise SpecError(f"ancilla needs {self.w.d - 1} coefficients, got {a.size}")
            nrm = float(np.sum(np.abs(a) ** 2))
            if abs(nrm - 1.0) > config.NORM_TOL:
                raise SpecError(f"ancilla coefficients not normalized (squared norm {nrm!r})")
            object.__setattr__(self, "ancilla_coeffs", _frozen(a))

    @property
    def n(self) -> int:
        return self.w.n

    @property
    def d(self) -> int:
        return self.w.d


def excitation_index(s: int, i: int, n: int, d: int) -> int:
    """Flat index of the basis state with level ``i`` on subsystem ``s`` (1-based) and 0 elsewhere.

    >>> excitation_index(1, 1, 3, 2)
    4
    >>> excitation_index(2, 2, 2, 3)
    2
    """
    if not 1 <= s <= n:
        raise SpecError(f"subsystem s={s} out of range 1..{n}")
    if not 1 <= i <= d - 1:
        raise SpecError(f"level i={i} out of range 1..{d - 1}")
    return i * d ** (n - s)


def single_excitation_indices(n: int, d: int) -> np.ndarray:
    """Flat indices laid out like ``coeffs``: entry [s-1, i-1] is excitation_index(s, i)."""
    s = np.arange(n)[:, np.newaxis]
    i = np.arange(1, d)[np.newaxis, :]
    return i * d ** (n - 1 - s)


def build_wclass(spec: WClassSpec) -> StateVector:
    if not spec.normalized:
        raise SpecError(f"W-class spec is not normalized (total weight {spec.total!r})")
    size = spec.d**spec.n
    config.check_cap(size, f"{spec.n}-qudit state (d={spec.d})")
    amps = np.zeros(size, dtype=complex)
    amps[single_excitation_indices(spec.n, spec.d).ravel()] = spec.coeffs.ravel()
    return StateVector(spec.local_dims, amps)


def build_mixture(m: MixtureSpec) -> np.ndarray:
    psi = build_wclass(m.w).amplitudes
    rho = m.p * np.outer(psi, psi.conj())
    rho[0, 0] += 1.0 - m.p
    return rho


def default_ancilla(d: int) -> np.ndarray:
    a = np.zeros(d - 1, dtype=complex)
    a[0] = 1.0
    return a


def purify_mixture(m: MixtureSpec, use_default_ancilla: bool = True) -> WClassSpec:
    """(n+1)-qudit W-class spec whose reduction to the first n qudits is ``build_mixture(m)``.

    The W-class part is scaled by sqrt(p) and the ancilla excitation by
    sqrt(1-p); when ``m`` carries no ancilla coefficients the ancilla is put
    in level 1.
    """
    anc = m.ancilla_coeffs
    if anc is None:
        if not use_default_ancilla:
            raise SpecError("purification needs ancilla coefficients")
        anc = default_ancilla(m.d)
    coeffs = np.vstack([math.sqrt(m.p) * m.w.coeffs, math.sqrt(1.0 - m.p) * anc[np.newaxis, :]])
    return WClassSpec(m.n + 1, m.d, coeffs)


# -- JSON interchange -------------------------------------------------------

def _number(x: Any, what: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise SpecError(f"{what} must be a number, got {x!r}")
    return float(x)


def _integer(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SpecError(f"{what} must be an integer, got {x!r}")
    return x


def mixture_from_json(obj: Any) -> MixtureSpec:
    """Parse ``{"n", "d", "coeffs": [[s, i, re, im], ...], "p"?, "ancilla"?: [[i, re, im], ...]}``.

    Repeated (s, i) entries are summed. Coefficients and ancilla are normalized.
    """
    if not isinstance(obj, dict):
        raise SpecError("spec must be a JSON object")
    for key in ("n", "d", "coeffs"):
        if key not in obj:
            raise SpecError(f"spec is missing required key {key!r}")
    n = _integer(obj["n"], "n")
    d = _integer(obj["d"], "d")
    if n < 2 or d < 2:
        raise SpecError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    config.check_cap(d**n, f"{n}-qudit state (d={d})")
    if not isinstance(obj["coeffs"], list):
        raise SpecError("coeffs must be a list of [s, i, re, im] entries")
    table = np.zeros((n, d - 1), dtype=complex)
    for entry in obj["coeffs"]:
        if not isinstance(entry, list) or len(entry) != 4:
            raise SpecError(f"coeff entry must be [s, i, re, im], got {entry!r}")
        s, i = _integer(entry[0], "s"), _integer(entry[1], "i")
        if not 1 <= s <= n or not 1 <= i <= d - 1:
            raise SpecError(f"coeff entry ({s}, {i}) out of range for n={n}, d={d}")
        table[s - 1, i - 1] += complex(_number(entry[2], "re"), _number(entry[3], "im"))
    w = WClassSpec.from_coeffs(table, d)
    p = _number(obj.get("p", 1.0), "p")
    ancilla = None
    if obj.get("ancilla") is not None:
        if not isinstance(obj["ancilla"], list):
            raise SpecError("ancilla must be a list of [i, re, im] entries")
        ancilla = np.zeros(d - 1, dtype=complex)
        for entry in obj["ancilla"]:
            if not isinstance(entry, list) or len(entry) != 3:
                raise SpecError(f"ancilla entry must be [i, re, im], got {entry!r}")
            i = _integer(entry[0], "i")
            if not 1 <= i <= d - 1:
                raise SpecError(f"ancilla level {i} out of range 1..{d - 1}")
            ancilla[i - 1] += complex(_number(entry[1], "re"), _number(entry[2], "im"))
        nrm = np.linalg.norm(ancilla)
        if nrm == 0.0:
            raise SpecError("ancilla coefficients are all zero")
        ancilla = ancilla / nrm
    return MixtureSpec(w, p, ancilla)


def mixture_to_json(m: MixtureSpec) -> dict:
    out: dict[str, Any] = {
        "n": m.n,
        "d": m.d,
        "coeffs": [
            [s + 1, i + 1, float(c.real), float(c.imag)]
            for (s, i), c in np.ndenumerate(m.w.coeffs)
            if c != 0
        ],
        "p": m.p,
    }
    if m.ancilla_coeffs is not None:
        out["ancilla"] = [
            [i + 1, float(c.real), float(c.imag)] for i, c in enumerate(m.ancilla_coeffs) if c != 0
        ]
    return out
