"""JSON file formats and scalar parsing.

Matrices: ``{"n": int, "entries": [[[re, im], ...], ...]}`` row-major.
Vectors: ``{"n": int, "entries": [[re, im], ...]}``.
Shifted-potential specs: ``{"V": [c0, ...], "alpha": r, "beta": r,
"gamma": r, "f": [c0, ...]}``.

Complex scalars on command-line flags use the human form ``a+bi``; files use
``[re, im]`` pairs.  Serialization relies on Python's shortest round-trip
float formatting, so emit-then-parse is lossless at full double precision.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

import numpy as np

from .chain import EtaChain
from .errors import InputError
from .metric import MetricBasis, MetricClass, as_matrix, as_vector
from .perturbation import RealPolynomial
from .weyl import ShiftedPotentialSpec, WeylPolynomial


def load_json(path) -> Any:
    if not os.path.exists(path):
        raise InputError(f"{path}: file not found")
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc})") from None


def _complex_from_pair(pair, where: str) -> complex:
    if (not isinstance(pair, (list, tuple)) or len(pair) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
        raise InputError(f"{where}: expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def matrix_from_dict(obj, where: str = "matrix") -> np.ndarray:
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise InputError(f'{where}: expected an object with "n" and "entries"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise InputError(f'{where}: "n" must be a positive integer, got {n!r}')
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n:
        raise InputError(f"{where}: expected {n} rows, got "
                         f"{len(entries) if isinstance(entries, list) else type(entries).__name__}")
    rows = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != n:
            raise InputError(f"{where}: row {i} must have {n} entries")
        rows.append([_complex_from_pair(z, f"{where}: entry ({i},{j})")
                     for j, z in enumerate(row)])
    return as_matrix(rows, where)


def parse_matrix(path) -> np.ndarray:
    """Read one matrix file, validating squareness and finiteness strictly."""
    return matrix_from_dict(load_json(path), where=str(path))


def matrix_to_dict(m: np.ndarray) -> dict:
    m = np.asarray(m, dtype=complex)
    return {
        "n": int(m.shape[0]),
        # + 0.0 normalizes negative zeros away
        "entries": [[[float(z.real) + 0.0, float(z.imag) + 0.0] for z in row] for row in m],
    }


def write_matrix(path, m: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(matrix_to_dict(m), handle, indent=2)
        handle.write("\n")


def vector_from_dict(obj, where: str = "vector") -> np.ndarray:
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise InputError(f'{where}: expected an object with "n" and "entries"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n <= 0:
        raise InputError(f'{where}: "n" must be a positive integer, got {n!r}')
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n:
        raise InputError(f"{where}: expected {n} entries")
    return as_vector([_complex_from_pair(z, f"{where}: entry {i}")
                      for i, z in enumerate(entries)], where)


def parse_vector(path) -> np.ndarray:
    return vector_from_dict(load_json(path), where=str(path))


def parse_complex_scalar(text: str) -> complex:
    """Parse the flag syntax ``a+bi`` (also accepts j as the imaginary unit)."""
    s = str(text).strip().replace(" ", "")
    if not s:
        raise InputError("empty complex scalar")
    lowered = s.lower()
    if "nan" in lowered or "inf" in lowered:
        raise InputError(f"complex scalar {text!r} must be finite")
    normalized = lowered.replace("i", "j")
    try:
        value = complex(normalized)
    except ValueError:
        raise InputError(f"cannot parse complex scalar {text!r}; "
                         'use forms like "2", "i", "1+2i", "1.5e-2-0.3i"') from None
    return value


def _real_coeff_list(values, where: str) -> RealPolynomial:
    if not isinstance(values, list):
        raise InputError(f"{where}: expected a list of real coefficients")
    for v in values:
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise InputError(f"{where}: coefficient {v!r} is not a real number")
    return RealPolynomial(values)


def weyl_spec_from_dict(obj, where: str = "spec") -> ShiftedPotentialSpec:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected a JSON object")
    missing = [k for k in ("V", "alpha", "beta", "gamma", "f") if k not in obj]
    if missing:
        raise InputError(f"{where}: missing keys {missing}")
    for name in ("alpha", "beta", "gamma"):
        v = obj[name]
        if not isinstance(v, (int, float)) or isinstance(v, bool):
            raise InputError(f"{where}: {name} must be a real number, got {v!r}")
    return ShiftedPotentialSpec(
        V=_real_coeff_list(obj["V"], f"{where}: V"),
        alpha=float(obj["alpha"]),
        beta=float(obj["beta"]),
        gamma=float(obj["gamma"]),
        f=_real_coeff_list(obj["f"], f"{where}: f"),
    )


def parse_weyl_spec(path) -> ShiftedPotentialSpec:
    return weyl_spec_from_dict(load_json(path), where=str(path))


def weyl_spec_to_dict(spec: ShiftedPotentialSpec) -> dict:
    return {
        "V": list(spec.V.coeffs),
        "alpha": spec.alpha,
        "beta": spec.beta,
        "gamma": spec.gamma,
        "f": list(spec.f.coeffs),
    }


def weyl_terms_to_list(poly: WeylPolynomial, exact: bool = True) -> list[dict]:
    """Serialize term map; exact mode formats coefficients as rational strings."""
    out = []
    for (a, b), c in poly.sorted_terms():
        if exact:
            out.append({"a": a, "b": b, "re": str(Fraction(c.re)), "im": str(Fraction(c.im))})
        else:
            z = complex(c)
            out.append({"a": a, "b": b, "re": z.real, "im": z.imag})
    return out


def classification_to_dict(cls: MetricClass) -> dict:
    return {
        "hermitian": cls.hermitian,
        "invertible": cls.invertible,
        "positive": cls.positive,
        "min_singular_value": cls.min_singular_value,
        "min_eigenvalue_of_hermitian_part": cls.min_eigenvalue_of_hermitian_part,
        "hermiticity_defect": cls.hermiticity_defect,
    }


def basis_to_dict(basis: MetricBasis) -> dict:
    return {
        "dimension": basis.dimension,
        "basis": [matrix_to_dict(b) for b in basis.basis],
        "classifications": [classification_to_dict(c) for c in basis.classifications],
    }


def chain_to_dict(chain: EtaChain) -> dict:
    return {
        "shift_alpha": chain.shift_alpha,
        "normalized": chain.normalized,
        "etas": [matrix_to_dict(e) for e in chain.etas],
        "residuals": list(chain.residuals),
        "classes": [classification_to_dict(c) for c in chain.classes],
        "rank": chain.rank,
    }
