"""Dense matrix route: the independent check against the sparse label rewrites.

Each element's matrix is assembled column-by-column from its ket images over
the canonical basis (restricted to the element's legal domain where the map is
conditional), then applied by plain matrix-vector multiplication with numpy.
Agreement with the sparse application, and unitarity of every matrix, are the
verification currency of the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elements import Element
from .states import Label, Schema, StateVector

SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class DenseElement:
    """An element lowered to an explicit matrix over canonical label lists."""

    matrix: np.ndarray
    in_labels: list[Label]
    out_labels: list[Label]
    out_schema: Schema


def state_to_vector(state: StateVector) -> np.ndarray:
    """Amplitudes in canonical lexicographic order."""
    index = state.schema.label_index()
    vec = np.zeros(state.schema.dimension(), dtype=complex)
    for label, amp in state.items():
        vec[index[label]] = amp
    return vec


def vector_to_state(vec: np.ndarray, schema: Schema) -> StateVector:
    labels = schema.labels()
    return StateVector.build(schema, {labels[i]: vec[i] for i in np.flatnonzero(np.abs(vec))})


def element_to_dense(element: Element, schema: Schema) -> DenseElement:
    """Lower one element to its matrix over the canonical (domain) basis."""
    element.validate(schema)
    in_labels = element.domain(schema)
    out_schema = element.output_schema(schema)
    out_labels = out_schema.labels()
    out_index = {label: i for i, label in enumerate(out_labels)}
    matrix = np.zeros((len(out_labels), len(in_labels)), dtype=complex)
    for j, label in enumerate(in_labels):
        for new_label, coeff in element.ket_image(label, schema):
            matrix[out_index[new_label], j] += coeff
    return DenseElement(matrix, in_labels, out_labels, out_schema)


def unitarity_defect(element: Element, schema: Schema) -> float:
    """max |U†U - I| over the element's domain; 0 for an exact isometry."""
    dense = element_to_dense(element, schema)
    gram = dense.matrix.conj().T @ dense.matrix
    return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))


def is_signed_permutation(matrix: np.ndarray, tol: float = 1e-12) -> bool:
    """True when every column holds exactly one entry of magnitude one."""
    for column in matrix.T:
        magnitudes = np.abs(column)
        big = magnitudes > tol
        if big.sum() != 1 or abs(magnitudes[big][0] - 1.0) > tol:
            return False
    return True


def apply_dense(element: Element, vec: np.ndarray, schema: Schema) -> tuple[np.ndarray, Schema]:
    """Evolve a canonical amplitude vector through one element's matrix.

    The vector must be supported on the element's domain; amplitude outside it
    means a precondition was violated upstream.
    """
    dense = element_to_dense(element, schema)
    full_index = schema.label_index()
    domain_positions = [full_index[label] for label in dense.in_labels]
    keep = np.zeros(len(full_index), dtype=bool)
    keep[domain_positions] = True
    stray = np.abs(vec[~keep])
    if stray.size and stray.max() > SUPPORT_TOL:
        raise ValueError("state has amplitude outside the element's legal domain")
    return dense.matrix @ vec[domain_positions], dense.out_schema


def evolve_dense(elements, state: StateVector) -> tuple[np.ndarray, Schema]:
    """Run a whole circuit on the dense route, starting from a sparse state."""
    vec = state_to_vector(state)
    schema = state.schema
    for element in elements:
        vec, schema = apply_dense(element, vec, schema)
    return vec, schema


def max_deviation(state: StateVector, vec: np.ndarray) -> float:
    """Entrywise gap between a sparse state and a canonical dense vector."""
    return float(np.max(np.abs(state_to_vector(state) - vec)))
