"""Hypervector algebra on bipolar/real vectors.

All values are plain 1-D ``numpy`` float arrays of a shared length ``d``
(default 1000).  Information is carried by direction: two independently
drawn random bipolar vectors of that length are pseudo-orthogonal (cosine
0 +/- 1/sqrt(d)).  The algebra has four basic operations:

- ``bundle``: signed elementwise addition; the result stays similar to
  every summand.
- ``bind``: elementwise multiplication; the result is dissimilar to both
  inputs but the operation is self-inverse on bipolar vectors.
- ``permute``: circular shift; reversible, used to encode sequence
  position.
- ``recover``: cleanup against a dictionary of known vectors, returning
  the best match above a noise floor ``theta``.

Operations are pure; the only mutable argument is the ``numpy`` random
generator passed in explicitly wherever randomness is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_DIM = 1000
DEFAULT_THETA = 0.1


def random_bipolar(d: int, rng: np.random.Generator) -> np.ndarray:
    """Draw a random vector with each element +/-1 with equal probability."""
    if d < 1:
        raise ValueError(f"hypervector dimension must be >= 1, got {d}")
    return rng.choice(np.array([-1.0, 1.0]), size=d)


def is_bipolar(x: np.ndarray) -> bool:
    """True when every element is exactly -1 or +1."""
    return bool(np.all(np.abs(x) == 1.0))


def cosine(x: np.ndarray, y: np.ndarray) -> float:
    """Cosine similarity x.y / (|x||y|), in [-1, 1].

    Magnitude-invariant; identical directions give 1, anti-parallel -1,
    pseudo-orthogonal directions approximately 0.
    """
    _check_same_dim(x, y)
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ValueError("cosine similarity undefined for zero-norm vector")
    return float(np.dot(x, y) / (nx * ny))


def sign(x: np.ndarray) -> np.ndarray:
    """Elementwise sign with sign(0) = 0."""
    return np.sign(np.asarray(x, dtype=float))


def bundle(vectors: list[np.ndarray], rng: np.random.Generator) -> np.ndarray:
    """Signed elementwise sum of the given vectors.

    When the number of summands is even, a fresh random bipolar vector is
    appended first to break elementwise ties, so bundles of bipolar
    inputs are always bipolar.
    """
    if not vectors:
        raise ValueError("bundle requires at least one vector")
    d = len(vectors[0])
    for v in vectors[1:]:
        if len(v) != d:
            raise ValueError("bundle inputs must share one dimension")
    terms = list(vectors)
    if len(terms) % 2 == 0:
        terms.append(random_bipolar(d, rng))
    return sign(np.sum(terms, axis=0))


def bind(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Elementwise product; self-inverse on bipolar inputs.

    bind(x, bind(x, y)) == y exactly when x is bipolar, which makes the
    operation usable as key-value pairing: multiplying a bundle by a key
    releases (a noisy version of) the bound value.
    """
    _check_same_dim(x, y)
    return x * y


def permute(x: np.ndarray, k: int) -> np.ndarray:
    """Circular shift of the elements by k positions (k may be negative)."""
    return np.roll(x, k)


@dataclass(frozen=True)
class Dictionary:
    """An ordered set of labelled hypervectors used for cleanup.

    ``vectors`` holds one row per entry; row order defines the tie-break
    for recovery (lowest index wins on exact score ties).
    """

    labels: tuple[str, ...]
    vectors: np.ndarray  # shape (n, d)
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if len(self.labels) == 0:
            raise ValueError("dictionary must not be empty")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("dictionary labels must be unique")
        if self.vectors.ndim != 2 or self.vectors.shape[0] != len(self.labels):
            raise ValueError("need one vector row per label")
        object.__setattr__(self, "_index", {l: i for i, l in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: str) -> bool:
        return label in self._index

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def vector(self, label: str) -> np.ndarray:
        return self.vectors[self._index[label]]

    @classmethod
    def from_pairs(cls, pairs: list[tuple[str, np.ndarray]]) -> "Dictionary":
        labels = tuple(label for label, _ in pairs)
        vectors = np.array([v for _, v in pairs], dtype=float)
        return cls(labels, vectors)


def recover(query: np.ndarray, dictionary: Dictionary, theta: float) -> str | None:
    """Cleanup: label of the most similar dictionary entry, or None.

    Returns the entry with maximum cosine to ``query`` provided that
    maximum is at least ``theta``; a query below the noise floor (or with
    zero norm) recovers nothing.  Exact ties resolve to the lowest index.
    """
    if not 0.0 <= theta < 1.0:
        raise ValueError(f"theta must lie in [0, 1), got {theta}")
    if len(query) != dictionary.dim:
        raise ValueError(
            f"query dimension {len(query)} != dictionary dimension {dictionary.dim}"
        )
    qnorm = np.linalg.norm(query)
    if qnorm == 0.0:
        return None
    norms = np.linalg.norm(dictionary.vectors, axis=1)
    sims = dictionary.vectors @ query / (norms * qnorm)
    best = int(np.argmax(sims))  # argmax returns the first (lowest) index on ties
    if sims[best] < theta:
        return None
    return dictionary.labels[best]


def _check_same_dim(x: np.ndarray, y: np.ndarray) -> None:
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
