"""Small SVD-based helpers shared by the analysis code.

Rank decisions use a relative singular-value cut: sigma < RANK_RTOL * sigma_max
counts as zero.
"""
import numpy as np

RANK_RTOL = 1e-8


def _cut(s: np.ndarray, rtol: float) -> float:
    return rtol * s[0] if s.size and s[0] > 0 else 0.0


def rank(a: np.ndarray, rtol: float = RANK_RTOL) -> int:
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s[0] < 1e-14:
        return 0
    return int(np.sum(s > _cut(s, rtol)))


def orth(a: np.ndarray, rtol: float = RANK_RTOL, atol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis (columns) of the column space of ``a``."""
    n = a.shape[0]
    if a.size == 0:
        return np.zeros((n, 0), dtype=complex)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    if not s.size or s[0] < atol:
        return np.zeros((n, 0), dtype=complex)
    r = int(np.sum(s > max(_cut(s, rtol), atol)))
    return u[:, :r].astype(complex)


def null_space(a: np.ndarray, rtol: float = RANK_RTOL, atol: float = 1e-12) -> np.ndarray:
    """Orthonormal basis of ker(a)."""
    n = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    if not s.size or s[0] < atol:
        return np.eye(n, dtype=complex)
    r = int(np.sum(s > max(_cut(s, rtol), atol)))
    return vh[r:].conj().T.astype(complex)


def complement(basis: np.ndarray, within: np.ndarray | None = None) -> np.ndarray:
    """Orthonormal basis of ``within ⊖ span(basis)`` (``within`` defaults to everything)."""
    n = basis.shape[0]
    if within is None:
        within = np.eye(n, dtype=complex)
    if basis.shape[1] == 0:
        return within
    coeffs = null_space(basis.conj().T @ within)
    return orth(within @ coeffs)


def polar_unitary(g: np.ndarray) -> np.ndarray:
    """Unitary factor W V* of g = W S V*."""
    w, _, vh = np.linalg.svd(g)
    return w @ vh


def contains(big: np.ndarray, small: np.ndarray, tol: float = 1e-8) -> bool:
    """span(small) ⊆ span(big) for orthonormal ``big``."""
    if small.shape[1] == 0:
        return True
    resid = small - big @ (big.conj().T @ small)
    return float(np.linalg.norm(resid)) < tol * max(1.0, float(np.linalg.norm(small)))


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph[np.abs(ph) == 0] = 1
    return q * (ph / np.abs(ph))
