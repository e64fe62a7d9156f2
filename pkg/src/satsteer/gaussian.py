r"""Covariance-matrix algebra for zero-mean N-mode Gaussian states.

Conventions:

* quadratures are mode-ordered, :math:`(x_1, p_1, \dots, x_N, p_N)`;
* the vacuum covariance matrix is the identity;
* covariance matrices and symplectic matrices are plain ``numpy`` arrays.

Construction and composition functions preserve the floating dtype they are
given, so the whole pipeline can be run in ``np.longdouble`` when the
conditioning of nearly pure, strongly squeezed states calls for it.
Spectral routines always work in ``float64``.
"""

import numpy as np

#: Mode labels of the four-mode model (transmitted pair plus orthogonal modes).
B1, B2, B1_PERP, B2_PERP = 0, 1, 2, 3

SYMMETRY_TOL = 1e-12
BONA_FIDE_TOL = 1e-9


def _check_square_even(sigma):
    sigma = np.asarray(sigma)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1] or sigma.shape[0] % 2:
        raise ValueError(f"expected a 2N x 2N matrix, got shape {sigma.shape}")
    return sigma


def _check_squeezing(s):
    if not np.isfinite(s) or s < 0:
        raise ValueError(f"squeezing parameter must be finite and >= 0, got {s}")


def n_modes(sigma):
    """Number of modes of a covariance (or symplectic) matrix."""
    return _check_square_even(sigma).shape[0] // 2


def quadrature_indices(modes):
    """Row/column indices of the quadratures belonging to ``modes``."""
    return [2 * m + q for m in modes for q in (0, 1)]


def is_symmetric(sigma, tol=SYMMETRY_TOL):
    sigma = np.asarray(sigma, dtype=np.float64)
    scale = np.maximum(1.0, np.abs(sigma))
    return bool(np.all(np.abs(sigma - sigma.T) <= tol * scale))


def symplectic_form(n_modes, dtype=np.float64):
    r"""Block-diagonal symplectic form :math:`\bigoplus_k [[0, 1], [-1, 0]]`.

    Args:
        n_modes (int): number of modes, at least one
        dtype: floating dtype of the result

    Returns:
        array: the :math:`2N \times 2N` symplectic form
    """
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes}")
    omega = np.array([[0, 1], [-1, 0]], dtype=dtype)
    return np.kron(np.eye(int(n_modes), dtype=dtype), omega)


def two_mode_squeezed_cm(s, dtype=np.float64):
    r"""Covariance matrix of the two-mode squeezed vacuum.

    Diagonal blocks :math:`\cosh(2s) I_2`, off-diagonal blocks
    :math:`\sinh(2s) \sigma_z`.

    Args:
        s (float): squeezing parameter, ``s >= 0``
        dtype: floating dtype of the result

    Returns:
        array: the 4x4 covariance matrix
    """
    _check_squeezing(s)
    s = dtype(s)
    c, sh = np.cosh(2 * s), np.sinh(2 * s)
    eye = np.eye(2, dtype=dtype)
    z = np.diag(np.array([1, -1], dtype=dtype))
    return np.block([[c * eye, sh * z], [sh * z, c * eye]])


def initial_four_mode_cm(s, dtype=np.float64):
    """Two-mode squeezed pair ``(b1, b2)`` with the orthogonal modes in vacuum.

    Mode order is ``(b1, b2, b1_perp, b2_perp)``.
    """
    sigma = np.eye(8, dtype=dtype)
    sigma[:4, :4] = two_mode_squeezed_cm(s, dtype=dtype)
    return sigma


def lossy_bogoliubov(theta, dtype=np.float64):
    r"""Symplectic matrix of the lossy channel acting on mode ``b2``.

    ``b2`` is mixed with ``b2_perp`` with amplitudes :math:`\Theta` and
    :math:`\sqrt{1-\Theta^2}`, ``b1`` passes untouched and ``b1_perp`` is
    negated. The sign pattern only changes the discarded modes.

    Args:
        theta (float): wavepacket overlap in ``[0, 1]``
        dtype: floating dtype of the result

    Returns:
        array: 8x8 symplectic matrix
    """
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta must lie in [0, 1], got {theta}")
    t = dtype(theta)
    r = np.sqrt((1 - t) * (1 + t))
    eye = np.eye(2, dtype=dtype)
    zero = np.zeros((2, 2), dtype=dtype)
    return np.block(
        [
            [eye, zero, zero, zero],
            [zero, t * eye, zero, r * eye],
            [zero, zero, -eye, zero],
            [zero, r * eye, zero, -t * eye],
        ]
    )


def is_symplectic(S, tol=1e-12):
    """Whether ``S Omega S^T == Omega`` entrywise within ``tol``."""
    S = _check_square_even(S)
    omega = symplectic_form(n_modes(S), dtype=S.dtype)
    return bool(np.max(np.abs(S @ omega @ S.T - omega)) <= tol)


def apply_symplectic(S, sigma):
    """Transform a covariance matrix, ``S sigma S^T``."""
    S = _check_square_even(S)
    sigma = _check_square_even(sigma)
    if S.shape != sigma.shape:
        raise ValueError(f"dimension mismatch: S is {S.shape}, sigma is {sigma.shape}")
    return S @ sigma @ S.T


def partial_trace(sigma, keep):
    """Reduced covariance matrix of the modes in ``keep`` (in the given order)."""
    sigma = _check_square_even(sigma)
    keep = list(keep)
    n = n_modes(sigma)
    if not keep:
        raise ValueError("keep must name at least one mode")
    if len(set(keep)) != len(keep) or any(not 0 <= m < n for m in keep):
        raise ValueError(f"invalid mode indices {keep} for a {n}-mode state")
    idx = quadrature_indices(keep)
    return sigma[np.ix_(idx, idx)]


def _check_positive_definite(sigma):
    try:
        np.linalg.cholesky(np.asarray(sigma, dtype=np.float64))
    except np.linalg.LinAlgError:
        raise ValueError("covariance matrix is not positive definite") from None


def symplectic_eigenvalues(sigma):
    r"""Symplectic spectrum of a positive-definite covariance matrix.

    The eigenvalues of :math:`i\Omega\sigma` come in pairs :math:`\pm\nu_k`;
    the :math:`N` values :math:`\nu_k` are returned in descending order.
    """
    sigma = np.asarray(_check_square_even(sigma), dtype=np.float64)
    _check_positive_definite(sigma)
    omega = symplectic_form(n_modes(sigma))
    ev = np.abs(np.linalg.eigvals(1j * omega @ sigma))
    return np.sort(ev)[::-1][::2]


def symplectic_eigenvalues_closed(sigma):
    r"""Symplectic spectrum from the local symplectic invariants (N <= 2).

    One mode: :math:`\nu = \sqrt{\det\sigma}`. Two modes:
    :math:`\nu_\pm^2 = (\Delta \pm \sqrt{\Delta^2 - 4\det\sigma})/2` with
    :math:`\Delta = \det A + \det B + 2\det C`.
    """
    sigma = np.asarray(_check_square_even(sigma), dtype=np.float64)
    n = n_modes(sigma)
    if n == 1:
        return np.array([np.sqrt(np.linalg.det(sigma))])
    if n != 2:
        raise ValueError("closed-form symplectic spectrum needs one or two modes")
    _check_positive_definite(sigma)
    a, b, c = sigma[:2, :2], sigma[2:, 2:], sigma[:2, 2:]
    delta = np.linalg.det(a) + np.linalg.det(b) + 2 * np.linalg.det(c)
    det = np.linalg.det(sigma)
    disc = np.sqrt(max(delta * delta - 4 * det, 0.0))
    return np.sqrt(np.array([(delta + disc) / 2, (delta - disc) / 2]))


def is_bona_fide(sigma, tol=BONA_FIDE_TOL):
    """Uncertainty-principle check: every symplectic eigenvalue is ``>= 1 - tol``."""
    try:
        nu = symplectic_eigenvalues(sigma)
    except ValueError:
        return False
    return bool(np.all(nu >= 1 - tol))


def renyi2_entropy(sigma):
    r"""Rényi-2 entropy :math:`\tfrac12 \ln\det\sigma` of a Gaussian state."""
    sigma = _check_square_even(sigma)
    sign, logdet = np.linalg.slogdet(np.asarray(sigma, dtype=np.float64))
    if sign <= 0:
        raise ValueError("covariance matrix has non-positive determinant")
    return 0.5 * logdet


def _inverse(a):
    if a.shape == (2, 2):
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if det == 0:
            raise np.linalg.LinAlgError("singular block")
        adj = np.array([[a[1, 1], -a[0, 1]], [-a[1, 0], a[0, 0]]], dtype=a.dtype)
        return adj / det
    return np.linalg.inv(a)


def schur_complement(sigma, steered):
    r"""Schur complement :math:`B - C^T A^{-1} C` of the complementary block.

    ``B`` is the block of the ``steered`` modes and ``A`` the block of all
    remaining modes (the steering party).

    Raises:
        ValueError: if either side of the bipartition is empty or ``A`` is singular
    """
    sigma = _check_square_even(sigma)
    n = n_modes(sigma)
    steered = list(steered)
    if len(set(steered)) != len(steered) or any(not 0 <= m < n for m in steered):
        raise ValueError(f"invalid mode indices {steered} for a {n}-mode state")
    party = [m for m in range(n) if m not in steered]
    if not steered or not party:
        raise ValueError("both sides of the bipartition must be non-empty")
    ia, ib = quadrature_indices(party), quadrature_indices(steered)
    a = sigma[np.ix_(ia, ia)]
    b = sigma[np.ix_(ib, ib)]
    c = sigma[np.ix_(ia, ib)]
    try:
        return b - c.T @ _inverse(a) @ c
    except np.linalg.LinAlgError:
        raise ValueError("steering-party block is singular") from None
