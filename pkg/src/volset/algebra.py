"""Multilinear algebra on tuples of vectors.

A tuple of ``m`` vectors in R^d is an array of shape ``(..., m, d)``; row ``j``
is the vector ``x^j``.  Every function broadcasts over the leading axes, so a
batch of a million triples is a single ``(10**6, 3, 3)`` array.

Sign convention for the generalized cross product: ``wedge_star`` is the
unique vector with ``det(x^1, ..., x^{d-1}, y) == wedge_star(x^1..x^{d-1}) . y``
for every ``y``.  In R^3 this is the right-handed cross product.
"""
import numpy as np

from .errors import InvalidInputError, SingularInputError

__all__ = [
    "as_tuple",
    "det",
    "wedge_star",
    "cofactor_det3",
    "decomposition_value",
]


def as_tuple(vectors, m=None):
    """Validate a (batch of) tuple(s) of vectors and return it as a float array.

    Parameters
    ----------
    vectors : array_like, shape (..., m, d)
    m : int, optional
        Required number of vectors; defaults to any ``1 <= m <= d``.
    """
    t = np.asarray(vectors, dtype=float)
    if t.ndim < 2:
        raise InvalidInputError("a tuple needs shape (..., m, d)")
    count, d = t.shape[-2], t.shape[-1]
    if d < 2:
        raise InvalidInputError(f"vectors must have dimension d >= 2, got {d}")
    if m is not None and count != m:
        raise InvalidInputError(f"expected {m} vectors of dimension {d}, got {count}")
    if not 1 <= count <= d:
        raise InvalidInputError(f"tuple of {count} vectors in R^{d} is not allowed")
    if not np.all(np.isfinite(t)):
        raise InvalidInputError("tuple entries must be finite")
    return t


def _det2(a):
    return a[..., 0, 0] * a[..., 1, 1] - a[..., 0, 1] * a[..., 1, 0]


def _det3(a):
    return (
        a[..., 0, 0] * (a[..., 1, 1] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 1])
        - a[..., 0, 1] * (a[..., 1, 0] * a[..., 2, 2] - a[..., 1, 2] * a[..., 2, 0])
        + a[..., 0, 2] * (a[..., 1, 0] * a[..., 2, 1] - a[..., 1, 1] * a[..., 2, 0])
    )


def _det4(a):
    # Laplace expansion along the first row.
    total = 0.0
    for j in range(4):
        cols = [c for c in range(4) if c != j]
        minor = a[..., 1:, :][..., cols]
        total = total + (-1) ** j * a[..., 0, j] * _det3(minor)
    return total


def _det(a):
    d = a.shape[-1]
    if d == 2:
        return _det2(a)
    if d == 3:
        return _det3(a)
    if d == 4:
        return _det4(a)
    return np.linalg.det(a)


def det(vectors):
    """Signed determinant of the matrix whose j-th column is ``x^j``.

    Uses explicit cofactor expansion for ``d <= 4`` and LU with partial
    pivoting (``numpy.linalg.det``) above that.

    >>> det([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    1.0
    """
    t = as_tuple(vectors)
    if t.shape[-2] != t.shape[-1]:
        raise InvalidInputError(
            f"det needs d vectors in R^d, got {t.shape[-2]} in R^{t.shape[-1]}"
        )
    out = _det(t)
    return float(out) if np.ndim(out) == 0 else out


def wedge_star(vectors):
    """Hodge star of ``x^1 ^ ... ^ x^{d-1}``, as a vector in R^d.

    Component ``i`` is the signed minor ``(-1)^(i+d) det(X without row i)``
    (1-based), i.e. the cofactors of the last column of ``[x^1 .. x^{d-1} y]``.

    >>> wedge_star([[1, 0, 0], [0, 1, 0]])
    array([0., 0., 1.])
    """
    t = as_tuple(vectors)
    d = t.shape[-1]
    if t.shape[-2] != d - 1:
        raise InvalidInputError(
            f"wedge_star needs d-1 vectors in R^d, got {t.shape[-2]} in R^{d}"
        )
    if d == 3:
        x, y = t[..., 0, :], t[..., 1, :]
        return np.stack(
            [
                x[..., 1] * y[..., 2] - x[..., 2] * y[..., 1],
                x[..., 2] * y[..., 0] - x[..., 0] * y[..., 2],
                x[..., 0] * y[..., 1] - x[..., 1] * y[..., 0],
            ],
            axis=-1,
        )
    # Columns of the (d-1)x(d-1) minors are the vectors; drop coordinate i.
    mat = np.swapaxes(t, -1, -2)  # (..., d, d-1): row i = coordinate i
    comps = []
    for i in range(d):
        rows = [r for r in range(d) if r != i]
        sign = -1.0 if (i + d + 1) % 2 else 1.0  # (-1)^((i+1)+d)
        comps.append(sign * _det(mat[..., rows, :]))
    return np.stack(comps, axis=-1)


def _split3(p, name):
    p = np.asarray(p, dtype=float)
    if p.shape[-1] != 3:
        raise InvalidInputError(f"{name} must be a point in R^3")
    return p[..., 0], p[..., 1], p[..., 2]


def cofactor_det3(x, y, z):
    """det(x, y, z) by expansion along the coordinates of ``y``.

    The three cofactors are ``x3 z2 - x2 z3``, ``x1 z3 - x3 z1`` and
    ``x2 z1 - x1 z2``.
    """
    x1, x2, x3 = _split3(x, "x")
    y1, y2, y3 = _split3(y, "y")
    z1, z2, z3 = _split3(z, "z")
    out = y1 * (x3 * z2 - x2 * z3) + y2 * (x1 * z3 - x3 * z1) + y3 * (x2 * z1 - x1 * z2)
    return float(out) if np.ndim(out) == 0 else out


def decomposition_value(x, y12, z):
    """Evaluate ``w1 (y1 - x1/x3) + w2 (y2 - x2/x3)``.

    Here ``w1 = x3 z2 - x2 z3`` and ``w2 = x1 z3 - x3 z1``.  The result equals
    ``det(x, (y1, y2, 1), z)``: the reduction only holds with the third
    coordinate of ``y`` normalized to one.

    Raises
    ------
    SingularInputError
        If any ``x3`` is zero.
    """
    x1, x2, x3 = _split3(x, "x")
    y12 = np.asarray(y12, dtype=float)
    if y12.shape[-1] != 2:
        raise InvalidInputError("y12 must hold the pair (y1, y2)")
    z1, z2, z3 = _split3(z, "z")
    if np.any(x3 == 0):
        raise SingularInputError("x3 = 0: the reduction divides by x3")
    w1 = x3 * z2 - x2 * z3
    w2 = x1 * z3 - x3 * z1
    out = w1 * (y12[..., 0] - x1 / x3) + w2 * (y12[..., 1] - x2 / x3)
    return float(out) if np.ndim(out) == 0 else out
