import numpy as np

from lib.errors import DomainError

__all__ = ['check_theta', 'first_kind_table', 'second_kind_table', 'cos_multiple', 'sin_multiple']


def check_theta(theta):
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) > 1.0) or np.any(np.isnan(theta)):
        raise DomainError("theta must lie in [-1, 1]")
    return theta


def first_kind_table(theta, n):
    # T_0..T_n at theta, three-term recurrence
    theta = np.asarray(theta, dtype=float)
    results = np.zeros((n + 1,) + theta.shape)
    results[0, ...] = 1.0
    if n >= 1:
        results[1, ...] = theta
    for i in range(2, n + 1):
        results[i, ...] = 2 * theta * results[i - 1, ...] - results[i - 2, ...]
    return results


def second_kind_table(theta, n):
    # U_0..U_n at theta, sin((i+1)x) = sin(x) U_i(cos x)
    theta = np.asarray(theta, dtype=float)
    results = np.zeros((n + 1,) + theta.shape)
    results[0, ...] = 1.0
    if n >= 1:
        results[1, ...] = 2 * theta
    for i in range(2, n + 1):
        results[i, ...] = 2 * theta * results[i - 1, ...] - results[i - 2, ...]
    return results


def _out(value):
    return value.item() if value.ndim == 0 else value


def cos_multiple(j, theta):
    """cos(j arccos theta) = T_|j|(theta), even in j."""
    theta = check_theta(theta)
    n = abs(int(j))
    return _out(first_kind_table(theta, n)[n])


def sin_multiple(j, theta):
    """sin(j arccos theta) = sqrt(1 - theta^2) U_{|j|-1}(theta), odd in j.

    Exactly 0 for j = 0 and at theta = +-1.
    """
    theta = check_theta(theta)
    j = int(j)
    if j == 0:
        return _out(np.zeros_like(theta))
    n = abs(j)
    root = np.sqrt((1.0 - theta) * (1.0 + theta))
    return _out(np.sign(j) * root * second_kind_table(theta, n - 1)[n - 1])
