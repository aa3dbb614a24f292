import errno
import os
import os.path as osp
import tempfile
from contextlib import contextmanager

import yaml

__all__ = [
    'FLOAT_FORMAT', 'format_float', 'mkdir_if_missing', 'atomic_path',
    'write_yaml'
]

# 17 significant digits round-trip every float64; '%' formatting ignores locale.
FLOAT_FORMAT = '%.17g'


def format_float(value):
    return FLOAT_FORMAT % float(value)


def mkdir_if_missing(dirname):
    """Creates dirname if it is missing."""
    if not osp.exists(dirname):
        try:
            os.makedirs(dirname)
        except OSError as e:
            if e.errno != errno.EEXIST:
                raise


@contextmanager
def atomic_path(fpath):
    """Yields a temporary path next to ``fpath`` and renames it on success.

    The temporary file lives in the destination directory so the final
    ``os.replace`` never crosses a filesystem; on any exception it is removed
    and ``fpath`` is left untouched.

    Examples::
        >>> with atomic_path('out/coefficients.csv') as tmp:
        ...     df.to_csv(tmp, index=False)
    """
    dirname = osp.dirname(osp.abspath(fpath))
    mkdir_if_missing(dirname)
    fd, tmp = tempfile.mkstemp(
        prefix='.' + osp.basename(fpath) + '.', suffix='.tmp', dir=dirname
    )
    os.close(fd)
    try:
        yield tmp
        os.replace(tmp, fpath)
    finally:
        if osp.exists(tmp):
            os.remove(tmp)


def write_yaml(obj, fpath):
    """Writes a mapping to a yaml file atomically, keys sorted."""
    with atomic_path(fpath) as tmp:
        with open(tmp, 'w') as f:
            yaml.safe_dump(obj, f, default_flow_style=False, sort_keys=True)
