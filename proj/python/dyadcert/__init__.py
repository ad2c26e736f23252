"""Python access to the dyadcert core.

Documents are plain dicts in the same JSON shapes the command line tool reads;
exact rationals travel as "p/q" strings.
"""

import json

from . import _dyadcert
from ._dyadcert import CheckFailure, InputError, ScaleError, __version__

__all__ = [
    "CheckFailure",
    "InputError",
    "ScaleError",
    "__version__",
    "build_tau",
    "certify",
    "n_zero",
    "pz_zeta",
    "run",
    "set_lambda",
    "set_phi",
    "set_psi",
    "solve",
    "validate_quadruple",
]


def _doc(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def run(argv, stdin=None):
    """Run a CLI command in-process. Returns (exit_code, parsed_stdout_or_None, stderr)."""
    code, out, err = _dyadcert.run([str(a) for a in argv], None if stdin is None else _doc(stdin))
    return code, (json.loads(out) if out.strip() else None), err


def set_lambda(s):
    return _dyadcert.set_lambda(_doc(s))


def set_phi(s, m):
    return _dyadcert.set_phi(_doc(s), m)


def set_psi(a, b, m):
    return _dyadcert.set_psi(_doc(a), _doc(b), m)


def certify(family, epsilon, min_level=0):
    return json.loads(_dyadcert.certify(_doc(family), str(epsilon), min_level))


def build_tau(elements, n, epsilon):
    return json.loads(_dyadcert.build_tau(_doc(elements), n, str(epsilon)))


def solve(instance, seed=0):
    return json.loads(_dyadcert.solve(_doc(instance), seed))


def validate_quadruple(quadruple, context):
    return json.loads(_dyadcert.validate_quadruple(_doc(quadruple), _doc(context)))


def n_zero(t, eta):
    return _dyadcert.n_zero(t, str(eta))


def pz_zeta(xi):
    return _dyadcert.pz_zeta(str(xi))
