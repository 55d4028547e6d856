"""BLS N-1 primality certificates for Wagstaff numbers (2^p + 1)/3.

Big integers cross the extension boundary as decimal strings; the wrappers
here accept Python ints (or strings) and return ints where the value is a
number rather than an identifier.
"""

from . import _core
from ._core import (
    PROBABLE_EXPONENTS,
    PROVED_EXPONENTS,
    CertificateSchemaError,
    CompositeError,
    IncompleteFactoredPartError,
    NotCoprimeError,
    WagstaffError,
    certificate_summary,
    divisors,
    euler_phi,
    feasibility_scan,
    mobius,
    prove_to_file,
    verify_file,
)

__all__ = [
    "PROBABLE_EXPONENTS",
    "PROVED_EXPONENTS",
    "CertificateSchemaError",
    "CompositeError",
    "IncompleteFactoredPartError",
    "NotCoprimeError",
    "WagstaffError",
    "bit_length",
    "certificate_summary",
    "chua_check",
    "condition_two",
    "digits10",
    "divisors",
    "euler_phi",
    "factor_phi",
    "feasibility_scan",
    "is_probable_prime",
    "jacobi",
    "mobius",
    "mod_pow",
    "pell",
    "phi_at_2",
    "prove_to_file",
    "verify_file",
    "wagstaff_number",
]


def _s(n):
    return n if isinstance(n, str) else str(n)


def wagstaff_number(p):
    return int(_core.wagstaff_number(p))


def digits10(n):
    return _core.digits10(_s(n))


def bit_length(n):
    return _core.bit_length(_s(n))


def mod_pow(base, exp, mod):
    return int(_core.mod_pow(_s(base), _s(exp), _s(mod)))


def jacobi(a, n):
    return _core.jacobi(_s(a), _s(n))


def is_probable_prime(n):
    return _core.is_probable_prime(_s(n))


def phi_at_2(d):
    return int(_core.phi_at_2(d))


def pell(n):
    u, v = _core.pell(n)
    return int(u), int(v)


def _int_value(result):
    x, y = result["value"]
    result["value"] = (int(x), int(y))
    return result


def chua_check(a, Q):
    return _int_value(_core.chua_check(_s(a), _s(Q)))


def condition_two(p):
    return _int_value(_core.condition_two(p))


def factor_phi(d):
    out = _core.factor_phi(d)
    out["value"] = int(out["value"])
    out["residual"] = int(out["residual"])
    out["factors"] = [(int(p), e, prov) for p, e, prov in out["factors"]]
    return out
