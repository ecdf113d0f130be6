"""Kraus channels and the depolarizing-channel constructions.

The depolarizing channel ``N_d(X) = p X + (1-p) Tr(X) I/d`` is realized
as a Weyl-Heisenberg twirl: Kraus set ``{sqrt(p + (1-p)/d^2) I}`` union
``{(sqrt(1-p)/d) U_jk}`` over the d^2 - 1 non-identity shift/clock
unitaries. Only the affine action is fixed by the definition; the Kraus
form is validated against it in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidParameterError, ParseError
from .states import DensityMatrix, _format_complex

_TP_TOL = 1e-10


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map as a finite list of Kraus operators.

    Trace preservation ``sum K^dag K = I`` is checked at construction to
    1e-10; complete positivity is implied by the Kraus form.
    """

    dim_in: int
    dim_out: int
    ops: tuple[np.ndarray, ...] = field(repr=False)

    def __post_init__(self):
        if not self.ops:
            raise InvalidParameterError("a channel needs at least one Kraus operator")
        ops = tuple(np.asarray(k, dtype=complex) for k in self.ops)
        for k in ops:
            if k.shape != (self.dim_out, self.dim_in):
                raise DimensionMismatchError(
                    f"Kraus operator shape {k.shape} != ({self.dim_out}, {self.dim_in})"
                )
            k.setflags(write=False)
        total = sum(k.conj().T @ k for k in ops)
        if np.abs(total - np.eye(self.dim_in)).max() > _TP_TOL:
            raise InvalidParameterError("Kraus operators are not trace preserving")
        object.__setattr__(self, "ops", ops)

    def is_unital(self, tol: float = _TP_TOL) -> bool:
        """True when ``sum K K^dag = I`` (channel preserves the identity)."""
        if self.dim_in != self.dim_out:
            return False
        total = sum(k @ k.conj().T for k in self.ops)
        return bool(np.abs(total - np.eye(self.dim_out)).max() <= tol)

    def apply_matrix(self, m: np.ndarray) -> np.ndarray:
        """Raw action ``sum_K K m K^dag`` on a matrix."""
        m = np.asarray(m, dtype=complex)
        if m.shape != (self.dim_in, self.dim_in):
            raise DimensionMismatchError(
                f"input shape {m.shape} does not match channel dim {self.dim_in}"
            )
        out = np.zeros((self.dim_out, self.dim_out), dtype=complex)
        for k in self.ops:
            out += k @ m @ k.conj().T
        return out


def identity_channel(d: int) -> KrausChannel:
    return KrausChannel(d, d, (np.eye(d, dtype=complex),))


def unitary_channel(u: np.ndarray) -> KrausChannel:
    u = np.asarray(u, dtype=complex)
    return KrausChannel(u.shape[0], u.shape[0], (u,))


def _weyl_heisenberg(d: int) -> list[np.ndarray]:
    """Shift/clock unitaries X^j Z^k for (j, k) != (0, 0)."""
    omega = np.exp(2j * np.pi / d)
    x = np.roll(np.eye(d, dtype=complex), 1, axis=0)
    z = np.diag(omega ** np.arange(d))
    out = []
    for j in range(d):
        xj = np.linalg.matrix_power(x, j)
        for k in range(d):
            if j == 0 and k == 0:
                continue
            out.append(xj @ np.linalg.matrix_power(z, k))
    return out


def depolarizing(d: int, p: float) -> KrausChannel:
    """Depolarizing channel ``X -> p X + (1-p) Tr(X) I/d`` for d in {2,3,4}."""
    if d not in (2, 3, 4):
        raise InvalidParameterError(f"depolarizing supported for d in {{2,3,4}}, got {d}")
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"p must lie in [0, 1], got {p}")
    ops = [np.sqrt(p + (1 - p) / d**2) * np.eye(d, dtype=complex)]
    scale = np.sqrt(1 - p) / d
    ops.extend(scale * u for u in _weyl_heisenberg(d))
    return KrausChannel(d, d, tuple(ops))


def apply(channel: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply a channel to the whole system of a bipartite state."""
    if channel.dim_in != rho.dim:
        raise DimensionMismatchError(
            f"channel dim {channel.dim_in} does not match state dim {rho.dim}"
        )
    out = channel.apply_matrix(rho.matrix)
    dims = rho.dims if channel.dim_out == channel.dim_in else (1, channel.dim_out)
    return DensityMatrix(dims, out)


def apply_one_sided(channel: KrausChannel, rho: DensityMatrix, side: str = "B") -> DensityMatrix:
    """Apply ``I (x) N`` (side 'B') or ``N (x) I`` (side 'A')."""
    d_a, d_b = rho.dims
    if side == "B":
        if channel.dim_in != d_b:
            raise DimensionMismatchError(f"channel dim {channel.dim_in} != d_B {d_b}")
        padded = [np.kron(np.eye(d_a), k) for k in channel.ops]
        dims = (d_a, channel.dim_out)
    elif side == "A":
        if channel.dim_in != d_a:
            raise DimensionMismatchError(f"channel dim {channel.dim_in} != d_A {d_a}")
        padded = [np.kron(k, np.eye(d_b)) for k in channel.ops]
        dims = (channel.dim_out, d_b)
    else:
        raise DimensionMismatchError(f"side must be 'A' or 'B', got {side!r}")
    out = np.zeros((dims[0] * dims[1],) * 2, dtype=complex)
    m = rho.matrix
    for k in padded:
        out += k @ m @ k.conj().T
    return DensityMatrix(dims, out)


def apply_two_local(n1: KrausChannel, n2: KrausChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply ``N1 (x) N2`` to a bipartite state."""
    d_a, d_b = rho.dims
    if n1.dim_in != d_a or n2.dim_in != d_b:
        raise DimensionMismatchError(
            f"channel dims ({n1.dim_in}, {n2.dim_in}) do not match state dims {rho.dims}"
        )
    dims = (n1.dim_out, n2.dim_out)
    out = np.zeros((dims[0] * dims[1],) * 2, dtype=complex)
    m = rho.matrix
    for k1 in n1.ops:
        for k2 in n2.ops:
            k = np.kron(k1, k2)
            out += k @ m @ k.conj().T
    return DensityMatrix(dims, out)


def compose(n1: KrausChannel, n2: KrausChannel) -> KrausChannel:
    """Serial composition ``N1 o N2`` (N2 acts first)."""
    if n2.dim_out != n1.dim_in:
        raise DimensionMismatchError(
            f"cannot compose: inner dims {n2.dim_out} != {n1.dim_in}"
        )
    ops = tuple(k1 @ k2 for k1 in n1.ops for k2 in n2.ops)
    return KrausChannel(n2.dim_in, n1.dim_out, ops)


def convex_mix(lam: float, n1: KrausChannel, n2: KrausChannel) -> KrausChannel:
    """Convex mixture ``lam N1 + (1 - lam) N2``."""
    if not 0.0 <= lam <= 1.0:
        raise InvalidParameterError(f"mixing weight must lie in [0, 1], got {lam}")
    if (n1.dim_in, n1.dim_out) != (n2.dim_in, n2.dim_out):
        raise DimensionMismatchError("mixed channels must share input/output dims")
    ops = []
    if lam > 0:
        ops.extend(np.sqrt(lam) * k for k in n1.ops)
    if lam < 1:
        ops.extend(np.sqrt(1 - lam) * k for k in n2.ops)
    return KrausChannel(n1.dim_in, n1.dim_out, tuple(ops))


# -- closed-form qubit depolarizing outputs ---------------------------------


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise InvalidParameterError(f"{name} must lie in [0, 1], got {value}")


def depol_2local_fidelity(p: float, q0: float) -> float:
    """Output fidelity of ``N_2 (x) N_2`` on the Schmidt state with
    weight q0: ``(1/4)[1 + p^2 + 4 p^2 sqrt(q0 (1 - q0))]``."""
    _check_unit("p", p)
    _check_unit("q0", q0)
    return (1.0 + p**2 + 4.0 * p**2 * np.sqrt(q0 * (1.0 - q0))) / 4.0


def depol_fbc_fidelity(p: float, q0: float) -> float:
    """Output fidelity of the one-sided ``I (x) N_2`` on the Schmidt state:
    ``(1/4)[1 + p + 4 p sqrt(q0 (1 - q0))]``."""
    _check_unit("p", p)
    _check_unit("q0", q0)
    return (1.0 + p + 4.0 * p * np.sqrt(q0 * (1.0 - q0))) / 4.0


def two_local_depol_output(p: float, q0: float) -> np.ndarray:
    """Closed-form output matrix of ``N_2 (x) N_2`` on the Schmidt state."""
    _check_unit("p", p)
    _check_unit("q0", q0)
    q1 = 1.0 - q0
    c = 4.0 * p**2 * np.sqrt(q0 * q1) / 4.0
    return np.array(
        [
            [((1 - p) ** 2 + 4 * p * q0) / 4, 0, 0, c],
            [0, (1 - p**2) / 4, 0, 0],
            [0, 0, (1 - p**2) / 4, 0],
            [c, 0, 0, ((1 - p) ** 2 + 4 * p * q1) / 4],
        ],
        dtype=complex,
    )


def one_sided_depol_output(p: float, q0: float) -> np.ndarray:
    """Closed-form output matrix of ``I (x) N_2`` on the Schmidt state."""
    _check_unit("p", p)
    _check_unit("q0", q0)
    q1 = 1.0 - q0
    c = p * np.sqrt(q0 * q1)
    return np.array(
        [
            [(2 * p * q0 + (1 - p) * q0) / 2, 0, 0, c],
            [0, (1 - p) * q0 / 2, 0, 0],
            [0, 0, (1 - p) * q1 / 2, 0],
            [c, 0, 0, (2 * p * q1 + (1 - p) * q1) / 2],
        ],
        dtype=complex,
    )


def qutrit_witness_min(p: float) -> float:
    """Minimum over Schmidt inputs of ``Tr[W omega_out]`` for the two-local
    qutrit depolarizing channel: ``(2 - 8 p^2)/9``, attained at the
    uniform Schmidt vector (1/3, 1/3, 1/3)."""
    _check_unit("p", p)
    return (2.0 - 8.0 * p**2) / 9.0


# -- channel serialization ---------------------------------------------------


def write_channel_file(channel: KrausChannel, path) -> None:
    """Write a channel as text: a ``dims d_in d_out`` line, a ``kraus n``
    line, then each operator as d_out rows of complex literals separated
    by blank lines."""
    lines = [f"dims {channel.dim_in} {channel.dim_out}", f"kraus {len(channel.ops)}"]
    for k in channel.ops:
        lines.append("")
        for row in k:
            lines.append(" ".join(_format_complex(z) for z in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_channel_file(path) -> KrausChannel:
    """Parse a channel file written by :func:`write_channel_file`."""
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < 2 or not lines[0].startswith("dims") or not lines[1].startswith("kraus"):
        raise ParseError("channel file must start with 'dims' and 'kraus' lines")
    try:
        _, d_in, d_out = lines[0].split()
        d_in, d_out = int(d_in), int(d_out)
        count = int(lines[1].split()[1])
    except (ValueError, IndexError) as exc:
        raise ParseError("malformed channel header") from exc
    body = lines[2:]
    if len(body) != count * d_out:
        raise ParseError(f"expected {count * d_out} operator rows, found {len(body)}")
    ops = []
    for i in range(count):
        rows = []
        for ln in body[i * d_out : (i + 1) * d_out]:
            toks = ln.split()
            if len(toks) != d_in:
                raise ParseError(f"expected {d_in} entries per row, found {len(toks)}")
            try:
                rows.append([complex(tok) for tok in toks])
            except ValueError as exc:
                raise ParseError(f"bad complex literal in row: {ln!r}") from exc
        ops.append(np.array(rows))
    try:
        return KrausChannel(d_in, d_out, tuple(ops))
    except (InvalidParameterError, DimensionMismatchError) as exc:
        raise ParseError(f"file does not contain a valid channel: {exc}") from exc
